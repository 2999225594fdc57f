"""Tests for selection module."""
