"""Tests for cli module."""
