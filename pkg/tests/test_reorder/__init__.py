"""Tests for reorder module."""
