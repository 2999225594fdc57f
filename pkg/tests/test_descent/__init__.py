"""Tests for descent module."""
