"""Tests for oracle module."""
