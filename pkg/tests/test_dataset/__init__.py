"""Tests for dataset module."""
