"""Test suite for turbo_knng.

Tests marked ``slow`` run at benchmark scale; deselect them with ``-m "not slow"``.
"""
