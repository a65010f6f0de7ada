"""Tests for dglm."""
