"""Utility modules for dglm."""
