"""Core algebra for dglm."""
