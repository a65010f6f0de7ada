"""dglm - exact dg Lie models for relative homotopy automorphisms."""

__version__ = "0.1.0"
