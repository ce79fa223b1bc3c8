"""Differential Galois obstructions for the planar n-body problem on (h, c) levels."""

__version__ = "0.1.0"
