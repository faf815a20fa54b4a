"""Finite-category engine for displacements along functors."""
__version__ = "0.1.0"
