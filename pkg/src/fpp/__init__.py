"""Exact and modular algebra for a two-parameter family of surfaces in Gr(3,6)."""
__version__ = "0.1.0"
