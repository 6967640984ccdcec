"""Representation theory, zeta functions and geodesic counting for SL(4, R)."""

__version__ = "0.1.0"
