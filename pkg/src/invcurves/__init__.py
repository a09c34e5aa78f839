"""Certificates for the absence of invariant algebraic curves of planar polynomial vector fields."""

__version__ = "0.1.0"
