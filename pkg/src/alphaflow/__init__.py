"""Exact flow polynomials of multigraphs from quadratic characters of Laplacian minors."""

__version__ = "0.1.0"
