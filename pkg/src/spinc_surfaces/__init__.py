"""Exact and numerical verification of the Killing-spinor description of surfaces in CP^2."""

__version__ = "0.1.0"
