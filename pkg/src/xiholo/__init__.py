"""Numerical verification toolkit for the Riemann xi function."""

__version__ = "0.1.0"
