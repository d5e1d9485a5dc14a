"""Exact Hochschild calculus of Lie algebroids over polynomial rings."""

__version__ = "0.1.0"
