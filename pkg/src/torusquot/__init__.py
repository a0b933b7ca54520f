"""Exact analysis of symplectic quotients by torus representations."""

__version__ = "0.1.0"
