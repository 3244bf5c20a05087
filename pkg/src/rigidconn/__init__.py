"""Exact formal-data calculus for connections on the projective line."""

__version__ = "0.1.0"
