"""Exact twisted characters, Lefschetz numbers and twisted conjugacy in GL(n)."""

__version__ = "0.1.0"
