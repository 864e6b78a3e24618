"""Exact tools for expansions in non-integer bases q in (1, 2)."""

__version__ = "0.1.0"
