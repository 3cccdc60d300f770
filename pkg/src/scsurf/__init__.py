"""Exact kernel for the family of infinite translation surfaces S_c, c >= 1."""

__version__ = "0.1.0"
