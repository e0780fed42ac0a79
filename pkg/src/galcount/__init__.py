"""Counting Galois extensions by discriminant: group machinery, exponent certificates and field counts."""

__version__ = "0.1.0"
