"""Mutually unbiased and partially unbiased entangled bases for odd prime power dimensions."""

__version__ = "0.1.0"
