"""Recursive max-linear models with hidden nodes."""
__version__ = "0.1.0"
