"""Hyperbolicity certificates for complements of Fermat-type plane curves."""

__version__ = "0.1.0"
