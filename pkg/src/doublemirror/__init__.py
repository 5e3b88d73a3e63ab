"""Exact toric double-mirror constructions and determinantal bridge evidence."""

__version__ = "0.1.0"
