"""Exact linear algebra for nilpotent orbits, Neron models and normal functions."""

__version__ = "0.1.0"
