"""Executable predimension calculus for exponential-algebraic structures."""

__version__ = "0.1.0"
