"""Numerical toolkit for joint measurements performed on quantum clones."""
__version__ = "0.1.0"
