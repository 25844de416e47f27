"""Graded Verma flags, tilting characters and rigidity for integral blocks of category O."""

__version__ = "0.1.0"
