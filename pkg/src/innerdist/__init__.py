"""Invariants deciding distinction of cuspidal representations of inner forms of GL_2n by inner involutions."""

__version__ = "0.1.0"
