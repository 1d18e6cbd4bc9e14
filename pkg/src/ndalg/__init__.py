"""Nowhere-dense algebra of generalized functions on the real line, with jump symmetries."""

__version__ = "0.1.0"
