"""Exact computations with finite p-groups, crossed modules and tensor products."""

__version__ = "0.1.0"
