"""Deterministic numerical laboratory for multiplicative pair correlations
of quadratic norm-form values."""

__version__ = "0.1.0"

from .ring import FieldParams, QuadInt, field

__all__ = ["FieldParams", "QuadInt", "field", "__version__"]
