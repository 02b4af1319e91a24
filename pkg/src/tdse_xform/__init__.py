"""Exact TDSE solutions from Darboux and form-preserving point transformations."""

from .errors import XformError

__version__ = "0.1.0"

__all__ = ["XformError", "__version__"]
