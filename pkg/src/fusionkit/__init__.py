"""Computational toolkit for fusion, transporter and linking systems."""

from __future__ import annotations

__version__ = "0.1.0"

from .bounds import Bounds, BoundExceeded, get_bounds

__all__ = ["Bounds", "BoundExceeded", "get_bounds", "__version__"]
