"""Tracking and social-distance analytics over per-frame person detections."""
from ._backend import BACKEND
from .geometry import BoundingBox, ScoredBox

__version__ = "0.1.0"

__all__ = ["BACKEND", "BoundingBox", "ScoredBox", "__version__"]
