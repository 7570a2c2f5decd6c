"""Exact coincidence invariants of iterates for circle, torus and Klein bottle maps."""
from __future__ import annotations

from .circle import CirclePair
from .exactint import IntMatrix
from .klein import KleinPair
from .reidemeister import TorusPair

__all__ = ["CirclePair", "IntMatrix", "KleinPair", "TorusPair"]
