"""Multisegment calculus: posets, canonical bases, Kazhdan-Lusztig polynomials
and the partial derivative operator D^k."""

from .core import Multisegment, Segment, Weight, ms, parse_ms, format_ms, seg
from .laurent import Laurent

__all__ = ["Multisegment", "Segment", "Weight", "Laurent", "ms", "parse_ms", "format_ms", "seg"]
