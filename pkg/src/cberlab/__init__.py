"""Finite and windowed models of equivalence-relation links, lifts,
quasi-tilings, and measure-algebra towers, with exact arithmetic throughout."""

from .eqrel import FinEqrel, build_partition, delta, full, join
from .links import Link, link_finite_index, extend_link, verify_link

__all__ = [
    "FinEqrel",
    "build_partition",
    "delta",
    "full",
    "join",
    "Link",
    "link_finite_index",
    "extend_link",
    "verify_link",
]
