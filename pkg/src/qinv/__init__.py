"""Exact sl2 quantum invariants of ribbon graphs and surgery 3-manifolds at odd prime roots of unity."""

from __future__ import annotations

from .diagram import FramedLinkPresentation, builtin, disjoint_union, linking_matrix, parse_diagram
from .exactring import CyclotomicInteger, CycRational, KappaScalar, LaurentPoly, specialize
from .invariant import (
    F_value,
    congruence_test,
    context,
    evaluate_J,
    projective_invariant,
    tau,
    tqft_dimension,
)
from .liedata import alcove_colors, cartan_datum, sl2

__all__ = [
    "CyclotomicInteger",
    "CycRational",
    "F_value",
    "FramedLinkPresentation",
    "KappaScalar",
    "LaurentPoly",
    "alcove_colors",
    "builtin",
    "cartan_datum",
    "congruence_test",
    "context",
    "disjoint_union",
    "evaluate_J",
    "linking_matrix",
    "parse_diagram",
    "projective_invariant",
    "sl2",
    "specialize",
    "tau",
    "tqft_dimension",
]

__version__ = "0.1.0"
