"""Finite p-groups of class 2 as central extensions, with automorphism counts
computed from lifting criteria and checked against brute-force oracles."""

from .abelian import GroupShape, aut_order as group_aut_order, enumerate_aut_reps
from .cocycle import CocyclePair, eval_alpha, eval_eta, is_diamond, is_valid
from .extension import ExtElement, ExtGroup
from .lifting import AutReport, IsoResult, LiftWitness, aut_order, iso_test, normalize

__all__ = [
    "AutReport",
    "CocyclePair",
    "ExtElement",
    "ExtGroup",
    "GroupShape",
    "IsoResult",
    "LiftWitness",
    "aut_order",
    "enumerate_aut_reps",
    "eval_alpha",
    "eval_eta",
    "group_aut_order",
    "is_diamond",
    "is_valid",
    "iso_test",
    "normalize",
]

__version__ = "0.1.0"
