"""Finite class-2 p-groups through their commutator forms.

The package builds the groups, computes conjugacy-class sizes from ranks
of the commutator form, reduces central subspaces to normal forms, decides
isoclinism, and runs exhaustive desk-scale verification sweeps.
"""

from .canonicalize import CanonResult, canon_line, canon_plane, canon_plane_odd, canon_plane_two, canonicalize
from .field import ExtField, PrimeField
from .forms import (
    AlternatingMap,
    base_change,
    breadth,
    breadth_profile,
    check_structure_constraints,
    conjugate_type,
    full_lambda2,
    heisenberg_ext,
    is_camina,
    quotient,
    transform,
)
from .group_model import GroupElement, GroupModel, conjugate_type_element_level, structural_report
from .isoclinism import classify_against_theorem, find_isoclinism, fingerprint
from .linalg import Subspace, enumerate_subspaces, gaussian_binomial, kernel, rank

__all__ = [
    "CanonResult",
    "canon_line",
    "canon_plane",
    "canon_plane_odd",
    "canon_plane_two",
    "canonicalize",
    "ExtField",
    "PrimeField",
    "AlternatingMap",
    "base_change",
    "breadth",
    "breadth_profile",
    "check_structure_constraints",
    "conjugate_type",
    "full_lambda2",
    "heisenberg_ext",
    "is_camina",
    "quotient",
    "transform",
    "GroupElement",
    "GroupModel",
    "conjugate_type_element_level",
    "structural_report",
    "classify_against_theorem",
    "find_isoclinism",
    "fingerprint",
    "Subspace",
    "enumerate_subspaces",
    "gaussian_binomial",
    "kernel",
    "rank",
]

__version__ = "0.1.0"
