"""Weighted composition operators on discrete measure spaces."""

from .calculus import (
    NotDenselyDefined,
    aluthge_rn,
    aluthge_weight,
    apply_adjoint,
    apply_adjoint_modulus_power,
    apply_modulus_power,
    apply_operator,
    cond_exp,
    cond_exp_pullback,
    partial_isometry_weight,
    projection,
    radon_nikodym,
)
from .properties import Status, Verdict
from .space import PointSpace, SpaceError, build_space, fibers, load_space, truncate

__all__ = [
    "NotDenselyDefined", "PointSpace", "SpaceError", "Status", "Verdict", "aluthge_rn",
    "aluthge_weight", "apply_adjoint", "apply_adjoint_modulus_power", "apply_modulus_power",
    "apply_operator", "build_space", "cond_exp", "cond_exp_pullback", "fibers", "load_space",
    "partial_isometry_weight", "projection", "radon_nikodym", "truncate",
]
