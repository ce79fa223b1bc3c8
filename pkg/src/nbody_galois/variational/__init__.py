"""Variational equations along the homographic orbit, their block split and
reduction to scalar Fuchsian equations."""

from .hessian import (
    Diagonalizer,
    HessianMatrix,
    diagonalizer,
    hessian,
    mass_matrix,
    reserved_vectors,
    scaled_hessian,
    tangent_lift,
)
from .scalar import (
    ConstructionError,
    ReducedEquation,
    SecondOrderODE,
    Singularity,
    Surd,
    equation_from_r,
    reduce_to_normal_form,
    scalar_ode_circular,
    scalar_ode_elliptic,
)
from .subsystem import GaugeSplit, SubsystemParams, subsystem_firstorder, tschauner_split

__all__ = [
    "ConstructionError",
    "Diagonalizer",
    "GaugeSplit",
    "HessianMatrix",
    "ReducedEquation",
    "SecondOrderODE",
    "Singularity",
    "SubsystemParams",
    "Surd",
    "diagonalizer",
    "equation_from_r",
    "hessian",
    "mass_matrix",
    "reduce_to_normal_form",
    "reserved_vectors",
    "scalar_ode_circular",
    "scalar_ode_elliptic",
    "scaled_hessian",
    "subsystem_firstorder",
    "tangent_lift",
    "tschauner_split",
]
