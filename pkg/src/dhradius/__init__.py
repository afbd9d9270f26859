"""Unstructured and structure-preserving stability radii of DH systems ``x' = (J - R) Q x``."""

__version__ = "0.1.0"

from .backward_error import BackwardErrorResult, HermitianPencil, build_pencil, eta_s, s_radius
from .estimators import BackwardError, RobustDHRepresentation, StabilityRadius, compute_radius
from .mappings import min_hermitian_map, min_negsemidef_map, min_skew_hermitian_map
from .robust import (
    RobustRepresentation,
    optimal_representation,
    random_stable,
    representation_from_factor,
    spectral_abscissa,
)
from .sd import SdBounds, nepv_matrix, scf_solve, sd_bounds, sd_inner, sd_radius
from .si import si_inner, si_radius
from .system import (
    DHSystem,
    PerturbationClass,
    PerturbationPair,
    RadiusResult,
    brake_squeal,
    classify,
    joint_norm,
    random_dh,
    validate,
    verify_certificate,
)
from .unstructured import transfer_norm, unstructured_radius

__all__ = [
    "BackwardError", "BackwardErrorResult", "DHSystem", "HermitianPencil", "PerturbationClass",
    "PerturbationPair", "RadiusResult", "RobustDHRepresentation", "RobustRepresentation", "SdBounds",
    "StabilityRadius", "brake_squeal", "build_pencil", "classify", "compute_radius", "eta_s",
    "joint_norm", "min_hermitian_map", "min_negsemidef_map", "min_skew_hermitian_map", "nepv_matrix",
    "optimal_representation", "random_dh", "random_stable", "representation_from_factor", "s_radius",
    "scf_solve", "sd_bounds", "sd_inner", "sd_radius", "si_inner", "si_radius", "spectral_abscissa",
    "transfer_norm", "unstructured_radius", "validate", "verify_certificate",
]
