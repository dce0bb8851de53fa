"""Index 2F2 hypergeometric transform: special functions, spaces and verification."""

from .bergman import GammaParam, basis_element, kernel, kernel_diagonal
from .errors import (
    DomainError,
    EnvelopeError,
    IdxfError,
    NoConvergence,
    NumericalError,
    QuadratureFailure,
    RangeError,
)
from .gamma import gamma, log_gamma
from .oscillator import EigenExpansion, PhysicalConfig, eigenfunction_eval
from .transform import cs_closed, cs_series, transform_apply_coeffs, transform_apply_sampled

__all__ = [
    "GammaParam",
    "EigenExpansion",
    "PhysicalConfig",
    "basis_element",
    "kernel",
    "kernel_diagonal",
    "gamma",
    "log_gamma",
    "eigenfunction_eval",
    "cs_closed",
    "cs_series",
    "transform_apply_coeffs",
    "transform_apply_sampled",
    "IdxfError",
    "DomainError",
    "RangeError",
    "NumericalError",
    "NoConvergence",
    "QuadratureFailure",
    "EnvelopeError",
]
