"""Coherent backscattering of polarized light by atoms with degenerate dipole lines."""

from ._backend import NAME as backend
from .angular import HalfInt, clebsch_gordan, triangle_ok, wigner_6j
from .bistatic import (
    ConeProfile,
    F_mu,
    cone_profile,
    contrast,
    enhancement,
    gamma_crossed,
    gamma_crossed_quadrature,
    gamma_crossed_zero,
    gamma_ladder,
    wings,
)
from .errors import DivisionDomainError, InputDomainError, NumericalFailureError
from .kernels import ALL_CHANNELS, HPAR, HPERP, LPAR, LPERP, Channel, Label, gamma_single
from .transition import (
    Transition,
    WCoeffs,
    mean_free_path,
    multiplicity_ratio,
    s_coeff,
    total_cross_section,
    w_coeffs,
)

__version__ = "0.1.0"
