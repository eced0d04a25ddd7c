"""Transition-level scalars: s_K, the vertex weights w_i, M_J, cross-section.

Detuning is always measured in units of the natural linewidth, so the
linewidth itself never appears. Je = J lines are accepted although they
are generally open (the excited level can decay elsewhere); only the
elastic channel is modelled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .angular import HalfInt, wigner_6j_squared
from .errors import InputDomainError


@dataclass(frozen=True)
class Transition:
    """Dipole line between a ground level j and an excited level je."""

    j: HalfInt
    je: HalfInt

    def __init__(self, j, je):
        object.__setattr__(self, "j", HalfInt.of(j))
        object.__setattr__(self, "je", HalfInt.of(je))
        if self.j.twice < 0 or self.je.twice < 0:
            raise InputDomainError("angular momenta must be non-negative")
        if (self.j.twice - self.je.twice) % 2:
            raise InputDomainError(
                f"J={self.j} and Je={self.je} differ by a half-integer: "
                "violates the dipole selection rule |J-Je| <= 1"
            )
        if abs(self.j.twice - self.je.twice) > 2:
            raise InputDomainError(
                f"J={self.j}, Je={self.je} violates the dipole selection rule |J-Je| <= 1"
            )
        if self.j.twice == 0 and self.je.twice == 0:
            raise InputDomainError("J=0 -> Je=0 has no dipole transition")

    @property
    def kind(self) -> str:
        """'plus', 'zero' or 'minus' for Je = J+1, J, J-1."""
        return {2: "plus", 0: "zero", -2: "minus"}[self.je.twice - self.j.twice]

    def __str__(self):
        return f"{self.j}->{self.je}"


@dataclass(frozen=True)
class WCoeffs:
    """Weights of the horizontal, diagonal and vertical contractions."""

    w1: float
    w2: float
    w3: float

    def __iter__(self):
        return iter((self.w1, self.w2, self.w3))


@dataclass(frozen=True)
class MediumParams:
    number_density: float
    wavenumber: float
    detuning: float = 0.0

    def __post_init__(self):
        if not self.number_density > 0:
            raise InputDomainError("number density must be positive")
        if not self.wavenumber > 0:
            raise InputDomainError("wavenumber must be positive")


CLASSICAL = WCoeffs(1.0, 0.0, 0.0)


def transition_of(j, je=None) -> Transition:
    if isinstance(j, Transition):
        return j
    return Transition(j, je)


def multiplicity_ratio(t: Transition) -> float:
    """M_J = (2Je+1) / (3(2J+1))."""
    return float(Fraction(t.je.multiplicity, 3 * t.j.multiplicity))


def _s_exact(t: Transition, k: int) -> Fraction:
    if k not in (0, 1, 2):
        raise InputDomainError(f"tensor rank K must be 0, 1 or 2, got {k!r}")
    if k > t.j.twice:  # K <= 2J
        return Fraction(0)
    return 3 * t.je.multiplicity * wigner_6j_squared(1, 1, k, t.j, t.j, t.je)


def s_coeff(t: Transition, k: int) -> float:
    """s_K = 3(2Je+1) {1 1 K; J J Je}^2."""
    return float(_s_exact(t, k))


def w_coeffs(t: Transition) -> WCoeffs:
    s0, s1, s2 = (_s_exact(t, k) for k in range(3))
    # exact rationals until the very end so the sum rule holds to rounding
    return WCoeffs(float((s0 - s2) / 3), float((s2 - s1) / 2), float((s1 + s2) / 2))


def total_cross_section(t: Transition, detuning: float, k: float) -> float:
    """Resonant cross-section M_J 6 pi / k^2 with a Lorentzian in detuning/Gamma."""
    if not k > 0:
        raise InputDomainError("wavenumber must be positive")
    return multiplicity_ratio(t) * 6 * math.pi / k**2 / (1 + 4 * detuning**2)


def mean_free_path(sigma_tot: float, n: float) -> float:
    if not sigma_tot > 0 or not n > 0:
        raise InputDomainError("cross-section and density must be positive")
    return 1.0 / (n * sigma_tot)
