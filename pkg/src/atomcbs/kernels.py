"""Polarization channels and the backscattering polarization kernels.

Incidence is along +z and detection along -z (exact backscattering). The
helicity vector is fixed as (1, i, 0)/sqrt2; the opposite handedness gives
identical results in all four channels. For the linear channels the
incident polarization makes the angle ``phi`` with the scan direction,
which is taken as the x axis.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputDomainError
from .tensors import bdot, projector
from .transition import Transition, WCoeffs, total_cross_section, w_coeffs


class Label(enum.Enum):
    HelPar = "hpar"
    HelPerp = "hperp"
    LinPar = "lpar"
    LinPerp = "lperp"


_ALIASES = {
    "hpar": Label.HelPar,
    "h∥": Label.HelPar,
    "hperp": Label.HelPerp,
    "h⊥": Label.HelPerp,
    "lpar": Label.LinPar,
    "l∥": Label.LinPar,
    "lperp": Label.LinPerp,
    "l⊥": Label.LinPerp,
}


@dataclass(frozen=True)
class Channel:
    """Polarization channel; ``phi`` only matters for the linear ones."""

    label: Label
    phi: float = 0.0

    @classmethod
    def parse(cls, name: str, phi: float = 0.0) -> Channel:
        try:
            label = _ALIASES[name.strip().lower()]
        except KeyError:
            raise InputDomainError(
                f"unknown channel {name!r}; expected one of hpar, hperp, lpar, lperp"
            ) from None
        return cls(label, phi)

    @property
    def helicity(self) -> bool:
        return self.label in (Label.HelPar, Label.HelPerp)

    @property
    def name(self) -> str:
        return self.label.value

    def __str__(self):
        return self.name


HPAR = Channel(Label.HelPar)
HPERP = Channel(Label.HelPerp)
LPAR = Channel(Label.LinPar)
LPERP = Channel(Label.LinPerp)
ALL_CHANNELS = (HPAR, HPERP, LPAR, LPERP)

_HELICITY = np.array([1.0, 1.0j, 0.0]) / math.sqrt(2.0)


def channel_polarizations(c: Channel) -> tuple[np.ndarray, np.ndarray]:
    """Incident and detected polarization vectors (eps, eps')."""
    if c.label is Label.HelPar:
        return _HELICITY.copy(), _HELICITY.conj()
    if c.label is Label.HelPerp:
        return _HELICITY.copy(), _HELICITY.copy()
    cos, sin = math.cos(c.phi), math.sin(c.phi)
    eps = np.array([cos, sin, 0.0], dtype=complex)
    if c.label is Label.LinPar:
        return eps, eps.copy()
    return eps, np.array([-sin, cos, 0.0], dtype=complex)


def _contractions(eps, eps_out):
    eps = np.asarray(eps, dtype=complex)
    eps_out = np.asarray(eps_out, dtype=complex)
    return abs(bdot(eps_out.conj(), eps)) ** 2, abs(bdot(eps_out, eps)) ** 2


# (|conj(eps').eps|^2, |eps'.eps|^2) for the four channels, exactly
_CONTRACTIONS = {
    Label.HelPar: (0.0, 1.0),
    Label.HelPerp: (1.0, 0.0),
    Label.LinPar: (1.0, 1.0),
    Label.LinPerp: (0.0, 0.0),
}


def gamma_single(w: WCoeffs, c: Channel) -> float:
    """Single-scattering bistatic coefficient at exact backscattering."""
    flip, keep = _CONTRACTIONS[c.label]
    return 0.75 * (w.w1 * flip + w.w2 * keep + w.w3)


def single_diff_cross_section(t: Transition, detuning: float, k: float, eps, eps_out) -> float:
    """Internally averaged differential cross-section for single scattering."""
    w = w_coeffs(t)
    flip, keep = _contractions(eps, eps_out)
    sigma = total_cross_section(t, detuning, k)
    return 3 * sigma / (8 * math.pi) * (w.w1 * flip + w.w2 * keep + w.w3)


def ladder_kernel(w: WCoeffs, n, eps, eps_out) -> float:
    w1, w2, w3 = w
    delta = projector(n)
    eps = np.asarray(eps, dtype=complex)
    eps_out = np.asarray(eps_out, dtype=complex)
    eb, eob = eps.conj(), eps_out.conj()
    value = (
        (w1**2 + w2**2) * abs(eob @ delta @ eps) ** 2
        + 2 * w1 * w2 * abs(eps_out @ delta @ eps) ** 2
        + (w1 + w2) * w3 * ((eb @ delta @ eps) + (eob @ delta @ eps_out))
        + 2 * w3**2
    )
    return float(value.real)


def crossed_kernel(w: WCoeffs, n, eps, eps_out) -> float:
    w1, w2, w3 = w
    delta = projector(n)
    eps = np.asarray(eps, dtype=complex)
    eps_out = np.asarray(eps_out, dtype=complex)
    eb, eob = eps.conj(), eps_out.conj()
    value = (
        (w1**2 + w3**2) * abs(eob @ delta @ eps) ** 2
        + 2 * w1 * w3 * (eob @ delta @ eps_out) * (eps @ delta @ eb)
        + (w1 + w3)
        * w2
        * ((eps @ eps_out) * (eb @ delta @ eob) + (eb @ eob) * (eps @ delta @ eps_out))
        + 2 * w2**2 * abs(eps_out @ eps) ** 2
    )
    return float(value.real)
