"""Spatially integrated double scattering off a half-space of atoms.

Everything here is a function of the vertex weights (w1, w2, w3) and a
polarization channel. Quantities are dimensionless bistatic coefficients;
``mu`` is the reduced scattering angle k * l * theta.

Closed forms and their guards
-----------------------------
The crossed coefficient gamma_C2(mu) is a weighted sum of four channel
functions gamma_i(mu), each available in closed form. Those forms divide
by (1 - mu^2)^4 and, in the linear channels, by mu^2 and mu^4; the
removable singularities cost precision nearby. Double precision keeps
better than 1e-8 relative accuracy only for 0.05 <= mu, |mu - 1| >= 0.02
and mu <= 1000, so outside that region ``gamma_crossed`` integrates the
one-dimensional crossed profile numerically instead. In l-perp the 1/mu
wing can vanish (phi = 0, pi/2) and the closed form then cancels down to
a mu^-2 tail, so that channel switches to quadrature above mu = 50.

The scalar profile F(mu) = int_0^1 dx / sqrt((1+x)^2 + mu^2 (1-x^2)) is
evaluated from its real arcsinh / arcsin representation. The compact form
2 arccosh(1/mu) - arccosh(1/mu^2) that is sometimes quoted for it is not
equal to the integral: it lacks the factor 1/sqrt(1 - mu^2) (at mu = 0.9
it gives 0.2621 against the integral's 0.6013). The real representation
agrees with direct quadrature and is the one used throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import DivisionDomainError, InputDomainError, NumericalFailureError
from .kernels import (
    Channel,
    Label,
    channel_polarizations,
    crossed_kernel,
    gamma_single,
    ladder_kernel,
)
from .transition import Transition, WCoeffs, w_coeffs

LN2 = math.log(2.0)

# Ladder coefficients (l1, l2) per channel; l3 and l4 are channel independent.
LADDER_TABLE = {
    Label.HelPar: (5 / 48, 2 * LN2 - 1),
    Label.HelPerp: (LN2 - 19 / 48, -(2 * LN2 - 1)),
    Label.LinPar: (LN2 - 11 / 32, 0.0),
    Label.LinPerp: (5 / 96, 0.0),
}
LADDER_L3 = 2 * LN2 - 0.5
LADDER_L4 = 2 * LN2

# Crossed coefficients (c1, c2, c3, c4) at exact backscattering.
CROSSED_ZERO_TABLE = {
    Label.HelPar: (5 / 48, 2 * LN2 - 1, 2 * LN2 - 0.5, 2 * LN2),
    Label.HelPerp: (LN2 - 19 / 48, 0.0, 0.0, 0.0),
    Label.LinPar: (LN2 - 11 / 32, 0.0, 2 * LN2 - 0.5, 2 * LN2),
    Label.LinPerp: (5 / 96, 2 * LN2 - 1, 0.0, 0.0),
}

_KERNEL_CODE = {Label.HelPar: 0, Label.HelPerp: 1, Label.LinPar: 2, Label.LinPerp: 3}
SCALAR_CODE = 4

SMALL_MU = 0.05
NEAR_ONE = 0.02
LARGE_MU = 1000.0
LARGE_MU_LPERP = 50.0


@dataclass(frozen=True)
class LadderCoeffs:
    l1: float
    l2: float
    l3: float = LADDER_L3
    l4: float = LADDER_L4


def ladder_coeffs(c: Channel) -> LadderCoeffs:
    l1, l2 = LADDER_TABLE[c.label]
    return LadderCoeffs(l1, l2, LADDER_L3, LADDER_L4)


def crossed_weights(w: WCoeffs) -> tuple[float, float, float, float]:
    """((w1+w3)^2, w1 w3, (w1+w3) w2, w2^2): the multipliers of c_1..c_4."""
    w1, w2, w3 = w
    return ((w1 + w3) ** 2, w1 * w3, (w1 + w3) * w2, w2**2)


def _combine(coeffs, weights) -> float:
    return math.fsum(a * b for a, b in zip(coeffs, weights))


# -- ladder ----------------------------------------------------------------

def gamma_ladder(w: WCoeffs, c: Channel) -> float:
    """Double-scattering ladder coefficient at backscattering."""
    lc = ladder_coeffs(c)
    w1, w2, w3 = w
    return 9 / 8 * math.fsum(
        (lc.l1 * (w1 + w2) ** 2, lc.l2 * w1 * w2, lc.l3 * (w1 + w2) * w3, lc.l4 * w3**2)
    )


def _sphere_rule(n_x: int, n_phi: int):
    """Gauss-Legendre in cos(theta) on each hemisphere x trapezoid in azimuth."""
    gx, gw = np.polynomial.legendre.leggauss(n_x)
    xs = np.concatenate([(gx - 1) / 2, (gx + 1) / 2])
    ws = np.concatenate([gw / 2, gw / 2])
    phis = 2 * np.pi * np.arange(n_phi) / n_phi
    return xs, ws, phis, 2 * np.pi / n_phi


def gamma_ladder_cubature(w: WCoeffs, c: Channel, n_x: int = 48, n_phi: int = 16) -> float:
    """Direct angular cubature of the ladder kernel over the link direction.

    gamma_L2 = 9/(32 pi) * int dOmega P_L2(n) / (1 + |cos theta|). The kernel is a
    quartic trigonometric polynomial in the azimuth, so the periodic trapezoid
    rule is exact there; the polar rule is split at the kink of |cos theta|.
    """
    xs, ws, phis, dphi = _sphere_rule(n_x, n_phi)
    eps, eps_out = channel_polarizations(c)
    total = 0.0
    for x, wx in zip(xs, ws):
        s = math.sqrt(max(0.0, 1 - x * x))
        ring = 0.0
        for phi in phis:
            n = np.array([s * math.cos(phi), s * math.sin(phi), x])
            ring += ladder_kernel(w, n, eps, eps_out)
        total += wx * ring * dphi / (1 + abs(x))
    return 9 / (32 * math.pi) * total


def gamma_crossed_cubature(w: WCoeffs, c: Channel, mu: float, n_x: int = 48, n_phi: int = 64) -> float:
    """Angular cubature of the crossed kernel, independent of the C(x) table.

    The scan direction is the x axis. Only meant for moderate mu: the
    azimuthal integrand sharpens as mu grows.
    """
    xs, ws, phis, dphi = _sphere_rule(n_x, n_phi)
    eps, eps_out = channel_polarizations(c)
    total = 0.0
    for x, wx in zip(xs, ws):
        s = math.sqrt(max(0.0, 1 - x * x))
        ring = 0.0
        for phi in phis:
            n = np.array([s * math.cos(phi), s * math.sin(phi), x])
            den = 1 + abs(x) + mu * mu * (1 - abs(x)) * math.cos(phi) ** 2
            ring += crossed_kernel(w, n, eps, eps_out) / den
        total += wx * ring * dphi
    return 9 / (32 * math.pi) * total


# -- crossed ---------------------------------------------------------------

def reduced_crossed_integrand(c: Channel, w: WCoeffs, x, mu: float):
    """C(x; J, Je): the crossed angular profile, uses ``c.phi`` for linear channels."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)):
        raise InputDomainError("x must lie in [0, 1]")
    root = np.sqrt((1 + x) ** 2 + mu * mu * (1 - x * x))
    value = _backend.python.crossed_integrand(
        _KERNEL_CODE[c.label], crossed_weights(w), x, mu, c.phi
    ) * root
    return float(value) if value.ndim == 0 else value


def gamma_crossed_quadrature(
    w: WCoeffs, c: Channel, mu: float, epsabs: float = 1e-10, epsrel: float = 1e-12,
    max_panels: int = 2000, backend=None,
) -> float:
    """9/8 * int_0^1 C(x) / sqrt((1+x)^2 + mu^2(1-x^2)) dx, adaptively."""
    if mu < 0:
        raise InputDomainError("mu must be non-negative")
    core = backend or _backend.active
    # the tolerance applies to gamma, i.e. after the 9/8 prefactor
    value, err, _, ok = core.adaptive_integral(
        _KERNEL_CODE[c.label], crossed_weights(w), float(mu), float(c.phi),
        epsabs * 8 / 9, epsrel, max_panels,
    )
    if not ok:
        raise NumericalFailureError(
            f"crossed quadrature did not converge (mu={mu}, channel={c})", 9 / 8 * value, 9 / 8 * err
        )
    return 9 / 8 * value


def F_mu(mu: float) -> float:
    """int_0^1 dx / sqrt((1+x)^2 + mu^2 (1-x^2)); F(0) = ln 2."""
    mu = abs(float(mu))
    a = 1.0 / (math.sqrt(2.0) * (math.sqrt(1.0 + mu * mu) + 1.0))
    d = (1.0 - mu) * (1.0 + mu)
    z = a * math.sqrt(abs(d))
    if z < 1e-4:
        # arcsinh(z)/z and arcsin(z)/z to O(z^4); covers the mu -> 1 limit
        sign = -1.0 if d > 0 else 1.0
        ratio = 1.0 + sign * z * z / 6 + 3 * z**4 / 40
    elif d > 0:
        ratio = math.asinh(z) / z
    else:
        ratio = math.asin(z) / z
    return 2.0 * a * ratio


def F_mu_quadrature(mu: float, epsabs: float = 1e-13) -> float:
    value, err, _, ok = _backend.active.adaptive_integral(
        SCALAR_CODE, (0.0, 0.0, 0.0, 0.0), float(mu), 0.0, epsabs, 1e-14, 4000
    )
    if not ok:
        raise NumericalFailureError(f"F quadrature did not converge (mu={mu})", value, err)
    return value


def gamma_terms(c: Channel, mu: float) -> tuple[float, float, float, float]:
    """Closed forms (gamma_1, ..., gamma_4)(mu) for one channel.

    Valid away from the guard bands described in the module docstring.
    """
    m2 = mu * mu
    s = math.sqrt(1 + m2)
    f = F_mu(mu)
    d2 = (1 - m2) ** 2
    d4 = d2 * d2
    base = -4 - 2 * m2 + 3 * s
    g2 = 9 / (8 * d2) * (base + (2 + m2 * m2) * f)
    g3 = 9 / (16 * d2) * (base + (4 - 4 * m2 + 3 * m2 * m2) * f)
    g4 = 9 / 4 * f
    # shared by hpar gamma_1 and lperp gamma_1
    p_even = (
        32 - 176 * m2 - 84 * m2**2 + 18 * m2**3
        + (-22 + 144 * m2 - 17 * m2**2) * s
        + 3 * m2**2 * (48 - 16 * m2 + 3 * m2**2) * f
    )
    label = c.label
    if label is Label.HelPar:
        return 3 / (256 * d4) * p_even, g2, g3, g4
    if label is Label.HelPerp:
        g1 = 3 / (256 * d4) * (
            -2 * (80 - 56 * m2 + 42 * m2**2 + 39 * m2**3)
            + (122 - 144 * m2 + 127 * m2**2) * s
            + 3 * (32 - 64 * m2 + 96 * m2**2 - 48 * m2**3 + 19 * m2**4) * f
        )
        return g1, 0.0, 0.0, 0.0
    cos2, cos4 = math.cos(2 * c.phi), math.cos(4 * c.phi)
    a2 = (
        48 - 152 * m2 + 128 * m2**2 + 48 * m2**3 - 212 * m2**4 - 70 * m2**5
        + (-48 + 176 * m2 - 222 * m2**2 + 88 * m2**3 + 111 * m2**4) * s
        + 3 * m2**4 * (8 + 24 * m2 + 3 * m2**2) * f
    ) / m2**2
    if label is Label.LinPerp:
        return 3 / (512 * d4) * (p_even - a2 * cos4), g2, 0.0, 0.0
    a1 = (
        -56 * (-2 + 8 * m2 + 4 * m2**3 + 5 * m2**4)
        + 28 * (-4 + 18 * m2 - 14 * m2**2 + 15 * m2**3) * s
        + 12 * m2**2 * (16 + 8 * m2 + 6 * m2**2 + 5 * m2**3) * f
    ) / m2
    b = (2 - 4 * m2 - 4 * m2**2 + (-2 + 5 * m2) * s + m2**2 * (2 + m2) * f) / m2
    g1 = 3 / (512 * d4) * (
        -288 + 48 * m2 - 252 * m2**2 - 138 * m2**3
        + (222 - 144 * m2 + 237 * m2**2) * s
        + (192 - 384 * m2 + 720 * m2**2 - 336 * m2**3 + 123 * m2**4) * f
        + a1 * cos2 + a2 * cos4
    )
    g3l = 9 / (16 * d2) * (base + (4 - 4 * m2 + 3 * m2 * m2) * f + b * cos2)
    return g1, 0.0, g3l, g4


def closed_form_valid(mu: float, c: Channel | None = None) -> bool:
    upper = LARGE_MU_LPERP if c is not None and c.label is Label.LinPerp else LARGE_MU
    return SMALL_MU <= mu <= upper and abs(mu - 1.0) >= NEAR_ONE


def gamma_crossed_zero(w: WCoeffs, c: Channel) -> float:
    """Crossed coefficient at exact backscattering from the mu = 0 table."""
    return 9 / 8 * _combine(CROSSED_ZERO_TABLE[c.label], crossed_weights(w))


def gamma_crossed(w: WCoeffs, c: Channel, mu: float) -> float:
    """Crossed double-scattering coefficient at reduced angle ``mu``."""
    if mu < 0:
        raise InputDomainError("mu must be non-negative")
    if mu == 0:
        return gamma_crossed_zero(w, c)
    if not closed_form_valid(mu, c):
        return gamma_crossed_quadrature(w, c, mu)
    return _combine(gamma_terms(c, mu), crossed_weights(w))


def wing_coeffs(c: Channel) -> tuple[float, float, float, float]:
    """(a1, a2, a3, a4) of the 1/mu wing in channel ``c``."""
    label = c.label
    if label is Label.HelPar:
        return 3 / 64, 0.5, 0.75, 1.0
    if label is Label.HelPerp:
        return 19 / 64, 0.0, 0.0, 0.0
    cos2 = math.cos(c.phi) ** 2
    if label is Label.LinPar:
        return (3 + 2 * cos2 + 3 * cos2 * cos2) / 16, 0.0, 0.5 * (1 + cos2), 1.0
    return 3 / 64 * math.sin(2 * c.phi) ** 2, 0.5, 0.0, 0.0


def wings(w: WCoeffs, c: Channel) -> float:
    """Coefficient of 9 pi / (8 mu) in the large-mu expansion of gamma_C2."""
    return _combine(wing_coeffs(c), crossed_weights(w))


def contrast(w: WCoeffs, c: Channel) -> float:
    """Interference contrast gamma_C2(0) / gamma_L2."""
    ladder = gamma_ladder(w, c)
    if ladder == 0:
        raise DivisionDomainError(f"ladder coefficient vanishes in channel {c}")
    return gamma_crossed_zero(w, c) / ladder


def enhancement(w: WCoeffs, c: Channel, mu: float = 0.0) -> float:
    """alpha(mu) = 1 + gamma_C2(mu) / (gamma_S + gamma_L2)."""
    background = gamma_single(w, c) + gamma_ladder(w, c)
    if background == 0:
        raise DivisionDomainError(f"single + ladder background vanishes in channel {c}")
    return 1.0 + gamma_crossed(w, c, mu) / background


@dataclass
class ConeProfile:
    transition: Transition
    channel: Channel
    mu_values: list[float] = field(default_factory=list)
    gamma_crossed: list[float] = field(default_factory=list)
    alpha: list[float] = field(default_factory=list)

    def rows(self):
        return zip(self.mu_values, self.gamma_crossed, self.alpha)


def cone_profile(t: Transition, c: Channel, mu_max: float, n_points: int) -> ConeProfile:
    """alpha(mu) on the uniform grid 0, ..., mu_max."""
    if not mu_max > 0:
        raise InputDomainError("mu_max must be positive")
    if n_points < 2:
        raise InputDomainError("need at least two grid points")
    w = w_coeffs(t)
    background = gamma_single(w, c) + gamma_ladder(w, c)
    if background == 0:
        raise DivisionDomainError(f"single + ladder background vanishes in channel {c}")
    profile = ConeProfile(t, c)
    for mu in np.linspace(0.0, mu_max, n_points):
        g = gamma_crossed(w, c, float(mu))
        profile.mu_values.append(float(mu))
        profile.gamma_crossed.append(g)
        profile.alpha.append(1.0 + g / background)
    return profile
