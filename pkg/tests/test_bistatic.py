import math

import numpy as np
import pytest
from scipy.integrate import quad

from atomcbs import bistatic
from atomcbs.bistatic import (
    LADDER_L3,
    LADDER_L4,
    CROSSED_ZERO_TABLE,
    F_mu,
    F_mu_quadrature,
    closed_form_valid,
    cone_profile,
    contrast,
    crossed_weights,
    enhancement,
    gamma_crossed,
    gamma_crossed_cubature,
    gamma_crossed_quadrature,
    gamma_crossed_zero,
    gamma_ladder,
    gamma_ladder_cubature,
    gamma_terms,
    ladder_coeffs,
    reduced_crossed_integrand,
    wing_coeffs,
    wings,
)
from atomcbs.errors import DivisionDomainError, InputDomainError, NumericalFailureError
from atomcbs.kernels import ALL_CHANNELS, HPAR, HPERP, LPAR, LPERP, Channel, Label
from atomcbs.transition import CLASSICAL, Transition, WCoeffs, w_coeffs

from .helpers import PHIS, channels_with_phi, transitions_upto

LN2 = math.log(2)
J34 = w_coeffs(Transition(3, 4))


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-12)


# --- ladder ----------------------------------------------------------------


def test_ladder_tables():
    for c in ALL_CHANNELS:
        lc = ladder_coeffs(c)
        assert lc.l3 == 2 * LN2 - 0.5 == LADDER_L3
        assert lc.l4 == 2 * LN2 == LADDER_L4
    assert ladder_coeffs(HPAR).l1 == 5 / 48


def test_ladder_examples():
    assert gamma_ladder(CLASSICAL, HPAR) == pytest.approx(15 / 128, abs=1e-15)
    value = gamma_ladder(J34, HPERP)
    # table value; the quoted 0.21559 is off in the fifth digit (see notes)
    assert value == pytest.approx(gamma_ladder_cubature(J34, HPERP), abs=1e-12)
    assert value == pytest.approx(0.21559, abs=1e-4)


@pytest.mark.parametrize("c", list(channels_with_phi()), ids=str)
def test_ladder_cubature(c):
    for t in (Transition(0, 1), Transition("1/2", "3/2"), Transition(1, 1), Transition(3, 4), Transition(2, 1)):
        w = w_coeffs(t)
        assert abs(gamma_ladder(w, c) - gamma_ladder_cubature(w, c)) <= 1e-8
    synthetic = WCoeffs(0.3, -0.7, 0.5)
    assert abs(gamma_ladder(synthetic, c) - gamma_ladder_cubature(synthetic, c)) <= 1e-8


# --- crossed at mu = 0 -----------------------------------------------------


def test_crossed_zero_examples():
    for c in ALL_CHANNELS:
        assert gamma_crossed_zero(CLASSICAL, c) == pytest.approx(gamma_ladder(CLASSICAL, c), abs=1e-15)
    assert gamma_crossed_zero(J34, HPAR) == pytest.approx(0.02840, abs=5e-6)
    assert gamma_crossed(J34, HPERP, 0.0) == pytest.approx(0.15401, abs=5e-6)
    w = WCoeffs(0.4, 0.2, 0.2)
    for c in (HPAR, LPAR, Channel(Label.LinPar, 0.9)):
        assert gamma_crossed_zero(w, c) == pytest.approx(gamma_ladder(w, c), abs=1e-15)


def test_crossed_zero_table_parallel_equals_ladder():
    for label in (Label.HelPar, Label.LinPar):
        c1, c2, c3, c4 = CROSSED_ZERO_TABLE[label]
        l1, l2 = bistatic.LADDER_TABLE[label]
        assert (c1, c2, c3, c4) == (l1, l2, LADDER_L3, LADDER_L4)


def test_crossed_zero_quadrature_examples():
    assert gamma_crossed_quadrature(CLASSICAL, HPAR, 0.0) == pytest.approx(15 / 128, abs=1e-10)
    assert gamma_crossed_quadrature(WCoeffs(0, 1, 0), HPAR, 0.0) == pytest.approx(9 / 4 * LN2, abs=1e-10)


def test_crossed_cubature_matches_profile():
    # the 2D angular integral knows nothing about the reduced profile C(x)
    for c in (HPAR, HPERP, Channel(Label.LinPar, 0.3), Channel(Label.LinPerp, 1.1)):
        for mu in (0.0, 0.5, 2.0):
            ref = gamma_crossed_cubature(J34, c, mu, n_x=64, n_phi=128)
            assert gamma_crossed_quadrature(J34, c, mu) == pytest.approx(ref, rel=1e-6, abs=1e-10)


# --- reduced integrand -----------------------------------------------------


def test_reduced_integrand_examples():
    x = np.linspace(0, 1, 11)
    w = WCoeffs(0.5, 0.0, 0.1)
    hperp = reduced_crossed_integrand(HPERP, w, x, 3.0)
    assert np.allclose(hperp, (w.w1 + w.w3) ** 2 * (1 + x * x) ** 2 / 4)
    unit = lambda k: WCoeffs(*{1: (1, 0, 0), 4: (0, 1, 0)}[k])
    assert reduced_crossed_integrand(HPAR, unit(1), 1.0, 0.0) == 0.0
    assert reduced_crossed_integrand(HPAR, unit(4), 1.0, 0.0) == pytest.approx(2.0)
    # at mu = 0 the anisotropy vanishes: l-par and l-perp lose their phi dependence
    for label in (Label.LinPar, Label.LinPerp):
        a = reduced_crossed_integrand(Channel(label, 0.0), J34, x, 0.0)
        b = reduced_crossed_integrand(Channel(label, 1.2), J34, x, 0.0)
        assert np.allclose(a, b, atol=1e-15)
    with pytest.raises(InputDomainError):
        reduced_crossed_integrand(HPAR, w, 1.5, 0.0)


def test_anisotropy_parameter_identity():
    for mu in (0.1, 0.9, 3.0, 40.0):
        for x in (0.0, 0.3, 0.8, 0.999):
            root = math.sqrt((1 + x) ** 2 + mu * mu * (1 - x * x))
            printed = 1 - 2 * (root - 1 - x) / ((1 - x) * mu * mu) if x < 0.9 else (root - 1 - x) / (root + 1 + x)
            stable = mu * mu * (1 - x * x) / (root + 1 + x) ** 2
            assert stable == pytest.approx(printed, rel=1e-12)


# --- closed forms vs quadrature --------------------------------------------


@pytest.mark.parametrize("mu", [0.0, 0.3, 0.7, 0.95, 1.05, 2.0, 5.0, 10.0])
def test_closed_vs_quadrature_grid(mu):
    worst = 0.0
    for t in transitions_upto(8):
        w = w_coeffs(t)
        for c in channels_with_phi():
            got = gamma_crossed(w, c, mu)
            ref = gamma_crossed_quadrature(w, c, mu)
            worst = max(worst, abs(got - ref) / max(abs(ref), 1e-12))
    assert worst <= 1e-6


def test_closed_form_terms_directly():
    # raw closed forms over the whole region where gamma_crossed uses them
    mus = [0.05, 0.1, 0.5, 0.98, 1.02, 1.5, 3, 10, 50, 500, 1000]
    units = [WCoeffs(1, 0, 0), WCoeffs(0, 0, 1), WCoeffs(0, 1, 0)]
    for c in channels_with_phi():
        for mu in mus:
            if not closed_form_valid(mu, c):
                continue
            terms = gamma_terms(c, mu)
            for w in units + [J34]:
                direct = math.fsum(a * b for a, b in zip(terms, crossed_weights(w)))
                ref = gamma_crossed_quadrature(w, c, mu)
                assert abs(direct - ref) <= 1e-8 * max(abs(ref), 1e-12) + 1e-14, (c, mu, w)


def test_guard_bands():
    assert not closed_form_valid(0.01)
    assert not closed_form_valid(1.0)
    assert not closed_form_valid(1.01)
    assert closed_form_valid(0.5) and closed_form_valid(1.1) and closed_form_valid(1000.0)
    assert not closed_form_valid(1001.0)
    assert not closed_form_valid(60.0, LPERP) and closed_form_valid(60.0, LPAR)
    # values are continuous across every switch
    for edge in (bistatic.SMALL_MU, 1 - bistatic.NEAR_ONE, 1 + bistatic.NEAR_ONE, bistatic.LARGE_MU_LPERP, bistatic.LARGE_MU):
        for c in (HPAR, HPERP, Channel(Label.LinPar, 0.4), Channel(Label.LinPerp, 0.4)):
            lo, hi = gamma_crossed(J34, c, edge * (1 - 1e-9)), gamma_crossed(J34, c, edge * (1 + 1e-9))
            assert lo == pytest.approx(hi, rel=1e-7)


def test_negative_mu_rejected():
    with pytest.raises(InputDomainError):
        gamma_crossed(J34, HPAR, -0.1)
    with pytest.raises(InputDomainError):
        gamma_crossed_quadrature(J34, HPAR, -0.1)


def test_quadrature_budget_exhaustion():
    with pytest.raises(NumericalFailureError) as info:
        gamma_crossed_quadrature(J34, HPAR, 30.0, epsabs=1e-16, epsrel=0.0, max_panels=3)
    assert info.value.estimate == pytest.approx(gamma_crossed(J34, HPAR, 30.0), rel=1e-3)


# --- F(mu) -------------------------------------------------------------------


def test_F_values():
    assert F_mu(0.0) == pytest.approx(LN2, abs=1e-15)
    ref = quad(lambda x: 1 / math.sqrt((1 + x) ** 2 + 0.81 * (1 - x * x)), 0, 1, epsabs=1e-14)[0]
    assert F_mu(0.9) == pytest.approx(ref, abs=1e-14)
    assert F_mu(0.9) == pytest.approx(0.60124, abs=1e-4)
    assert F_mu(1.0) == pytest.approx(2 - math.sqrt(2), abs=1e-15)
    # pi/(2 mu) (1 - 4/(pi mu) + O(mu^-2)): the relative gap at mu = 1000 is 0.127%
    for mu in (1e3, 1e4, 1e5):
        assert F_mu(mu) == pytest.approx(math.pi / (2 * mu) * (1 - 4 / (math.pi * mu)), rel=10 / mu**2)


def test_F_against_quadrature():
    mus = list(np.linspace(0, 100, 1001)) + [1 - 1e-9, 1 + 1e-9, 1 - 1e-5, 1 + 1e-5, 1e-8]
    for mu in mus:
        assert abs(F_mu(mu) - F_mu_quadrature(mu)) <= 1e-9


def test_F_printed_compact_form_is_not_the_integral():
    mu = 0.9
    compact = 2 * math.acosh(1 / mu) - math.acosh(1 / mu**2)
    assert compact == pytest.approx(0.2621, abs=1e-4)
    assert compact / math.sqrt(1 - mu * mu) == pytest.approx(F_mu(mu), rel=1e-12)


# --- wings -----------------------------------------------------------------


def _lpar_ratio(w):
    return wings(w, Channel(Label.LinPar, 0.0)) / wings(w, Channel(Label.LinPar, math.pi / 2))


def test_wing_ratios():
    assert _lpar_ratio(CLASSICAL) == pytest.approx(8 / 3, abs=1e-9)
    for je in (99, 101):
        assert _lpar_ratio(w_coeffs(Transition(100, je))) == pytest.approx(40 / 19, rel=1e-2)
    assert _lpar_ratio(w_coeffs(Transition(100, 100))) == pytest.approx(40 / 22, rel=1e-2)


def test_wing_table_structure():
    assert wing_coeffs(LPERP)[0] == 0.0
    assert wing_coeffs(Channel(Label.LinPerp, math.pi / 4))[0] == pytest.approx(3 / 64)
    assert wing_coeffs(HPERP) == (19 / 64, 0.0, 0.0, 0.0)


def _wing_cases():
    for t in (Transition(0, 1), Transition(3, 4), Transition(1, 1), Transition("5/2", "3/2")):
        w = w_coeffs(t)
        for c in channels_with_phi():
            if wings(w, c) > 1e-3:
                yield w, c


def test_wing_convergence_envelope():
    # the next term in the large-mu expansion is O(1/mu^2): relative error ~ k/mu, k < 3.5
    for w, c in _wing_cases():
        errs = []
        for mu in (50.0, 500.0, 5000.0):
            asym = 9 * math.pi / (8 * mu) * wings(w, c)
            errs.append(rel(gamma_crossed(w, c, mu), asym))
            assert errs[-1] <= 3.5 / mu, (c, mu, errs[-1])
        assert errs[1] < errs[0] / 5 and errs[2] < errs[1] / 5


def test_lperp_classical_falls_as_inverse_square():
    c = Channel(Label.LinPerp, 0.0)
    ratio = gamma_crossed(CLASSICAL, c, 400.0) / gamma_crossed(CLASSICAL, c, 200.0)
    assert ratio == pytest.approx(0.25, rel=0.02)


# --- shape, contrast, enhancement -----------------------------------------


def test_hperp_shape_universality():
    a, b = w_coeffs(Transition(3, 4)), w_coeffs(Transition("3/2", "1/2"))
    for mu in (0.0, 0.02, 0.4, 1.0, 3.0, 70.0, 2000.0):
        sa = gamma_crossed(a, HPERP, mu) / (a.w1 + a.w3) ** 2
        sb = gamma_crossed(b, HPERP, mu) / (b.w1 + b.w3) ** 2
        assert sa == pytest.approx(sb, rel=1e-10)


def test_contrast_bounds():
    for t in transitions_upto(20):
        w = w_coeffs(t)
        for c in channels_with_phi():
            value = contrast(w, c)
            assert 0 < value <= 1 + 1e-12, (t, c)


def test_contrast_values():
    for c in channels_with_phi():
        assert contrast(CLASSICAL, c) == pytest.approx(1.0, abs=1e-14)
    half = contrast(w_coeffs(Transition("1/2", "3/2")), HPAR)
    assert half == 0.3212121212121212
    assert contrast(J34, HPAR) == pytest.approx(0.2173, abs=5e-4)


def test_enhancement_values():
    assert enhancement(J34, HPERP) == pytest.approx(1.21, abs=5e-3)
    assert enhancement(J34, HPAR) == pytest.approx(1.17, abs=5e-3)
    assert abs(enhancement(CLASSICAL, HPAR) - 2) <= 1e-10


def test_zero_denominators():
    zero = WCoeffs(0.0, 0.0, 0.0)
    with pytest.raises(DivisionDomainError):
        contrast(zero, HPAR)
    with pytest.raises(DivisionDomainError):
        enhancement(zero, HPERP)


# --- cone ------------------------------------------------------------------


def test_cone_profile_shape():
    prof = cone_profile(Transition(3, 4), HPERP, 5.0, 11)
    assert len(prof.mu_values) == len(prof.gamma_crossed) == len(prof.alpha) == 11
    assert prof.mu_values[0] == 0.0 and prof.mu_values[-1] == 5.0
    assert np.all(np.diff(prof.mu_values) > 0)
    assert prof.alpha[0] == pytest.approx(1.21, abs=5e-3)
    with pytest.raises(InputDomainError):
        cone_profile(Transition(3, 4), HPERP, 5.0, 1)
    with pytest.raises(InputDomainError):
        cone_profile(Transition(3, 4), HPERP, 0.0, 5)


def test_cone_decreases_beyond_small_mu():
    t = Transition(3, 4)
    for c in channels_with_phi():
        prof = cone_profile(t, c, 20.0, 201)
        tail = [a for mu, a in zip(prof.mu_values, prof.alpha) if mu >= 0.1]
        assert all(b <= a + 1e-12 for a, b in zip(tail, tail[1:])), str(c)
        assert tail[-1] > 1.0


def test_cone_helicity_ignores_phi():
    t = Transition(3, 4)
    for c in (HPAR, HPERP):
        a = cone_profile(t, c, 4.0, 9)
        b = cone_profile(t, Channel(c.label, 1.0), 4.0, 9)
        assert a.alpha == b.alpha


def test_lpar_cone_wider_along_polarization():
    t = Transition(3, 4)
    along = cone_profile(t, Channel(Label.LinPar, 0.0), 10.0, 21)
    across = cone_profile(t, Channel(Label.LinPar, math.pi / 2), 10.0, 21)
    assert along.alpha[0] == pytest.approx(across.alpha[0], abs=1e-15)
    for a, b in list(zip(along.alpha, across.alpha))[2:]:
        assert a > b
