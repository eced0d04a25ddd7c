"""Atomic scattering tensors, the four-point vertex and double amplitudes.

Conventions
-----------
* Quantization axis +z. Dipole matrix elements follow Wigner-Eckart with
  reduced element sqrt(2Je+1), so <Je me|d_q|J m> = <J m; 1 q|Je me>.
* Cartesian components: d_x = (d_-1 - d_+1)/sqrt2, d_y = i(d_-1 + d_+1)/sqrt2,
  d_z = d_0. They are Hermitian, so emission elements are the complex
  conjugates of absorption elements.
* ``bdot`` never conjugates. Callers conjugate explicitly, mirroring the
  bars on polarization vectors.
* Sublevel arrays are indexed from m = -J upwards; ``tensor_table(t)[a, b]``
  is the tensor for the transition m_a -> m_b (initial, final).
* The resonant scalar t(omega) is dropped; every tensor is dimensionless.

Only sublevel-summed moduli are convention independent; individual tensor
entries depend on the phase choice above.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .angular import HalfInt, clebsch_gordan
from .errors import InputDomainError
from .transition import Transition, WCoeffs, multiplicity_ratio

_SQRT_HALF = np.sqrt(0.5)


def bdot(a, b):
    """Bilinear dot product, no conjugation."""
    return np.dot(a, b)


def projector(n) -> np.ndarray:
    """Transverse projector delta_ij - n_i n_j for a unit vector n."""
    n = _unit(n)
    return np.eye(3) - np.outer(n, n)


def _unit(n, tol=1e-12) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > tol:
        raise InputDomainError(f"expected a real unit 3-vector, got {n!r}")
    return n


def _index(j: HalfInt, m) -> int:
    m = HalfInt.of(m)
    if abs(m.twice) > j.twice or (j.twice - m.twice) % 2:
        raise InputDomainError(f"projection {m} invalid for j={j}")
    return (m.twice + j.twice) // 2


def _spherical_to_cartesian(dm1, d0, dp1):
    return np.array(
        [_SQRT_HALF * (dm1 - dp1), 1j * _SQRT_HALF * (dm1 + dp1), d0], dtype=complex
    )


@lru_cache(maxsize=None)
def _dipole_table(t: Transition) -> np.ndarray:
    ms = t.j.projections()
    mes = t.je.projections()
    table = np.zeros((len(mes), len(ms), 3), dtype=complex)
    for a, me in enumerate(mes):
        for b, m in enumerate(ms):
            q = me.twice - m.twice
            if abs(q) > 2:
                continue
            sph = [
                clebsch_gordan(t.j, 1, m, qq, t.je, me) if qq == q // 2 else 0.0
                for qq in (-1, 0, 1)
            ]
            table[a, b] = _spherical_to_cartesian(*sph)
    table.flags.writeable = False
    return table


def dipole_table(t: Transition) -> np.ndarray:
    """Array D[me, m, i] = <Je me| d_i |J m> (read-only, cached)."""
    return _dipole_table(t)


def dipole_cartesian(t: Transition, me, m) -> np.ndarray:
    """Cartesian absorption matrix element <Je me| d |J m>."""
    return dipole_table(t)[_index(t.je, me), _index(t.j, m)].copy()


@lru_cache(maxsize=None)
def _tensor_table(t: Transition) -> np.ndarray:
    d = _dipole_table(t)
    # t[m, m'][i, j] = sum_me <J m'|d_i|Je me><Je me|d_j|J m>
    table = np.einsum("eni,emj->mnij", d.conj(), d)
    table.flags.writeable = False
    return table


def tensor_table(t: Transition) -> np.ndarray:
    """All scattering tensors, shape (2J+1, 2J+1, 3, 3), indexed [m, m']."""
    return _tensor_table(t)


def scattering_tensor(t: Transition, m, m_final) -> np.ndarray:
    """t_ij(m, m') = <J m'| d_i d_j |J m> as a 3x3 complex array."""
    return tensor_table(t)[_index(t.j, m), _index(t.j, m_final)].copy()


def vertex_trace_closed(w: WCoeffs, x1, x2, x3, x4) -> complex:
    """Weighted sum of the three pairwise contractions of x1..x4."""
    w1, w2, w3 = w
    return complex(
        w1 * bdot(x1, x2) * bdot(x3, x4)
        + w2 * bdot(x1, x3) * bdot(x2, x4)
        + w3 * bdot(x1, x4) * bdot(x2, x3)
    )


def vertex_trace_oracle(t: Transition, x1, x2, x3, x4) -> complex:
    """Tr[rho (x4.d)(x3.d)(x2.d)(x1.d)] / M_J by explicit sublevel chains.

    rho is the uniform ground-state density matrix. The sum runs over every
    m -> me -> m' -> me' -> m chain; no 6J symbol is involved.
    """
    d = dipole_table(t)
    up = lambda x: np.einsum("emi,i->em", d, np.asarray(x, dtype=complex))  # <me|x.d|m>
    down = lambda x: np.einsum("emi,i->em", d.conj(), np.asarray(x, dtype=complex))  # <m|x.d|me>
    a1, b2, a3, b4 = up(x1), down(x2), up(x3), down(x4)
    total = np.einsum("fm,fn,en,em->", b4, a3, b2, a1)
    return complex(total) / (t.j.multiplicity * multiplicity_ratio(t))


def double_amplitude(t1, t2, n, eps, eps_out_bar, order="direct") -> complex:
    """Contracted two-atom amplitude with the transverse projector inserted.

    direct:  eps_out_bar . t2 . Delta . t1 . eps   (atom 1 scatters first)
    reverse: eps_out_bar . t1 . Delta . t2 . eps
    """
    delta = projector(n)
    if order == "direct":
        first, second = t1, t2
    elif order == "reverse":
        first, second = t2, t1
    else:
        raise InputDomainError(f"order must be 'direct' or 'reverse', got {order!r}")
    return complex(np.asarray(eps_out_bar) @ second @ delta @ first @ np.asarray(eps))


def _amplitude_matrix(table, n, eps, eps_out) -> np.ndarray:
    """Direct amplitudes M[p, q], p = sublevel pair of the second atom, q of the first."""
    npair = table.shape[0] ** 2
    flat = table.reshape(npair, 3, 3)
    u = flat @ np.asarray(eps, dtype=complex)  # t1 . eps
    u = u @ projector(n)  # Delta symmetric
    v = np.asarray(eps_out, dtype=complex).conj() @ flat  # eps_out_bar . t2
    return v @ u.T


def kernel_oracles(t: Transition, n, eps, eps_out) -> tuple[float, complex]:
    """Ladder and crossed polarization kernels by brute-force sublevel sums.

    Averages |t_dir|^2 and t_rev conj(t_dir) over all (m1, m1', m2, m2')
    with uniform weights, normalized by M_J^2. The reverse amplitude matrix
    is the transpose of the direct one: swapping the scattering order is
    the same as swapping which atom carries which sublevel pair.
    """
    mdir = _amplitude_matrix(tensor_table(t), n, eps, eps_out)
    norm = (t.j.multiplicity * multiplicity_ratio(t)) ** 2
    ladder = float(np.sum(np.abs(mdir) ** 2)) / norm
    crossed = complex(np.sum(mdir.T * mdir.conj())) / norm
    return ladder, crossed


@dataclass(frozen=True)
class Geometry:
    """Inter-atom direction and the incident / detected polarizations."""

    n: np.ndarray
    eps: np.ndarray
    eps_out: np.ndarray


def reciprocity_residual(t: Transition, geometry: Geometry, sublevels) -> float:
    """Violation of the quantum reciprocity relation for one sublevel tuple.

    ``sublevels`` is (m1, m1', m2, m2'). Compares the direct amplitude
    (k eps, {m} -> k' eps', {m'}) with the sign-weighted reverse-path
    amplitude of the reversed process (-k' conj(eps'), {-m'} -> -k conj(eps), {-m}).
    """
    m1, m1p, m2, m2p = (HalfInt.of(m) for m in sublevels)
    table = tensor_table(t)
    j = t.j
    tt = lambda a, b: table[_index(j, a), _index(j, b)]
    eps = np.asarray(geometry.eps, dtype=complex)
    eps_out = np.asarray(geometry.eps_out, dtype=complex)
    forward = double_amplitude(tt(m1, m1p), tt(m2, m2p), geometry.n, eps, eps_out.conj())
    # reversed process: incident pol conj(eps'), detected pol conj(eps) so its bar is eps;
    # atom 2 now scatters first, which is the reverse order for the pair (1, 2)
    backward = double_amplitude(
        tt(-m1p, -m1), tt(-m2p, -m2), geometry.n, eps_out.conj(), eps, order="reverse"
    )
    dm = (m1p.twice - m1.twice + m2p.twice - m2.twice) // 2
    sign = -1 if dm % 2 else 1
    return abs(forward - sign * backward)
