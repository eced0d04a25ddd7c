"""Pure-Python crossed-integrand quadrature (fallback for the compiled core).

Kernel codes: 0 hpar, 1 hperp, 2 lpar, 3 lperp, 4 scalar (integrand 1/R,
the scalar-wave profile F). ``weights`` are the four transition weights
((w1+w3)^2, w1 w3, (w1+w3) w2, w2^2) multiplying c_1..c_4.
"""

import heapq
import math

import numpy as np

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1]
XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-XGK[:-1], XGK[::-1]])
KRONROD = np.concatenate([WGK[:-1], WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes (counting from 0 at -XGK[0])
GAUSS = np.zeros(15)
GAUSS[1::2] = np.concatenate([WG[:-1], WG[::-1]])


def crossed_integrand(code, weights, x, mu, phi):
    """Integrand of the crossed coefficient before the 9/8 prefactor."""
    x = np.asarray(x, dtype=float)
    xx = x * x
    root = np.sqrt((1.0 + x) ** 2 + mu * mu * (1.0 - xx))
    if code == 4:
        return 1.0 / root
    w1, w2, w3, w4 = weights
    # anisotropy parameter, written without the 0/0 at x = 1
    big_x = mu * mu * (1.0 - xx) / (root + 1.0 + x) ** 2
    if code == 0:
        c = w1 * 0.25 * (1 - xx) ** 2 + w2 * 2 * xx + w3 * (1 + xx) + w4 * 2.0
    elif code == 1:
        c = w1 * 0.25 * (1 + xx) ** 2
    elif code == 2:
        c2, c4 = math.cos(2 * phi), math.cos(4 * phi)
        a_par = (1 - xx) ** 2 / 8 * (1 + big_x * big_x * c4) + (1 - xx * xx) / 2 * big_x * c2
        b_par = (1 - xx) * big_x * c2
        c = w1 * (0.25 * (1 + xx) ** 2 + a_par) + w3 * (1 + xx + b_par) + w4 * 2.0
    elif code == 3:
        a_perp = (1 - xx) ** 2 / 8 * (1 - big_x * big_x * math.cos(4 * phi))
        c = w1 * a_perp + w2 * 2 * xx
    else:
        raise ValueError(f"unknown kernel code {code}")
    return c / root


def _panel(code, weights, mu, phi, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    f = crossed_integrand(code, weights, mid + half * NODES, mu, phi)
    kron = half * float(f @ KRONROD)
    gauss = half * float(f @ GAUSS)
    return kron, abs(kron - gauss)


def adaptive_integral(code, weights, mu, phi, epsabs=1e-10, epsrel=1e-12, max_panels=2000):
    """Globally adaptive Gauss-Kronrod (7/15) on [0, 1].

    Always splits the panel with the largest error estimate; ties go to the
    leftmost panel. Returns (value, error, panels, converged); the value is
    summed over panels in left-to-right order so it is bit-reproducible.
    """
    value, err = _panel(code, weights, mu, phi, 0.0, 1.0)
    heap = [(-err, 0.0, 1.0, value)]
    total_err = err
    while total_err > max(epsabs, epsrel * abs(sum(p[3] for p in heap))):
        if len(heap) >= max_panels:
            break
        neg_err, a, b, _ = heapq.heappop(heap)
        total_err += neg_err
        m = 0.5 * (a + b)
        for lo, hi in ((a, m), (m, b)):
            v, e = _panel(code, weights, mu, phi, lo, hi)
            heapq.heappush(heap, (-e, lo, hi, v))
            total_err += e
    panels = sorted(heap, key=lambda p: p[1])
    value = math.fsum(p[3] for p in panels)
    total_err = math.fsum(-p[0] for p in panels)
    converged = total_err <= max(epsabs, epsrel * abs(value))
    return value, total_err, len(panels), converged
