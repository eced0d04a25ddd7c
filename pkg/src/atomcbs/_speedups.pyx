# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled crossed-integrand quadrature; same contract as ``_pyquad``."""

from libc.math cimport sqrt, cos, fabs
from libc.stdlib cimport malloc, free, qsort

cdef double XGK[8]
cdef double WGK[8]
cdef double WG[4]
XGK[:] = [0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
          0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
          0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
          0.207784955007898467600689403773245, 0.0]
WGK[:] = [0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
          0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
          0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
          0.204432940075298892414161999234649, 0.209482141084727828012999174891714]
WG[:] = [0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
         0.381830050505118944950369775488975, 0.417959183673469387755102040816327]


cdef struct Params:
    int code
    double w1, w2, w3, w4
    double mu, c2, c4


cdef struct Panel:
    double a, b, value, err


cdef inline double integrand(const Params* p, double x) nogil:
    cdef double xx = x * x
    cdef double root = sqrt((1.0 + x) * (1.0 + x) + p.mu * p.mu * (1.0 - xx))
    cdef double big_x, c, s, u
    if p.code == 4:
        return 1.0 / root
    s = root + 1.0 + x
    big_x = p.mu * p.mu * (1.0 - xx) / (s * s)
    u = (1.0 - xx) * (1.0 - xx)
    if p.code == 0:
        c = p.w1 * 0.25 * u + p.w2 * 2.0 * xx + p.w3 * (1.0 + xx) + p.w4 * 2.0
    elif p.code == 1:
        c = p.w1 * 0.25 * (1.0 + xx) * (1.0 + xx)
    elif p.code == 2:
        c = (p.w1 * (0.25 * (1.0 + xx) * (1.0 + xx)
                     + u / 8.0 * (1.0 + big_x * big_x * p.c4)
                     + (1.0 - xx * xx) / 2.0 * big_x * p.c2)
             + p.w3 * (1.0 + xx + (1.0 - xx) * big_x * p.c2)
             + p.w4 * 2.0)
    else:
        c = p.w1 * u / 8.0 * (1.0 - big_x * big_x * p.c4) + p.w2 * 2.0 * xx
    return c / root


cdef void gk15(const Params* p, Panel* panel) nogil:
    cdef double half = 0.5 * (panel.b - panel.a)
    cdef double mid = 0.5 * (panel.a + panel.b)
    cdef double fc = integrand(p, mid)
    cdef double kron = WGK[7] * fc
    cdef double gauss = WG[3] * fc
    cdef double f1, f2
    cdef int j
    for j in range(7):
        f1 = integrand(p, mid - half * XGK[j])
        f2 = integrand(p, mid + half * XGK[j])
        kron += WGK[j] * (f1 + f2)
        if j % 2 == 1:
            gauss += WG[j // 2] * (f1 + f2)
    panel.value = half * kron
    panel.err = fabs(half * (kron - gauss))


cdef int by_left(const void* x, const void* y) noexcept nogil:
    cdef double a = (<Panel*>x).a
    cdef double b = (<Panel*>y).a
    return (a > b) - (a < b)


def crossed_integrand(int code, weights, double x, double mu, double phi):
    cdef Params p
    p.code = code
    p.w1, p.w2, p.w3, p.w4 = weights
    p.mu = mu
    p.c2 = cos(2.0 * phi)
    p.c4 = cos(4.0 * phi)
    return integrand(&p, x)


def adaptive_integral(int code, weights, double mu, double phi,
                      double epsabs=1e-10, double epsrel=1e-12, int max_panels=2000):
    """Globally adaptive Gauss-Kronrod (7/15) on [0, 1]; see ``_pyquad``."""
    if code < 0 or code > 4:
        raise ValueError(f"unknown kernel code {code}")
    cdef Params p
    p.code = code
    p.w1, p.w2, p.w3, p.w4 = weights
    p.mu = mu
    p.c2 = cos(2.0 * phi)
    p.c4 = cos(4.0 * phi)
    cdef Panel* panels = <Panel*>malloc(max_panels * sizeof(Panel))
    if panels == NULL:
        raise MemoryError()
    cdef int n = 1, i, worst
    cdef double total, total_err, m, value, comp, y, t
    try:
        with nogil:
            panels[0].a = 0.0
            panels[0].b = 1.0
            gk15(&p, &panels[0])
            while True:
                total = 0.0
                total_err = 0.0
                worst = 0
                for i in range(n):
                    total += panels[i].value
                    total_err += panels[i].err
                    if (panels[i].err > panels[worst].err or
                            (panels[i].err == panels[worst].err and panels[i].a < panels[worst].a)):
                        worst = i
                if total_err <= max(epsabs, epsrel * fabs(total)) or n >= max_panels:
                    break
                m = 0.5 * (panels[worst].a + panels[worst].b)
                panels[n].a = m
                panels[n].b = panels[worst].b
                panels[worst].b = m
                gk15(&p, &panels[worst])
                gk15(&p, &panels[n])
                n += 1
            qsort(panels, n, sizeof(Panel), by_left)
            # Neumaier summation in left-to-right order
            value = 0.0
            comp = 0.0
            total_err = 0.0
            for i in range(n):
                y = panels[i].value
                t = value + y
                if fabs(value) >= fabs(y):
                    comp += (value - t) + y
                else:
                    comp += (y - t) + value
                value = t
                total_err += panels[i].err
            value += comp
        converged = total_err <= max(epsabs, epsrel * fabs(value))
        return value, total_err, n, converged
    finally:
        free(panels)
