"""Time the compiled and pure-Python quadrature cores on the same workload.

    python3 benchmarks/bench_backends.py [--repeat N]

The workload is a cone sweep: every channel, a mu grid from 0 to 100, all
twice-J <= 4 transitions, evaluated by adaptive quadrature.
"""

import argparse
import math
import time

import numpy as np

from atomcbs import _backend, _pyquad
from atomcbs.bistatic import crossed_weights, gamma_crossed_quadrature
from atomcbs.kernels import Channel, Label
from atomcbs.transition import Transition, w_coeffs


def workload():
    transitions = [Transition(0, 1), Transition("1/2", "3/2"), Transition(1, 1), Transition(2, 3), Transition(2, 1)]
    mus = np.linspace(0.0, 100.0, 41)
    for t in transitions:
        w = w_coeffs(t)
        for label in Label:
            for mu in mus:
                yield w, Channel(label, math.pi / 8), float(mu)


def run(core, cases):
    start = time.perf_counter()
    values = [gamma_crossed_quadrature(w, c, mu, backend=core) for w, c, mu in cases]
    return time.perf_counter() - start, values


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    cases = list(workload())
    cores = {"python": _pyquad}
    if _backend.compiled is not None:
        cores["compiled"] = _backend.compiled
    else:
        print("compiled extension not built; timing the Python core only")
    best, results = {}, {}
    for name, core in cores.items():
        times = []
        for _ in range(args.repeat):
            elapsed, values = run(core, cases)
            times.append(elapsed)
        best[name], results[name] = min(times), values
        print(f"{name:>9}: {best[name] * 1e3:8.1f} ms for {len(cases)} integrals "
              f"({best[name] / len(cases) * 1e6:.0f} us each)")
    if len(best) == 2:
        diff = max(abs(a - b) / max(abs(b), 1e-300) for a, b in zip(results["python"], results["compiled"]))
        print(f"  speedup: {best['python'] / best['compiled']:.1f}x, max relative difference {diff:.1e}")
    # single-integrand throughput
    x = np.linspace(0, 1, 100_001)
    weights = crossed_weights(w_coeffs(Transition(3, 4)))
    start = time.perf_counter()
    _pyquad.crossed_integrand(2, weights, x, 3.0, 0.4)
    print(f"vectorized Python integrand: {(time.perf_counter() - start) * 1e3:.1f} ms per 1e5 points")


if __name__ == "__main__":
    main()
