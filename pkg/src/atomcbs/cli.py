"""Command-line interface: coefficient tables, J sweeps, cone profiles, self-checks."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
import tempfile
import time

import numpy as np

from . import bistatic, tensors
from .angular import HalfInt
from .errors import DivisionDomainError, InputDomainError, NumericalFailureError
from .kernels import ALL_CHANNELS, Channel, channel_polarizations, gamma_single, ladder_kernel, crossed_kernel
from .transition import (
    Transition,
    mean_free_path,
    multiplicity_ratio,
    s_coeff,
    total_cross_section,
    w_coeffs,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VERIFY = 3

JMAX_LIMIT = 25


class _Usage(Exception):
    """Input error reported with exit code 2."""


def _halfint(text: str) -> HalfInt:
    try:
        return HalfInt.parse(text)
    except (ValueError, OverflowError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _jsonable(value):
    if isinstance(value, HalfInt):
        return str(value)
    return value


def render(columns, rows, fmt: str) -> str:
    buf = io.StringIO()
    if fmt == "json":
        for row in rows:
            record = {k: _jsonable(v) for k, v in zip(columns, row)}
            buf.write(json.dumps(record, allow_nan=False) + "\n")
        return buf.getvalue()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".atomcbs-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _transition(args) -> Transition:
    return Transition(args.j, args.je)


def _channel(args) -> Channel:
    phi = args.phi
    if getattr(args, "phi_deg", None) is not None:
        phi = math.radians(args.phi_deg)
    return Channel.parse(args.channel, phi)


# --- subcommands -------------------------------------------------------------


def cmd_coeffs(args):
    t = _transition(args)
    w = w_coeffs(t)
    columns = ["j", "je", "s0", "s1", "s2", "w1", "w2", "w3", "m_j"]
    row = [t.j, t.je, *(s_coeff(t, k) for k in range(3)), *w, multiplicity_ratio(t)]
    return columns, [row]


_OFFSET = {"plus": 2, "zero": 0, "minus": -2}


def sweep_transitions(jmax: HalfInt, kind: str):
    for twice in range(0, jmax.twice + 1):
        je_twice = twice + _OFFSET[kind]
        try:
            yield Transition(HalfInt(twice), HalfInt(je_twice))
        except InputDomainError:
            continue


def _quantity(t: Transition, c: Channel, quantity: str) -> float:
    w = w_coeffs(t)
    if quantity == "single":
        return gamma_single(w, c)
    if quantity == "contrast":
        return bistatic.contrast(w, c)
    return bistatic.enhancement(w, c, 0.0)


def cmd_sweep(args):
    if args.jmax.twice < 0 or args.jmax > HalfInt.of(JMAX_LIMIT):
        raise _Usage(f"--jmax must lie in [0, {JMAX_LIMIT}]")
    c = _channel(args)
    rows = []
    for t in sweep_transitions(args.jmax, args.type):
        rows.append([t.j, t.je, c.name, args.quantity, _quantity(t, c, args.quantity)])
    return ["j", "je", "channel", "quantity", "value"], rows


def cmd_cone(args):
    t = _transition(args)
    c = _channel(args)
    profile = bistatic.cone_profile(t, c, args.mu_max, args.points)
    return ["mu", "gamma_c2", "alpha"], [list(r) for r in profile.rows()]


def cmd_medium(args):
    t = _transition(args)
    if not args.density > 0 or not args.wavenumber > 0:
        raise InputDomainError("density and wavenumber must be positive")
    sigma = total_cross_section(t, args.detuning, args.wavenumber)
    ell = mean_free_path(sigma, args.density)
    k_ell = args.wavenumber * ell
    if k_ell <= 10:
        print(
            f"warning: k*ell = {k_ell:.4g} <= 10, the weak-scattering description is unreliable",
            file=sys.stderr,
        )
    return ["j", "je", "sigma_tot", "mfp", "k_ell"], [[t.j, t.je, sigma, ell, k_ell]]


# --- verify ------------------------------------------------------------------


def _transitions_upto(twice_max: int):
    for tj in range(0, twice_max + 1):
        for dt in (-2, 0, 2):
            try:
                yield Transition(HalfInt(tj), HalfInt(tj + dt))
            except InputDomainError:
                pass


def _random_vectors(rng, k):
    return [rng.normal(size=3) + 1j * rng.normal(size=3) for _ in range(k)]


def _random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _suite_trace(level, rng):
    twice = 8 if level == "full" else 3
    samples = 200 if level == "full" else 10
    worst = 0.0
    for t in _transitions_upto(twice):
        w = w_coeffs(t)
        for _ in range(samples):
            x = _random_vectors(rng, 4)
            worst = max(worst, abs(tensors.vertex_trace_oracle(t, *x) - tensors.vertex_trace_closed(w, *x)))
    return worst, 1e-12


def _suite_kernels(level, rng):
    cases = list(_transitions_upto(8 if level == "full" else 3))
    geometries = 100 if level == "full" else 5
    worst = 0.0
    for t in cases:
        w = w_coeffs(t)
        for c in ALL_CHANNELS:
            for _ in range(geometries):
                c_phi = Channel(c.label, float(rng.uniform(0, math.pi)))
                eps, eps_out = channel_polarizations(c_phi)
                n = _random_unit(rng)
                ladder, crossed = tensors.kernel_oracles(t, n, eps, eps_out)
                worst = max(
                    worst,
                    abs(ladder - ladder_kernel(w, n, eps, eps_out)),
                    abs(crossed.real - crossed_kernel(w, n, eps, eps_out)),
                    abs(crossed.imag),
                )
    return worst, 1e-12


def _suite_ladder(level, rng):
    twice = 8 if level == "full" else 3
    worst = 0.0
    for t in _transitions_upto(twice):
        w = w_coeffs(t)
        for c in _channels(level):
            worst = max(worst, abs(bistatic.gamma_ladder(w, c) - bistatic.gamma_ladder_cubature(w, c)))
    return worst, 1e-8


def _channels(level):
    phis = (0.0, math.pi / 8, math.pi / 4, math.pi / 2) if level == "full" else (0.0, math.pi / 8)
    out = [ch for ch in ALL_CHANNELS if ch.helicity]
    for label in (ALL_CHANNELS[2].label, ALL_CHANNELS[3].label):
        out.extend(Channel(label, p) for p in phis)
    return out


def _suite_crossed(level, rng):
    twice = 8 if level == "full" else 2
    mus = (0.0, 0.3, 0.7, 2.0, 5.0, 10.0) if level == "full" else (0.0, 0.7, 5.0)
    worst = 0.0
    for t in _transitions_upto(twice):
        w = w_coeffs(t)
        for c in _channels(level):
            for mu in mus:
                ref = bistatic.gamma_crossed_quadrature(w, c, mu)
                got = bistatic.gamma_crossed(w, c, mu)
                worst = max(worst, abs(got - ref) / max(abs(ref), 1e-300))
    return worst, 1e-6


def _suite_reciprocity(level, rng):
    t = Transition(1, 2) if level == "full" else Transition(HalfInt(1), HalfInt(3))
    geometries = 100 if level == "full" else 3
    ms = t.j.projections()
    worst = 0.0
    for _ in range(geometries):
        c = ALL_CHANNELS[int(rng.integers(4))]
        c = Channel(c.label, float(rng.uniform(0, math.pi)))
        eps, eps_out = channel_polarizations(c)
        g = tensors.Geometry(_random_unit(rng), eps, eps_out)
        for subs in itertools.product(ms, repeat=4):
            worst = max(worst, tensors.reciprocity_residual(t, g, subs))
    return worst, 1e-12


def _suite_f(level, rng):
    grid = np.linspace(0.0, 100.0, 2001 if level == "full" else 101)
    extra = [1.0, 1 - 1e-3, 1 + 1e-3, 1 - 1e-7, 1 + 1e-7]
    worst = 0.0
    for mu in itertools.chain(grid, extra):
        worst = max(worst, abs(bistatic.F_mu(float(mu)) - bistatic.F_mu_quadrature(float(mu))))
    return worst, 1e-9


SUITES = {
    "trace": _suite_trace,
    "kernels": _suite_kernels,
    "ladder": _suite_ladder,
    "crossed": _suite_crossed,
    "reciprocity": _suite_reciprocity,
    "f_mu": _suite_f,
}


def run_verify(level: str, seed: int = 20240607):
    """Run every suite; returns rows (suite, max_deviation, tolerance, status, seconds)."""
    rows = []
    for name, suite in SUITES.items():
        rng = np.random.default_rng(seed)
        start = time.perf_counter()
        try:
            worst, tol = suite(level, rng)
            ok = bool(worst <= tol)
        except NumericalFailureError:
            worst, tol, ok = math.inf, 0.0, False
        rows.append([name, float(worst), tol, "pass" if ok else "FAIL", round(time.perf_counter() - start, 3)])
    return rows


def cmd_verify(args):
    rows = run_verify(args.level)
    columns = ["suite", "max_deviation", "tolerance", "status", "seconds"]
    failed = [r[0] for r in rows if r[3] != "pass"]
    return columns, rows, failed


# --- entry point -------------------------------------------------------------


def _add_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", metavar="FILE", help="write atomically to FILE instead of stdout")


def _add_transition(p):
    p.add_argument("--j", type=_halfint, required=True, help='ground level, e.g. "3" or "3/2"')
    p.add_argument("--je", type=_halfint, required=True, help="excited level")


def _add_channel(p, default="hperp"):
    p.add_argument("--channel", default=default, help="hpar, hperp, lpar or lperp")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--phi", type=float, default=0.0, help="linear-channel angle in radians")
    group.add_argument("--phi-deg", type=float, default=None, help="same angle in degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atomcbs", description="Coherent backscattering from atoms with degenerate dipole lines."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="s_K, w_i and M_J for one transition")
    _add_transition(p)
    _add_output(p)

    p = sub.add_parser("sweep", help="a quantity as a function of J")
    p.add_argument("--jmax", type=_halfint, required=True)
    p.add_argument("--type", choices=tuple(_OFFSET), default="plus")
    p.add_argument("--quantity", choices=("single", "contrast", "alpha"), default="alpha")
    _add_channel(p)
    _add_output(p)

    p = sub.add_parser("cone", help="crossed coefficient and enhancement versus mu")
    _add_transition(p)
    _add_channel(p)
    p.add_argument("--mu-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=101)
    _add_output(p)

    p = sub.add_parser("verify", help="run the oracle cross-checks")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    _add_output(p)

    p = sub.add_parser("medium", help="cross-section and mean free path")
    _add_transition(p)
    p.add_argument("--detuning", type=float, default=0.0, help="in units of the linewidth")
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--wavenumber", type=float, required=True)
    _add_output(p)
    return parser


COMMANDS = {
    "coeffs": cmd_coeffs,
    "sweep": cmd_sweep,
    "cone": cmd_cone,
    "medium": cmd_medium,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            columns, rows, failed = cmd_verify(args)
            write_output(render(columns, rows, args.format), args.output)
            if failed:
                print("verification failed: " + ", ".join(failed), file=sys.stderr)
                return EXIT_VERIFY
            return EXIT_OK
        columns, rows = COMMANDS[args.command](args)
        write_output(render(columns, rows, args.format), args.output)
    except (InputDomainError, DivisionDomainError, _Usage) as exc:
        print(f"atomcbs: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailureError as exc:
        print(f"atomcbs: numerical failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
