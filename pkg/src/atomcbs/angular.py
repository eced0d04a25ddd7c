"""Exact angular-momentum algebra.

Half-integer quantum numbers are stored as twice their value so that all
bookkeeping stays in integers. Clebsch-Gordan coefficients and 6J symbols
are evaluated with the Racah single-sum formulas in exact rational
arithmetic; only the final square root is taken in floating point, which
keeps full double precision even for J ~ 100 where the alternating sums
cancel catastrophically in floats.

Phase convention: Condon-Shortley (as in Edmonds).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from numbers import Rational

from .errors import InputDomainError

# HalfInt values are meant to stay small; anything beyond this is a bug upstream.
_TWICE_LIMIT = 2**62


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """An integer or half-integer, stored as ``twice = 2 * value``."""

    twice: int

    def __post_init__(self):
        if not isinstance(self.twice, int) or isinstance(self.twice, bool):
            raise TypeError(f"twice must be an int, got {type(self.twice).__name__}")
        if abs(self.twice) >= _TWICE_LIMIT:
            raise OverflowError(f"half-integer out of range: twice={self.twice}")

    @classmethod
    def of(cls, value) -> HalfInt:
        """Coerce an int, Fraction, float, string or HalfInt."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, bool):
            raise TypeError("bool is not an angular momentum")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, Rational):
            twice = Fraction(value) * 2
        elif isinstance(value, float):
            if not math.isfinite(value):
                raise InputDomainError(f"not a half-integer: {value!r}")
            twice = Fraction(value) * 2
        else:
            raise TypeError(f"cannot interpret {value!r} as a half-integer")
        if twice.denominator != 1:
            raise InputDomainError(f"not a half-integer: {value!r}")
        return cls(int(twice))

    @classmethod
    def parse(cls, text: str) -> HalfInt:
        """Parse ``"3"``, ``"3/2"``, ``"1.5"`` or ``"-1/2"``."""
        s = text.strip()
        try:
            if "/" in s:
                num, den = s.split("/")
                value = Fraction(int(num), int(den))
            else:
                value = Fraction(s)
        except (ValueError, ZeroDivisionError):
            raise InputDomainError(f"cannot parse {text!r} as a half-integer") from None
        return cls.of(value)

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    @property
    def multiplicity(self) -> int:
        """2j + 1."""
        return self.twice + 1

    def projections(self) -> list[HalfInt]:
        """All m = -j, -j+1, ..., j."""
        if self.twice < 0:
            raise InputDomainError(f"negative angular momentum {self}")
        return [HalfInt(t) for t in range(-self.twice, self.twice + 1, 2)]

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __lt__(self, other):
        return self.twice < HalfInt.of(other).twice

    def __eq__(self, other):
        try:
            return self.twice == HalfInt.of(other).twice
        except (TypeError, InputDomainError):
            return NotImplemented

    def __hash__(self):
        return hash(self.twice)

    def __float__(self):
        return self.twice / 2

    def __repr__(self):
        return f"HalfInt({self})"

    def __str__(self):
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"


def _twice(x) -> int:
    return HalfInt.of(x).twice


def _triad_twice(ta: int, tb: int, tc: int) -> bool:
    return (
        ta >= 0
        and tb >= 0
        and tc >= 0
        and (ta + tb + tc) % 2 == 0
        and abs(ta - tb) <= tc <= ta + tb
    )


def triangle_ok(a, b, c) -> bool:
    """True iff |a-b| <= c <= a+b and a+b+c is an integer."""
    return _triad_twice(_twice(a), _twice(b), _twice(c))


def _check_projection(tj: int, tm: int, name: str) -> None:
    if tj < 0:
        raise InputDomainError(f"{name}: negative angular momentum {tj}/2")
    if abs(tm) > tj or (tj - tm) % 2:
        raise InputDomainError(
            f"{name}: projection {HalfInt(tm)} invalid for j={HalfInt(tj)}"
        )


def _signed_sqrt(sign: int, square: Fraction) -> float:
    if sign == 0 or square == 0:
        return 0.0
    return math.copysign(math.sqrt(square), sign)


_fact = lru_cache(maxsize=None)(math.factorial)


def _delta_sq(ta: int, tb: int, tc: int) -> Fraction:
    """Triangle coefficient squared, arguments as twice-values."""
    return Fraction(
        _fact((ta + tb - tc) // 2) * _fact((ta - tb + tc) // 2) * _fact((-ta + tb + tc) // 2),
        _fact((ta + tb + tc) // 2 + 1),
    )


@lru_cache(maxsize=65536)
def _cg_exact(tj1, tj2, tm1, tm2, tj, tm) -> tuple[int, Fraction]:
    if tm1 + tm2 != tm or not _triad_twice(tj1, tj2, tj):
        return 0, Fraction(0)
    pre = (
        (tj + 1)
        * _delta_sq(tj1, tj2, tj)
        * _fact((tj + tm) // 2)
        * _fact((tj - tm) // 2)
        * _fact((tj1 - tm1) // 2)
        * _fact((tj1 + tm1) // 2)
        * _fact((tj2 - tm2) // 2)
        * _fact((tj2 + tm2) // 2)
    )
    # all of these are integers once the triad and projections are valid
    a = (tj1 + tj2 - tj) // 2
    b = (tj1 - tm1) // 2
    c = (tj2 + tm2) // 2
    d = (tj - tj2 + tm1) // 2
    e = (tj - tj1 - tm2) // 2
    total = Fraction(0)
    for k in range(max(0, -d, -e), min(a, b, c) + 1):
        term = Fraction(
            1,
            _fact(k) * _fact(a - k) * _fact(b - k) * _fact(c - k) * _fact(d + k) * _fact(e + k),
        )
        total += -term if k % 2 else term
    if total == 0:
        return 0, Fraction(0)
    return (1 if total > 0 else -1), pre * total * total


def clebsch_gordan(j1, j2, m1, m2, j, m) -> float:
    """Condon-Shortley coefficient <j1 m1; j2 m2 | j m>.

    Zero when m != m1 + m2 or the triad (j1, j2, j) is not allowed.
    Raises InputDomainError for projections inconsistent with their j.
    """
    tj1, tj2, tm1, tm2, tj, tm = map(_twice, (j1, j2, m1, m2, j, m))
    _check_projection(tj1, tm1, "j1")
    _check_projection(tj2, tm2, "j2")
    _check_projection(tj, tm, "j")
    sign, sq = _cg_exact(tj1, tj2, tm1, tm2, tj, tm)
    return _signed_sqrt(sign, sq)


@lru_cache(maxsize=65536)
def _sixj_exact(ta, tb, tc, td, te, tf) -> tuple[int, Fraction]:
    triads = ((ta, tb, tc), (ta, te, tf), (td, tb, tf), (td, te, tc))
    if not all(_triad_twice(*t) for t in triads):
        return 0, Fraction(0)
    pre = Fraction(1)
    for t in triads:
        pre *= _delta_sq(*t)
    sums = [sum(t) // 2 for t in triads]
    tops = [(ta + tb + td + te) // 2, (tb + tc + te + tf) // 2, (tc + ta + tf + td) // 2]
    total = Fraction(0)
    for t in range(max(sums), min(tops) + 1):
        den = 1
        for s in sums:
            den *= _fact(t - s)
        for u in tops:
            den *= _fact(u - t)
        term = Fraction(_fact(t + 1), den)
        total += -term if t % 2 else term
    if total == 0:
        return 0, Fraction(0)
    return (1 if total > 0 else -1), pre * total * total


def wigner_6j(a, b, c, d, e, f) -> float:
    """The 6J symbol {a b c; d e f}; zero when any triad is forbidden."""
    sign, sq = _sixj_exact(*map(_twice, (a, b, c, d, e, f)))
    return _signed_sqrt(sign, sq)


def wigner_6j_squared(a, b, c, d, e, f) -> Fraction:
    """Exact square of the 6J symbol as a rational number."""
    return _sixj_exact(*map(_twice, (a, b, c, d, e, f)))[1]
