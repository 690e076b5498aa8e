"""Certified enclosures of the constants K_q, L_q and the exact ratio H_q.

K_q = prod_{j>=1} (1 - q^-j) and L_q = K_q^-2 * sum_{i>=0} q^(-3 i^2 / 4) are
irrational, so they are carried as mpmath intervals.  Truncation stops once
the enclosure is narrower than ``tolerance``; the neglected tails are bounded
by geometric majorants, so every inequality decided through :class:`Bound`
is rigorous rather than a floating-point coincidence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

from .errors import ParameterViolation

iv.dps = 50

DEFAULT_TOLERANCE = 1e-12


def exact_iv(x) -> iv.mpf:
    """Tight interval around a rational."""
    x = Fraction(x)
    return iv.mpf(x.numerator) / x.denominator


def _hull(lo: Fraction, hi: Fraction) -> iv.mpf:
    a, b = exact_iv(lo), exact_iv(hi)
    return iv.mpf([a.a, b.b])


def q_power(q: int, exponent) -> iv.mpf:
    e = Fraction(exponent)
    if e.denominator == 1:
        return exact_iv(Fraction(q) ** e.numerator)
    return iv.mpf(q) ** exact_iv(e)


def _k_enclosure(q: int, terms: int) -> iv.mpf:
    partial = Fraction(1)
    for j in range(1, terms + 1):
        partial *= 1 - Fraction(1, q**j)
    # prod_{j>J}(1 - q^-j) >= 1 - sum_{j>J} q^-j = 1 - q^-J / (q - 1)
    lower = partial * (1 - Fraction(1, (q - 1) * q**terms))
    return _hull(lower, partial)


def _sum_enclosure(q: int, terms: int) -> iv.mpf:
    s = iv.mpf(0)
    for i in range(terms + 1):
        s += q_power(q, Fraction(-3 * i * i, 4))
    # for i = J+1+k: i^2 >= (J+1)^2 + 2(J+1)k, so the tail is a geometric series
    first = q_power(q, Fraction(-3 * (terms + 1) ** 2, 4))
    ratio = q_power(q, Fraction(-3 * (terms + 1), 2))
    tail = first / (1 - ratio)
    return iv.mpf([s.a, (s + tail).b])


def _width(x: iv.mpf) -> float:
    return float(x.b - x.a)


@dataclass(frozen=True)
class Constants:
    q: int
    K: iv.mpf
    L: iv.mpf
    H: Fraction
    tolerance: float

    @property
    def K_float(self) -> float:
        return float(self.K.mid)

    @property
    def L_float(self) -> float:
        return float(self.L.mid)


def h_ratio(q: int) -> Fraction:
    """H_2 = 7/2 and H_q = (q-1)/(q-2) for q > 2."""
    if q < 2:
        raise ParameterViolation("q must be at least 2")
    return Fraction(7, 2) if q == 2 else Fraction(q - 1, q - 2)


@lru_cache(maxsize=None)
def constants(q: int, tolerance: float = DEFAULT_TOLERANCE) -> Constants:
    if q < 2:
        raise ParameterViolation("q must be at least 2")
    J = 4
    while True:
        K = _k_enclosure(q, J)
        S = _sum_enclosure(q, J)
        L = S / (K * K)
        if _width(K) < tolerance and _width(L) < tolerance:
            return Constants(q, K, L, h_ratio(q), tolerance)
        J += 4


_FACTORS = {
    "1": lambda c: iv.mpf(1),
    "K": lambda c: c.K,
    "K^2": lambda c: c.K * c.K,
    "K^-1": lambda c: 1 / c.K,
    "K^-2": lambda c: 1 / (c.K * c.K),
    "L": lambda c: c.L,
}


@dataclass(frozen=True)
class Bound:
    """A real number ``factor * q**exponent`` with a certified enclosure.

    ``factor`` names one of the constants ("K", "K^2", "K^-2", "L", ...).
    """

    q: int
    factor: str
    exponent: Fraction
    interval: iv.mpf

    @classmethod
    def make(cls, q: int, factor: str, exponent) -> "Bound":
        c = constants(q)
        exponent = Fraction(exponent)
        return cls(q, factor, exponent, _FACTORS[factor](c) * q_power(q, exponent))

    @property
    def value(self) -> float:
        return float(self.interval.mid)

    @property
    def lower(self) -> float:
        return float(self.interval.a)

    @property
    def upper(self) -> float:
        return float(self.interval.b)

    def certainly_above(self, x) -> bool:
        """True when ``x < self`` holds rigorously."""
        hi = x.interval.b if isinstance(x, Bound) else exact_iv(x).b
        return bool(hi < self.interval.a)

    def certainly_below(self, x) -> bool:
        """True when ``self < x`` holds rigorously."""
        lo = x.interval.a if isinstance(x, Bound) else exact_iv(x).a
        return bool(self.interval.b < lo)

    def __repr__(self) -> str:
        return f"Bound({self.factor} * {self.q}^({self.exponent}) ~ {self.value:.6g})"
