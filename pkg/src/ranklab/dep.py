"""Decoder error probabilities: exact counts and closed-form bounds.

Exact values are ``Fraction``; bounds containing K_q or L_q are returned as
:class:`~ranklab.constants.Bound` objects carrying a certified interval.

Rank-metric side: a code in GF(q)^(m x n) with minimum rank distance d,
decoded by a bounded distance decoder of radius t.  Subspace side: a CDC in
E_r(q, n) with minimum injection distance d (minimum subspace distance 2d),
decoded in the subspace metric with radius d - 1 or in the injection metric
with radius t.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .codes import Cdc, RankCode, distance_distribution, g_r_histogram, mrd_weight_distribution, row_space_distribution
from .constants import Bound, h_ratio
from .errors import ExcludedRegime, ParameterViolation, PreconditionViolated
from .gf import Subspace
from .qcomb import alpha, gaussian, j_rank, j_sub, n_rank, n_sub


class _NoOutput(Fraction):
    """Zero probability because the conditioning class is empty."""

    def __new__(cls):
        return super().__new__(cls, 0)

    def __repr__(self) -> str:
        return "NO_OUTPUT"


NO_OUTPUT = _NoOutput()


def is_no_output(x) -> bool:
    return isinstance(x, _NoOutput)


def _radius(code, t: int | None) -> int:
    if t is not None:
        return t
    if code.t is None:
        raise ParameterViolation("a single-codeword code has no minimum distance; pass t explicitly")
    return code.t


def _t_of(d: int, t: int | None) -> int:
    t = (d - 1) // 2 if t is None else t
    if d not in (2 * t + 1, 2 * t + 2):
        raise ParameterViolation(f"need d in {{2t+1, 2t+2}}; got d={d}, t={t}")
    return t


# -- rank metric ----------------------------------------------------------------

@lru_cache(maxsize=None)
def _g_sum(target: Subspace, center: Subspace, m: int, t: int) -> int:
    hist = g_r_histogram(target, center, m)
    return sum(c for s, c in hist.items() if s <= t)


def dep_rank_exact(code: RankCode, C, U: Subspace, t: int | None = None) -> Fraction:
    """Pr(C, U, t) over the equal row space channel, from the row-space distribution of the code."""
    t = _radius(code, t)
    if U.n != code.n or U.field != code.field:
        raise ParameterViolation("error row space must live in GF(q)^n")
    u = U.dim
    if u > code.m:
        raise ParameterViolation(f"no {code.m}-row error has a row space of dimension {u}")
    dist = row_space_distribution(code, C)
    if code.d is not None and u < code.d - t:
        return Fraction(0)
    total = 0
    for W, count in dist.counts.items():
        if W.dim == 0:
            continue
        total += count * _g_sum(U, W, code.m, t)
    return Fraction(total, alpha(code.q, code.m, u))


def _rank_sum(q: int, m: int, n: int, d: int, u: int, t: int, weight) -> Fraction:
    if u < 0 or u > min(m, n):
        raise ParameterViolation(f"error rank u={u} out of range")
    total = 0
    for w in range(d, min(m, n) + 1):
        a = weight(w)
        if a:
            total += a * sum(j_rank(q, m, n, u, s, w) for s in range(t + 1))
    return Fraction(total, n_rank(q, m, n, u))


def dep_rank_bound(q: int, m: int, n: int, d: int, u: int, t: int | None = None) -> Fraction:
    """Upper bound valid for any code: A_W(C) replaced by alpha(m, w-d+1)."""
    t = _t_of(d, t)
    return _rank_sum(q, m, n, d, u, t, lambda w: gaussian(q, n, w) * alpha(q, m, w - d + 1))


def dep_rank_asymptotic(q: int, m: int, n: int, d: int) -> Bound:
    """K_q^-2 q^(-t(m-n+t)), with an extra q^-m when d is even."""
    if n > m:
        raise ParameterViolation(f"need n <= m, got m={m}, n={n}")
    t = _t_of(d, None)
    e = -t * (m - n + t) - (m if d == 2 * t + 2 else 0)
    return Bound.make(q, "K^-2", e)


def dep_rank_mrd(q: int, m: int, n: int, d: int, u: int, t: int | None = None) -> Fraction:
    """Exact DEP of a linear MRD code (n <= m) for an error of rank u."""
    if n > m:
        raise ParameterViolation(f"need n <= m, got m={m}, n={n}")
    if not 1 <= d <= n:
        raise ParameterViolation(f"need 1 <= d <= n, got d={d}")
    t = (d - 1) // 2 if t is None else t
    return _rank_sum(q, m, n, d, u, t, lambda w: mrd_weight_distribution(q, m, n, d, w))


def dep_rank_symmetric(code: RankCode, C, u: int, t: int | None = None) -> Fraction:
    """Pr(C, u, t) when all errors of rank u are equiprobable."""
    t = _radius(code, t)
    dist = distance_distribution(code, C)
    d = code.d if code.d is not None else min(code.m, code.n) + 1
    return _rank_sum(code.q, code.m, code.n, d, u, t, lambda w: dist[w])


def dep_rank_dmt(code: RankCode, C, t: int | None = None) -> Fraction:
    """Pr(C, d-t, t): the smallest error rank that can cause a decoder error."""
    t = _radius(code, t)
    d = code.d
    q, m, n = code.q, code.m, code.n
    a_d = distance_distribution(code, C)[d]
    return Fraction(q ** (t * (d - t)) * gaussian(q, d, t) * a_d, gaussian(q, n, d - t) * alpha(q, m, d - t))


def kk_mrd_dmt_lower(q: int, m: int, n: int, d: int) -> Bound:
    """Strict lower bound K_q q^(-t(m-n+t)) (minus m more when d is even) on the MRD value at u = d-t."""
    if n > m:
        raise ParameterViolation(f"need n <= m, got m={m}, n={n}")
    t = _t_of(d, None)
    e = -t * (m - n + t) - (m if d == 2 * t + 2 else 0)
    return Bound.make(q, "K", e)


@dataclass(frozen=True)
class DominanceResult:
    lhs: Fraction
    rhs: Fraction
    holds: bool

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.holds))


def _dominates(lhs: Fraction, rhs: Fraction) -> bool:
    # both sides vanish below the smallest harmful error; the strict claim is vacuous there
    return lhs < rhs or (lhs == 0 and rhs == 0)


def mrd_dominance_check(code: RankCode, C, U: Subspace, t: int | None = None) -> DominanceResult:
    """Compare Pr(C, U, t) with H_q times the MRD value for the same (m, n, d)."""
    q, m, n, d = code.q, code.m, code.n, code.d
    if d is None:
        raise ParameterViolation("code needs at least two codewords")
    if n > m:
        raise ParameterViolation(f"need n <= m, got m={m}, n={n}; transpose the code")
    if q == 2 and n == m and d == m - 1:
        raise ExcludedRegime("q = 2, n = m and d = m - 1 is the excluded case")
    t = (d - 1) // 2 if t is None else t
    lhs = dep_rank_exact(code, C, U, t)
    rhs = h_ratio(q) * dep_rank_mrd(q, m, n, d, U.dim, t)
    return DominanceResult(lhs, rhs, _dominates(lhs, rhs))


# -- constant-dimension codes, subspace decoder ----------------------------------

def _subspace_sum(q: int, n: int, r: int, d: int, u: int, v: int, radius: int, weight) -> Fraction:
    total = 0
    for w in range(d, r + 1):
        a = weight(w)
        if a:
            total += a * sum(j_sub(q, n, u, s, 2 * w, r, r, v) for s in range(radius + 1))
    return total


def _ps(cdc: Cdc, C: Subspace, u: int, v: int, radius: int) -> Fraction:
    q, n, r = cdc.q, cdc.n, cdc.r
    N = n_sub(q, n, r, v, u)
    if N == 0:
        return NO_OUTPUT
    if radius < 0 or abs(v - r) > radius:
        return Fraction(0)
    dist = distance_distribution(cdc, C)
    d = cdc.d if cdc.d is not None else r + 1
    return Fraction(_subspace_sum(q, n, r, d, u, v, radius, lambda w: dist[w]), N)


def dep_cdc_subspace_exact(cdc: Cdc, C: Subspace, u: int, v: int, radius: int | None = None) -> Fraction:
    """P_S(C, u, v, d-1): output of dimension v at subspace distance u from C.

    Returns NO_OUTPUT when no such output exists.
    """
    cdc.require(C)
    if radius is None:
        if cdc.d is None:
            raise ParameterViolation("a single-codeword code has no minimum distance; pass radius")
        radius = cdc.d - 1
        if n_sub(cdc.q, cdc.n, cdc.r, v, u) and (u <= cdc.d or abs(v - cdc.r) > cdc.d - 1):
            return Fraction(0)
    return _ps(cdc, C, u, v, radius)


def _require_half(n: int, r: int) -> None:
    if not 0 <= r <= n - r:
        raise ParameterViolation(f"need r <= n - r, got r={r}, n={n}")


def dep_cdc_subspace_lifting_bound(q: int, n: int, r: int, d: int, u: int, v: int) -> Fraction:
    """Upper bound for any lifted code: A_w replaced by [r w] alpha(n-r, w-d+1)."""
    _require_half(n, r)
    if d < 1:
        raise ParameterViolation("need d >= 1")
    N = n_sub(q, n, r, v, u)
    if N == 0:
        return NO_OUTPUT
    total = _subspace_sum(q, n, r, d, u, v, d - 1, lambda w: gaussian(q, r, w) * alpha(q, n - r, w - d + 1))
    return Fraction(total, N)


def subspace_exponent(n: int, r: int, d: int, v: int) -> Fraction:
    """log_q exponent of the L_q bound on P_S for lifted codes."""
    if abs(v - r) > d - 1:
        raise ParameterViolation(f"need |v - r| <= d - 1, got v={v}")
    a = Fraction(d - 1 + v - r, 2)
    b = Fraction(d - 1 + r - v, 2)
    e = -a * (n - 2 * r + b)
    if (d - 1 + r - v) % 2:
        e -= Fraction(1, 2) * (n - d + 1 + Fraction(1, 2))
    return e


def dep_cdc_subspace_asymptotic(q: int, n: int, r: int, d: int, v: int) -> Bound:
    _require_half(n, r)
    return Bound.make(q, "L", subspace_exponent(n, r, d, v))


def _dmt_shape(d: int, r: int, v: int) -> tuple[int, int]:
    i = 1 if (d - 1 + v - r) % 2 == 0 else 2
    tau2 = d - i + v - r
    if abs(v - r) > d - 1 or tau2 < 0 or tau2 % 2:
        raise PreconditionViolated(f"no smallest-error regime for v={v} (r={r}, d={d})")
    return i, tau2 // 2


def dep_cdc_subspace_dmt(cdc: Cdc, C: Subspace, v: int) -> Fraction:
    """P_S(C, d+i, v, d-1) in closed form; i is 1 or 2 so that d+i+v-r is even."""
    d, r, n, q = cdc.d, cdc.r, cdc.n, cdc.q
    if d is None:
        raise ParameterViolation("code needs at least two codewords")
    i, tau = _dmt_shape(d, r, v)
    den = gaussian(q, r, d - tau) * gaussian(q, n - r, tau + i)
    if den == 0:
        raise PreconditionViolated(f"no output of dimension {v} at subspace distance {d + i}")
    a_d = distance_distribution(cdc, C)[d]
    num = gaussian(q, d, tau) * gaussian(q, d, tau + i) * a_d
    return Fraction(num, den * q ** ((d - tau) * (tau + i)))


def kk_subspace_dmt_lower(q: int, n: int, r: int, d: int, v: int) -> Bound:
    """Strict lower bound K_q^2 q^e on the KK value at u = d+i; e matches the L_q bound's exponent."""
    _require_half(n, r)
    _dmt_shape(d, r, v)
    return Bound.make(q, "K^2", subspace_exponent(n, r, d, v))


# -- constant-dimension codes, injection decoder -------------------------------

def dep_cdc_injection_exact(cdc: Cdc, C: Subspace, mu: int, v: int, t: int | None = None) -> Fraction:
    """Pi(C, mu, v, t), evaluated as P_S(C, 2mu - |v-r|, v, 2t - |v-r|)."""
    cdc.require(C)
    t = _radius(cdc, t)
    delta = abs(v - cdc.r)
    u = 2 * mu - delta
    if u < 0 or n_sub(cdc.q, cdc.n, cdc.r, v, u) == 0:
        return NO_OUTPUT
    if delta > t:
        return Fraction(0)
    return _ps(cdc, C, u, v, 2 * t - delta)


def injection_exponent(n: int, r: int, d: int, t: int, v: int) -> Fraction:
    """log_q exponent of the L_q bound on Pi for lifted codes."""
    if d not in (2 * t + 1, 2 * t + 2):
        raise ParameterViolation(f"need d in {{2t+1, 2t+2}}; got d={d}, t={t}")
    if abs(v - r) > t:
        raise ParameterViolation(f"need |v - r| <= t, got v={v}")
    h = Fraction(v - r, 2)
    a = Fraction(abs(v - r), 2)
    e = -(t + h) * (n - 2 * r + t - h) - a * (n - 2 * t + a)
    if d == 2 * t + 2:
        e -= n - r
    return e


def dep_cdc_injection_bound(q: int, n: int, r: int, d: int, t: int, v: int) -> Bound:
    _require_half(n, r)
    return Bound.make(q, "L", injection_exponent(n, r, d, t, v))


def kk_reference_dep(q: int, n: int, r: int, d: int, u: int, v: int) -> Fraction:
    """P_S,KK(u, v, d-1): the subspace-decoder DEP of a lifted MRD code of r x (n-r) matrices."""
    _require_half(n, r)
    N = n_sub(q, n, r, v, u)
    if N == 0:
        return NO_OUTPUT
    total = _subspace_sum(q, n, r, d, u, v, d - 1, lambda w: mrd_weight_distribution(q, n - r, r, d, w))
    return Fraction(total, N)


def kk_dominance_check(cdc: Cdc, C: Subspace, u: int, v: int) -> DominanceResult:
    """Compare a lifted code's subspace-decoder DEP with H_q times the KK value."""
    if cdc.origin is None:
        raise ParameterViolation("dominance check needs a lifted code")
    q, n, r, d = cdc.q, cdc.n, cdc.r, cdc.d
    if d is None:
        raise ParameterViolation("code needs at least two codewords")
    _require_half(n, r)
    if q == 2 and r == n - r and d == n - r - 1:
        raise ExcludedRegime("q = 2, r = n - r and d = n - r - 1 is the excluded case")
    lhs = Fraction(dep_cdc_subspace_exact(cdc, C, u, v))
    rhs = h_ratio(q) * Fraction(kk_reference_dep(q, n, r, d, u, v))
    return DominanceResult(lhs, rhs, _dominates(lhs, rhs))


# -- figure data ----------------------------------------------------------------

@dataclass(frozen=True)
class ExponentRow:
    v: int
    subspace: Fraction | None
    injection: Fraction | None


def figure1_exponents(n: int, r: int, d: int, t: int) -> list[ExponentRow]:
    """log_q exponents of both lifted-code bounds for every admissible output dimension v."""
    rows = []
    for v in range(r - d + 1, r + d):
        sub = subspace_exponent(n, r, d, v)
        inj = injection_exponent(n, r, d, t, v) if abs(v - r) <= t else None
        rows.append(ExponentRow(v, sub, inj))
    return rows
