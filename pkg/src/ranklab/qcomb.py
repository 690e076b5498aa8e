"""Exact q-analog counting: alpha, Gaussian binomials, spheres and intersection numbers.

Every function takes the field order ``q`` first and returns an exact Python
integer (or ``Fraction``).  Out-of-range arguments give 0 rather than an
error, because the DEP formulas sum over wide index ranges and rely on the
vanishing terms.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .constants import Bound
from .enumeration import check_budget, universe
from .errors import NoSuchConfiguration, PreconditionViolated
from .gf import Subspace, field_of_order


@lru_cache(maxsize=None)
def alpha(q: int, m: int, u: int) -> int:
    """prod_{i<u} (q^m - q^i); 1 for u = 0 and 0 for m < 0."""
    if m < 0 or u < 0:
        return 0
    out = 1
    for i in range(u):
        out *= q**m - q**i
    return out


@lru_cache(maxsize=None)
def gaussian(q: int, n: int, r: int) -> int:
    """Number of r-dimensional subspaces of GF(q)^n."""
    if r < 0 or n < 0 or r > n:
        return 0
    return alpha(q, n, r) // alpha(q, r, r)


def n_rank(q: int, m: int, n: int, u: int) -> int:
    """Number of m x n matrices at rank distance u from a fixed one."""
    if u < 0 or u > min(m, n):
        return 0
    return gaussian(q, n, u) * alpha(q, m, u)


def v_rank(q: int, m: int, n: int, t: int) -> int:
    return sum(n_rank(q, m, n, s) for s in range(0, t + 1))


@lru_cache(maxsize=None)
def _rank_pair_counts(q: int, m: int, n: int, d: int) -> np.ndarray:
    """counts[u, s] = #{Z : rk(Z) = u, rk(Z - B) = s} with B = diag(I_d, 0).

    Exhaustive over all q^(mn) matrices Z, aggregated row by row: the state is
    the pair (span of Z's rows so far, span of (Z - B)'s rows so far).
    """
    if n > m:
        m, n = n, m  # transposition preserves rank
    uni = universe(field_of_order(q), n)
    S, V = len(uni), q**n
    # the DP visits at most S^2 state pairs per row, each with q^n successors
    check_budget(S * S * V, f"J_R enumeration over GF({q})^{m}x{n}")
    f = uni.field
    states = np.zeros((S, S), dtype=np.int64)
    states[uni.zero, uni.zero] = 1
    for i in range(m):
        b = tuple(int(i == j) if i < d else 0 for j in range(n))
        shift = [uni.vector_index(tuple(f.sub(x, y) for x, y in zip(vec, b))) for vec in uni.vectors]
        zs, ds = np.nonzero(states)
        w = states[zs, ds]
        new = np.zeros_like(states)
        for x in range(V):
            np.add.at(new, (uni.span_add[zs, x], uni.span_add[ds, shift[x]]), w)
        states = new
    out = np.zeros((n + 1, n + 1), dtype=np.int64)
    zs, ds = np.nonzero(states)
    np.add.at(out, (uni.dims[zs], uni.dims[ds]), states[zs, ds])
    return out


def j_rank(q: int, m: int, n: int, u: int, s: int, d: int) -> int:
    """Intersection number J_R(u, s, d) of the bilinear forms scheme, by exhaustive count."""
    k = min(m, n)
    if not (0 <= u <= k and 0 <= s <= k and 0 <= d <= k):
        return 0
    return int(_rank_pair_counts(q, m, n, d)[u, s])


def n_sub(q: int, n: int, r: int, s: int, d: int) -> int:
    """Number of s-dimensional subspaces at subspace distance d from a fixed r-dimensional one."""
    if not (0 <= r <= n and 0 <= s <= n) or d < 0 or (r + d - s) % 2:
        return 0
    u = (r + d - s) // 2
    if u < 0 or u > r or d - u < 0 or d - u > n - r:
        return 0
    return q ** (u * (d - u)) * gaussian(q, r, u) * gaussian(q, n - r, d - u)


def n_inj(q: int, n: int, r: int, s: int, d: int) -> int:
    """Number of s-dimensional subspaces at injection distance d from a fixed r-dimensional one."""
    return n_sub(q, n, r, s, 2 * d - abs(r - s))


def _half(x: int) -> int | None:
    return x // 2 if x % 2 == 0 else None


def j_sub_triangle(q: int, n: int, u: int, s: int, a: int, b: int, c: int) -> int:
    """Closed form of J_S(u, s, u+s; a, b, c): spheres whose radii add up to the centre distance."""
    if u < 0 or s < 0:
        return 0
    if u > min(a + c, a + 2 * b - c) or s > min(b + c, 2 * a + b - c) or u + s > min(a + b, n):
        return 0
    halves = [_half(a - b + u + s), _half(c - b + s), _half(b - a + u + s), _half(c - a + u)]
    if None in halves:
        return 0
    top1, bot1, top2, bot2 = halves
    return gaussian(q, top1, bot1) * gaussian(q, top2, bot2)


def canonical_pair(q: int, n: int, a: int, b: int, w: int) -> tuple[Subspace, Subspace]:
    """A = span{e_0..e_{a-1}}, B = span{e_0..e_{t-1}, e_a..e_{a+b-t-1}} with t = dim(A & B)."""
    t2 = a + b - w
    if min(a, b) < 0 or w < 0 or t2 % 2:
        raise NoSuchConfiguration(f"no pair with dims ({a},{b}) at subspace distance {w}")
    t = t2 // 2
    if t < 0 or t > min(a, b) or a + b - t > n:
        raise NoSuchConfiguration(f"no pair with dims ({a},{b}) at subspace distance {w} in dimension {n}")
    field = field_of_order(q)
    A = Subspace.unit(field, n, range(a))
    B = Subspace.unit(field, n, list(range(t)) + list(range(a, a + b - t)))
    return A, B


@lru_cache(maxsize=None)
def _sphere_pair_counts(q: int, n: int, a: int, b: int, w: int) -> dict:
    """{(c, u, s): #C in E_c with d_S(A,C) = u, d_S(B,C) = s} around the canonical pair."""
    A, B = canonical_pair(q, n, a, b, w)
    uni = universe(A.field, n)
    ia, ib = uni.index[A], uni.index[B]
    ds = uni.subspace_distance
    keys = np.stack([uni.dims, ds[ia], ds[ib]], axis=1)
    out: dict = {}
    for key in map(tuple, keys.tolist()):
        out[key] = out.get(key, 0) + 1
    return out


def j_sub_general(q: int, n: int, u: int, s: int, w: int, a: int, b: int, c: int) -> int:
    """J_S(u, s, w; a, b, c) by enumerating E_c(q, n) around one pair (A, B)."""
    return _sphere_pair_counts(q, n, a, b, w).get((c, u, s), 0)


def j_sub(q: int, n: int, u: int, s: int, w: int, a: int, b: int, c: int) -> int:
    """J_S via the closed form when w = u + s, by enumeration otherwise."""
    if w == u + s:
        return j_sub_triangle(q, n, u, s, a, b, c)
    if u < 0 or s < 0 or not (0 <= c <= n):
        return 0
    return j_sub_general(q, n, u, s, w, a, b, c)


def f_exponent(n: int, r: int, s: int, t: int) -> Fraction:
    """f(r, s, t) with 4f = t(2n - t) - (r - s)(2n - r - 3s)."""
    return Fraction(t * (2 * n - t) - (r - s) * (2 * n - r - 3 * s), 4)


def sum_ns_bound(q: int, n: int, r: int, s: int, t: int) -> Bound:
    """L_q q^f(r,s,t), a strict upper bound on sum_{d<=t} N_S(r, s, d)."""
    if t < 0 or t > min(r + s, n // 2):
        raise PreconditionViolated(f"need 0 <= t <= min(r+s, floor(n/2)); got t={t}")
    return Bound.make(q, "L", f_exponent(n, r, s, t))
