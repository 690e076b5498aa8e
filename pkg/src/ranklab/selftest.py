"""Desk-scale release gate: named identity and oracle checks.

Each check returns a short detail string on success and raises
``AssertionError`` (or any ranklab error) on failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.stats import chisquare

from . import codes, dep, qcomb, sim
from .constants import constants
from .enumeration import subspaces
from .errors import RanklabError
from .gf import MatrixGF, Subspace, field_of_order, subspace_distances


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _gf() -> str:
    F = field_of_order(2)
    A = Subspace.unit(F, 3, [0, 1])
    B = Subspace.unit(F, 3, [1, 2])
    assert subspace_distances(A, B) == (2, 1)
    assert MatrixGF.from_rows(F, [[1, 1], [1, 1]]).rank == 1
    G9 = field_of_order(9)
    assert all(G9.mul(a, G9.inv(a)) == 1 for a in range(1, 9))
    return "field and subspace basics"


def _rank_identities() -> str:
    count = 0
    for q, m, n in [(2, 2, 2), (2, 3, 3), (2, 2, 3), (3, 2, 2)]:
        k = min(m, n)
        for u, s, d in product(range(k + 1), repeat=3):
            lhs = qcomb.n_rank(q, m, n, d) * qcomb.j_rank(q, m, n, u, s, d)
            assert lhs == qcomb.n_rank(q, m, n, u) * qcomb.j_rank(q, m, n, d, s, u), (q, m, n, u, s, d)
            count += 1
        for s, d in product(range(k + 1), repeat=2):
            assert sum(qcomb.j_rank(q, m, n, u, s, d) for u in range(k + 1)) == qcomb.n_rank(q, m, n, s)
    assert qcomb.j_rank(2, 3, 3, 2, 1, 3) == 28
    return f"{count} scaling identities"


def _sphere_identities() -> str:
    q, n, count = 2, 4, 0
    for a, b, c in product(range(n + 1), repeat=3):
        for w in range(n + 1):
            try:
                qcomb.canonical_pair(q, n, a, b, w)
            except RanklabError:
                continue
            for s in range(n + 1):
                assert sum(qcomb.j_sub_general(q, n, u, s, w, a, b, c) for u in range(n + 1)) == qcomb.n_sub(q, n, b, c, s)
                for u in range(n + 1):
                    lhs = qcomb.n_sub(q, n, a, b, w) * qcomb.j_sub_general(q, n, u, s, w, a, b, c)
                    rhs = qcomb.n_sub(q, n, a, c, u) * qcomb.j_sub_general(q, n, w, s, u, a, c, b) if qcomb.n_sub(q, n, a, c, u) else 0
                    assert lhs == rhs, (a, b, c, u, s, w)
                    if u + s == w:
                        assert qcomb.j_sub_triangle(q, n, u, s, a, b, c) == qcomb.j_sub_general(q, n, u, s, w, a, b, c)
                    count += 1
    return f"{count} sphere-intersection tuples"


def row_space_sum_holds(q: int, m: int, n: int) -> int:
    """Sum over W of g_R(U, s, W) times [n u] equals [n w] J_R(u, s, w); returns tuples checked."""
    F = field_of_order(q)
    checked = 0
    for u in range(min(m, n) + 1):
        U = next(subspaces(F, n, u))
        for w in range(min(m, n) + 1):
            totals: dict[int, int] = {}
            for W in subspaces(F, n, w):
                for s, c in codes.g_r_histogram(U, W, m).items():
                    totals[s] = totals.get(s, 0) + c
            for s in range(min(m, n) + 1):
                lhs = totals.get(s, 0) * qcomb.gaussian(q, n, u)
                assert lhs == qcomb.gaussian(q, n, w) * qcomb.j_rank(q, m, n, u, s, w), (u, w, s)
                checked += 1
    return checked


def _code_checks(code: codes.RankCode) -> str:
    """Row-space sum identity at the code's shape, and the row-space DEP against exhaustive decoding."""
    if code.d is None:
        raise AssertionError("codebook needs at least two codewords")
    n_checked = row_space_sum_holds(code.q, code.m, code.n) if code.q ** (code.m * code.n) <= 1 << 12 else 0
    F = code.field
    C = code.codewords[0]
    for u in range(min(code.m, code.n) + 1):
        for U in subspaces(F, code.n, u):
            assert dep.dep_rank_exact(code, C, U) == sim.exhaustive_dep(code, C, sim.RowSpaceChannel(U)), U
    dist = codes.row_space_distribution(code, C)
    for W, a in dist.counts.items():
        if W.dim >= code.d:
            assert a <= qcomb.alpha(code.q, code.m, W.dim - code.d + 1)
    return f"{len(code)} codewords, d={code.d}, {n_checked} row-space sum tuples"


def _row_space_sum(code_path: str | None = None) -> str:
    if code_path is not None:
        return _code_checks(codes.read_codebook(code_path))
    total = sum(row_space_sum_holds(2, m, m) for m in (1, 2, 3))
    return f"{total} tuples"


def _mrd() -> str:
    for m, n in [(2, 2), (3, 2), (3, 3), (4, 3)]:
        for k in range(1, n + 1):
            g = codes.gabidulin_build(codes.GabidulinSpec(2, m, n, k))
            d = n - k + 1
            assert len(g) == 2 ** (m * (n - d + 1)) and g.d == d
            A = codes.distance_distribution(g, g.codewords[-1])
            assert all(A[w] == codes.mrd_weight_distribution(2, m, n, d, w) for w in range(d, n + 1))
    return "Gabidulin sizes, distances and weight distributions"


def _rank_dep() -> str:
    F = field_of_order(2)
    g = codes.gabidulin_build(codes.GabidulinSpec(2, 3, 3, 1))
    C = g.codewords[1]
    for u in range(4):
        mrd = dep.dep_rank_mrd(2, 3, 3, 3, u)
        assert dep.dep_rank_symmetric(g, C, u) == mrd == sim.exhaustive_dep(g, C, sim.RankChannel(u))
        for U in subspaces(F, 3, u):
            assert dep.dep_rank_exact(g, C, U) == mrd == sim.exhaustive_dep(g, C, sim.RowSpaceChannel(U))
    assert dep.dep_rank_mrd(2, 3, 3, 3, 2) == Fraction(2, 3) == dep.dep_rank_dmt(g, C)
    return "Gabidulin 3x3, d=3: all error classes"


def _lifted_instances() -> list[codes.Cdc]:
    F = field_of_order(2)
    pair = codes.RankCode.from_codewords([MatrixGF.zeros(F, 2, 2), MatrixGF.identity(F, 2)])
    return [codes.lift_code(pair), codes.kk_code(2, 2, 4, 2), codes.kk_code(2, 2, 5, 2)]


def _cdc_dep() -> str:
    checked = 0
    for K in _lifted_instances():
        C = K.codewords[-1]
        for u, v in product(range(K.n + 1), repeat=2):
            if qcomb.n_sub(2, K.n, K.r, v, u):
                ch = sim.OperatorChannel.from_uv(K.r, u, v)
                assert dep.dep_cdc_subspace_exact(K, C, u, v) == sim.exhaustive_dep(K, C, ch, "subspace")
                checked += 1
            mu = u
            ex = dep.dep_cdc_injection_exact(K, C, mu, v)
            if not dep.is_no_output(ex):
                ch = sim.OperatorChannel.from_mu_v(K.r, mu, v)
                assert ex == sim.exhaustive_dep(K, C, ch, "injection")
                checked += 1
    K = _lifted_instances()[0]
    assert dep.dep_cdc_subspace_exact(K, K.codewords[0], 3, 3) == Fraction(1, 4)
    return f"{checked} (u,v) and (mu,v) classes"


def _bounds() -> str:
    c = constants(2)
    assert float(c.K.b - c.K.a) < 1e-12 and float(c.L.b - c.L.a) < 1e-12
    g = codes.gabidulin_build(codes.GabidulinSpec(2, 3, 3, 1))
    F = field_of_order(2)
    for u in range(4):
        generic = dep.dep_rank_bound(2, 3, 3, 3, u)
        assert dep.dep_rank_asymptotic(2, 3, 3, 3).certainly_above(generic)
        for U in subspaces(F, 3, u):
            assert dep.dep_rank_exact(g, g.codewords[0], U) <= generic
    assert dep.kk_mrd_dmt_lower(2, 3, 3, 3).certainly_below(dep.dep_rank_mrd(2, 3, 3, 3, 2))
    for K in _lifted_instances():
        q, n, r, d, t = K.q, K.n, K.r, K.d, K.t
        C = K.codewords[0]
        for u, v in product(range(n + 1), repeat=2):
            if not qcomb.n_sub(q, n, r, v, u):
                continue
            exact_s = dep.dep_cdc_subspace_exact(K, C, u, v)
            lifting = dep.dep_cdc_subspace_lifting_bound(q, n, r, d, u, v)
            assert exact_s <= lifting
            if abs(v - r) <= d - 1:
                assert dep.dep_cdc_subspace_asymptotic(q, n, r, d, v).certainly_above(lifting)
            if abs(v - r) <= t:
                exact_i = dep.dep_cdc_injection_exact(K, C, (u + abs(v - r)) // 2, v)
                assert dep.dep_cdc_injection_bound(q, n, r, d, t, v).certainly_above(exact_i)
    return "rank and subspace chains"


def _dominance() -> str:
    F = field_of_order(2)
    g = codes.gabidulin_build(codes.GabidulinSpec(2, 4, 3, 1))
    sub = g.subcode(range(0, len(g), 2))
    for u in range(4):
        for U in subspaces(F, 3, u):
            assert dep.mrd_dominance_check(sub, sub.codewords[0], U).holds
    kk = codes.kk_code(2, 2, 5, 2)
    lifted = codes.lift_code(kk.origin.subcode(range(0, 8, 2)))
    for u, v in product(range(6), repeat=2):
        if qcomb.n_sub(2, 5, 2, v, u):
            assert dep.kk_dominance_check(lifted, lifted.codewords[0], u, v).holds
    return "one sub-code on each side"


def _exponents() -> str:
    rows = {row.v: (row.subspace, row.injection) for row in dep.figure1_exponents(50, 20, 9, 4)}
    assert rows[20] == (-56, -56) and rows[21] == (-82, -82) and rows[19] == (-72, -72)
    assert rows[22] == (-65, -108) and rows[18] == (-45, -88)
    assert rows[12][0] == 0
    assert all(s != i for v, (s, i) in rows.items() if i is not None and abs(v - 20) >= 2)
    return "bound exponents at n=50, r=20, d=9, t=4"


def spread_code() -> codes.Cdc:
    """Five pairwise complementary planes of GF(2)^4: a KK code plus span{e2, e3}."""
    kk = codes.kk_code(2, 2, 4, 2)
    return codes.Cdc.from_codewords(kk.codewords + (Subspace.unit(kk.field, 4, [2, 3]),))


def _decodable_sets() -> str:
    checked = 0
    for K in _lifted_instances()[:2] + [spread_code()]:
        for v in range(K.n + 1):
            for t in range(3):
                if abs(v - K.r) > t:
                    continue
                inj = sim.radius_pairs(K, v, "injection", t)
                assert inj == sim.radius_pairs(K, v, "subspace", 2 * t - abs(v - K.r)), (v, t)
                checked += 1
            if abs(v - K.r) <= K.t:
                rad = 2 * K.t - abs(v - K.r)
                assert sim.decodable_set(K, v, "injection") == sim.decodable_set(K, v, "subspace", rad)
    return f"{checked} (v, t) regions on E(2,4)"


def _sampler() -> str:
    F = field_of_order(2)
    rng = np.random.default_rng(7)
    U = Subspace.unit(F, 2, [0])
    draws = sim.sample_errors_with_row_space(U, 2, 30000, rng)
    _, counts = np.unique(draws, return_counts=True)
    assert len(counts) == 3 and chisquare(counts).pvalue > 0.001
    V = Subspace.unit(F, 4, [0, 1])
    out = sim.sample_operator_outputs(V, 2, 1, 30000, rng)
    _, counts = np.unique(out, return_counts=True)
    assert len(counts) == 12 and chisquare(counts).pvalue > 0.001
    return "row-space and operator samplers"


def _montecarlo() -> str:
    F = field_of_order(2)
    g = codes.gabidulin_build(codes.GabidulinSpec(2, 3, 3, 1))
    ch = sim.RowSpaceChannel(Subspace.unit(F, 3, [0, 1]))
    a = sim.estimate_dep(sim.SimConfig(3, 20000), ch, g, g.codewords[0])
    b = sim.estimate_dep(sim.SimConfig(3, 20000, workers=4, block_size=8192), ch, g, g.codewords[0])
    assert a == b
    lo, hi = a.interval(sim.THREE_SIGMA)
    assert lo <= 2 / 3 <= hi
    return f"estimate {a.estimate:.4f}"


CHECKS: dict[str, Callable[..., str]] = {
    "gf": _gf,
    "rank-identities": _rank_identities,
    "sphere-identities": _sphere_identities,
    "row-space-sum": _row_space_sum,
    "mrd": _mrd,
    "rank-dep": _rank_dep,
    "cdc-dep": _cdc_dep,
    "bounds": _bounds,
    "dominance": _dominance,
    "fig1": _exponents,
    "decodable-sets": _decodable_sets,
    "sampler": _sampler,
    "montecarlo": _montecarlo,
}


def run_checks(only: list[str] | None = None, code_path: str | Path | None = None) -> list[CheckResult]:
    names = list(CHECKS) if not only else only
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks: {', '.join(unknown)}")
    results = []
    for name in names:
        try:
            if name == "row-space-sum":
                detail = _row_space_sum(None if code_path is None else str(code_path))
            else:
                detail = CHECKS[name]()
            results.append(CheckResult(name, True, detail))
        except (AssertionError, RanklabError, OSError) as exc:
            results.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))
    return results
