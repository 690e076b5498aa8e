from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest

from ranklab import codes, dep, qcomb, sim
from ranklab.constants import constants, h_ratio
from ranklab.enumeration import subspaces
from ranklab.errors import ExcludedRegime, ParameterViolation, PreconditionViolated
from ranklab.gf import Subspace


def test_no_output_marker():
    assert dep.NO_OUTPUT == 0
    assert dep.is_no_output(dep.NO_OUTPUT)
    assert not dep.is_no_output(Fraction(0))
    assert repr(dep.NO_OUTPUT) != repr(Fraction(0))


def test_mrd_known_values():
    assert dep.dep_rank_mrd(2, 3, 3, 3, 2) == Fraction(2, 3)
    assert dep.dep_rank_mrd(2, 3, 3, 3, 3) == Fraction(11, 12)
    assert dep.dep_rank_mrd(2, 3, 3, 3, 1) == 0
    with pytest.raises(ParameterViolation):
        dep.dep_rank_mrd(2, 2, 3, 2, 1)


def test_rank_exact_matches_exhaustive(gf2, mrd333):
    C = mrd333.codewords[5]
    for u in range(4):
        for U in subspaces(gf2, 3, u):
            assert dep.dep_rank_exact(mrd333, C, U) == sim.exhaustive_dep(mrd333, C, sim.RowSpaceChannel(U))


def test_rank_exact_nonlinear_subcode(gf2):
    g = codes.gabidulin_build(codes.GabidulinSpec(2, 3, 3, 2))
    sub = g.subcode(range(1, len(g), 3))
    C = sub.codewords[2]
    assert not sub.is_linear and sub.d >= 2
    for u in range(4):
        for U in subspaces(gf2, 3, u):
            assert dep.dep_rank_exact(sub, C, U) == sim.exhaustive_dep(sub, C, sim.RowSpaceChannel(U))


def test_symmetric_and_dmt(mrd333):
    C = mrd333.codewords[0]
    for u in range(4):
        assert dep.dep_rank_symmetric(mrd333, C, u) == dep.dep_rank_mrd(2, 3, 3, 3, u)
        assert dep.dep_rank_symmetric(mrd333, C, u) == sim.exhaustive_dep(mrd333, C, sim.RankChannel(u))
    assert dep.dep_rank_dmt(mrd333, C) == dep.dep_rank_mrd(2, 3, 3, 3, 2)


@pytest.mark.parametrize("m,n,k", [(3, 3, 1), (4, 3, 1), (4, 3, 2), (3, 2, 1), (3, 3, 2)])
def test_rank_bound_chain(m, n, k):
    g = codes.gabidulin_build(codes.GabidulinSpec(2, m, n, k))
    d = g.d
    F = g.field
    for u in range(n + 1):
        generic = dep.dep_rank_bound(2, m, n, d, u)
        assert dep.dep_rank_mrd(2, m, n, d, u) <= generic
        assert dep.dep_rank_asymptotic(2, m, n, d).certainly_above(generic)
        U = Subspace.unit(F, n, range(u))
        assert dep.dep_rank_exact(g, g.codewords[1], U) <= generic


def test_mrd_lower_bound_strict():
    for m, n, d in [(3, 3, 3), (4, 3, 3), (4, 4, 3), (5, 4, 4), (5, 5, 3), (5, 5, 5)]:
        t = (d - 1) // 2
        assert dep.kk_mrd_dmt_lower(2, m, n, d).certainly_below(dep.dep_rank_mrd(2, m, n, d, d - t))


def test_dominance_rank(gf2):
    g = codes.gabidulin_build(codes.GabidulinSpec(2, 4, 3, 1))
    sub = g.subcode(range(0, len(g), 3))
    for u in range(4):
        lhs, rhs, holds = dep.mrd_dominance_check(sub, sub.codewords[1], Subspace.unit(gf2, 3, range(u)))
        assert holds and isinstance(rhs, Fraction)
    assert h_ratio(2) == Fraction(7, 2)


def test_dominance_excluded_regimes():
    g = codes.gabidulin_build(codes.GabidulinSpec(2, 3, 3, 2))
    U = Subspace.unit(g.field, 3, [0, 1])
    with pytest.raises(ExcludedRegime):
        dep.mrd_dominance_check(g, g.codewords[0], U)
    kk = codes.kk_code(2, 3, 6, 2)
    with pytest.raises(ExcludedRegime):
        dep.kk_dominance_check(kk, kk.codewords[0], 3, 3)


@pytest.fixture(scope="module")
def lifted():
    from ranklab.selftest import _lifted_instances

    return _lifted_instances()


def test_cdc_known_value(pair_cdc):
    assert dep.dep_cdc_subspace_exact(pair_cdc, pair_cdc.codewords[0], 3, 3) == Fraction(1, 4)
    assert dep.is_no_output(dep.dep_cdc_subspace_exact(pair_cdc, pair_cdc.codewords[0], 1, 2))


def test_cdc_exact_matches_exhaustive(lifted):
    for K in lifted:
        C = K.codewords[0]
        for u, v in product(range(K.n + 1), repeat=2):
            if not qcomb.n_sub(2, K.n, K.r, v, u):
                continue
            ch = sim.OperatorChannel.from_uv(K.r, u, v)
            assert dep.dep_cdc_subspace_exact(K, C, u, v) == sim.exhaustive_dep(K, C, ch, "subspace")


def test_injection_exact_matches_exhaustive(lifted):
    for K in lifted:
        C = K.codewords[-1]
        for mu, v in product(range(K.n + 1), repeat=2):
            ex = dep.dep_cdc_injection_exact(K, C, mu, v)
            if dep.is_no_output(ex):
                continue
            ch = sim.OperatorChannel.from_mu_v(K.r, mu, v)
            assert ex == sim.exhaustive_dep(K, C, ch, "injection")


def test_cdc_bound_chain(lifted):
    for K in lifted:
        q, n, r, d = K.q, K.n, K.r, K.d
        C = K.codewords[0]
        for u, v in product(range(n + 1), repeat=2):
            if not qcomb.n_sub(q, n, r, v, u):
                continue
            exact = dep.dep_cdc_subspace_exact(K, C, u, v)
            bound = dep.dep_cdc_subspace_lifting_bound(q, n, r, d, u, v)
            assert exact <= bound
            if abs(v - r) <= d - 1:
                assert dep.dep_cdc_subspace_asymptotic(q, n, r, d, v).certainly_above(bound)


def test_subspace_dmt_matches_exact():
    for n, r, d in [(4, 2, 2), (5, 2, 2), (6, 3, 2), (6, 2, 2)]:
        K = codes.kk_code(2, r, n, d)
        C = K.codewords[0]
        for v in range(r - d + 1, r + d):
            i, _ = dep._dmt_shape(d, r, v)
            closed = dep.dep_cdc_subspace_dmt(K, C, v)
            assert closed == dep.dep_cdc_subspace_exact(K, C, d + i, v)
            assert dep.kk_subspace_dmt_lower(2, n, r, d, v).certainly_below(closed)


def test_subspace_dmt_small_values(pair_cdc):
    C = pair_cdc.codewords[0]
    assert dep.dep_cdc_subspace_dmt(pair_cdc, C, 3) == Fraction(1, 4)
    assert dep.dep_cdc_subspace_dmt(pair_cdc, C, 2) == Fraction(1, 16)
    with pytest.raises(PreconditionViolated):
        dep.dep_cdc_subspace_dmt(pair_cdc, C, 5)


def test_injection_bound_dominates():
    K = codes.kk_code(2, 2, 6, 2)
    C = K.codewords[3]
    for mu, v in product(range(7), repeat=2):
        if abs(v - 2) > K.t:
            continue
        ex = dep.dep_cdc_injection_exact(K, C, mu, v)
        if not dep.is_no_output(ex):
            assert dep.dep_cdc_injection_bound(2, 6, 2, 2, K.t, v).certainly_above(ex)


def test_kk_dominance_on_subcode():
    kk = codes.kk_code(2, 2, 5, 2)
    lifted = codes.lift_code(kk.origin.subcode(range(1, len(kk), 3)))
    for u, v in product(range(6), repeat=2):
        if qcomb.n_sub(2, 5, 2, v, u):
            assert dep.kk_dominance_check(lifted, lifted.codewords[0], u, v).holds


def test_figure1_values():
    rows = {row.v: (row.subspace, row.injection) for row in dep.figure1_exponents(50, 20, 9, 4)}
    assert set(rows) == set(range(12, 29))
    assert rows[20] == (-56, -56)
    assert rows[19] == rows[19][::-1] and rows[21] == (-82, -82)
    assert rows[22] == (-65, -108)
    assert rows[12][1] is None and rows[28][1] is None


def test_exponent_preconditions():
    with pytest.raises(ParameterViolation):
        dep.subspace_exponent(50, 20, 9, 29)
    with pytest.raises(ParameterViolation):
        dep.injection_exponent(50, 20, 9, 4, 25)
    with pytest.raises(ParameterViolation):
        dep.dep_cdc_subspace_asymptotic(2, 5, 3, 2, 3)


def test_constants_width():
    for q in (2, 3, 4, 5):
        c = constants(q)
        assert float(c.K.b - c.K.a) < 1e-12 and float(c.L.b - c.L.a) < 1e-12
        assert 0 < c.K_float < 1 and c.L_float > 1
    assert 0.288 < constants(2).K_float < 0.289


def test_kk_lower_and_upper_differ_by_constant():
    from ranklab.constants import constants as consts

    c = consts(2)
    ratio = (c.K * c.K) / c.L
    for v in range(2, 5):
        lo = dep.kk_subspace_dmt_lower(2, 6, 3, 2, v)
        hi = dep.dep_cdc_subspace_asymptotic(2, 6, 3, 2, v)
        assert lo.exponent == hi.exponent
        assert abs(lo.value / hi.value - float(ratio.mid)) < 1e-12
        assert hi.certainly_above(lo.upper)
