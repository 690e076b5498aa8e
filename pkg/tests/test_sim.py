from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare

from ranklab import codes, dep, sim
from ranklab.enumeration import matrices_with_row_space, subspaces, universe
from ranklab.errors import AmbiguousRadius, NoValidOutput, ParameterViolation
from ranklab.gf import MatrixGF, Subspace, field_of_order, row_space, subspace_distance


def test_operator_channel_parameters():
    ch = sim.OperatorChannel.from_uv(2, 3, 3)
    assert (ch.eps, ch.rho, ch.u, ch.mu) == (2, 1, 3, 2)
    assert ch.output_dim(2) == 3
    assert sim.OperatorChannel.from_mu_v(2, 2, 3) == ch
    with pytest.raises(NoValidOutput):
        sim.OperatorChannel.from_uv(2, 2, 3)


def test_matrix_index_round_trip():
    F = field_of_order(3)
    A = MatrixGF.from_rows(F, [[2, 0, 1], [1, 2, 2]])
    assert sim.matrix_from_index(F, 2, 3, sim.matrix_index(A)) == A


def test_row_space_sampler_support(gf2):
    U = Subspace.unit(gf2, 3, [0, 2])
    rng = np.random.default_rng(1)
    idx = sim.sample_errors_with_row_space(U, 3, 5000, rng)
    support = {sim.matrix_index(A) for A in matrices_with_row_space(U, 3)}
    assert set(np.unique(idx).tolist()) == support
    E = sim.sample_error_with_row_space(U, 3, rng)
    assert row_space(E) == U


def test_operator_sampler_support(gf2):
    V = Subspace.unit(gf2, 4, [0, 1])
    rng = np.random.default_rng(2)
    out = sim.sample_operator_outputs(V, 1, 1, 20000, rng)
    uni = universe(gf2, 4)
    expected = {uni.index[W] for W in subspaces(gf2, 4, 2) if subspace_distance(W, V) == 2}
    assert set(np.unique(out).tolist()) == expected
    _, counts = np.unique(out, return_counts=True)
    assert chisquare(counts).pvalue > 1e-4
    W = sim.sample_operator_output(V, 2, 0, rng)
    assert W.dim == 4
    with pytest.raises(NoValidOutput):
        sim.sample_operator_outputs(V, 3, 0, 1, rng)


def test_decoders(pair_cdc, mrd333):
    C = mrd333.codewords[3]
    assert sim.bdd_rank(mrd333, C).codeword == C
    V = pair_cdc.codewords[0]
    assert sim.bdd_subspace(pair_cdc, V).codeword == V
    assert sim.bdd_injection(pair_cdc, V).codeword == V
    far = Subspace.unit(pair_cdc.field, 4, [0, 2])
    assert sim.bdd_injection(pair_cdc, far, t=0) is sim.FAILURE


def test_tie_raises(gf2):
    code = codes.RankCode.from_codewords([MatrixGF.zeros(gf2, 1, 2), MatrixGF.from_rows(gf2, [[1, 1]])])
    with pytest.raises(AmbiguousRadius):
        sim.bdd_rank(code, MatrixGF.from_rows(gf2, [[1, 0]]), t=1)


def test_exhaustive_values(gf2, mrd333, pair_cdc):
    C = mrd333.codewords[0]
    U = Subspace.unit(gf2, 3, [0, 1])
    assert sim.exhaustive_dep(mrd333, C, sim.RowSpaceChannel(U)) == Fraction(2, 3)
    assert sim.exhaustive_dep(mrd333, C, sim.RankChannel(3)) == Fraction(11, 12)
    ch = sim.OperatorChannel.from_uv(2, 3, 3)
    assert sim.exhaustive_dep(pair_cdc, pair_cdc.codewords[0], ch) == Fraction(1, 4)
    assert dep.is_no_output(sim.exhaustive_dep(pair_cdc, pair_cdc.codewords[0], sim.OperatorChannel(3, 0)))


def test_column_space_channel_is_transposed_row_space(gf2, mrd333):
    C = mrd333.codewords[2]
    V = Subspace.unit(gf2, 3, [1, 2])
    col = sim.exhaustive_dep(mrd333, C, sim.ColumnSpaceChannel(V))
    T = mrd333.transpose()
    assert col == sim.exhaustive_dep(T, C.T, sim.RowSpaceChannel(V))
    res = sim.estimate_dep(sim.SimConfig(5, 20000), sim.ColumnSpaceChannel(V), mrd333, C)
    assert res.interval(sim.THREE_SIGMA)[0] <= col <= res.interval(sim.THREE_SIGMA)[1]


def test_decodable_sets_agree(pair_cdc):
    for v in (1, 2, 3):
        assert sim.decodable_set(pair_cdc, v, "injection") == sim.decodable_set(pair_cdc, v, "subspace", 2 * pair_cdc.t - abs(v - 2))


def test_estimate_deterministic(gf2, mrd333):
    U = Subspace.unit(gf2, 3, [0, 1])
    ch = sim.RowSpaceChannel(U)
    C = mrd333.codewords[0]
    a = sim.estimate_dep(sim.SimConfig(11, 30000, block_size=4096), ch, mrd333, C)
    b = sim.estimate_dep(sim.SimConfig(11, 30000, workers=3, block_size=4096), ch, mrd333, C)
    c = sim.estimate_dep(sim.SimConfig(12, 30000, block_size=4096), ch, mrd333, C)
    assert a == b and a != c
    assert a.successes + a.errors + a.failures == 30000
    assert a.ci_low < a.estimate < a.ci_high
    assert a.to_dict()["errors"] == a.errors
    assert a.estimate_exact == Fraction(a.errors, 30000)


def test_estimate_rank_channel(mrd333):
    res = sim.estimate_dep(sim.SimConfig(4, 40000), sim.RankChannel(3), mrd333, mrd333.codewords[1])
    lo, hi = res.interval(sim.THREE_SIGMA)
    assert lo <= 11 / 12 <= hi


def test_estimate_injection_decoder():
    K = codes.kk_code(2, 2, 5, 2)
    C = K.codewords[0]
    ch = sim.OperatorChannel.from_mu_v(2, 2, 2)
    exact = dep.dep_cdc_injection_exact(K, C, 2, 2)
    res = sim.estimate_dep(sim.SimConfig(8, 40000), ch, K, C, "injection")
    lo, hi = res.interval(sim.THREE_SIGMA)
    assert lo <= exact <= hi


def test_wilson_interval():
    lo, hi = sim.wilson_interval(50, 100)
    assert lo < 0.5 < hi and abs((lo + hi) / 2 - 0.5) < 1e-12
    assert abs(sim.THREE_SIGMA - 0.9973002) < 1e-6


@pytest.mark.parametrize("kwargs", [dict(trials=0), dict(workers=0), dict(seed=-1)])
def test_config_validation(kwargs):
    base = dict(seed=1, trials=10)
    base.update(kwargs)
    with pytest.raises(ParameterViolation):
        sim.SimConfig(**base)


def test_block_streams_independent():
    a = sim.block_rng(3, 0).integers(0, 1 << 30, 4)
    b = sim.block_rng(3, 1).integers(0, 1 << 30, 4)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, sim.block_rng(3, 0).integers(0, 1 << 30, 4))


def test_transpose_equivalence_rectangular(gf2):
    g = codes.gabidulin_build(codes.GabidulinSpec(2, 3, 2, 1))
    T = g.transpose()
    for C in g.codewords[:4]:
        for u in range(3):
            for V in subspaces(gf2, 2, u):
                direct = sim.exhaustive_dep(g, C, sim.RowSpaceChannel(V))
                assert sim.exhaustive_dep(T, C.T, sim.ColumnSpaceChannel(V)) == direct
                assert dep.dep_rank_exact(g, C, V) == direct
