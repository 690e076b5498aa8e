from __future__ import annotations

import pytest

from ranklab import codes, qcomb
from ranklab.codes import CodebookFormatError
from ranklab.errors import DimensionMismatch, NotACodeword, ParameterViolation, UnsupportedOrder
from ranklab.gf import MatrixGF, Subspace, lift
from ranklab.selftest import row_space_sum_holds


@pytest.mark.parametrize("q,m,n", [(2, 3, 3), (2, 4, 3), (2, 3, 2), (3, 2, 2), (2, 2, 2)])
def test_gabidulin_is_mrd(q, m, n):
    for k in range(1, n + 1):
        g = codes.gabidulin_build(codes.GabidulinSpec(q, m, n, k))
        d = n - k + 1
        assert len(g) == q ** (m * k)
        assert g.d == d and g.mrd and g.is_linear
        dist = codes.distance_distribution(g, g.codewords[0])
        assert dist[0] == 1
        for w in range(d, n + 1):
            assert dist[w] == codes.mrd_weight_distribution(q, m, n, d, w)


def test_gabidulin_linear(mrd333):
    words = set(mrd333.codewords)
    a, b = mrd333.codewords[3], mrd333.codewords[5]
    assert a + b in words


def test_gabidulin_rejects_bad_params():
    with pytest.raises(ParameterViolation):
        codes.gabidulin_build(codes.GabidulinSpec(2, 2, 3, 1))
    with pytest.raises(ParameterViolation):
        codes.gabidulin_build(codes.GabidulinSpec(2, 3, 3, 4))
    with pytest.raises(UnsupportedOrder):
        codes.gabidulin_build(codes.GabidulinSpec(4, 2, 2, 1))


def test_custom_points_still_mrd():
    # 1, x+1 are independent over GF(2) inside GF(8)
    g = codes.gabidulin_build(codes.GabidulinSpec(2, 3, 2, 1, points=(1, 3)))
    assert g.d == 2 and len(g) == 8


def test_weight_distribution_matches_brute_force():
    g = codes.gabidulin_build(codes.GabidulinSpec(2, 4, 3, 2))
    counts = codes.distance_distribution(g, g.codewords[7]).counts
    assert counts == (1, 0, codes.mrd_weight_distribution(2, 4, 3, 2, 2), codes.mrd_weight_distribution(2, 4, 3, 2, 3))
    assert sum(counts) == len(g)


def test_crc_bound_dominates_row_space_counts(mrd333):
    C = mrd333.codewords[0]
    dist = codes.row_space_distribution(mrd333, C)
    for W, a in dist.counts.items():
        if W.dim >= mrd333.d:
            assert a <= qcomb.alpha(2, 3, W.dim - mrd333.d + 1)
    by_dim = dist.by_dimension()
    for r in range(mrd333.d, 4):
        assert by_dim[r] <= codes.crc_upper_bound(2, 3, 3, 3, r)


def test_code_basics(gf2, mrd333):
    one = codes.RankCode.from_codewords([MatrixGF.zeros(gf2, 2, 2)])
    assert one.d is None and one.t is None
    with pytest.raises(NotACodeword):
        mrd333.require(MatrixGF.from_rows(gf2, [[1, 0, 0], [0, 0, 0], [0, 0, 0]]))
    assert mrd333.t == 1
    sub = mrd333.subcode(lambda C: C.rank != 3)
    assert len(sub) == 1
    T = mrd333.transpose()
    assert T.d == mrd333.d and len(T) == len(mrd333)
    with pytest.raises(DimensionMismatch):
        codes.RankCode(gf2, 2, 2, (MatrixGF.zeros(gf2, 2, 3),))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_g_r_sum_identity(m):
    assert row_space_sum_holds(2, m, m) > 0


def test_g_r_independent_of_representative(gf2):
    target = Subspace.unit(gf2, 3, [0, 1])
    center = Subspace.span(gf2, 3, [[1, 1, 0]])
    base = codes.g_r_histogram(target, center, 2)
    alt = MatrixGF.from_rows(gf2, [[1, 1, 0], [1, 1, 0]])
    assert codes.g_r_histogram(target, center, 2, alt) == base
    assert sum(base.values()) == qcomb.alpha(2, 2, 2)
    with pytest.raises(ParameterViolation):
        codes.g_r_count(target, 0, center, 2, MatrixGF.zeros(gf2, 2, 3))


def test_lifting(mrd333):
    K = codes.lift_code(mrd333)
    assert (K.n, K.r, len(K)) == (6, 3, len(mrd333))
    assert K.d == mrd333.d
    for C in mrd333.codewords[:10]:
        assert codes.unlift(lift(C)) == C
    assert codes.unlift(Subspace.unit(mrd333.field, 4, [2, 3])) is None


@pytest.mark.parametrize("n,r,d", [(4, 2, 2), (5, 2, 2), (5, 2, 1), (6, 3, 2)])
def test_kk_code(n, r, d):
    K = codes.kk_code(2, r, n, d)
    assert K.n == n and K.r == r and K.d == d
    assert len(K) == 2 ** ((n - r) * (r - d + 1))
    dist = codes.distance_distribution(K, K.codewords[0])
    assert sum(dist.counts) == len(K)
    assert all(dist[w] == 0 for w in range(1, d))


def test_cdc_rejects_mixed_dimensions(gf2):
    with pytest.raises(DimensionMismatch):
        codes.Cdc(gf2, 4, 2, (Subspace.unit(gf2, 4, [0]),))


def test_codebook_round_trip(tmp_path, mrd333):
    path = tmp_path / "g.txt"
    codes.write_codebook(path, mrd333)
    back = codes.read_codebook(path)
    assert back.codewords == mrd333.codewords and back.d == mrd333.d
    K = codes.kk_code(2, 2, 4, 2)
    codes.write_cdc(tmp_path / "k.txt", K)
    assert codes.read_cdc(tmp_path / "k.txt").codewords == K.codewords


def test_codebook_comments_allowed():
    text = "# tiny code\n2 1 2 2\n0 0  # zero\n\n1 1\n"
    code = codes.parse_codebook(text)
    assert len(code) == 2 and code.d == 1


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2 2 2\n",
        "2 1 2 3\n0 0\n\n1 1\n",
        "2 1 2 2\n0 0\n\n1 2\n",
        "2 1 2 2\n0 0\n\n1 1 1\n",
        "2 1 2 2\n0 0\n\n0 0\n",
        "2 1 2 2\n0 x\n\n1 1\n",
    ],
)
def test_codebook_integrity(text):
    with pytest.raises(CodebookFormatError):
        codes.parse_codebook(text)


def test_cdc_dependent_rows_rejected():
    with pytest.raises(CodebookFormatError):
        codes.parse_cdc("2 3 2 1\n1 0 0\n1 0 0\n")


def test_injection_distribution_is_rank_distribution(mrd333):
    K = codes.lift_code(mrd333)
    C = mrd333.codewords[4]
    assert codes.distance_distribution(K, lift(C)).counts == codes.distance_distribution(mrd333, C).counts


def test_mrd_full_weight_value():
    assert codes.mrd_weight_distribution(2, 3, 3, 3, 3) == 7
    assert codes.crc_upper_bound(2, 3, 3, 3, 3) == 7
