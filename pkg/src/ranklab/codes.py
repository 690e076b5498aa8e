"""Rank-metric codes, Gabidulin construction, lifted constant-dimension codes.

Codebooks are explicit tuples of matrices (or subspaces); every distribution
here is an exhaustive count.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .enumeration import check_budget, matrices_with_row_space
from .errors import DimensionMismatch, NotACodeword, ParameterViolation, UnsupportedOrder
from .gf import (
    FieldSpec,
    MatrixGF,
    Subspace,
    field_create,
    field_of_order,
    format_matrix,
    injection_distance,
    lift,
    rank_of_rows,
    row_space,
)
from .qcomb import alpha, gaussian


# -- rank-metric codes --------------------------------------------------------

@dataclass(frozen=True)
class RankCode:
    """A set of m x n matrices over GF(q) with minimum rank distance ``d``.

    ``d`` (and hence ``t``) is None for a single-codeword code.
    """

    field: FieldSpec
    m: int
    n: int
    codewords: tuple[MatrixGF, ...]
    is_linear: bool = False
    mrd: bool = False

    def __post_init__(self):
        if not self.codewords:
            raise ParameterViolation("a code needs at least one codeword")
        for C in self.codewords:
            if C.shape != (self.m, self.n) or C.field != self.field:
                raise DimensionMismatch(f"codeword of shape {C.shape} in a {self.m}x{self.n} code")
        if len(set(self.codewords)) != len(self.codewords):
            raise ParameterViolation("duplicate codewords")

    @classmethod
    def from_codewords(cls, codewords: Iterable[MatrixGF], is_linear: bool = False) -> "RankCode":
        words = tuple(sorted(set(codewords), key=lambda A: A.rows))
        if not words:
            raise ParameterViolation("a code needs at least one codeword")
        A = words[0]
        return cls(A.field, A.m, A.n, words, is_linear=is_linear)

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self) -> int:
        return len(self.codewords)

    def __iter__(self):
        return iter(self.codewords)

    def __contains__(self, C) -> bool:
        return C in self._members

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.codewords)

    @cached_property
    def d(self) -> int | None:
        if len(self) < 2:
            return None
        if self.is_linear:
            return min(C.rank for C in self.codewords if not C.is_zero())
        words = self.codewords
        return min((words[i] - words[j]).rank for i in range(len(words)) for j in range(i))

    @property
    def t(self) -> int | None:
        return None if self.d is None else (self.d - 1) // 2

    def require(self, C: MatrixGF) -> None:
        if C not in self:
            raise NotACodeword("matrix is not a codeword of this code")

    def transpose(self) -> "RankCode":
        return RankCode(self.field, self.n, self.m, tuple(sorted((C.T for C in self.codewords), key=lambda A: A.rows)),
                        is_linear=self.is_linear, mrd=self.mrd)

    def subcode(self, keep: Callable[[MatrixGF], bool] | Iterable[int]) -> "RankCode":
        """Codewords selected by a predicate or by index."""
        if callable(keep):
            words = [C for C in self.codewords if keep(C)]
        else:
            words = [self.codewords[i] for i in keep]
        return RankCode.from_codewords(words)


@dataclass(frozen=True)
class GabidulinSpec:
    """Parameters of a Gabidulin code: m x n matrices over GF(q), q^(mk) codewords.

    ``points`` are elements of GF(q^m) given as integers (base-q digits, lowest
    first); the default is the polynomial basis 1, x, x^2, ...
    """

    q: int
    m: int
    n: int
    k: int
    points: tuple[int, ...] | None = None

    def evaluation_points(self) -> tuple[int, ...]:
        return self.points if self.points is not None else tuple(self.q**j for j in range(self.n))


def gabidulin_build(spec: GabidulinSpec) -> RankCode:
    """Evaluate every linearized polynomial of q-degree < k at the points.

    Codeword column j holds the GF(q) coordinates of f(g_j).
    """
    q, m, n, k = spec.q, spec.m, spec.n, spec.k
    base = field_of_order(q)
    if base.e != 1:
        raise UnsupportedOrder("Gabidulin codes are built over prime fields only")
    if n > m:
        raise ParameterViolation(f"need n <= m, got n={n}, m={m}")
    if not 1 <= k <= n:
        raise ParameterViolation(f"need 1 <= k <= n, got k={k}")
    check_budget(q ** (m * k), f"Gabidulin code with q^(mk) = {q}^{m * k} codewords")
    ext = field_create(q, m)
    points = spec.evaluation_points()
    if len(points) != n or any(not 0 <= g < ext.q for g in points):
        raise ParameterViolation("need n evaluation points in GF(q^m)")
    if rank_of_rows(base, [ext.digits(g) for g in points], m) != n:
        raise ParameterViolation("evaluation points are not linearly independent over GF(q)")
    frob = [[ext.pow(g, q**i) for g in points] for i in range(k)]
    words = []
    for coeffs in product(range(ext.q), repeat=k):
        values = [0] * n
        for i, f in enumerate(coeffs):
            if f:
                values = [ext.add(v, ext.mul(f, x)) for v, x in zip(values, frob[i])]
        cols = [ext.digits(v) for v in values]
        words.append(MatrixGF(base, m, n, tuple(tuple(cols[j][i] for j in range(n)) for i in range(m))))
    code = RankCode.from_codewords(words, is_linear=True)
    if len(code) != q ** (m * k):
        raise ParameterViolation("evaluation map is not injective")
    expected = n - k + 1
    if code.d is not None and code.d != expected:
        raise ParameterViolation(f"construction gave d={code.d}, expected {expected}")
    return RankCode(code.field, m, n, code.codewords, is_linear=True, mrd=True)


# -- distributions ------------------------------------------------------------

@dataclass(frozen=True)
class DistanceDistribution:
    reference: object
    counts: tuple[int, ...]

    def __getitem__(self, w: int) -> int:
        return self.counts[w] if 0 <= w < len(self.counts) else 0


@dataclass(frozen=True)
class RowSpaceDistribution:
    reference: MatrixGF
    counts: dict = dc_field(hash=False)

    def __getitem__(self, W: Subspace) -> int:
        return self.counts.get(W, 0)

    def by_dimension(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for W, c in self.counts.items():
            out[W.dim] = out.get(W.dim, 0) + c
        return out


def distance_distribution(code: "RankCode | Cdc", C) -> DistanceDistribution:
    """A_w(C): rank distances for a rank code, injection distances for a CDC."""
    code.require(C)
    if isinstance(code, Cdc):
        counts = [0] * (code.r + 1)
        for D in code.codewords:
            counts[injection_distance(C, D)] += 1
    else:
        counts = [0] * (min(code.m, code.n) + 1)
        for D in code.codewords:
            counts[(D - C).rank] += 1
    return DistanceDistribution(C, tuple(counts))


def row_space_distribution(code: RankCode, C: MatrixGF) -> RowSpaceDistribution:
    """A_W(C) = #{D : row space of D - C is W}."""
    code.require(C)
    counts: dict = {}
    for D in code.codewords:
        W = row_space(D - C)
        counts[W] = counts.get(W, 0) + 1
    return RowSpaceDistribution(C, counts)


def _normalize(m: int, n: int) -> tuple[int, int]:
    return max(m, n), min(m, n)


def mrd_weight_distribution(q: int, m: int, n: int, d: int, r: int) -> int:
    """M(d, r): codewords at rank distance r from a fixed one in a linear MRD code."""
    m, n = _normalize(m, n)
    if not 1 <= d <= r <= n:
        raise ParameterViolation(f"need 1 <= d <= r <= min(m,n); got d={d}, r={r}")
    total = 0
    for j in range(r - d + 1):
        total += (-1) ** j * q ** (j * (j - 1) // 2) * gaussian(q, r, j) * (q ** (m * (r - d - j + 1)) - 1)
    return gaussian(q, n, r) * total


def crc_upper_bound(q: int, m: int, n: int, d: int, r: int) -> int:
    """[n r] alpha(m, r-d+1), an upper bound on constant-rank codes (shape-symmetric)."""
    m, n = _normalize(m, n)
    if not 1 <= d <= r <= n:
        raise ParameterViolation(f"need 1 <= d <= r <= min(m,n); got d={d}, r={r}")
    return gaussian(q, n, r) * alpha(q, m, r - d + 1)


def g_r_count(target: Subspace, s: int, center: Subspace, m: int, representative: MatrixGF | None = None) -> int:
    """Matrices with row space ``target`` at rank distance s from one matrix with row space ``center``.

    The centre defaults to the basis of ``center`` padded with zero rows; any
    other representative gives the same count.
    """
    return g_r_histogram(target, center, m, representative).get(s, 0)


def g_r_histogram(target: Subspace, center: Subspace, m: int, representative: MatrixGF | None = None) -> dict[int, int]:
    if target.field != center.field or target.n != center.n:
        raise DimensionMismatch("target and center live in different spaces")
    if center.dim > m:
        raise ParameterViolation(f"no {m}-row matrix has a row space of dimension {center.dim}")
    if representative is None:
        rows = center.basis + tuple((0,) * center.n for _ in range(m - center.dim))
        representative = MatrixGF(center.field, m, center.n, rows)
    elif row_space(representative) != center or representative.m != m:
        raise ParameterViolation("representative does not have the given row space")
    out: dict[int, int] = {}
    for X in matrices_with_row_space(target, m):
        s = (X - representative).rank
        out[s] = out.get(s, 0) + 1
    return out


# -- constant-dimension codes -------------------------------------------------

@dataclass(frozen=True)
class Cdc:
    """A set of r-dimensional subspaces of GF(q)^n."""

    field: FieldSpec
    n: int
    r: int
    codewords: tuple[Subspace, ...]
    origin: RankCode | None = dc_field(default=None, compare=False)

    def __post_init__(self):
        if not self.codewords:
            raise ParameterViolation("a code needs at least one codeword")
        for V in self.codewords:
            if V.dim != self.r or V.n != self.n or V.field != self.field:
                raise DimensionMismatch(f"codeword of dimension {V.dim} in E_{self.r}(q,{self.n})")
        if len(set(self.codewords)) != len(self.codewords):
            raise ParameterViolation("duplicate codewords")

    @classmethod
    def from_codewords(cls, codewords: Iterable[Subspace]) -> "Cdc":
        words = tuple(sorted(set(codewords), key=lambda V: V.basis))
        if not words:
            raise ParameterViolation("a code needs at least one codeword")
        V = words[0]
        return cls(V.field, V.n, V.dim, words)

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self) -> int:
        return len(self.codewords)

    def __iter__(self):
        return iter(self.codewords)

    def __contains__(self, V) -> bool:
        return V in self._members

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.codewords)

    def require(self, V: Subspace) -> None:
        if V not in self:
            raise NotACodeword("subspace is not a codeword of this code")

    @cached_property
    def d(self) -> int | None:
        """Minimum injection distance (half the minimum subspace distance)."""
        if len(self) < 2:
            return None
        words = self.codewords
        return min(injection_distance(words[i], words[j]) for i in range(len(words)) for j in range(i))

    @property
    def d_inj(self) -> int | None:
        return self.d

    @property
    def t(self) -> int | None:
        return None if self.d is None else (self.d - 1) // 2

    def subcode(self, keep: Callable[[Subspace], bool] | Iterable[int]) -> "Cdc":
        if callable(keep):
            words = [V for V in self.codewords if keep(V)]
        else:
            words = [self.codewords[i] for i in keep]
        return Cdc.from_codewords(words)


def lift_code(code: RankCode) -> Cdc:
    """I(C) = rowspace(I_m | C) for every codeword; an m x n' code lands in E_m(q, m + n')."""
    words = tuple(sorted((lift(C) for C in code.codewords), key=lambda V: V.basis))
    return Cdc(code.field, code.m + code.n, code.m, words, origin=code)


def kk_code(q: int, r: int, n: int, d: int) -> Cdc:
    """Lifting of the Gabidulin code of r x (n-r) matrices with minimum rank distance d (r <= n-r)."""
    if not 1 <= r <= n - r:
        raise ParameterViolation(f"need 1 <= r <= n - r, got r={r}, n={n}")
    gab = gabidulin_build(GabidulinSpec(q, n - r, r, r - d + 1))
    return lift_code(gab.transpose())


def unlift(V: Subspace) -> MatrixGF | None:
    """The matrix C with V = I(C), or None if V is not a lifting."""
    r = V.dim
    if V.pivots != tuple(range(r)):
        return None
    return MatrixGF(V.field, r, V.n - r, tuple(row[r:] for row in V.basis))


# -- codebook files -----------------------------------------------------------

class CodebookFormatError(ParameterViolation):
    """Malformed codebook file."""


def _blocks(text: str) -> list[list[str]]:
    blocks, cur = [], []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            cur.append(line)
        elif cur:
            blocks.append(cur)
            cur = []
    if cur:
        blocks.append(cur)
    return blocks


def _parse_block(lines: Sequence[str], q: int, rows: int, cols: int, what: str) -> tuple[tuple[int, ...], ...]:
    try:
        mat = tuple(tuple(int(tok) for tok in line.split()) for line in lines)
    except ValueError as exc:
        raise CodebookFormatError(f"{what}: non-integer entry") from exc
    if len(mat) != rows or any(len(row) != cols for row in mat):
        raise CodebookFormatError(f"{what}: expected a {rows}x{cols} block")
    if any(not 0 <= x < q for row in mat for x in row):
        raise CodebookFormatError(f"{what}: entry outside GF({q})")
    return mat


def _header(lines: list[list[str]]) -> tuple[list[int], list[list[str]]]:
    if not lines:
        raise CodebookFormatError("empty codebook file")
    head = lines[0][0].split()
    try:
        values = [int(x) for x in head]
    except ValueError as exc:
        raise CodebookFormatError("header must be four integers") from exc
    if len(values) != 4:
        raise CodebookFormatError("header must be four integers")
    body = [lines[0][1:]] if len(lines[0]) > 1 else []
    return values, body + lines[1:]


def format_codebook(code: RankCode) -> str:
    parts = [f"{code.q} {code.m} {code.n} {len(code)}"]
    parts += [format_matrix(C.rows) for C in code.codewords]
    return "\n\n".join(parts) + "\n"


def parse_codebook(text: str) -> RankCode:
    """Header ``q m n N`` followed by N blank-line separated m x n blocks."""
    (q, m, n, count), blocks = _header(_blocks(text))
    field = field_of_order(q)
    if len(blocks) != count:
        raise CodebookFormatError(f"header announces {count} codewords, file has {len(blocks)}")
    words = [MatrixGF(field, m, n, _parse_block(b, q, m, n, f"codeword {i}")) for i, b in enumerate(blocks)]
    if len(set(words)) != len(words):
        raise CodebookFormatError("duplicate codewords")
    return RankCode.from_codewords(words)


def format_cdc(cdc: Cdc) -> str:
    parts = [f"{cdc.q} {cdc.n} {cdc.r} {len(cdc)}"]
    parts += [format_matrix(V.basis) for V in cdc.codewords]
    return "\n\n".join(parts) + "\n"


def parse_cdc(text: str) -> Cdc:
    """Header ``q n r N`` followed by N blocks, each an r x n basis."""
    (q, n, r, count), blocks = _header(_blocks(text))
    field = field_of_order(q)
    if len(blocks) != count:
        raise CodebookFormatError(f"header announces {count} codewords, file has {len(blocks)}")
    words = []
    for i, b in enumerate(blocks):
        V = Subspace.span(field, n, _parse_block(b, q, r, n, f"codeword {i}"))
        if V.dim != r:
            raise CodebookFormatError(f"codeword {i}: rows are not linearly independent")
        words.append(V)
    if len(set(words)) != len(words):
        raise CodebookFormatError("duplicate codewords")
    return Cdc.from_codewords(words)


def read_codebook(path: str | Path) -> RankCode:
    return parse_codebook(Path(path).read_text())


def write_codebook(path: str | Path, code: RankCode) -> None:
    Path(path).write_text(format_codebook(code))


def read_cdc(path: str | Path) -> Cdc:
    return parse_cdc(Path(path).read_text())


def write_cdc(path: str | Path, cdc: Cdc) -> None:
    Path(path).write_text(format_cdc(cdc))
