"""Channel samplers, bounded distance decoders, exhaustive DEP oracles and Monte Carlo.

Matrices are indexed by their row-major entries read as a base-q number (first
entry most significant); subspaces by their position in
:class:`~ranklab.enumeration.SubspaceUniverse`.  The batch samplers and the
decode tables work on those indices so that a Monte Carlo block is a handful
of numpy operations.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Union

import numpy as np
from scipy.stats import binomtest

from .codes import Cdc, RankCode
from .dep import NO_OUTPUT
from .enumeration import check_budget, matrices_of_rank, matrices_with_row_space, rank_table, subspaces, universe
from .errors import AmbiguousRadius, NoValidOutput, ParameterViolation
from .gf import FieldSpec, MatrixGF, Subspace, injection_distance, subspace_distance


# -- channel descriptions ---------------------------------------------------------

@dataclass(frozen=True)
class RowSpaceChannel:
    """Additive error drawn uniformly among matrices with row space U."""

    U: Subspace


@dataclass(frozen=True)
class ColumnSpaceChannel:
    """Additive error drawn uniformly among matrices with column space V."""

    V: Subspace


@dataclass(frozen=True)
class RankChannel:
    """Additive error drawn uniformly among matrices of rank u."""

    u: int


@dataclass(frozen=True)
class OperatorChannel:
    """eps injected and rho erased dimensions; output uniform among the admissible subspaces."""

    eps: int
    rho: int

    @classmethod
    def from_uv(cls, r: int, u: int, v: int) -> "OperatorChannel":
        """Output of dimension v at subspace distance u from an r-dimensional input."""
        if (u + v - r) % 2:
            raise NoValidOutput(f"u + v - r must be even; got u={u}, v={v}, r={r}")
        eps = (u + v - r) // 2
        return cls(eps, u - eps)

    @classmethod
    def from_mu_v(cls, r: int, mu: int, v: int) -> "OperatorChannel":
        """Output of dimension v at injection distance mu from an r-dimensional input."""
        return cls.from_uv(r, 2 * mu - abs(v - r), v)

    def output_dim(self, r: int) -> int:
        return r + self.eps - self.rho

    @property
    def u(self) -> int:
        return self.eps + self.rho

    @property
    def mu(self) -> int:
        return max(self.eps, self.rho)


Channel = Union[RowSpaceChannel, ColumnSpaceChannel, RankChannel, OperatorChannel]


# -- index helpers -------------------------------------------------------------------

def _tables(field: FieldSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return _np_tables(field.q)


@lru_cache(maxsize=None)
def _np_tables(q: int):
    from .gf import field_of_order

    f = field_of_order(q)
    if f.add_table is None:
        raise ParameterViolation(f"vectorised sampling needs q <= 256, got {q}")
    return np.array(f.add_table, dtype=np.int64), np.array(f.mul_table, dtype=np.int64), np.array(f.sub_table, dtype=np.int64)


def _weights(q: int, k: int) -> np.ndarray:
    return q ** np.arange(k - 1, -1, -1, dtype=np.int64)


def matrix_index(A: MatrixGF) -> int:
    q = A.field.q
    idx = 0
    for row in A.rows:
        for x in row:
            idx = idx * q + x
    return idx


def matrix_from_index(field: FieldSpec, m: int, n: int, idx: int) -> MatrixGF:
    q = field.q
    flat = [0] * (m * n)
    for k in range(m * n - 1, -1, -1):
        idx, flat[k] = divmod(idx, q)
    return MatrixGF(field, m, n, tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(m)))


def _digits(q: int, idx: np.ndarray, k: int) -> np.ndarray:
    """(size, k) array of base-q digits, most significant first."""
    return (idx[:, None] // _weights(q, k)[None, :]) % q


def _matmul(field: FieldSpec, F: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Batch product of (size, m, u) by a fixed (u, n) matrix over the field."""
    add, mul, _ = _tables(field)
    size, m, u = F.shape
    out = np.zeros((size, m, B.shape[1]), dtype=np.int64)
    for k in range(u):
        out = add[out, mul[F[:, :, k:k + 1], B[k][None, None, :]]]
    return out


# -- samplers ----------------------------------------------------------------------

def _full_rank_batch(field: FieldSpec, m: int, u: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """(size, m, u) uniform matrices of rank min(m, u), by rejection."""
    q = field.q
    out = np.empty((size, m, u), dtype=np.int64)
    full = min(m, u)
    if m == 0 or u == 0:
        return out
    ranks = rank_table(field, m, u)
    w = _weights(q, m * u)
    filled = 0
    while filled < size:
        want = size - filled
        draw = rng.integers(0, q, size=(max(want, 16), m * u), dtype=np.int64)
        ok = draw[ranks[draw @ w] == full][:want]
        out[filled:filled + len(ok)] = ok.reshape(-1, m, u)
        filled += len(ok)
    return out


def sample_errors_with_row_space(U: Subspace, m: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Matrix indices of ``size`` errors uniform over {E : row space of E = U}."""
    if U.dim > m:
        raise ParameterViolation(f"no {m}-row matrix has a row space of dimension {U.dim}")
    F = _full_rank_batch(U.field, m, U.dim, size, rng)
    B = np.array(U.basis, dtype=np.int64).reshape(U.dim, U.n)
    E = _matmul(U.field, F, B)
    return E.reshape(size, -1) @ _weights(U.field.q, m * U.n)


def sample_error_with_row_space(U: Subspace, m: int, rng: np.random.Generator) -> MatrixGF:
    idx = int(sample_errors_with_row_space(U, m, 1, rng)[0])
    return matrix_from_index(U.field, m, U.n, idx)


def _uniform_subspace_batch(field: FieldSpec, n: int, u: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Universe indices of uniform u-dimensional subspaces of GF(q)^n."""
    uni = universe(field, n)
    F = _full_rank_batch(field, u, n, size, rng)
    cur = np.full(size, uni.zero, dtype=np.int64)
    w = _weights(field.q, n)
    for i in range(u):
        cur = uni.span_add[cur, F[:, i, :] @ w]
    return cur


def sample_operator_outputs(V_in: Subspace, eps: int, rho: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Universe indices of outputs uniform over dim r+eps-rho subspaces at subspace distance eps+rho.

    A uniform (r-rho)-subspace W of V_in is extended by eps uniform vectors;
    the draw is kept iff it has the right dimension and meets V_in exactly in W.
    """
    r, n, field = V_in.dim, V_in.n, V_in.field
    if eps < 0 or rho < 0 or rho > r or eps > n - r:
        raise NoValidOutput(f"no output with eps={eps}, rho={rho} from a {r}-dimensional input in dimension {n}")
    uni = universe(field, n)
    q = field.q
    v, u = r + eps - rho, eps + rho
    ref = uni.index[V_in]
    basis = np.array(V_in.basis, dtype=np.int64).reshape(r, n)
    w = _weights(q, n)
    out = np.empty(size, dtype=np.int64)
    filled = 0
    while filled < size:
        want = max(size - filled, 16)
        G = _full_rank_batch(field, r - rho, r, want, rng)
        W = _matmul(field, G, basis) if r - rho else np.zeros((want, 0, n), dtype=np.int64)
        cur = np.full(want, uni.zero, dtype=np.int64)
        for i in range(r - rho):
            cur = uni.span_add[cur, W[:, i, :] @ w]
        for _ in range(eps):
            cur = uni.span_add[cur, rng.integers(0, q**n, size=want, dtype=np.int64)]
        ok = cur[(uni.dims[cur] == v) & (uni.subspace_distance[cur, ref] == u)][: size - filled]
        out[filled:filled + len(ok)] = ok
        filled += len(ok)
    return out


def sample_operator_output(V_in: Subspace, eps: int, rho: int, rng: np.random.Generator) -> Subspace:
    idx = int(sample_operator_outputs(V_in, eps, rho, 1, rng)[0])
    return universe(V_in.field, V_in.n).subspaces[idx]


# -- decoders ------------------------------------------------------------------------

@dataclass(frozen=True)
class Decoded:
    codeword: object


@dataclass(frozen=True)
class Failure:
    def __repr__(self) -> str:
        return "Failure"


FAILURE = Failure()


def _nearest(candidates: list[tuple[int, object]], radius: int):
    inside = [(dist, c) for dist, c in candidates if dist <= radius]
    if not inside:
        return FAILURE
    best = min(dist for dist, _ in inside)
    winners = [c for dist, c in inside if dist == best]
    if len(winners) > 1:
        raise AmbiguousRadius(f"{len(winners)} codewords tie at distance {best} within radius {radius}")
    return Decoded(winners[0])


def bdd_rank(code: RankCode, Y: MatrixGF, t: int | None = None):
    """Nearest codeword within rank distance t, else FAILURE."""
    t = code.t if t is None else t
    if t is None:
        t = 0
    return _nearest([((Y - D).rank, D) for D in code.codewords], t)


def bdd_subspace(cdc: Cdc, V: Subspace, radius: int | None = None):
    """Nearest codeword within subspace distance ``radius`` (default d - 1)."""
    radius = (cdc.d - 1 if cdc.d is not None else 0) if radius is None else radius
    return _nearest([(subspace_distance(V, D), D) for D in cdc.codewords], radius)


def bdd_injection(cdc: Cdc, V: Subspace, t: int | None = None):
    """Nearest codeword within injection distance t (default floor((d-1)/2))."""
    t = (cdc.t if cdc.t is not None else 0) if t is None else t
    return _nearest([(injection_distance(V, D), D) for D in cdc.codewords], t)


def _rank_decode_table(code: RankCode, t: int) -> np.ndarray:
    """decoded codeword position for every received matrix index, -1 for failure."""
    q, m, n = code.q, code.m, code.n
    check_budget(q ** (m * n) * len(code), "rank decode table")
    ranks = rank_table(code.field, m, n)
    _, _, sub = _tables(code.field)
    w = _weights(q, m * n)
    ys = _digits(q, np.arange(q ** (m * n), dtype=np.int64), m * n)
    best = np.full(q ** (m * n), t + 1, dtype=np.int64)
    out = np.full(q ** (m * n), -1, dtype=np.int64)
    tie = np.zeros(q ** (m * n), dtype=bool)
    for k, D in enumerate(code.codewords):
        dvec = np.array([x for row in D.rows for x in row], dtype=np.int64)
        dist = ranks[sub[ys, dvec[None, :]] @ w]
        closer = dist < best
        tie = np.where(closer, False, tie | (dist == best) & (dist <= t))
        out = np.where(closer, k, out)
        best = np.minimum(best, dist)
    if tie.any():
        raise AmbiguousRadius(f"codewords tie within radius {t}")
    return out


def _subspace_decode_table(cdc: Cdc, radius: int, metric: str) -> np.ndarray:
    uni = universe(cdc.field, cdc.n)
    dist_mat = uni.subspace_distance if metric == "subspace" else uni.injection_distance
    cols = np.array([uni.index[V] for V in cdc.codewords], dtype=np.int64)
    dist = dist_mat[:, cols]
    best = dist.min(axis=1)
    hits = (dist == best[:, None]).sum(axis=1)
    if np.any((best <= radius) & (hits > 1)):
        raise AmbiguousRadius(f"codewords tie within radius {radius}")
    return np.where(best <= radius, dist.argmin(axis=1), -1)


# -- exhaustive oracles ----------------------------------------------------------------

def _rank_errors(code: RankCode, channel: Channel):
    m, n, field = code.m, code.n, code.field
    if isinstance(channel, RowSpaceChannel):
        return matrices_with_row_space(channel.U, m)
    if isinstance(channel, ColumnSpaceChannel):
        return (E.T for E in matrices_with_row_space(channel.V, n))
    if isinstance(channel, RankChannel):
        return matrices_of_rank(field, m, n, channel.u)
    raise ParameterViolation(f"{type(channel).__name__} does not act on matrices")


def _rank_outcomes(code: RankCode, C: MatrixGF, channel: Channel, t: int | None) -> tuple[int, int, int]:
    code.require(C)
    ok = err = fail = 0
    for E in _rank_errors(code, channel):
        res = bdd_rank(code, C + E, t)
        if res is FAILURE:
            fail += 1
        elif res.codeword == C:
            ok += 1
        else:
            err += 1
    return ok, err, fail


def _subspace_outcomes(cdc: Cdc, C: Subspace, channel: OperatorChannel, decoder: str, radius: int | None):
    cdc.require(C)
    v, u = channel.output_dim(cdc.r), channel.u
    ok = err = fail = 0
    decode = bdd_subspace if decoder == "subspace" else bdd_injection
    for V in subspaces(cdc.field, cdc.n, v):
        if subspace_distance(V, C) != u:
            continue
        res = decode(cdc, V, radius)
        if res is FAILURE:
            fail += 1
        elif res.codeword == C:
            ok += 1
        else:
            err += 1
    return ok, err, fail


def exhaustive_dep(code: RankCode | Cdc, C, channel: Channel, decoder: str | None = None, radius: int | None = None) -> Fraction:
    """(# outputs decoded to a wrong codeword) / (# outputs in the conditioning class).

    ``decoder`` is "rank" for matrix codes and "subspace" or "injection" for
    CDCs; ``radius`` defaults to the decoder's guaranteed radius.
    """
    if isinstance(code, Cdc):
        if not isinstance(channel, OperatorChannel):
            raise ParameterViolation("CDCs need an operator channel")
        if channel.eps < 0 or channel.rho < 0 or channel.rho > code.r or channel.eps > code.n - code.r:
            return NO_OUTPUT
        ok, err, fail = _subspace_outcomes(code, C, channel, decoder or "subspace", radius)
    else:
        ok, err, fail = _rank_outcomes(code, C, channel, radius)
    total = ok + err + fail
    return NO_OUTPUT if total == 0 else Fraction(err, total)


def decodable_set(cdc: Cdc, v: int, decoder: str, radius: int | None = None) -> dict[Subspace, Subspace]:
    """Every v-dimensional subspace the decoder maps to a codeword, with that codeword."""
    decode = bdd_subspace if decoder == "subspace" else bdd_injection
    out = {}
    for V in subspaces(cdc.field, cdc.n, v):
        res = decode(cdc, V, radius)
        if res is not FAILURE:
            out[V] = res.codeword
    return out


def radius_pairs(cdc: Cdc, v: int, metric: str, radius: int) -> frozenset:
    """{(V, D) : dim V = v, D a codeword within ``radius`` of V} in the given metric.

    Unlike :func:`decodable_set` this is defined for any radius, ties included.
    """
    dist = subspace_distance if metric == "subspace" else injection_distance
    return frozenset((V, D) for V in subspaces(cdc.field, cdc.n, v) for D in cdc.codewords if dist(V, D) <= radius)


# -- Monte Carlo ---------------------------------------------------------------------

THREE_SIGMA = math.erf(3 / math.sqrt(2))


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(k, n).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


@dataclass(frozen=True)
class SimConfig:
    seed: int
    trials: int
    workers: int = 1
    block_size: int = 8192
    confidence: float = 0.95

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterViolation("trials must be at least 1")
        if self.workers < 1 or self.block_size < 1:
            raise ParameterViolation("workers and block_size must be positive")
        if not 0 <= self.seed < 1 << 64:
            raise ParameterViolation("seed must fit in 64 bits")


@dataclass(frozen=True)
class SimResult:
    trials: int
    successes: int
    errors: int
    failures: int
    ci_low: float
    ci_high: float
    confidence: float
    seed: int = dc_field(compare=True)

    @property
    def estimate(self) -> float:
        return self.errors / self.trials

    @property
    def estimate_exact(self) -> Fraction:
        return Fraction(self.errors, self.trials)

    def interval(self, confidence: float) -> tuple[float, float]:
        return wilson_interval(self.errors, self.trials, confidence)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "errors": self.errors,
            "failures": self.failures,
            "estimate": self.estimate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "confidence": self.confidence,
            "seed": self.seed,
        }


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Counter-based stream for one fixed-size block of trials."""
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, block, 0]))


class _RankTrial:
    def __init__(self, code: RankCode, C: MatrixGF, channel: Channel, t: int | None):
        code.require(C)
        self.code, self.channel = code, channel
        t = code.t if t is None else t
        self.table = _rank_decode_table(code, 0 if t is None else t)
        self.sent = code.codewords.index(C)
        self.cvec = np.array([x for row in C.rows for x in row], dtype=np.int64)
        self.q, self.m, self.n = code.q, code.m, code.n
        if isinstance(channel, RankChannel) and not 0 <= channel.u <= min(self.m, self.n):
            raise ParameterViolation(f"error rank u={channel.u} out of range")

    def errors(self, size: int, rng: np.random.Generator) -> np.ndarray:
        ch, field = self.channel, self.code.field
        if isinstance(ch, RowSpaceChannel):
            return sample_errors_with_row_space(ch.U, self.m, size, rng)
        if isinstance(ch, ColumnSpaceChannel):
            idx = sample_errors_with_row_space(ch.V, self.n, size, rng)
            E = _digits(self.q, idx, self.m * self.n).reshape(size, self.n, self.m).transpose(0, 2, 1)
            return E.reshape(size, -1) @ _weights(self.q, self.m * self.n)
        if isinstance(ch, RankChannel):
            rows = _uniform_subspace_batch(field, self.n, ch.u, size, rng)
            F = _full_rank_batch(field, self.m, ch.u, size, rng)
            B = self._bases[rows]
            add, mul, _ = _tables(field)
            E = np.zeros((size, self.m, self.n), dtype=np.int64)
            for k in range(ch.u):
                E = add[E, mul[F[:, :, k:k + 1], B[:, k:k + 1, :]]]
            return E.reshape(size, -1) @ _weights(self.q, self.m * self.n)
        raise ParameterViolation(f"{type(ch).__name__} does not act on matrices")

    @cached_property
    def _bases(self) -> np.ndarray:
        """RREF basis of every subspace, zero-padded to n rows."""
        uni = universe(self.code.field, self.n)
        out = np.zeros((len(uni), self.n, self.n), dtype=np.int64)
        for i, S in enumerate(uni.subspaces):
            if S.dim:
                out[i, :S.dim] = S.basis
        return out

    def run(self, size: int, rng: np.random.Generator) -> tuple[int, int, int]:
        add, _, _ = _tables(self.code.field)
        E = _digits(self.q, self.errors(size, rng), self.m * self.n)
        Y = add[self.cvec[None, :], E] @ _weights(self.q, self.m * self.n)
        dec = self.table[Y]
        ok = int(np.sum(dec == self.sent))
        fail = int(np.sum(dec < 0))
        return ok, size - ok - fail, fail


class _SubspaceTrial:
    def __init__(self, cdc: Cdc, C: Subspace, channel: OperatorChannel, decoder: str, radius: int | None):
        cdc.require(C)
        if not isinstance(channel, OperatorChannel):
            raise ParameterViolation("CDCs need an operator channel")
        if decoder == "subspace":
            radius = (cdc.d - 1 if cdc.d is not None else 0) if radius is None else radius
        elif decoder == "injection":
            radius = (cdc.t if cdc.t is not None else 0) if radius is None else radius
        else:
            raise ParameterViolation(f"unknown decoder {decoder!r}")
        self.table = _subspace_decode_table(cdc, radius, decoder)
        self.sent = cdc.codewords.index(C)
        self.C, self.channel = C, channel
        # fail fast on impossible channel parameters
        sample_operator_outputs(C, channel.eps, channel.rho, 1, np.random.default_rng(0))

    def run(self, size: int, rng: np.random.Generator) -> tuple[int, int, int]:
        out = sample_operator_outputs(self.C, self.channel.eps, self.channel.rho, size, rng)
        dec = self.table[out]
        ok = int(np.sum(dec == self.sent))
        fail = int(np.sum(dec < 0))
        return ok, size - ok - fail, fail


def estimate_dep(config: SimConfig, channel: Channel, code: RankCode | Cdc, C, decoder: str | None = None,
                 radius: int | None = None) -> SimResult:
    """Monte Carlo DEP estimate; identical for every worker count at a fixed seed."""
    if isinstance(code, Cdc):
        trial = _SubspaceTrial(code, C, channel, decoder or "subspace", radius)
    else:
        trial = _RankTrial(code, C, channel, radius)
    bs = config.block_size
    blocks = [(b, min(bs, config.trials - b * bs)) for b in range(-(-config.trials // bs))]

    def work(item):
        b, size = item
        return trial.run(size, block_rng(config.seed, b))

    if config.workers == 1:
        parts = [work(item) for item in blocks]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(work, blocks))
    ok, err, fail = (sum(p[i] for p in parts) for i in range(3))
    lo, hi = wilson_interval(err, config.trials, config.confidence)
    return SimResult(config.trials, ok, err, fail, lo, hi, config.confidence, config.seed)
