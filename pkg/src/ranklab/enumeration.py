"""Exhaustive streams over matrix and subspace spaces, guarded by an item budget.

These streams are the substrate of every brute-force oracle in the package.
The budget defaults to 2**24 items and can be overridden with the
``RANKLAB_BUDGET`` environment variable.
"""

from __future__ import annotations

import os
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator

import numpy as np

from .errors import BudgetExceeded, ParameterViolation
from .gf import FieldSpec, MatrixGF, Subspace, rref

DEFAULT_BUDGET = 1 << 24


def get_budget() -> int:
    env = os.environ.get("RANKLAB_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def check_budget(count: int, what: str) -> None:
    budget = get_budget()
    if count > budget:
        raise BudgetExceeded(f"{what}: {count} items exceeds budget {budget}")


def _count_subspaces(q: int, n: int, r: int) -> int:
    if r < 0 or r > n:
        return 0
    num = den = 1
    for i in range(r):
        num *= q**n - q**i
        den *= q**r - q**i
    return num // den


def _alpha(q: int, m: int, u: int) -> int:
    if m < 0:
        return 0
    out = 1
    for i in range(u):
        out *= q**m - q**i
    return out


def subspaces(field: FieldSpec, n: int, r: int) -> Iterator[Subspace]:
    """Every r-dimensional subspace of GF(q)^n, in lexicographic order of RREF basis."""
    if not 0 <= r <= n:
        return
    check_budget(_count_subspaces(field.q, n, r), f"subspaces({n},{r})")
    out = []
    for pivots in combinations(range(n), r):
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pivots]
        for vals in product(range(field.q), repeat=len(free)):
            rows = [[0] * n for _ in range(r)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), x in zip(free, vals):
                rows[i][j] = x
            out.append(tuple(tuple(row) for row in rows))
    out.sort()
    for basis in out:
        yield Subspace(field, n, basis)


def all_subspaces(field: FieldSpec, n: int) -> Iterator[Subspace]:
    for r in range(n + 1):
        yield from subspaces(field, n, r)


def matrices(field: FieldSpec, m: int, n: int) -> Iterator[MatrixGF]:
    """All q^(mn) matrices, lexicographic in the row-major entries."""
    check_budget(field.q ** (m * n), f"matrices({m},{n})")
    for flat in product(range(field.q), repeat=m * n):
        yield MatrixGF(field, m, n, tuple(flat[i * n:(i + 1) * n] for i in range(m)))


def full_rank_matrices(field: FieldSpec, m: int, u: int) -> Iterator[MatrixGF]:
    """All m x u matrices of rank u (there are alpha(m, u) of them)."""
    for A in matrices(field, m, u):
        if A.rank == u:
            yield A


def matrices_with_row_space(U: Subspace, m: int) -> Iterator[MatrixGF]:
    """All m x n matrices whose row space is exactly U, as F @ basis(U) for full-rank F."""
    if U.dim > m:
        return
    check_budget(U.field.q ** (m * U.dim), f"matrices_with_row_space(dim {U.dim}, m={m})")
    B = U.matrix()
    out = [F @ B for F in full_rank_matrices(U.field, m, U.dim)]
    out.sort(key=lambda A: A.rows)
    yield from out


def matrices_of_rank(field: FieldSpec, m: int, n: int, u: int) -> Iterator[MatrixGF]:
    for A in matrices(field, m, n):
        if A.rank == u:
            yield A


class SubspaceUniverse:
    """Index tables over every subspace of GF(q)^n.

    Vectors of GF(q)^n are indexed by their base-q value with the first
    coordinate most significant.  ``span_add[i, x]`` is the index of
    ``subspace_i + span{x}``; it turns row-by-row span computations into table
    lookups for the counting DP and the vectorised samplers.
    """

    def __init__(self, field: FieldSpec, n: int):
        q = field.q
        total = sum(_count_subspaces(q, n, r) for r in range(n + 1))
        check_budget(total * q**n, f"subspace universe of GF({q})^{n}")
        self.field = field
        self.n = n
        self.subspaces = list(all_subspaces(field, n))
        self.index = {S: i for i, S in enumerate(self.subspaces)}
        self.dims = np.array([S.dim for S in self.subspaces], dtype=np.int64)
        self.vectors = list(product(range(q), repeat=n))
        self.weights = np.array([q ** (n - 1 - j) for j in range(n)], dtype=np.int64)
        self.span_add = np.empty((len(self.subspaces), q**n), dtype=np.int32)
        for i, S in enumerate(self.subspaces):
            for x, vec in enumerate(self.vectors):
                basis, _ = rref(field, S.basis + (vec,), n)
                self.span_add[i, x] = i if len(basis) == S.dim else self.index[Subspace(field, n, basis)]
        self.zero = self.index[Subspace.zero(field, n)]

    def __len__(self) -> int:
        return len(self.subspaces)

    def vector_index(self, vec) -> int:
        return int(np.dot(np.asarray(vec, dtype=np.int64), self.weights))

    def span_of(self, vector_indices) -> int:
        i = self.zero
        for x in vector_indices:
            i = int(self.span_add[i, x])
        return i

    def basis_indices(self, i: int) -> list[int]:
        return [self.vector_index(b) for b in self.subspaces[i].basis]

    @property
    def sum_table(self) -> np.ndarray:
        """``sum_table[i, j]`` = index of subspace_i + subspace_j."""
        if not hasattr(self, "_sum_table"):
            S = len(self)
            table = np.empty((S, S), dtype=np.int32)
            idx = np.arange(S)
            for j in range(S):
                cur = idx
                for x in self.basis_indices(j):
                    cur = self.span_add[cur, x]
                table[:, j] = cur
            self._sum_table = table
        return self._sum_table

    @property
    def subspace_distance(self) -> np.ndarray:
        if not hasattr(self, "_ds"):
            s = self.dims[self.sum_table]
            self._ds = 2 * s - self.dims[:, None] - self.dims[None, :]
        return self._ds

    @property
    def injection_distance(self) -> np.ndarray:
        if not hasattr(self, "_di"):
            s = self.dims[self.sum_table]
            self._di = s - np.minimum(self.dims[:, None], self.dims[None, :])
        return self._di


@lru_cache(maxsize=None)
def universe(field: FieldSpec, n: int) -> SubspaceUniverse:
    return SubspaceUniverse(field, n)


def rank_table(field: FieldSpec, m: int, n: int) -> np.ndarray:
    """Rank of every m x n matrix, indexed by the base-(q^n) value of its rows (row 0 first)."""
    return _rank_table(field, m, n)


@lru_cache(maxsize=None)
def _rank_table(field: FieldSpec, m: int, n: int) -> np.ndarray:
    check_budget(field.q ** (m * n), f"rank table {m}x{n}")
    if n == 0 or m == 0:
        return np.zeros(field.q ** (m * n), dtype=np.int8)
    uni = universe(field, n)
    ids = np.array([uni.zero], dtype=np.int64)
    for _ in range(m):
        ids = uni.span_add[ids[:, None], np.arange(field.q**n)[None, :]].reshape(-1)
    return uni.dims[ids].astype(np.int8)


def require_nonnegative(**kwargs) -> None:
    for k, v in kwargs.items():
        if v < 0:
            raise ParameterViolation(f"{k} must be nonnegative, got {v}")
