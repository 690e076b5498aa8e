"""Finite fields GF(p^e), dense matrices over them and canonical subspaces.

Field elements are integers ``0 <= a < q`` whose base-``p`` digits are the
coefficients (lowest degree first) of a polynomial reduced modulo a fixed
irreducible polynomial.  For a prime field this is ordinary arithmetic mod p.

Subspaces of GF(q)^n are stored by their reduced row echelon basis, which is
unique, so equality and hashing of :class:`Subspace` are structural.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Sequence

from .errors import (
    AmbientMismatch,
    DimensionMismatch,
    NonPrimeCharacteristic,
    ParameterViolation,
    UnsupportedOrder,
)

MAX_ORDER = 1 << 16
_TABLE_ORDER = 256  # full add/mul tables below this order


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e``; raise if q is not a prime power."""
    if q < 2:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    e, rest = 0, q
    while rest % p == 0:
        rest //= p
        e += 1
    if rest != 1:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return p, e


# -- polynomial helpers over GF(p); coefficient lists, lowest degree first ----

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        _poly_trim(a)
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_mod(out, f, p)


def _monic_polys(p: int, degree: int):
    """Monic polynomials of a given degree, in increasing order of their base-p code."""
    for code in range(p**degree):
        coeffs = [(code // p**i) % p for i in range(degree)]
        yield coeffs + [1]


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree at most deg(f)/2."""
    deg = len(f) - 1
    if deg < 1:
        return False
    for k in range(1, deg // 2 + 1):
        for g in _monic_polys(p, k):
            if not _poly_mod(f, g, p):
                return False
    return True


def _lowest_irreducible(p: int, e: int) -> tuple[int, ...]:
    for f in _monic_polys(p, e):
        if f[0] != 0 and is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("an irreducible polynomial exists for every degree")


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldSpec:
    """The finite field GF(p^e).

    Build instances with :func:`field_create`; two instances with the same
    ``(p, e)`` compare equal.
    """

    def __init__(self, p: int, e: int):
        self.p = p
        self.e = e
        self.q = p**e
        # prime fields need no reduction polynomial
        self.reduction: tuple[int, ...] | None = None if e == 1 else _lowest_irreducible(p, e)
        self.primitive = self._find_primitive()
        self.exp, self.log = self._build_log_tables()
        if self.q <= _TABLE_ORDER:
            q = self.q
            self.add_table = [[self._add(a, b) for b in range(q)] for a in range(q)]
            self.mul_table = [[self._mul(a, b) for b in range(q)] for a in range(q)]
            self.neg_table = [self._neg(a) for a in range(q)]
            self.sub_table = [[self.add_table[a][self.neg_table[b]] for b in range(q)] for a in range(q)]
        else:
            self.add_table = self.mul_table = self.sub_table = self.neg_table = None

    # -- element <-> polynomial coefficients --
    def digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.e)]

    def from_digits(self, coeffs: Sequence[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def _add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        da, db = self.digits(a), self.digits(b)
        return self.from_digits([x + y for x, y in zip(da, db)])

    def _neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.e == 1:
            return -a % self.p
        return self.from_digits([-x for x in self.digits(a)])

    def _mul_poly(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        prod = _poly_mulmod(_poly_trim(self.digits(a)), _poly_trim(self.digits(b)), self.reduction, self.p)
        return self.from_digits(prod)

    def _mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]

    def _pow_poly(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self._mul_poly(result, base)
            base = self._mul_poly(base, base)
            k >>= 1
        return result

    def _find_primitive(self) -> int:
        if self.q == 2:
            return 1
        order = self.q - 1
        factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(self._pow_poly(g, order // f) != 1 for f in factors):
                return g
        raise AssertionError("the multiplicative group of a finite field is cyclic")

    def _build_log_tables(self) -> tuple[list[int], list[int]]:
        exp = [0] * (self.q - 1)
        log = [0] * self.q
        x = 1
        for i in range(self.q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, self.primitive)
        return exp, log

    # -- public arithmetic --
    def add(self, a: int, b: int) -> int:
        if self.add_table is not None:
            return self.add_table[a][b]
        return self._add(a, b)

    def neg(self, a: int) -> int:
        return self._neg(a)

    def sub(self, a: int, b: int) -> int:
        if self.sub_table is not None:
            return self.sub_table[a][b]
        return self._add(a, self._neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.mul_table is not None:
            return self.mul_table[a][b]
        return self._mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        return self.exp[(self.log[a] * k) % (self.q - 1)]

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self) -> int:
        return hash((self.p, self.e))

    def __repr__(self) -> str:
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field_create(p: int, e: int = 1) -> FieldSpec:
    """Return GF(p^e) with the lowest irreducible reduction polynomial."""
    if not is_prime(p):
        raise NonPrimeCharacteristic(f"characteristic {p} is not prime")
    if e < 1:
        raise ParameterViolation("extension degree must be >= 1")
    if p**e > MAX_ORDER:
        raise UnsupportedOrder(f"q = {p}^{e} exceeds the table limit {MAX_ORDER}")
    return FieldSpec(p, e)


def field_of_order(q: int) -> FieldSpec:
    return field_create(*prime_power(q))


# -- row reduction ------------------------------------------------------------

def _pack(row: Sequence[int]) -> int:
    x = 0
    for v in row:
        x = (x << 1) | v
    return x


def _unpack(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> (n - 1 - j)) & 1 for j in range(n))


def _rref_gf2(rows: Iterable[Sequence[int]], n: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    basis: list[int] = []  # kept fully reduced, sorted by leading bit
    for r in rows:
        x = _pack(r)
        for b in basis:
            if x ^ b < x:
                x ^= b
        if x:
            lead = x.bit_length()
            basis = [b ^ x if b >> (lead - 1) & 1 else b for b in basis]
            basis.append(x)
    basis.sort(reverse=True)
    pivots = tuple(n - b.bit_length() for b in basis)
    return tuple(_unpack(b, n) for b in basis), pivots


def rref(field: FieldSpec, rows: Iterable[Sequence[int]], n: int) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    if field.q == 2:
        return _rref_gf2(rows, n)
    work = [list(r) for r in rows]
    mul, sub = field.mul, field.sub
    pivots: list[int] = []
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(work)) if work[i][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        lead = work[rank]
        inv = field.inv(lead[col])
        if inv != 1:
            lead = work[rank] = [mul(inv, x) for x in lead]
        for i, row in enumerate(work):
            c = row[col]
            if i != rank and c:
                work[i] = [sub(x, mul(c, y)) for x, y in zip(row, lead)]
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return tuple(tuple(r) for r in work[:rank]), tuple(pivots)


def rank_of_rows(field: FieldSpec, rows: Sequence[Sequence[int]], n: int) -> int:
    if field.q == 2:
        basis: list[int] = []
        for r in rows:
            x = _pack(r)
            for b in basis:
                if x ^ b < x:
                    x ^= b
            if x:
                basis.append(x)
                basis.sort(reverse=True)
        return len(basis)
    return len(rref(field, rows, n)[0])


# -- matrices -----------------------------------------------------------------

@dataclass(frozen=True)
class MatrixGF:
    """An m x n matrix over a finite field; rows are tuples of field elements."""

    field: FieldSpec
    m: int
    n: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.m or any(len(r) != self.n for r in self.rows):
            raise DimensionMismatch(f"rows do not form a {self.m}x{self.n} matrix")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]], n: int | None = None) -> "MatrixGF":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if n is None:
            if not rows:
                raise DimensionMismatch("column count needed for an empty matrix")
            n = len(rows[0])
        for r in rows:
            if any(not 0 <= x < field.q for x in r):
                raise ParameterViolation(f"entry outside GF({field.q})")
        return cls(field, len(rows), n, rows)

    @classmethod
    def zeros(cls, field: FieldSpec, m: int, n: int) -> "MatrixGF":
        return cls(field, m, n, tuple((0,) * n for _ in range(m)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "MatrixGF":
        return cls(field, n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    @property
    def T(self) -> "MatrixGF":
        return MatrixGF(self.field, self.n, self.m, tuple(zip(*self.rows)) if self.m else tuple(() for _ in range(self.n)))

    def _check_same(self, other: "MatrixGF"):
        if self.field != other.field or self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} over {self.field} vs {other.shape} over {other.field}")

    def __add__(self, other: "MatrixGF") -> "MatrixGF":
        self._check_same(other)
        add = self.field.add
        rows = tuple(tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return MatrixGF(self.field, self.m, self.n, rows)

    def __sub__(self, other: "MatrixGF") -> "MatrixGF":
        self._check_same(other)
        sub = self.field.sub
        rows = tuple(tuple(sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return MatrixGF(self.field, self.m, self.n, rows)

    def __neg__(self) -> "MatrixGF":
        neg = self.field.neg
        return MatrixGF(self.field, self.m, self.n, tuple(tuple(neg(a) for a in r) for r in self.rows))

    def __matmul__(self, other: "MatrixGF") -> "MatrixGF":
        if self.field != other.field or self.n != other.m:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        f = self.field
        cols = list(zip(*other.rows)) if other.m else [() for _ in range(other.n)]
        rows = []
        for r in self.rows:
            out = []
            for c in cols:
                acc = 0
                for a, b in zip(r, c):
                    if a and b:
                        acc = f.add(acc, f.mul(a, b))
                out.append(acc)
            rows.append(tuple(out))
        return MatrixGF(f, self.m, other.n, tuple(rows))

    def scale(self, c: int) -> "MatrixGF":
        mul = self.field.mul
        return MatrixGF(self.field, self.m, self.n, tuple(tuple(mul(c, a) for a in r) for r in self.rows))

    @cached_property
    def rank(self) -> int:
        return rank_of_rows(self.field, self.rows, self.n)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def to_text(self) -> str:
        return format_matrix(self.rows)

    def __repr__(self) -> str:
        return f"MatrixGF({self.field!r}, {[list(r) for r in self.rows]})"


def mat_rank(A: MatrixGF) -> int:
    return A.rank


def rank_distance(A: MatrixGF, B: MatrixGF) -> int:
    """d_R(A, B) = rk(A - B)."""
    return (A - B).rank


# -- subspaces ----------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(q)^n held by its reduced row echelon basis."""

    field: FieldSpec
    n: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, field: FieldSpec, n: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        basis, _ = rref(field, vectors, n)
        return cls(field, n, basis)

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field, n, ())

    @classmethod
    def unit(cls, field: FieldSpec, n: int, indices: Iterable[int]) -> "Subspace":
        """Span of the unit vectors e_i for the given (0-based) indices."""
        vecs = [tuple(int(j == i) for j in range(n)) for i in indices]
        return cls.span(field, n, vecs)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis)

    def matrix(self) -> MatrixGF:
        return MatrixGF(self.field, self.dim, self.n, self.basis)

    def _check(self, other: "Subspace"):
        if self.field != other.field or self.n != other.n:
            raise AmbientMismatch(f"GF({self.field.q})^{self.n} vs GF({other.field.q})^{other.n}")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.n, self.basis + other.basis)

    def __and__(self, other: "Subspace") -> "Subspace":
        return subspace_sum_intersect(self, other)[1]

    def __contains__(self, vec: Sequence[int]) -> bool:
        return rank_of_rows(self.field, self.basis + (tuple(vec),), self.n) == self.dim

    def sum_dim(self, other: "Subspace") -> int:
        self._check(other)
        return rank_of_rows(self.field, self.basis + other.basis, self.n)

    def elements(self):
        """All q^dim vectors of the subspace."""
        f = self.field
        for coeffs in product(range(f.q), repeat=self.dim):
            v = [0] * self.n
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = [f.add(x, f.mul(c, y)) for x, y in zip(v, row)]
            yield tuple(v)

    def to_text(self) -> str:
        return format_matrix(self.basis)

    def __repr__(self) -> str:
        return f"Subspace(GF({self.field.q})^{self.n}, {[list(r) for r in self.basis]})"


def row_space(A: MatrixGF) -> Subspace:
    return Subspace.span(A.field, A.n, A.rows)


def subspace_sum_intersect(U: Subspace, V: Subspace) -> tuple[Subspace, Subspace]:
    """Return ``(U + V, U & V)`` via the Zassenhaus algorithm."""
    U._check(V)
    f, n = U.field, U.n
    # rows whose left half reduces to zero carry the intersection in their right half
    block = [r + r for r in U.basis] + [r + (0,) * n for r in V.basis]
    reduced, pivots = rref(f, block, 2 * n)
    left = [r[:n] for r, p in zip(reduced, pivots) if p < n]
    right = [r[n:] for r, p in zip(reduced, pivots) if p >= n]
    return Subspace(f, n, tuple(left)), Subspace.span(f, n, right)


def subspace_distance(U: Subspace, V: Subspace) -> int:
    """d_S(U, V) = dim(U + V) - dim(U & V)."""
    s = U.sum_dim(V)
    return 2 * s - U.dim - V.dim


def injection_distance(U: Subspace, V: Subspace) -> int:
    """d_I(U, V) = max(dim U, dim V) - dim(U & V)."""
    s = U.sum_dim(V)
    return s - min(U.dim, V.dim)


def subspace_distances(U: Subspace, V: Subspace) -> tuple[int, int]:
    s = U.sum_dim(V)
    return 2 * s - U.dim - V.dim, s - min(U.dim, V.dim)


def lift(C: MatrixGF) -> Subspace:
    """Row space of ``(I_r | C)`` in GF(q)^(r + cols)."""
    r = C.m
    rows = tuple(tuple(int(i == j) for j in range(r)) + C.rows[i] for i in range(r))
    # (I | C) is already in reduced row echelon form
    return Subspace(C.field, r + C.n, rows)


# -- text format ----------------------------------------------------------------

def format_matrix(rows: Sequence[Sequence[int]]) -> str:
    """One row per line, entries separated by spaces."""
    return "\n".join(" ".join(str(x) for x in r) for r in rows)


def parse_matrix(text: str, field: FieldSpec, n: int | None = None) -> MatrixGF:
    rows = [[int(tok) for tok in line.split()] for line in text.strip().splitlines() if line.strip()]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise DimensionMismatch("ragged rows")
    return MatrixGF.from_rows(field, rows, n)


def parse_subspace(text: str, field: FieldSpec, n: int | None = None) -> Subspace:
    A = parse_matrix(text, field, n)
    return row_space(A)
