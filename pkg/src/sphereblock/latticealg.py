"""Exact integer lattice arithmetic.

Everything here works on plain Python integers, so there is no overflow.
Vectors are tuples of ints and matrices are tuples of row tuples.  A
sublattice of ``Z^n`` is stored through the row-style Hermite normal form of
a basis, which makes equality of sublattices equality of representations.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, InputError

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return ()
    inner = len(b)
    cols = len(b[0]) if b else 0
    if any(len(row) != inner for row in a):
        raise InputError("matrix dimensions do not agree")
    return tuple(
        tuple(sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols))
        for row in a
    )


def mat_vec(m: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    """Matrix times column vector."""
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_mat(v: Sequence[int], m: Sequence[Sequence[int]]) -> Vector:
    """Row vector times matrix."""
    cols = len(m[0]) if m else 0
    return tuple(sum(v[k] * m[k][j] for k in range(len(m))) for j in range(cols))


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*m)) if m else ()


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise InputError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def _smith(m: Sequence[Sequence[int]]):
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(r) for r in m]
    u = identity(rows)
    v = identity(cols)
    vinv = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]
        vinv[src] = [x - q * y for x, y in zip(vinv[src], vinv[dst])]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return a, u, v, vinv
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            if any(a[i][t] for i in range(t + 1, rows)) or any(a[t][j] for j in range(t + 1, cols)):
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return a, u, v, vinv


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``D = U @ M @ V`` in Smith normal form.

    ``U`` and ``V`` are unimodular; the nonzero diagonal entries of ``D`` are
    positive and each divides the next.  Pivots are chosen of minimal absolute
    value to keep intermediate coefficients small.
    """
    d, u, v, _ = _smith(m)
    return as_matrix(u), as_matrix(d), as_matrix(v)


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith form (length ``min(rows, cols)``)."""
    d, _, _, _ = _smith(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


# ---------------------------------------------------------------------------
# Hermite normal form and sublattices
# ---------------------------------------------------------------------------

def hermite_normal_form(vectors: Iterable[Sequence[int]], ambient_rank: int) -> Matrix:
    """Row-style Hermite normal form of the row span of ``vectors``.

    Zero rows are dropped.  Pivots are positive, pivot columns strictly
    increase, and entries above a pivot are reduced into ``[0, pivot)``.
    """
    a = [list(v) for v in vectors]
    for row in a:
        if len(row) != ambient_rank:
            raise InputError(f"vector {tuple(row)} does not have length {ambient_rank}")
    r = 0
    for c in range(ambient_rank):
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
    return as_matrix(a[:r])


def _pivot(row: Sequence[int]) -> int:
    return next(i for i, x in enumerate(row) if x)


_NUMPY_BOUND = 2**24


def _rational_inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(i for i in range(c, n) if a[i][c])
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class Sublattice:
    """A sublattice of ``Z^ambient_rank`` stored by its Hermite basis."""

    ambient_rank: int
    basis: Matrix = ()

    def __post_init__(self):
        canon = hermite_normal_form(self.basis, self.ambient_rank)
        object.__setattr__(self, "basis", canon)

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], ambient_rank: int) -> "Sublattice":
        return cls(ambient_rank, as_matrix(vectors))

    @classmethod
    def full(cls, ambient_rank: int) -> "Sublattice":
        return cls(ambient_rank, as_matrix(identity(ambient_rank)))

    @classmethod
    def image(cls, m: Sequence[Sequence[int]]) -> "Sublattice":
        """Column span of ``m``, i.e. the image of ``v -> m @ v``."""
        return cls(len(m), transpose(m))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_full(self) -> bool:
        return self.rank == self.ambient_rank and all(
            self.basis[i][i] == 1 for i in range(self.rank)
        )

    def coordinates(self, v: Sequence[int]) -> Optional[Vector]:
        """Integer coordinates of ``v`` in :attr:`basis`, or None if ``v`` is not in the lattice."""
        if len(v) != self.ambient_rank:
            raise InputError(f"vector of length {len(v)} tested against a rank-{self.ambient_rank} lattice")
        rest = list(v)
        coords = []
        for row in self.basis:
            p = _pivot(row)
            if any(rest[:p]):
                return None
            q, r = divmod(rest[p], row[p])
            if r:
                return None
            coords.append(q)
            if q:
                rest = [x - q * y for x, y in zip(rest, row)]
        if any(rest):
            return None
        return tuple(coords)

    def __contains__(self, v: Sequence[int]) -> bool:
        if self.is_full:
            if len(v) != self.ambient_rank:
                raise InputError("dimension mismatch")
            return True
        return self.coordinates(v) is not None

    def coordinates_many(self, vectors) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized :meth:`coordinates` on an ``(m, ambient_rank)`` int64 array.

        Returns ``(mask, coords)``; rows of ``coords`` are meaningful where
        ``mask`` is True.  Intended for the small entries met in rank <= 8
        computations; inputs above an overflow-safe bound are rejected.
        """
        arr = np.asarray(vectors, dtype=np.int64).reshape(-1, self.ambient_rank)
        if arr.size and np.abs(arr).max() > _NUMPY_BOUND:
            raise InputError("entries too large for the vectorized path")
        if self.rank == 0:
            return ~arr.any(axis=1), np.zeros((len(arr), 0), dtype=np.int64)
        scale, adj, basis, piv = self._solver
        scaled = arr[:, piv] @ adj
        mask = ~(scaled % scale).any(axis=1)
        coords = scaled // scale
        mask &= ~((coords @ basis) - arr).any(axis=1)
        return mask, coords

    @cached_property
    def _solver(self):
        piv = [_pivot(row) for row in self.basis]
        square = [[Fraction(row[p]) for p in piv] for row in self.basis]
        inv = _rational_inverse(square)
        scale = 1
        for row in inv:
            for x in row:
                scale = scale * x.denominator // math.gcd(scale, x.denominator)
        adj = np.array([[int(x * scale) for x in row] for row in inv], dtype=np.int64)
        return scale, adj, np.array(self.basis, dtype=np.int64), piv

    def contains_many(self, vectors) -> np.ndarray:
        return self.coordinates_many(vectors)[0]

    def __add__(self, other: "Sublattice") -> "Sublattice":
        if other.ambient_rank != self.ambient_rank:
            raise InputError("sum of sublattices of different ambient rank")
        return Sublattice(self.ambient_rank, self.basis + other.basis)

    def issubset(self, other: "Sublattice") -> bool:
        return all(v in other for v in self.basis)

    def transform(self, m: Sequence[Sequence[int]]) -> "Sublattice":
        """Image of the lattice under ``v -> m @ v``."""
        return Sublattice(self.ambient_rank, tuple(mat_vec(m, b) for b in self.basis))

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.basis]


def saturation(lattice: Sublattice) -> Sublattice:
    """Smallest sublattice containing ``lattice`` with torsion-free quotient."""
    if lattice.rank == 0:
        return lattice
    d, _, _, vinv = _smith(lattice.basis)
    rank = sum(1 for i in range(min(len(d), lattice.ambient_rank)) if d[i][i])
    return Sublattice.span(vinv[:rank], lattice.ambient_rank)


def is_saturated(lattice: Sublattice) -> bool:
    return saturation(lattice) == lattice


def member(v: Sequence[int], lattice: Sublattice) -> bool:
    return v in lattice


def member_sum(v: Sequence[int], first: Sublattice, second: Sublattice) -> bool:
    """Membership of ``v`` in ``first + second``."""
    return v in first + second


# ---------------------------------------------------------------------------
# Quotient groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientGroup:
    """The finitely generated abelian group ``big / small``.

    ``big`` defaults to the whole ambient lattice.  Elements are written as
    residue tuples, one entry per invariant factor: an entry modulo ``d`` for
    a finite factor ``Z/d`` and a plain integer for a free factor (``d = 0``).
    """

    small: Sublattice
    big: Optional[Sublattice] = None
    invariant_factors: tuple[int, ...] = field(init=False)
    _to_y: Matrix = field(init=False, repr=False, compare=False)
    _from_y: Matrix = field(init=False, repr=False, compare=False)
    _slots: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        big = self.big if self.big is not None else Sublattice.full(self.small.ambient_rank)
        object.__setattr__(self, "big", big)
        rel = []
        for b in self.small.basis:
            c = big.coordinates(b)
            if c is None:
                raise DomainError("quotient requested by a lattice that is not a subgroup")
            rel.append(c)
        k = big.rank
        if rel:
            d, _, v, vinv = _smith(rel)
            diag = [d[i][i] if i < len(d) else 0 for i in range(k)]
        else:
            v, vinv, diag = identity(k), identity(k), [0] * k
        slots = tuple(i for i in range(k) if diag[i] != 1)
        object.__setattr__(self, "invariant_factors", tuple(diag[i] for i in slots))
        object.__setattr__(self, "_slots", slots)
        object.__setattr__(self, "_to_y", as_matrix(v))
        object.__setattr__(self, "_from_y", mat_mul(vinv, big.basis) if k else ())

    @property
    def torsion_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        """Size of the torsion subgroup."""
        out = 1
        for d in self.torsion_factors:
            out *= d
        return out

    def project(self, v: Sequence[int]) -> Vector:
        """Residue tuple of ``v``; ``v`` must lie in ``big``."""
        c = self.big.coordinates(v)
        if c is None:
            raise DomainError(f"{tuple(v)} is not in the lattice being quotiented")
        y = vec_mat(c, self._to_y) if c else ()
        return tuple(
            y[i] % d if d else y[i] for i, d in zip(self._slots, self.invariant_factors)
        )

    def project_many(self, vectors) -> np.ndarray:
        """Vectorized :meth:`project`; every row must lie in ``big``."""
        mask, coords = self.big.coordinates_many(vectors)
        if not mask.all():
            raise DomainError("some vectors are not in the lattice being quotiented")
        y = coords @ np.array(self._to_y, dtype=np.int64).reshape(self.big.rank, self.big.rank)
        y = y[:, list(self._slots)]
        mods = np.array([d if d else 0 for d in self.invariant_factors], dtype=np.int64)
        finite = mods > 0
        y[:, finite] %= mods[finite]
        return y

    def lift(self, residues: Sequence[int]) -> Vector:
        """Some vector of ``big`` whose residue tuple is ``residues``."""
        if len(residues) != len(self._slots):
            raise InputError(f"expected {len(self._slots)} residues, got {len(residues)}")
        y = [0] * self.big.rank
        for slot, r in zip(self._slots, residues):
            y[slot] = r
        if not y:
            return (0,) * self.small.ambient_rank
        return vec_mat(y, self._from_y)

    def normalize(self, residues: Sequence[int]) -> Vector:
        return tuple(r % d if d else r for r, d in zip(residues, self.invariant_factors))

    def negate(self, residues: Sequence[int]) -> Vector:
        return self.normalize([-r for r in residues])

    def add(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.normalize([x + y for x, y in zip(a, b)])

    def zero(self) -> Vector:
        return (0,) * len(self.invariant_factors)

    def torsion(self) -> "QuotientGroup":
        """The torsion subgroup ``saturation(small) / small``; needs ``big`` to be the full lattice."""
        if not self.big.is_full:
            raise DomainError("torsion() is only defined for quotients of the full lattice")
        return QuotientGroup(self.small, saturation(self.small))


def quotient(ambient_rank: int, lattice: Sublattice) -> QuotientGroup:
    """``Z^ambient_rank / lattice``."""
    if lattice.ambient_rank != ambient_rank:
        raise InputError("ambient rank mismatch")
    return QuotientGroup(lattice)


def characters(group: QuotientGroup) -> list[Vector]:
    """All elements of the torsion part of ``group`` as residue tuples, in lexicographic order.

    Groups with free factors are first replaced by their torsion subgroup, so
    the residues then refer to :meth:`QuotientGroup.torsion`.

    When ``group`` is the character group of a diagonalizable group ``S``
    these are exactly the characters of ``S``.
    """
    if not group.is_finite:
        group = group.torsion()
    return list(itertools.product(*(range(d) for d in group.invariant_factors)))
