"""Root data, Weyl groups and the two rho-shifted Weyl actions.

Weights are integer column vectors in a fixed basis of the character
lattice ``X*(T)``: simple roots in the adjoint (root lattice) mode and
fundamental weights in the simply connected mode.  ``rho`` is kept doubled
(``rho2 = 2 rho``) so that it is integral in every mode.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConfigError, InputError, ResourceError
from .latticealg import Matrix, Vector, as_matrix, identity, mat_vec

LATTICE_MODES = ("simply_connected", "adjoint", "root_lattice")
MAX_RANK = 8
WEYL_GUARD = 10**6

# Squared lengths of the simple roots and the Dynkin bonds, Bourbaki numbering.
def _dynkin(cartan_type: str, rank: int) -> tuple[list[int], list[tuple[int, int]]]:
    t, r = cartan_type, rank
    chain = [(i, i + 1) for i in range(r - 1)]
    if t == "A" and r >= 1:
        return [1] * r, chain
    if t == "B" and r >= 2:
        return [2] * (r - 1) + [1], chain
    if t == "C" and r >= 2:
        return [1] * (r - 1) + [2], chain
    if t == "D" and r >= 4:
        return [1] * r, [(i, i + 1) for i in range(r - 2)] + [(r - 3, r - 1)]
    if t == "E" and r in (6, 7, 8):
        return [1] * r, [(0, 2), (1, 3), (2, 3)] + [(i, i + 1) for i in range(3, r - 1)]
    if t == "F" and r == 4:
        return [2, 2, 1, 1], chain
    if t == "G" and r == 2:
        return [1, 3], chain
    raise ConfigError(f"unsupported Cartan type {cartan_type}{rank}")


def cartan_matrix(cartan_type: str, rank: int) -> Matrix:
    """``A[i][j] = <alpha_i, alpha_j^vee>``."""
    lengths, bonds = _dynkin(cartan_type, rank)
    form = [[Fraction(0)] * rank for _ in range(rank)]
    for i, li in enumerate(lengths):
        form[i][i] = Fraction(li)
    for i, j in bonds:
        form[i][j] = form[j][i] = -Fraction(max(lengths[i], lengths[j]), 2)
    return as_matrix(
        [int(2 * form[i][j] / form[j][j]) for j in range(rank)] for i in range(rank)
    )


def weyl_order(cartan_type: str, rank: int) -> int:
    r = rank
    return {
        "A": math.factorial(r + 1),
        "B": 2**r * math.factorial(r),
        "C": 2**r * math.factorial(r),
        "D": 2 ** (r - 1) * math.factorial(r),
        "E": {6: 51840, 7: 2903040, 8: 696729600}.get(r, 0),
        "F": 1152,
        "G": 12,
    }[cartan_type]


@dataclass(frozen=True)
class RootDatum:
    cartan_type: str
    rank: int
    lattice_mode: str
    cartan: Matrix
    simple_roots: Matrix
    simple_coroots: Matrix
    rho2: Vector

    @property
    def name(self) -> str:
        return f"{self.cartan_type}{self.rank}"

    @property
    def rho(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, 2) for x in self.rho2)

    def pairing(self, weight: Sequence[int], i: int) -> int:
        """``<weight, alpha_i^vee>``."""
        return sum(a * b for a, b in zip(weight, self.simple_coroots[i]))

    def reflect(self, i: int, weight: Sequence[int]) -> Vector:
        k = self.pairing(weight, i)
        return tuple(x - k * a for x, a in zip(weight, self.simple_roots[i]))

    @cached_property
    def reflections(self) -> tuple[Matrix, ...]:
        out = []
        for i in range(self.rank):
            a, c = self.simple_roots[i], self.simple_coroots[i]
            out.append(as_matrix(
                [int(j == k) - a[j] * c[k] for k in range(self.rank)] for j in range(self.rank)
            ))
        return tuple(out)

    @cached_property
    def positive_roots(self) -> tuple[Vector, ...]:
        """Positive roots in lattice coordinates, sorted by height then lexicographically."""
        r = self.rank
        simple = [tuple(int(i == j) for j in range(r)) for i in range(r)]
        found = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for beta in frontier:
                for i in range(r):
                    k = sum(beta[j] * self.cartan[j][i] for j in range(r))
                    gamma = tuple(b - k * int(i == j) for j, b in enumerate(beta))
                    if all(x >= 0 for x in gamma) and gamma not in found:
                        found.add(gamma)
                        nxt.append(gamma)
            frontier = nxt
        ordered = sorted(found, key=lambda b: (sum(b), b))
        return tuple(self.from_root_coordinates(b) for b in ordered)

    def from_root_coordinates(self, coeffs: Sequence[int]) -> Vector:
        return tuple(
            sum(c * self.simple_roots[i][j] for i, c in enumerate(coeffs)) for j in range(self.rank)
        )

    @cached_property
    def positive_set(self) -> frozenset[Vector]:
        return frozenset(self.positive_roots)

    @cached_property
    def roots(self) -> frozenset[Vector]:
        pos = self.positive_roots
        return frozenset(pos) | frozenset(tuple(-x for x in b) for b in pos)

    @property
    def weyl_order(self) -> int:
        return weyl_order(self.cartan_type, self.rank)


def build_root_datum(cartan_type: str, rank: int, lattice_mode: str = "adjoint") -> RootDatum:
    """Root datum of the given type; ``adjoint`` and ``root_lattice`` both use ``X*(T) =`` root lattice."""
    cartan_type = str(cartan_type).upper()
    if not isinstance(rank, int) or rank < 1 or rank > MAX_RANK:
        raise ConfigError(f"unsupported Cartan type {cartan_type}{rank}: rank must be in 1..{MAX_RANK}")
    if lattice_mode not in LATTICE_MODES:
        raise ConfigError(f"unknown lattice mode {lattice_mode!r}; expected one of {LATTICE_MODES}")
    a = cartan_matrix(cartan_type, rank)
    if lattice_mode == "simply_connected":
        simple_roots = a
        simple_coroots = as_matrix(identity(rank))
    else:
        simple_roots = as_matrix(identity(rank))
        simple_coroots = tuple(tuple(a[j][i] for j in range(rank)) for i in range(rank))
    datum = RootDatum(cartan_type, rank, lattice_mode, a, simple_roots, simple_coroots, ())
    rho2 = tuple(sum(col) for col in zip(*datum.positive_roots))
    datum = RootDatum(cartan_type, rank, lattice_mode, a, simple_roots, simple_coroots, rho2)
    if any(datum.pairing(datum.rho2, i) != 2 for i in range(rank)):
        raise AssertionError(f"rho is not the sum of fundamental weights for {datum.name}")
    return datum


# ---------------------------------------------------------------------------
# Weyl group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeylElement:
    matrix: Matrix
    word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)

    def __call__(self, weight: Sequence[int]) -> Vector:
        return mat_vec(self.matrix, weight)

    def word_string(self) -> str:
        """Reduced word with 1-based indices, e.g. ``"s1.s2.s1"``; identity is ``"e"``."""
        return ".".join(f"s{i + 1}" for i in self.word) if self.word else "e"

    def __repr__(self) -> str:
        return f"WeylElement({self.word_string()})"


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "e"):
        return ()
    try:
        return tuple(int(part.strip().lstrip("s")) - 1 for part in text.split("."))
    except ValueError:
        raise InputError(f"cannot parse Weyl word {text!r}") from None


class WeylGroup:
    """All elements of ``W`` sorted by (length, lexicographically least reduced word)."""

    def __init__(self, datum: RootDatum, elements: list[WeylElement]):
        self.datum = datum
        self.elements = elements
        self._by_matrix = {w.matrix: w for w in elements}
        self._rho_image = {w.matrix: mat_vec(w.matrix, datum.rho2) for w in elements}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def identity(self) -> WeylElement:
        return self.elements[0]

    @property
    def longest(self) -> WeylElement:
        return self.elements[-1]

    def lookup(self, matrix: Sequence[Sequence[int]]) -> WeylElement:
        try:
            return self._by_matrix[as_matrix(matrix)]
        except KeyError:
            raise InputError("matrix is not an element of this Weyl group") from None

    def __contains__(self, w: WeylElement) -> bool:
        return w.matrix in self._by_matrix

    def from_word(self, word: Iterable[int]) -> WeylElement:
        m = as_matrix(identity(self.datum.rank))
        for i in word:
            if not 0 <= i < self.datum.rank:
                raise InputError(f"simple reflection index {i + 1} out of range")
            m = _mul(m, self.datum.reflections[i])
        return self.lookup(m)

    def multiply(self, a: WeylElement, b: WeylElement) -> WeylElement:
        return self.lookup(_mul(a.matrix, b.matrix))

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.from_word(reversed(w.word))

    def simple(self, i: int) -> WeylElement:
        return self.from_word((i,))

    def left_descent(self, w: WeylElement, i: int) -> bool:
        """True when ``l(s_i w) < l(w)``."""
        return self.datum.pairing(self._rho_image[w.matrix], i) < 0

    def right_descent(self, w: WeylElement, i: int) -> bool:
        """True when ``l(w s_i) < l(w)``, i.e. ``w alpha_i`` is negative."""
        return _is_negative(self.datum, w(self.datum.simple_roots[i]))

    def inversions(self, w: WeylElement) -> int:
        return sum(1 for beta in self.datum.positive_roots if _is_negative(self.datum, w(beta)))

    def min_coset_rep(self, w: WeylElement, parabolic: Iterable[int] = ()) -> WeylElement:
        """Minimal length representative of ``w W_L``."""
        parabolic = tuple(parabolic)
        changed = True
        while changed:
            changed = False
            for j in parabolic:
                if self.right_descent(w, j):
                    w = self.multiply(w, self.simple(j))
                    changed = True
        return w


def _is_negative(datum: RootDatum, root: Sequence[int]) -> bool:
    return tuple(root) not in datum.positive_set


def _mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


@lru_cache(maxsize=8)
def weyl_group(datum: RootDatum) -> WeylGroup:
    """Enumerate ``W`` level by level; each element carries its lexicographically least reduced word."""
    order = datum.weyl_order
    if order > WEYL_GUARD:
        raise ResourceError(f"|W({datum.name})| = {order} exceeds the enumeration guard {WEYL_GUARD}")
    r = datum.rank
    refl = [np.array(s, dtype=np.int64) for s in datum.reflections]
    cor = np.array(datum.simple_coroots, dtype=np.int64)
    rho2 = np.array(datum.rho2, dtype=np.int64)
    mats = np.eye(r, dtype=np.int64)[None]
    words: list[tuple[int, ...]] = [()]
    elements = [WeylElement(as_matrix(identity(r)), ())]
    while len(words):
        images = mats @ rho2
        pairs = images @ cor.T
        seen: dict[bytes, int] = {}
        new_words: list[tuple[int, ...]] = []
        new_mats = []
        for i in range(r):
            idx = np.nonzero(pairs[:, i] > 0)[0]
            if not len(idx):
                continue
            cand = refl[i] @ mats[idx]
            keys = images[idx] - pairs[idx, i, None] * np.array(datum.simple_roots[i], dtype=np.int64)
            for k, row in enumerate(keys):
                b = row.tobytes()
                if b not in seen:
                    seen[b] = len(new_words)
                    new_words.append((i,) + words[idx[k]])
                    new_mats.append(cand[k])
        if not new_words:
            break
        order_idx = sorted(range(len(new_words)), key=new_words.__getitem__)
        words = [new_words[k] for k in order_idx]
        mats = np.array([new_mats[k] for k in order_idx], dtype=np.int64)
        elements.extend(WeylElement(as_matrix(m.tolist()), w) for m, w in zip(mats, words))
    if len(elements) != order:
        raise AssertionError(f"enumerated {len(elements)} elements, expected {order}")
    return WeylGroup(datum, elements)


def enumerate_weyl(datum: RootDatum) -> list[WeylElement]:
    return list(weyl_group(datum).elements)


# ---------------------------------------------------------------------------
# rho-shifted actions and Bruhat order
# ---------------------------------------------------------------------------

def rho_shift(datum: RootDatum, w: WeylElement) -> Vector:
    """``w rho - rho`` (always in the root lattice, hence integral)."""
    diff = [a - b for a, b in zip(w(datum.rho2), datum.rho2)]
    if any(x % 2 for x in diff):
        raise AssertionError(f"w rho - rho is not integral for {w}")
    return tuple(x // 2 for x in diff)


def rho_shifts(datum: RootDatum, mats: np.ndarray) -> np.ndarray:
    """Vectorized ``w rho - rho`` for a stack of Weyl matrices."""
    rho2 = np.array(datum.rho2, dtype=np.int64)
    diff = mats @ rho2 - rho2
    if (diff % 2).any():
        raise AssertionError("w rho - rho is not integral")
    return diff // 2


def dot_act(datum: RootDatum, w: WeylElement, weight: Sequence[int]) -> Vector:
    """``w . weight = w weight + w rho - rho``."""
    return tuple(a + b for a, b in zip(w(weight), rho_shift(datum, w)))


def ddot_act(datum: RootDatum, w: WeylElement, weight: Sequence[int]) -> Vector:
    """``w .. weight = w weight - w rho + rho``."""
    return tuple(a - b for a, b in zip(w(weight), rho_shift(datum, w)))


def bruhat_leq(
    group: WeylGroup, u: WeylElement, w: WeylElement, parabolic: Optional[Iterable[int]] = None
) -> bool:
    """Bruhat comparison of the minimal representatives of ``u W_L`` and ``w W_L``.

    ``parabolic`` lists simple-root indices generating ``W_L``; empty or None
    gives the ordinary Bruhat order.
    """
    parabolic = tuple(parabolic or ())
    if any(not (isinstance(j, int) and 0 <= j < group.datum.rank) for j in parabolic):
        raise InputError(f"parabolic subset {parabolic} is not a set of simple-root indices")
    if parabolic:
        u = group.min_coset_rep(u, parabolic)
        w = group.min_coset_rep(w, parabolic)
    return _bruhat(group, u, w)


def _bruhat(group: WeylGroup, u: WeylElement, w: WeylElement) -> bool:
    while True:
        if u.length > w.length:
            return False
        if w.length == 0:
            return u.length == 0
        i = w.word[0]
        w = group.multiply(group.simple(i), w)
        if group.left_descent(u, i):
            u = group.multiply(group.simple(i), u)
