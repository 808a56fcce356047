"""Spherical pair data and the invariants derived from it.

A pair is given by a root datum and the involution ``theta_star`` that the
defining involution induces on ``X*(T)`` for a maximally split torus ``T``.
The stabilizer ``T_[H]`` of the base point is encoded through character
lattices::

    X*(T / T_[H])   = image of (1 - theta_star)          (K_full)
    X*(T / T_[H]°)  = saturation of that image           (K_circ)
    X*(C)           = K_circ / K_full,   C = T_[H] / T_[H]°
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConfigError, DomainError, InputError
from .latticealg import (
    Matrix,
    QuotientGroup,
    Sublattice,
    Vector,
    as_matrix,
    characters,
    identity,
    mat_mul,
    saturation,
)
from .rootdata import RootDatum, WeylElement, build_root_datum, rho_shifts, weyl_group

BUILTIN_FAMILIES = {
    "sl_so": "simply_connected",
    "psl_pso": "adjoint",
    "pgl_po": "adjoint",
}
BUILTIN_LABELS = {"sl_so": "SL({n})/SO({n})", "psl_pso": "PSL({n})/PSO({n})", "pgl_po": "PGL({n})/PO({n})"}
MAX_BUILTIN_N = 9


@dataclass(frozen=True)
class PairDatum:
    datum: RootDatum
    theta_star: Matrix
    label: str = ""
    parabolic: tuple[int, ...] = ()
    family: Optional[str] = None
    n: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "theta_star", as_matrix(self.theta_star))
        validate_involution(self.datum, self.theta_star)
        if any(not 0 <= j < self.datum.rank for j in self.parabolic):
            raise InputError(f"parabolic subset {self.parabolic} is not a set of simple-root indices")


def validate_involution(datum: RootDatum, theta: Matrix) -> None:
    r = datum.rank
    if len(theta) != r or any(len(row) != r for row in theta):
        raise InputError(f"theta_star must be a {r}x{r} integer matrix")
    if mat_mul(theta, theta) != as_matrix(identity(r)):
        raise InputError("theta_star is not an involution (theta_star^2 != 1)")
    image = {tuple(sum(t * x for t, x in zip(row, beta)) for row in theta) for beta in datum.roots}
    if image != set(datum.roots):
        raise InputError("theta_star does not preserve the root system")


def builtin_pair(family: str, n: int) -> PairDatum:
    """Type A I pairs: ``A_{n-1}`` with ``theta_star = -1`` (transpose-inverse on the split torus)."""
    if family not in BUILTIN_FAMILIES:
        raise ConfigError(f"unknown family {family!r}; expected one of {sorted(BUILTIN_FAMILIES)}")
    if not isinstance(n, int) or n < 2 or n > MAX_BUILTIN_N:
        raise ConfigError(f"family {family} needs 2 <= n <= {MAX_BUILTIN_N}, got n={n}")
    datum = build_root_datum("A", n - 1, BUILTIN_FAMILIES[family])
    theta = tuple(tuple(-int(i == j) for j in range(n - 1)) for i in range(n - 1))
    return PairDatum(datum, theta, BUILTIN_LABELS[family].format(n=n), family=family, n=n)


@dataclass(frozen=True)
class PairInvariants:
    pair: PairDatum
    K_full: Sublattice
    K_circ: Sublattice
    C_group: QuotientGroup
    W0: tuple[WeylElement, ...]
    W_little: Optional[tuple[WeylElement, ...]] = None
    _w0_keys: frozenset = field(default=frozenset(), repr=False, compare=False)

    @property
    def datum(self) -> RootDatum:
        return self.pair.datum

    @property
    def characters(self) -> list[Vector]:
        return characters(self.C_group)

    def restrict_to_C(self, weight: Sequence[int]) -> Vector:
        return restrict_to_C(self, weight)

    def in_W0(self, w: WeylElement) -> bool:
        return w.matrix in self._w0_keys


def one_minus(m: Matrix) -> Matrix:
    return tuple(tuple(int(i == j) - m[i][j] for j in range(len(m))) for i in range(len(m)))


def derive_invariants(
    pair: PairDatum, little_weyl: Optional[Sequence[WeylElement]] = None
) -> PairInvariants:
    """Lattices ``K_full``, ``K_circ``, the group ``X*(C)`` and the enhanced little Weyl group."""
    datum = pair.datum
    k_full = Sublattice.image(one_minus(pair.theta_star))
    k_circ = saturation(k_full)
    c_group = QuotientGroup(k_full, k_circ)
    if not c_group.is_finite:
        raise AssertionError("K_circ / K_full must be finite")
    group = weyl_group(datum)
    w0 = []
    elements = group.elements
    basis = np.array(k_circ.basis, dtype=np.int64).reshape(-1, datum.rank)
    for start in range(0, len(elements), 4096):
        chunk = elements[start:start + 4096]
        mats = np.array([w.matrix for w in chunk], dtype=np.int64)
        ok = k_circ.contains_many(rho_shifts(datum, mats))
        if not k_circ.is_full and len(basis):
            # w has finite order, so w K <= K already forces w K = K
            images = np.einsum("wij,kj->wki", mats, basis).reshape(-1, datum.rank)
            ok &= k_circ.contains_many(images).reshape(len(chunk), -1).all(axis=1)
        w0.extend(w for w, keep in zip(chunk, ok.tolist()) if keep)
    little = None
    if little_weyl is not None:
        keys = {w.matrix for w in w0}
        little = tuple(little_weyl)
        missing = [w.word_string() for w in little if w.matrix not in keys]
        if missing:
            raise InputError(f"little Weyl group elements outside W0: {missing}")
    return PairInvariants(
        pair, k_full, k_circ, c_group, tuple(w0), little, frozenset(w.matrix for w in w0)
    )


def restrict_to_C(inv: PairInvariants, weight: Sequence[int]) -> Vector:
    """Class of ``weight`` in ``K_circ / K_full``, i.e. its restriction to ``C``."""
    weight = tuple(weight)
    if weight not in inv.K_circ:
        raise DomainError(f"weight {weight} is not in X*(T/T_[H]°) = K_circ")
    return inv.C_group.project(weight)
