"""The relation ``~`` on ``X*(C)`` and the set of monodromy classes.

``c1 ~ c2`` when some ``w`` in the enhanced little Weyl group carries a lift
of ``c2`` to a lift of ``c1`` under the dot or the ddot action.  For fixed
lifts ``l1, l2`` this is the lattice test::

    w.l2 - l1  in  K_full + w K_full

so nothing assumes that ``w`` preserves ``K_full``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import ConsistencyError, InputError
from .latticealg import Vector, member_sum
from .pairdata import PairInvariants
from .rootdata import ddot_act, dot_act, rho_shifts

_CHUNK = 2048


@dataclass(frozen=True)
class MonodromyClassTable:
    factors: tuple[int, ...]
    classes: tuple[tuple[Vector, ...], ...]
    neg_map: tuple[int, ...]
    dot_ddot_differ: bool = False

    @property
    def representatives(self) -> tuple[Vector, ...]:
        return tuple(block[0] for block in self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def class_of(self, c: Sequence[int]) -> int:
        return class_of(self, c)

    def to_json(self) -> dict[str, Any]:
        return {
            "factors": list(self.factors),
            "num_classes": len(self.classes),
            "classes": [
                {
                    "id": k,
                    "representative": list(block[0]),
                    "size": len(block),
                    "members": [list(c) for c in block],
                    "neg": self.neg_map[k],
                }
                for k, block in enumerate(self.classes)
            ],
            "neg_map": list(self.neg_map),
            "dot_ddot_differ": self.dot_ddot_differ,
        }


def related(inv: PairInvariants, c1: Sequence[int], c2: Sequence[int]) -> bool:
    """Exact test of ``c1 ~ c2`` (before taking the transitive closure)."""
    group = inv.C_group
    l1, l2 = group.lift(c1), group.lift(c2)
    datum = inv.datum
    for w in inv.W0:
        target = inv.K_full + inv.K_full.transform(w.matrix)
        for act in (dot_act, ddot_act):
            moved = act(datum, w, l2)
            if tuple(a - b for a, b in zip(moved, l1)) in target:
                return True
    return False


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            out.setdefault(self.find(x), []).append(x)
        return sorted(out.values())


def _edges(inv: PairInvariants, sign: int) -> np.ndarray:
    """All pairs ``(index(c2), index(c1))`` related by one ``w`` in ``W0`` under the dot (+1) or ddot (-1) action."""
    group = inv.C_group
    chars = inv.characters
    index = {c: k for k, c in enumerate(chars)}
    factors = np.array(group.invariant_factors, dtype=np.int64)
    radix = np.cumprod(np.concatenate([[1], factors[::-1][:-1]]))[::-1] if len(factors) else np.zeros(0, np.int64)
    lifts = np.array([group.lift(c) for c in chars], dtype=np.int64).reshape(len(chars), -1)
    keeps = _preserves_many(inv.K_full, inv.W0)
    preserving = [w for w, ok in zip(inv.W0, keeps) if ok]
    other = [w for w, ok in zip(inv.W0, keeps) if not ok]
    pieces = []
    for start in range(0, len(preserving), _CHUNK):
        ws = preserving[start:start + _CHUNK]
        mats = np.array([w.matrix for w in ws], dtype=np.int64)
        shifts = rho_shifts(inv.datum, mats)
        moved = np.einsum("wij,cj->wci", mats, lifts) + sign * shifts[:, None, :]
        res = group.project_many(moved.reshape(-1, moved.shape[-1]))
        targets = res @ radix if len(factors) else np.zeros(len(res), np.int64)
        sources = np.tile(np.arange(len(chars)), len(ws))
        pieces.append(np.unique(sources * len(chars) + targets))
    for w in other:
        # w moves K_full: every element of r(w.l2) + r(w K_full) is related to c2
        sub = _subgroup(group, [group.project(w(b)) for b in inv.K_full.basis])
        act = dot_act if sign > 0 else ddot_act
        rows = []
        for k, c in enumerate(chars):
            base = group.project(act(inv.datum, w, group.lift(c)))
            rows.extend((k, index[group.add(base, s)]) for s in sub)
        pieces.append(np.array([a * len(chars) + b for a, b in rows], dtype=np.int64))
    if not pieces:
        return np.zeros((0, 2), dtype=np.int64)
    codes = np.unique(np.concatenate(pieces))
    return np.stack([codes // len(chars), codes % len(chars)], axis=1)


def _preserves_many(lattice, ws) -> list[bool]:
    """``w L == L`` for each ``w`` (finite order makes ``w L <= L`` sufficient)."""
    if lattice.rank == 0 or lattice.is_full:
        return [True] * len(ws)
    out = []
    basis = np.array(lattice.basis, dtype=np.int64)
    for start in range(0, len(ws), _CHUNK):
        mats = np.array([w.matrix for w in ws[start:start + _CHUNK]], dtype=np.int64)
        images = np.einsum("wij,kj->wki", mats, basis)
        ok = lattice.contains_many(images.reshape(-1, lattice.ambient_rank))
        out.extend(ok.reshape(len(mats), -1).all(axis=1).tolist())
    return out


def _subgroup(group, gens: Iterable[Sequence[int]]) -> list[Vector]:
    seen = {group.zero()}
    frontier = [group.zero()]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def _partition(n: int, edge_sets: Iterable[np.ndarray]) -> list[list[int]]:
    uf = _UnionFind(n)
    for edges in edge_sets:
        for a, b in edges.tolist():
            uf.union(a, b)
    return uf.blocks()


def class_table(inv: PairInvariants) -> MonodromyClassTable:
    """Partition of ``X*(C)`` into monodromy classes (transitive closure of ``~``)."""
    group = inv.C_group
    if not group.is_finite:
        raise InputError("X*(C) is infinite; monodromy classes need a finite component group")
    chars = inv.characters
    dot_edges, ddot_edges = _edges(inv, +1), _edges(inv, -1)
    blocks = _partition(len(chars), [dot_edges, ddot_edges])
    differ = _partition(len(chars), [dot_edges]) != _partition(len(chars), [ddot_edges])
    classes = tuple(tuple(chars[k] for k in block) for block in blocks)
    owner = {c: k for k, block in enumerate(classes) for c in block}
    neg = []
    for k, block in enumerate(classes):
        images = {owner[group.negate(c)] for c in block}
        if len(images) != 1:
            raise ConsistencyError(f"negation splits class {k} across classes {sorted(images)}")
        neg.append(images.pop())
    return MonodromyClassTable(group.invariant_factors, classes, tuple(neg), differ)


def class_of(table: MonodromyClassTable, c: Sequence[int]) -> int:
    c = tuple(c)
    for k, block in enumerate(table.classes):
        if c in block:
            return k
    raise InputError(f"{c} is not a character of C (factors {list(table.factors)})")
