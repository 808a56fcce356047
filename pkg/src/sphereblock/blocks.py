"""Block decomposition of the irreducible equivariant objects.

An irreducible object is a pair ``(Y, chi)`` of an orbit and a character of
its component group ``A_Y``.  Its monodromy class is read off from a single
weight: pick ``w`` in ``W(Y)`` and a lift ``lambda`` of ``chi`` in ``X*(Y)``,
then ``w^{-1} lambda`` lies in ``K_circ`` and its restriction to ``C`` fixes
the class.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .errors import ConsistencyError, InputError
from .latticealg import Vector
from .monodromy import MonodromyClassTable
from .orbitgraph import OrbitGraph, OrbitNode, palette_color
from .pairdata import PairInvariants
from .rootdata import WeylElement, weyl_group

THREADS_ENV = "SPHEREBLOCK_THREADS"


def worker_count(default: int = 1) -> int:
    """Worker cap from ``SPHEREBLOCK_THREADS`` (at least 1)."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return max(1, default)
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise InputError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


@dataclass(frozen=True)
class IrreducibleLabel:
    orbit_id: str
    chi: Vector
    lift: Vector

    def to_json(self) -> dict[str, Any]:
        return {"orbit": self.orbit_id, "chi": list(self.chi)}


@dataclass(frozen=True)
class BlockReport:
    pair: str
    table: MonodromyClassTable
    blocks: dict[int, tuple[IrreducibleLabel, ...]]

    @property
    def sizes(self) -> list[int]:
        return [len(self.blocks[k]) for k in sorted(self.blocks)]

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def block_of(self, orbit_id: str, chi: Sequence[int]) -> int:
        chi = tuple(chi)
        for k, members in self.blocks.items():
            if any(m.orbit_id == orbit_id and m.chi == chi for m in members):
                return k
        raise InputError(f"no irreducible ({orbit_id}, {chi}) in the report")

    def to_json(self) -> dict[str, Any]:
        return {
            "pair": self.pair,
            "num_classes": len(self.table),
            "total": self.total,
            "blocks": [
                {
                    "class_id": k,
                    "class_rep": list(self.table.classes[k][0]),
                    "size": len(self.blocks[k]),
                    "members": [m.to_json() for m in self.blocks[k]],
                }
                for k in sorted(self.blocks)
            ],
        }


@dataclass(frozen=True)
class PathReport:
    checked: int
    violations: tuple[dict[str, Any], ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict[str, Any]:
        return {"checked": self.checked, "violations": list(self.violations)}


def canonical_lift(node: OrbitNode, chi: Sequence[int]) -> Vector:
    """Deterministic lift of ``chi`` to ``X*(Y)`` (the Smith-basis representative)."""
    return node.A_Y.lift(tuple(chi))


def canonical_w(graph: OrbitGraph, orbit_id: str) -> WeylElement:
    """Candidate with the lexicographically least reduced word."""
    return min(graph.wY_candidates(orbit_id), key=lambda w: w.word)


def _class_index(table: MonodromyClassTable) -> dict[Vector, int]:
    return {c: k for k, block in enumerate(table.classes) for c in block}


def assign_class(
    graph: OrbitGraph,
    inv: PairInvariants,
    table: MonodromyClassTable,
    orbit_id: str,
    chi: Sequence[int],
    w: Optional[WeylElement] = None,
    lift: Optional[Sequence[int]] = None,
) -> int:
    """Monodromy class of the irreducible ``(orbit_id, chi)``.

    ``w`` and ``lift`` default to the canonical choices; passing others is how
    the path-independence check exercises the remaining freedom.
    """
    if orbit_id not in graph.nodes:
        raise InputError(f"unknown orbit {orbit_id!r}")
    node = graph.nodes[orbit_id]
    chi = node.A_Y.normalize(tuple(chi))
    if chi not in set(node.characters):
        raise InputError(f"{chi} is not a character of A_Y for orbit {orbit_id}")
    w = canonical_w(graph, orbit_id) if w is None else w
    lam = canonical_lift(node, chi) if lift is None else tuple(lift)
    if lift is not None and (lam not in node.XY or node.A_Y.project(lam) != chi):
        raise InputError(f"{lam} is not a lift of {chi} in X*(Y) for orbit {orbit_id}")
    group = weyl_group(inv.datum)
    weight = group.inverse(w)(lam)
    if weight not in inv.K_circ:
        raise ConsistencyError(
            f"orbit {orbit_id}: w^-1 lambda = {weight} is outside K_circ "
            f"(w = {w.word_string()}, lambda = {lam})"
        )
    return table.class_of(inv.restrict_to_C(weight))


def _check_inclusion(graph: OrbitGraph, inv: PairInvariants, orbit_id: str, w: WeylElement) -> None:
    group = weyl_group(inv.datum)
    winv = group.inverse(w)
    for b in graph.nodes[orbit_id].XY.basis:
        if winv(b) not in inv.K_circ:
            raise ConsistencyError(
                f"orbit {orbit_id}: w^-1 X*(Y) is not inside K_circ (w = {w.word_string()}, basis vector {b})"
            )


def block_report(graph: OrbitGraph, inv: PairInvariants, table: MonodromyClassTable) -> BlockReport:
    """All irreducibles grouped by class, in graph order then character order."""
    owner = _class_index(table)
    group = weyl_group(inv.datum)
    blocks: dict[int, list[IrreducibleLabel]] = {k: [] for k in range(len(table))}
    for oid, node in graph.nodes.items():
        w = canonical_w(graph, oid)
        _check_inclusion(graph, inv, oid, w)
        winv = group.inverse(w)
        for chi in node.characters:
            lam = canonical_lift(node, chi)
            k = owner[inv.restrict_to_C(winv(lam))]
            blocks[k].append(IrreducibleLabel(oid, chi, lam))
    label = graph.pair.label or graph.pair.datum.name
    return BlockReport(label, table, {k: tuple(v) for k, v in blocks.items()})


def _window(count: int, radius: int) -> np.ndarray:
    if count == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(-radius, radius + 1), repeat=count)), dtype=np.int64)


def _orbit_violations(
    graph: OrbitGraph, inv: PairInvariants, table: MonodromyClassTable, oid: str, radius: int
) -> tuple[int, list[dict[str, Any]]]:
    node = graph.nodes[oid]
    owner = _class_index(table)
    group = weyl_group(inv.datum)
    rel = np.array(node.relations.basis, dtype=np.int64).reshape(-1, inv.datum.rank)
    coeffs = _window(len(rel), radius)
    shifts = coeffs @ rel
    cands = graph.wY_candidates(oid)
    checked, out = 0, []
    for chi in node.characters:
        expected = assign_class(graph, inv, table, oid, chi)
        base = np.array(canonical_lift(node, chi), dtype=np.int64)
        lifts = base[None, :] + shifts
        for w in cands:
            winv = np.array(group.inverse(w).matrix, dtype=np.int64)
            weights = lifts @ winv.T
            inside = inv.K_circ.contains_many(weights)
            checked += len(weights)
            for j in np.flatnonzero(~inside)[:1].tolist():
                out.append(_violation(oid, chi, w, lifts[j], "outside K_circ", expected))
            good = np.flatnonzero(inside)
            if not len(good):
                continue
            res = inv.C_group.project_many(weights[good])
            seen: dict[tuple, int] = {}
            for j, r in zip(good.tolist(), map(tuple, res.tolist())):
                if r not in seen:
                    seen[r] = owner[r]
                    if seen[r] != expected:
                        out.append(_violation(oid, chi, w, lifts[j], seen[r], expected))
    return checked, out


def _violation(oid, chi, w, lift, got, expected) -> dict[str, Any]:
    return {
        "orbit": oid,
        "chi": list(chi),
        "w": w.word_string(),
        "lift": [int(x) for x in lift],
        "class": got,
        "expected": expected,
    }


def check_path_independence(
    graph: OrbitGraph, inv: PairInvariants, table: MonodromyClassTable, window: int = 3
) -> PathReport:
    """Assign every irreducible through every ``W(Y)`` word and every lift in
    ``lift + [-window, window]`` (in a basis of ``im(1 - tau_star)``) and
    report each disagreement with the canonical assignment.
    """
    ids = list(graph.nodes)
    for oid in ids:
        graph.wY_candidates(oid)  # fill the cache before any threads start
    workers = min(worker_count(), len(ids)) or 1
    work = lambda oid: _orbit_violations(graph, inv, table, oid, window)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, ids))
    else:
        results = [work(oid) for oid in ids]
    checked = sum(c for c, _ in results)
    violations = tuple(v for _, vs in results for v in vs)
    return PathReport(checked, violations)


def trivial_character_colors(graph: OrbitGraph, report: BlockReport) -> dict[str, str]:
    """DOT fill colours: each orbit coloured by the block of its trivial-character irreducible."""
    colors = {}
    for oid, node in graph.nodes.items():
        colors[oid] = palette_color(report.block_of(oid, node.A_Y.zero()))
    return colors
