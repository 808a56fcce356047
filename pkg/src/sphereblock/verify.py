"""Acceptance checks behind ``sphereblock verify``.

Each check returns a :class:`CheckResult`; ``run_all`` runs them in order.
The checks use the production code paths; ``window_partition`` is a
deliberately naive second computation of the monodromy classes that only
shares the lattice kernel with :mod:`sphereblock.monodromy`.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .blocks import block_report, check_path_independence
from .errors import ConsistencyError
from .latticealg import (
    Sublattice,
    determinant,
    is_saturated,
    mat_mul,
    saturation,
    smith_normal_form,
)
from .monodromy import class_table
from .orbitgraph import OrbitGraph, generate_AI_orbits, graph_violations
from .pairdata import BUILTIN_FAMILIES, PairInvariants, builtin_pair, derive_invariants
from .rootdata import rho_shifts

FAULTS = ("N2U", "N2T")


def expected_classes(n: int) -> int:
    return (n + 1) // 2 if n % 2 else 1 + 2 * (n // 4)


def expected_singletons(n: int) -> int:
    if n % 2:
        return 1
    return 2 if n % 4 == 0 else 0


@dataclass(frozen=True)
class CheckResult:
    key: str
    title: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.key} {self.title}: {self.detail} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return {"check": self.key, "title": self.title, "ok": self.ok, "detail": self.detail}


class Context:
    """Caches pairs, invariants, tables and graphs for one verification run."""

    def __init__(self, fault: Optional[str] = None):
        if fault is not None and fault not in FAULTS:
            raise ValueError(f"unknown fault {fault!r}")
        self.fault = fault
        self._inv: dict = {}
        self._table: dict = {}
        self._graph: dict = {}

    def invariants(self, family: str, n: int) -> PairInvariants:
        key = (family, n)
        if key not in self._inv:
            self._inv[key] = derive_invariants(builtin_pair(family, n))
        return self._inv[key]

    def table(self, family: str, n: int):
        key = (family, n)
        if key not in self._table:
            self._table[key] = class_table(self.invariants(family, n))
        return self._table[key]

    def graph(self, family: str, n: int) -> OrbitGraph:
        key = (family, n)
        if key not in self._graph:
            graph = generate_AI_orbits(self.invariants(family, n).pair)
            self._graph[key] = inject_fault(graph, self.fault) if self.fault else graph
        return self._graph[key]


def inject_fault(graph: OrbitGraph, fault: str) -> OrbitGraph:
    """Copy of ``graph`` with the first type N edge relabelled (negative control)."""
    target = {"N2U": "U", "N2T": "T"}[fault]
    edges = list(graph.edges)
    for k, e in enumerate(edges):
        if e.em_type == "N":
            edges[k] = replace(e, em_type=target)
            break
    return OrbitGraph(graph.pair, dict(graph.nodes), edges)


def _timed(key: str, title: str, body: Callable[[], tuple[bool, str]]) -> CheckResult:
    start = time.perf_counter()
    try:
        ok, detail = body()
    except ConsistencyError as exc:
        ok, detail = False, f"consistency error: {exc}"
    return CheckResult(key, title, ok, detail, time.perf_counter() - start)


def check_class_counts(ctx: Context, max_n: int = 8) -> CheckResult:
    def body():
        got = {n: len(ctx.table("psl_pso", n)) for n in range(2, max_n + 1)}
        want = {n: expected_classes(n) for n in got}
        return got == want, f"psl_pso n=2..{max_n} classes {list(got.values())}, expected {list(want.values())}"

    return _timed("C1", "class counts", body)


def check_singletons(ctx: Context, max_n: int = 6) -> CheckResult:
    def body():
        got, want = [], []
        for n in range(2, min(max_n, 6) + 1):
            report = block_report(ctx.graph("psl_pso", n), ctx.invariants("psl_pso", n), ctx.table("psl_pso", n))
            got.append(sum(1 for s in report.sizes if s == 1))
            want.append(expected_singletons(n))
        return got == want, f"singleton blocks {got}, expected {want}"

    return _timed("C2", "singleton blocks", body)


def check_pgl3(ctx: Context) -> CheckResult:
    def body():
        graph = ctx.graph("pgl_po", 3)
        report = block_report(graph, ctx.invariants("pgl_po", 3), ctx.table("pgl_po", 3))
        orbits, total, sizes = len(graph.nodes), report.total, sorted(report.sizes, reverse=True)
        ok = orbits == 4 and total == 7 and sizes == [6, 1]
        return ok, f"orbits {orbits}, irreducibles {total}, block sizes {sizes}"

    return _timed("C3", "PGL(3)/PO(3) blocks", body)


def check_path_independence_sweep(ctx: Context, max_n: int = 5, window: int = 3) -> CheckResult:
    def body():
        checked, bad = 0, []
        for family in ("psl_pso", "pgl_po"):
            for n in range(2, min(max_n, 5) + 1):
                rep = check_path_independence(
                    ctx.graph(family, n), ctx.invariants(family, n), ctx.table(family, n), window
                )
                checked += rep.checked
                bad.extend(rep.violations)
        detail = f"{checked} (orbit, chi, w, lift) assignments, {len(bad)} violations"
        if bad:
            detail += f"; first: {bad[0]}"
        return not bad, detail

    return _timed("C4", "path independence", body)


def window_partition(inv: PairInvariants, radius: int = 3) -> list[list[tuple]]:
    """Classes as components of the graph on characters with an edge
    ``r(l) -- r(w.l)`` (and ``r(w..l)``) for every ``w`` in ``W0`` and every
    ``l`` in a coordinate box of ``K_circ``."""
    group = inv.C_group
    chars = [tuple(c) for c in inv.characters]
    basis = np.array(inv.K_circ.basis, dtype=np.int64).reshape(-1, inv.datum.rank)
    box = np.array(list(itertools.product(range(-radius, radius + 1), repeat=len(basis))), dtype=np.int64)
    points = box @ basis
    src = [tuple(r) for r in group.project_many(points).tolist()]
    parent = {c: c for c in chars}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    mats = np.array([w.matrix for w in inv.W0], dtype=np.int64)
    shifts = rho_shifts(inv.datum, mats)
    for m, s in zip(mats, shifts):
        moved = points @ m.T
        for sign in (1, -1):
            dst = group.project_many(moved + sign * s)
            for a, b in zip(src, map(tuple, dst.tolist())):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    comps: dict = {}
    for c in chars:
        comps.setdefault(find(c), []).append(c)
    return sorted(comps.values())


def check_oracle(ctx: Context, max_n: int = 5) -> CheckResult:
    def body():
        bad, runs = [], 0
        for family in sorted(BUILTIN_FAMILIES):
            for n in range(2, min(max_n, 5) + 1):
                inv, table = ctx.invariants(family, n), ctx.table(family, n)
                mine = sorted(sorted(block) for block in table.classes)
                runs += 1
                if mine != window_partition(inv):
                    bad.append(f"{family}:{n}")
        return not bad, f"{runs} pairs compared, mismatches {bad or 'none'}"

    return _timed("C5", "monodromy oracle equivalence", body)


def _snf_ok(m) -> bool:
    u, d, v = smith_normal_form(m)
    if mat_mul(mat_mul(u, m), v) != d:
        return False
    if abs(determinant(u)) != 1 or abs(determinant(v)) != 1:
        return False
    rows, cols = len(d), len(d[0])
    if any(d[i][j] for i in range(rows) for j in range(cols) if i != j):
        return False
    diag = [d[i][i] for i in range(min(rows, cols))]
    nonzero = [x for x in diag if x]
    if any(x < 0 for x in diag) or diag[: len(nonzero)] != nonzero:
        return False
    if any(b % a for a, b in zip(nonzero, nonzero[1:])):
        return False
    if rows == cols:
        prod = 1
        for x in diag:
            prod *= x
        if abs(prod) != abs(determinant(m)):
            return False
    return True


def check_lattice_kernel(seed: int = 20261014, snf_cases: int = 1000, sat_cases: int = 500) -> CheckResult:
    def body():
        rng = random.Random(seed)
        snf_bad = 0
        for _ in range(snf_cases):
            rows, cols = rng.randint(1, 6), rng.randint(1, 6)
            m = [[rng.randint(-20, 20) for _ in range(cols)] for _ in range(rows)]
            snf_bad += not _snf_ok(m)
        sat_bad = 0
        for _ in range(sat_cases):
            dim = rng.randint(1, 6)
            gens = [[rng.randint(-20, 20) for _ in range(dim)] for _ in range(rng.randint(0, dim + 1))]
            lat = Sublattice.span(gens, dim)
            sat = saturation(lat)
            ok = saturation(sat) == sat and lat.issubset(sat) and sat.rank == lat.rank and is_saturated(sat)
            sat_bad += not ok
        return snf_bad == 0 and sat_bad == 0, (
            f"SNF failures {snf_bad}/{snf_cases}, saturation failures {sat_bad}/{sat_cases}"
        )

    return _timed("C6", "lattice kernel", body)


def structural_problems(graph: OrbitGraph, inv: PairInvariants, table) -> list[str]:
    problems = list(graph_violations(graph))
    for oid in graph.nodes:
        lengths = {w.length for w in graph.wY_candidates(oid)}
        if len(lengths) != 1:
            problems.append(f"orbit {oid}: W(Y) candidates of lengths {sorted(lengths)}")
    neg = table.neg_map
    for k, j in enumerate(neg):
        if neg[j] != k:
            problems.append(f"neg_map is not an involution at class {k}")
    report = block_report(graph, inv, table)
    sizes = report.sizes
    for k, j in enumerate(neg):
        if sizes[k] != sizes[j]:
            problems.append(f"neg_map sends block {k} (size {sizes[k]}) to block {j} (size {sizes[j]})")
    return problems


def check_structure(ctx: Context, max_n: int = 6) -> CheckResult:
    def body():
        problems, graphs = [], 0
        for family in sorted(BUILTIN_FAMILIES):
            for n in range(2, min(max_n, 6) + 1):
                graphs += 1
                found = structural_problems(ctx.graph(family, n), ctx.invariants(family, n), ctx.table(family, n))
                problems.extend(f"{family}:{n}: {p}" for p in found)
        detail = f"{graphs} graphs, {len(problems)} problems"
        if problems:
            detail += f"; first: {problems[0]}"
        return not problems, detail

    return _timed("C7", "structural invariants", body)


def run_all(max_n: int = 8, fault: Optional[str] = None) -> list[CheckResult]:
    ctx = Context(fault)
    return [
        check_class_counts(ctx, max(2, min(max_n, 8))),
        check_singletons(ctx, max(2, max_n)),
        check_pgl3(ctx),
        check_path_independence_sweep(ctx, max(2, max_n)),
        check_oracle(ctx, max(2, max_n)),
        check_lattice_kernel(),
        check_structure(ctx, max(2, max_n)),
    ]
