"""B-orbits, their character lattices and the weak-order graph.

Each orbit ``Y`` carries an involution ``tau_star`` on ``X*(T)``.  Its
stabilizer is read off from ``1 - tau_star``:

* ``X*(Y) = X*(T/T_Y°)`` is the saturation of ``im(1 - tau_star)``;
* the stabilizer component group ``A_Y`` has character group
  ``X*(Y) / im(1 - tau_star)``, the torsion of ``coker(1 - tau_star)``.

Edges go from a codimension-one orbit ``lower`` to the dense orbit ``upper``
of ``P_alpha lower`` and carry the elementary modification type
(``U``, ``T`` or ``N``).
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Optional, Sequence

from .errors import ConfigError, ConsistencyError, GraphError, InputError
from .latticealg import Matrix, QuotientGroup, Sublattice, Vector, as_matrix, characters, mat_mul, saturation
from .pairdata import BUILTIN_FAMILIES, PairDatum, one_minus
from .rootdata import WeylElement, weyl_group

EM_TYPES = ("G", "U", "T", "N")


@dataclass(frozen=True)
class OrbitNode:
    id: str
    tau_star: Matrix
    dim: int

    @cached_property
    def relations(self) -> Sublattice:
        """``im(1 - tau_star) = X*(T/T_Y)``."""
        return Sublattice.image(one_minus(self.tau_star))

    @cached_property
    def XY(self) -> Sublattice:
        return saturation(self.relations)

    @cached_property
    def A_Y(self) -> QuotientGroup:
        return QuotientGroup(self.relations, self.XY)

    @property
    def characters(self) -> list[Vector]:
        return characters(self.A_Y)

    @property
    def rank(self) -> int:
        return self.XY.rank


@dataclass(frozen=True)
class OrbitEdge:
    lower: str
    upper: str
    alpha: int
    em_type: str

    def label(self) -> str:
        return f"α{self.alpha + 1} / {self.em_type}"


@dataclass
class OrbitGraph:
    pair: PairDatum
    nodes: dict[str, OrbitNode]
    edges: list[OrbitEdge]
    _cand: dict[str, tuple[WeylElement, ...]] = field(default_factory=dict, repr=False)

    @property
    def open_id(self) -> str:
        return max(self.nodes.values(), key=lambda y: y.dim).id

    @property
    def open_orbit(self) -> OrbitNode:
        return self.nodes[self.open_id]

    def codim(self, orbit_id: str) -> int:
        return self.open_orbit.dim - self.nodes[orbit_id].dim

    def up_edges(self, orbit_id: str) -> list[OrbitEdge]:
        return [e for e in self.edges if e.lower == orbit_id]

    def irreducible_count(self) -> int:
        return sum(y.A_Y.order for y in self.nodes.values())

    def wY_candidates(self, orbit_id: str) -> tuple[WeylElement, ...]:
        return wY_candidates(self, orbit_id)

    def violations(self) -> list[str]:
        return graph_violations(self)

    def to_json(self) -> dict[str, Any]:
        return {
            "orbits": [
                {"id": y.id, "tau_star": [list(r) for r in y.tau_star], "dim": y.dim}
                for y in self.nodes.values()
            ],
            "edges": [
                {"lower": e.lower, "upper": e.upper, "alpha": e.alpha + 1, "em_type": e.em_type}
                for e in self.edges
            ],
        }

    def to_dot(self, colors: Optional[dict[str, str]] = None) -> str:
        return to_dot(self, colors)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _fmt(lattice: Sublattice) -> str:
    return str([list(b) for b in lattice.basis])


def edge_violations(graph: OrbitGraph, edge: OrbitEdge) -> list[str]:
    """Dimension and lattice constraints of a single edge."""
    where = f"edge {edge.lower} -> {edge.upper} ({edge.label()})"
    if edge.lower not in graph.nodes or edge.upper not in graph.nodes:
        return [f"{where}: dangling orbit id"]
    rank = graph.pair.datum.rank
    if not 0 <= edge.alpha < rank:
        return [f"{where}: simple root index out of range"]
    lo, up = graph.nodes[edge.lower], graph.nodes[edge.upper]
    out = []
    if up.dim != lo.dim + 1:
        out.append(f"{where}: dim {lo.dim} -> {up.dim} is not a codimension-one raise")
    s = graph.pair.datum.reflections[edge.alpha]
    x_lo, x_up = lo.XY, up.XY
    s_lo, s_up = x_lo.transform(s), x_up.transform(s)
    if edge.em_type == "U":
        if x_up != s_lo:
            out.append(f"{where}: X*(upper) = {_fmt(x_up)} differs from s_alpha X*(lower) = {_fmt(s_lo)}")
    elif edge.em_type == "T":
        if not x_lo.issubset(x_up) or QuotientGroup(x_lo, x_up).invariant_factors != (0,):
            out.append(f"{where}: X*(upper)/X*(lower) is not Z ({_fmt(x_up)} over {_fmt(x_lo)})")
        if s_up != x_up:
            out.append(f"{where}: X*(upper) = {_fmt(x_up)} is not s_alpha-stable")
    elif edge.em_type == "N":
        if s_up != x_up:
            out.append(f"{where}: X*(upper) = {_fmt(x_up)} is not s_alpha-stable")
        if s_lo != x_lo:
            out.append(f"{where}: X*(lower) = {_fmt(x_lo)} is not s_alpha-stable")
    elif edge.em_type == "G":
        out.append(f"{where}: type G leaves the orbit fixed and cannot label an edge")
    else:
        out.append(f"{where}: unknown elementary modification type {edge.em_type!r}")
    return out


def graph_violations(graph: OrbitGraph) -> list[str]:
    out = []
    theta = graph.pair.theta_star
    r = graph.pair.datum.rank
    ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    for y in graph.nodes.values():
        if len(y.tau_star) != r or any(len(row) != r for row in y.tau_star):
            out.append(f"orbit {y.id}: tau_star is not {r}x{r}")
        elif mat_mul(y.tau_star, y.tau_star) != ident:
            out.append(f"orbit {y.id}: tau_star is not an involution")
    if out:
        return out
    top = sorted(y.dim for y in graph.nodes.values())
    if len(top) > 1 and top[-1] == top[-2]:
        out.append("no unique open orbit (several orbits of maximal dimension)")
    if graph.open_orbit.tau_star != theta:
        out.append(f"open orbit {graph.open_id}: tau_star differs from theta_star")
    for e in graph.edges:
        out.extend(edge_violations(graph, e))
    groups: dict[tuple[str, int], list[OrbitEdge]] = defaultdict(list)
    for e in graph.edges:
        groups[(e.upper, e.alpha)].append(e)
    s_of = graph.pair.datum.reflections
    for (upper, alpha), es in groups.items():
        types = {e.em_type for e in es}
        where = f"P_alpha{alpha + 1} over {upper}"
        if len(types) > 1:
            out.append(f"{where}: mixed modification types {sorted(types)}")
        elif types == {"T"}:
            if len(es) != 2:
                out.append(f"{where}: type T needs exactly two lower orbits, found {len(es)}")
            elif graph.nodes[es[0].lower].XY.transform(s_of[alpha]) != graph.nodes[es[1].lower].XY:
                out.append(f"{where}: the two type T lower orbits are not s_alpha-related")
        elif len(es) != 1:
            out.append(f"{where}: type {types.pop()} allows one lower orbit, found {len(es)}")
    has_up = {e.lower for e in graph.edges}
    for y in graph.nodes.values():
        if y.id != graph.open_id and y.id not in has_up:
            out.append(f"orbit {y.id}: no raising edge although it is not the open orbit")
    if not any(m.startswith("orbit") or "dangling" in m for m in out):
        for y in graph.nodes.values():
            try:
                cands = wY_candidates(graph, y.id)
            except GraphError as exc:
                out.append(str(exc))
                continue
            lengths = {w.length for w in cands}
            if lengths != {graph.codim(y.id)}:
                out.append(f"orbit {y.id}: W(Y) candidate lengths {sorted(lengths)} != codim {graph.codim(y.id)}")
    return out


def validate(graph: OrbitGraph, error=InputError) -> OrbitGraph:
    problems = graph_violations(graph)
    if problems:
        raise error("invalid orbit graph:\n  " + "\n  ".join(problems))
    return graph


# ---------------------------------------------------------------------------
# W(Y) as words of upward paths
# ---------------------------------------------------------------------------

def wY_candidates(graph: OrbitGraph, orbit_id: str) -> tuple[WeylElement, ...]:
    """Weyl elements ``s_{a_1} ... s_{a_k}`` for upward paths ``Y --a_1--> ... --a_k--> open``.

    ``a_1`` is the first raise out of ``Y``; the result is deduplicated by
    matrix and sorted by (length, canonical word).
    """
    if orbit_id not in graph.nodes:
        raise GraphError(f"unknown orbit {orbit_id!r}")
    cache = graph._cand
    if orbit_id in cache:
        return cache[orbit_id]
    group = weyl_group(graph.pair.datum)
    ups: dict[str, list[OrbitEdge]] = defaultdict(list)
    for e in graph.edges:
        ups[e.lower].append(e)
    open_id = graph.open_id

    def visit(y: str, stack: tuple[str, ...]) -> tuple[WeylElement, ...]:
        if y in cache:
            return cache[y]
        if y == open_id:
            out = (group.identity,)
        else:
            if y in stack:
                raise GraphError(f"orbit graph has a cycle through {y}")
            elems = {}
            for e in ups.get(y, ()):
                for w in visit(e.upper, stack + (y,)):
                    u = group.multiply(group.simple(e.alpha), w)
                    elems[u.matrix] = u
            if not elems:
                raise GraphError(f"orbit {y} cannot reach the open orbit {open_id}")
            out = tuple(sorted(elems.values(), key=lambda w: (w.length, w.word)))
        cache[y] = out
        return out

    return visit(orbit_id, ())


# ---------------------------------------------------------------------------
# Type A I generator
# ---------------------------------------------------------------------------

def involutions(n: int) -> list[tuple[int, ...]]:
    return [p for p in itertools.permutations(range(n)) if all(p[p[i]] == i for i in range(n))]


def inversions(p: Sequence[int]) -> int:
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])


def two_cycles(p: Sequence[int]) -> int:
    return sum(1 for i, x in enumerate(p) if x > i)


def cycle_label(p: Sequence[int]) -> str:
    cyc = [f"({i + 1}{x + 1})" for i, x in enumerate(p) if x > i]
    return "".join(cyc) or "e"


def permutation_word(p: Sequence[int]) -> tuple[int, ...]:
    """Reduced word ``(j_1, ..., j_k)`` with ``p = s_{j_1} o ... o s_{j_k}``."""
    q = list(p)
    rev = []
    while True:
        i = next((i for i in range(len(q) - 1) if q[i] > q[i + 1]), None)
        if i is None:
            return tuple(reversed(rev))
        q[i], q[i + 1] = q[i + 1], q[i]
        rev.append(i)


def _conj(i: int, p: Sequence[int]) -> tuple[int, ...]:
    s = list(range(len(p)))
    s[i], s[i + 1] = i + 1, i
    return tuple(s[p[s[x]]] for x in range(len(p)))


def _left(i: int, p: Sequence[int]) -> tuple[int, ...]:
    s = list(range(len(p)))
    s[i], s[i + 1] = i + 1, i
    return tuple(s[p[x]] for x in range(len(p)))


def _resolve_type(pair: PairDatum, lower: OrbitNode, upper: OrbitNode, alpha: int) -> str:
    s = pair.datum.reflections[alpha]
    if lower.XY.transform(s) == lower.XY and upper.XY.transform(s) == upper.XY:
        return "N"
    if lower.XY.issubset(upper.XY) and QuotientGroup(lower.XY, upper.XY).invariant_factors == (0,):
        return "T"
    raise ConsistencyError(
        f"edge {lower.id} -> {upper.id} (alpha{alpha + 1}) satisfies neither the T nor the N lattice test"
    )


def generate_AI_orbits(pair: PairDatum, n: Optional[int] = None) -> OrbitGraph:
    """Orbit graph of ``G/H`` for the type A I pairs, one orbit per involution of ``S_n``.

    ``tau_star(pi) = pi^* theta_star``; the identity involution is the open
    orbit and ``dim Y_pi = dim G/H - (l(pi) + c(pi)) / 2`` with ``c`` the
    number of 2-cycles.  Raising edges follow the moves ``pi -> s pi s``
    (type U) and ``pi -> s pi`` when ``s`` commutes with ``pi`` (type N or T,
    decided by the lattices).
    """
    if pair.family not in BUILTIN_FAMILIES:
        raise ConfigError(f"orbit generator supports the type A I families only, not {pair.label or pair.family!r}")
    n = pair.n if n is None else n
    if pair.n != n:
        raise ConfigError(f"pair {pair.label} has n={pair.n}, generator called with n={n}")
    group = weyl_group(pair.datum)
    dim_gh = (n * n - 1) - n * (n - 1) // 2
    perms = involutions(n)
    nodes = {}
    for p in sorted(perms, key=lambda p: (inversions(p) + two_cycles(p), p)):
        drop = inversions(p) + two_cycles(p)
        if drop % 2:
            raise ConsistencyError(f"odd dimension drop for {cycle_label(p)}")
        pi = group.from_word(permutation_word(p))
        tau = mat_mul(pi.matrix, pair.theta_star)
        nodes[cycle_label(p)] = OrbitNode(cycle_label(p), tau, dim_gh - drop // 2)
    edges = []
    for p in perms:
        for i in range(n - 1):
            q = _conj(i, p)
            if q != p:
                if inversions(q) < inversions(p):
                    edges.append(OrbitEdge(cycle_label(p), cycle_label(q), i, "U"))
            elif p[i] == i + 1:
                lo, up = nodes[cycle_label(p)], nodes[cycle_label(_left(i, p))]
                edges.append(OrbitEdge(lo.id, up.id, i, _resolve_type(pair, lo, up, i)))
    order = {k: j for j, k in enumerate(nodes)}
    edges.sort(key=lambda e: (order[e.lower], e.alpha, order[e.upper]))
    graph = OrbitGraph(pair, nodes, edges)
    return validate(graph, ConsistencyError)


# ---------------------------------------------------------------------------
# JSON and DOT
# ---------------------------------------------------------------------------

def load_orbits(document: Any, pair: PairDatum) -> OrbitGraph:
    """Build and validate an orbit graph from its JSON document (``alpha`` is 1-based)."""
    if not isinstance(document, dict) or not isinstance(document.get("orbits"), list):
        raise InputError("orbit document must be an object with an 'orbits' list")
    errors = []
    nodes: dict[str, OrbitNode] = {}
    for k, item in enumerate(document["orbits"]):
        try:
            oid = str(item["id"])
            tau = as_matrix(item["tau_star"])
            dim = int(item["dim"])
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(f"orbits[{k}]: malformed entry ({exc!r})")
            continue
        if oid in nodes:
            errors.append(f"orbits[{k}]: duplicate id {oid!r}")
            continue
        nodes[oid] = OrbitNode(oid, tau, dim)
    edges = []
    raw_edges = document.get("edges", [])
    if not isinstance(raw_edges, list):
        errors.append("'edges' must be a list")
        raw_edges = []
    for k, item in enumerate(raw_edges):
        try:
            e = OrbitEdge(str(item["lower"]), str(item["upper"]), int(item["alpha"]) - 1, str(item["em_type"]))
        except (KeyError, TypeError, ValueError) as exc:
            errors.append(f"edges[{k}]: malformed entry ({exc!r})")
            continue
        if e.lower not in nodes or e.upper not in nodes:
            errors.append(f"edges[{k}]: dangling orbit id in {e.lower!r} -> {e.upper!r}")
            continue
        edges.append(e)
    if not nodes:
        errors.append("orbit document lists no orbits")
    if errors:
        raise InputError("invalid orbit document:\n  " + "\n  ".join(errors))
    return validate(OrbitGraph(pair, nodes, edges))


_PALETTE = ("lightblue", "lightsalmon", "palegreen", "khaki", "plum", "lightgray", "aquamarine", "pink")


def to_dot(graph: OrbitGraph, colors: Optional[dict[str, str]] = None) -> str:
    """DOT text: orbits as nodes labelled ``id / dim / |A_Y|``, edges labelled ``alpha_i / type``."""
    lines = ["digraph orbits {", "  rankdir=BT;", '  node [shape=box, style="rounded,filled", fillcolor=white];']
    for y in graph.nodes.values():
        attrs = f'label="{y.id}\\ndim {y.dim}\\n|A_Y| = {y.A_Y.order}"'
        if colors and y.id in colors:
            attrs += f', fillcolor="{colors[y.id]}"'
        lines.append(f'  "{y.id}" [{attrs}];')
    for e in graph.edges:
        lines.append(f'  "{e.lower}" -> "{e.upper}" [label="{e.label()}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def palette_color(index: int) -> str:
    return _PALETTE[index % len(_PALETTE)]
