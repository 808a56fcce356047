import pytest

from sphereblock.blocks import (
    assign_class,
    block_report,
    canonical_w,
    check_path_independence,
    worker_count,
)
from sphereblock.errors import ConsistencyError, InputError
from sphereblock.monodromy import class_table
from sphereblock.orbitgraph import OrbitEdge, OrbitGraph, OrbitNode, generate_AI_orbits
from sphereblock.pairdata import PairDatum, builtin_pair, derive_invariants
from sphereblock.rootdata import build_root_datum


def setup(family, n):
    pair = builtin_pair(family, n)
    inv = derive_invariants(pair)
    return generate_AI_orbits(pair), inv, class_table(inv)


def test_open_orbit_trivial_character_is_class_of_zero():
    for n in (2, 3, 4, 5):
        graph, inv, table = setup("psl_pso", n)
        zero = inv.C_group.zero()
        assert assign_class(graph, inv, table, graph.open_id, graph.open_orbit.A_Y.zero()) == table.class_of(zero)


def test_psl3_examples():
    graph, inv, table = setup("psl_pso", 3)
    single = table.class_of((1, 1))
    big = table.class_of((0, 0))
    assert assign_class(graph, inv, table, "e", (1, 1)) == single
    for w in graph.wY_candidates("(13)"):
        for k in range(-2, 3):
            assert assign_class(graph, inv, table, "(13)", (), w, (k, -k)) == big


def test_open_orbit_lifts_agree():
    graph, inv, table = setup("psl_pso", 4)
    for chi in graph.open_orbit.characters:
        base = graph.open_orbit.A_Y.lift(chi)
        expected = assign_class(graph, inv, table, "e", chi)
        for shift in [(2, 0, 0), (0, -2, 4), (-6, 2, 2)]:
            lift = tuple(a + b for a, b in zip(base, shift))
            assert assign_class(graph, inv, table, "e", chi, lift=lift) == expected


@pytest.mark.parametrize("family,n,sizes", [("pgl_po", 3, [6, 1]), ("psl_pso", 2, [3]), ("psl_pso", 4, [21, 1, 1])])
def test_block_sizes(family, n, sizes):
    graph, inv, table = setup(family, n)
    report = block_report(graph, inv, table)
    assert sorted(report.sizes, reverse=True) == sizes


def test_psl5_three_nonempty_blocks():
    graph, inv, table = setup("psl_pso", 5)
    report = block_report(graph, inv, table)
    assert len(report.sizes) == 3 and all(report.sizes)


@pytest.mark.parametrize("family", ["psl_pso", "sl_so", "pgl_po"])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_report_invariants(family, n):
    graph, inv, table = setup(family, n)
    report = block_report(graph, inv, table)
    # partition property
    assert report.total == graph.irreducible_count()
    labels = [(m.orbit_id, m.chi) for block in report.blocks.values() for m in block]
    assert len(labels) == len(set(labels))
    # open orbit hits every class
    open_classes = {report.block_of(graph.open_id, chi) for chi in graph.open_orbit.characters}
    assert open_classes == set(range(len(table)))
    # neg compatibility: negating every chi of a block gives the block of neg_map
    for k, members in report.blocks.items():
        target = table.neg_map[k]
        for m in members:
            neg = graph.nodes[m.orbit_id].A_Y.negate(m.chi)
            assert report.block_of(m.orbit_id, neg) == target
        assert len(report.blocks[target]) == len(members)


@pytest.mark.parametrize("family", ["psl_pso", "pgl_po", "sl_so"])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_path_independence(family, n):
    graph, inv, table = setup(family, n)
    rep = check_path_independence(graph, inv, table, window=2)
    assert rep.ok, rep.violations[:3]
    assert rep.checked > 0


def test_threads_give_same_report(monkeypatch):
    graph, inv, table = setup("psl_pso", 4)
    monkeypatch.setenv("SPHEREBLOCK_THREADS", "1")
    one = check_path_independence(graph, inv, table, window=1)
    monkeypatch.setenv("SPHEREBLOCK_THREADS", "3")
    assert worker_count() == 3
    three = check_path_independence(graph, inv, table, window=1)
    assert one == three
    monkeypatch.setenv("SPHEREBLOCK_THREADS", "zero")
    with pytest.raises(InputError):
        worker_count()


def test_canonical_w_is_lex_least():
    graph, _, _ = setup("psl_pso", 4)
    for oid in graph.nodes:
        w = canonical_w(graph, oid)
        assert w.word == min(c.word for c in graph.wY_candidates(oid))


def test_bad_inputs():
    graph, inv, table = setup("psl_pso", 3)
    with pytest.raises(InputError):
        assign_class(graph, inv, table, "zz", ())
    with pytest.raises(InputError):
        assign_class(graph, inv, table, "e", (0, 0), lift=(1, 0))


def test_inclusion_violation_is_a_consistency_error():
    # theta = 1: K_circ = 0, but a hand-made orbit with X*(Y) = X*(T) sits below the open orbit
    datum = build_root_datum("A", 1)
    pair = PairDatum(datum, ((1,),), "toy")
    inv = derive_invariants(pair)
    table = class_table(inv)
    nodes = {"open": OrbitNode("open", ((1,),), 1), "low": OrbitNode("low", ((-1,),), 0)}
    graph = OrbitGraph(pair, nodes, [OrbitEdge("low", "open", 0, "U")])
    with pytest.raises(ConsistencyError, match="K_circ"):
        block_report(graph, inv, table)
    with pytest.raises(ConsistencyError):
        assign_class(graph, inv, table, "low", (1,))


def test_json_shape():
    graph, inv, table = setup("pgl_po", 3)
    doc = block_report(graph, inv, table).to_json()
    assert doc["pair"] == "PGL(3)/PO(3)"
    assert doc["num_classes"] == 2
    assert [b["size"] for b in doc["blocks"]] == [6, 1]
    assert doc["blocks"][1]["members"] == [{"orbit": "e", "chi": [1, 1]}]
    assert set(doc["blocks"][0]) == {"class_id", "class_rep", "size", "members"}
