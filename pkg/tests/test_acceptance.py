"""Acceptance criteria 1-7, one test each.

Each test records a ``PASS``/``FAIL`` line that is printed in the terminal
summary (and also to stdout, visible with ``-s``).
"""
import itertools
import json
import random
import time

import pytest

from conftest import ACCEPTANCE_LINES
from oracles import oracle_classes
from sphereblock import cli
from sphereblock.blocks import check_path_independence
from sphereblock.latticealg import QuotientGroup, Sublattice, determinant, mat_mul, saturation, smith_normal_form
from sphereblock.monodromy import class_table
from sphereblock.orbitgraph import generate_AI_orbits
from sphereblock.pairdata import builtin_pair, derive_invariants
from sphereblock.verify import structural_problems


def record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _classes_json(n):
    return cli.classes(cli.parse_pair_spec(f"builtin:psl_pso:{n}"))


def test_criterion_1_class_counts():
    expected = [1, 2, 3, 3, 3, 4, 5]
    got, slow = [], []
    for n in range(2, 9):
        start = time.perf_counter()
        got.append(_classes_json(n)["num_classes"])
        elapsed = time.perf_counter() - start
        limit = 1.0 if n <= 6 else 60.0
        if elapsed >= limit:
            slow.append(f"n={n} took {elapsed:.2f}s")
    ok = got == expected and not slow
    record(1, "class counts", ok, f"n=2..8 -> {got} (expected {expected}){'; ' + ', '.join(slow) if slow else ''}")


def test_criterion_2_singleton_blocks():
    want = {2: 0, 3: 1, 4: 2, 5: 1, 6: 0}
    got = {}
    for n in want:
        doc = cli.blocks(cli.parse_pair_spec(f"builtin:psl_pso:{n}"))
        got[n] = sum(1 for b in doc["blocks"] if b["size"] == 1)
    record(2, "singleton blocks", got == want, f"{got} (expected {want})")


def test_criterion_3_pgl3():
    start = time.perf_counter()
    spec = cli.parse_pair_spec("builtin:pgl_po:3")
    orbits = cli.orbits(spec)
    doc = cli.blocks(spec)
    elapsed = time.perf_counter() - start
    sizes = sorted(b["size"] for b in doc["blocks"])
    ok = len(orbits["orbits"]) == 4 and doc["total"] == 7 and sizes == [1, 6] and elapsed < 1.0
    record(3, "PGL(3)/PO(3)", ok, f"{len(orbits['orbits'])} orbits, {doc['total']} irreducibles, sizes {sizes}, {elapsed:.2f}s")


def test_criterion_4_path_independence():
    total, bad = 0, []
    for family in ("psl_pso", "pgl_po"):
        for n in range(2, 6):
            pair = builtin_pair(family, n)
            inv = derive_invariants(pair)
            rep = check_path_independence(generate_AI_orbits(pair), inv, class_table(inv), window=3)
            total += rep.checked
            bad.extend(rep.violations)
    record(4, "path independence", not bad, f"{total} assignments over window [-3,3], {len(bad)} violations")


def test_criterion_5_oracle_equivalence():
    mismatches, count = [], 0
    for family in ("psl_pso", "sl_so", "pgl_po"):
        for n in range(2, 6):
            inv = derive_invariants(builtin_pair(family, n))
            res, comps = oracle_classes(inv.datum, inv.pair.theta_star, radius=3)
            key = {c: res.keys([inv.C_group.lift(c)])[0] for c in inv.characters}
            mine = sorted(sorted(key[c] for c in block) for block in class_table(inv).classes)
            count += 1
            if mine != comps:
                mismatches.append(f"{family}:{n}")
    record(5, "oracle equivalence", not mismatches, f"{count} pairs, mismatches {mismatches or 'none'}")


def _snf_failures(m):
    u, d, v = smith_normal_form(m)
    problems = []
    if mat_mul(mat_mul(u, m), v) != d:
        problems.append("U M V != D")
    if abs(determinant(u)) != 1 or abs(determinant(v)) != 1:
        problems.append("transform not unimodular")
    rows, cols = len(d), len(d[0])
    if any(d[i][j] for i in range(rows) for j in range(cols) if i != j):
        problems.append("not diagonal")
    diag = [d[i][i] for i in range(min(rows, cols))]
    nz = [x for x in diag if x]
    if diag[: len(nz)] != nz or any(x < 0 for x in nz) or any(b % a for a, b in zip(nz, nz[1:])):
        problems.append("divisibility chain")
    if rows == cols:
        prod = 1
        for x in diag:
            prod *= x
        if prod != abs(determinant(m)):
            problems.append("|det| not preserved")
    return problems


def test_criterion_6_lattice_kernel():
    rng = random.Random(6)
    snf_bad = 0
    for _ in range(1000):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = [[rng.randint(-20, 20) for _ in range(cols)] for _ in range(rows)]
        snf_bad += bool(_snf_failures(m))
    sat_bad = 0
    for _ in range(500):
        dim = rng.randint(1, 6)
        gens = [[rng.randint(-20, 20) for _ in range(dim)] for _ in range(rng.randint(0, dim + 1))]
        lat = Sublattice.span(gens, dim)
        sat = saturation(lat)
        ok = saturation(sat) == sat and lat.issubset(sat) and QuotientGroup(lat, sat).is_finite
        sat_bad += not ok
    record(6, "lattice kernel", snf_bad == 0 and sat_bad == 0, f"SNF failures {snf_bad}/1000, saturation failures {sat_bad}/500")


def test_criterion_7_structural_invariants():
    problems, graphs = [], 0
    for family, n in itertools.product(("psl_pso", "sl_so", "pgl_po"), range(2, 7)):
        pair = builtin_pair(family, n)
        inv = derive_invariants(pair)
        graph = generate_AI_orbits(pair)
        graphs += 1
        problems.extend(f"{family}:{n}: {p}" for p in structural_problems(graph, inv, class_table(inv)))
    record(7, "structural invariants", not problems, f"{graphs} graphs, {len(problems)} problems")


def test_verify_command_passes(capsys):
    code = cli.main(["verify", "--max-n", "5", "--json"])
    out = capsys.readouterr().out
    assert code == 0
    assert all(r["ok"] for r in json.loads(out))


@pytest.mark.parametrize("fault", ["N2U", "N2T"])
def test_verify_negative_control(capsys, fault):
    assert cli.main(["verify", "--max-n", "3", "--inject-fault", fault]) == 3
    capsys.readouterr()
