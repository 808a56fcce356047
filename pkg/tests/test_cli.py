import json
import subprocess
import sys

import pytest

from sphereblock.cli import main
from sphereblock.orbitgraph import generate_AI_orbits
from sphereblock.pairdata import builtin_pair


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_describe(capsys):
    code, out, _ = run(capsys, "describe", "--pair", "builtin:psl_pso:3")
    assert code == 0
    doc = json.loads(out)
    assert doc["C_factors"] == [2, 2]
    assert doc["W0_order"] == 6
    assert doc["weyl_order"] == 6
    assert doc["rank"] == 2
    code, out, _ = run(capsys, "describe", "--pair", "builtin:psl_pso:2")
    doc = json.loads(out)
    assert doc["C_factors"] == [2] and doc["W0_order"] == 2
    assert doc["rho_shift_samples"] == [{"w": "s1", "shift": [-1]}]


@pytest.mark.parametrize("n,count", [(3, 2), (4, 3), (6, 3)])
def test_classes(capsys, n, count):
    code, out, _ = run(capsys, "classes", "--pair", f"builtin:psl_pso:{n}")
    assert code == 0
    assert json.loads(out)["num_classes"] == count


def test_blocks_and_dot(capsys, tmp_path):
    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "blocks", "--pair", "builtin:pgl_po:3", "--dot", str(dot))
    assert code == 0
    assert [b["size"] for b in json.loads(out)["blocks"]] == [6, 1]
    text = dot.read_text()
    assert text.startswith("digraph") and "fillcolor" in text
    code, out, _ = run(capsys, "blocks", "--pair", "builtin:psl_pso:2")
    assert [b["size"] for b in json.loads(out)["blocks"]] == [3]


def test_orbits(capsys):
    code, out, _ = run(capsys, "orbits", "--pair", "builtin:psl_pso:3", "--json-indent", "0")
    assert code == 0
    doc = json.loads(out)
    assert doc["irreducible_count"] == 7
    assert doc["W(Y)"]["(13)"] == ["s1.s2", "s2.s1"]


def test_deterministic_bytes(capsys):
    outs = {run(capsys, "blocks", "--pair", "builtin:psl_pso:4")[1] for _ in range(2)}
    assert len(outs) == 1
    outs = {run(capsys, "classes", "--pair", "builtin:sl_so:5")[1] for _ in range(2)}
    assert len(outs) == 1


def test_custom_pair_with_orbits(capsys, tmp_path):
    graph = generate_AI_orbits(builtin_pair("psl_pso", 3))
    doc = {
        "custom": {
            "cartan_type": "A",
            "rank": 2,
            "lattice_mode": "adjoint",
            "theta_star": [[-1, 0], [0, -1]],
            "orbits": graph.to_json(),
        }
    }
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "blocks", "--pair", str(path))
    assert code == 0
    assert sorted(b["size"] for b in json.loads(out)["blocks"]) == [1, 6]


def test_custom_pair_without_orbits(capsys, tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps({"custom": {"cartan_type": "A", "rank": 2, "theta_star": [[-1, 0], [0, -1]], "orbits": None}}))
    code, _, err = run(capsys, "blocks", "--pair", str(path))
    assert code == 2
    assert "orbit data required" in err
    code, out, _ = run(capsys, "describe", "--pair", str(path))
    assert code == 0


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        json.dumps([1, 2]),
        json.dumps({"builtin": {"family": "psl_pso", "n": 3}, "custom": {}}),
        json.dumps({"custom": {"cartan_type": "A", "rank": 2, "theta_star": [[2, 0], [0, 1]]}}),
        json.dumps({"custom": {"cartan_type": "A", "rank": 2, "theta_star": [[-1, 0], [0, "x"]]}}),
        json.dumps({"builtin": {"family": "psl_pso", "n": 11}}),
    ],
)
def test_input_errors_exit_2(capsys, tmp_path, content):
    path = tmp_path / "pair.json"
    path.write_text(content)
    code, _, err = run(capsys, "describe", "--pair", str(path))
    assert code == 2
    assert err.startswith("error:")


def test_bad_builtin_strings(capsys, tmp_path):
    assert run(capsys, "classes", "--pair", "builtin:psl_pso")[0] == 2
    assert run(capsys, "classes", "--pair", "builtin:nope:3")[0] == 2
    assert run(capsys, "classes", "--pair", "builtin:psl_pso:x")[0] == 2
    assert run(capsys, "classes", "--pair", str(tmp_path / "missing.json"))[0] == 2


def test_verify_subset_and_fault(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "3")
    assert code == 0
    assert out.count("[PASS]") == 7
    code, out, _ = run(capsys, "verify", "--max-n", "3", "--inject-fault", "N2U")
    assert code == 3
    assert "[FAIL] C7" in out
    code, out, _ = run(capsys, "verify", "--max-n", "3", "--json", "--inject-fault", "N2T")
    assert code == 3
    assert [r["ok"] for r in json.loads(out)][-1] is False


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sphereblock", "classes", "--pair", "builtin:psl_pso:3", "--json-indent", "0"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["num_classes"] == 2
