"""Command-line interface.

    sphereblock describe --pair builtin:psl_pso:3
    sphereblock classes  --pair builtin:psl_pso:4
    sphereblock blocks   --pair builtin:pgl_po:3 --dot orbits.dot
    sphereblock orbits   --pair builtin:psl_pso:3
    sphereblock verify   --max-n 6

Exit codes: 0 success, 2 input or configuration error, 3 consistency
violation (including a failed ``verify``).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence

from .blocks import block_report, check_path_independence, trivial_character_colors
from .errors import ConsistencyError, InputError
from .monodromy import class_table
from .orbitgraph import OrbitGraph, generate_AI_orbits, load_orbits
from .pairdata import BUILTIN_FAMILIES, PairDatum, PairInvariants, builtin_pair, derive_invariants
from .rootdata import build_root_datum, parse_word, rho_shift, weyl_group
from .verify import FAULTS, run_all

EXIT_OK, EXIT_INPUT, EXIT_CONSISTENCY = 0, 2, 3


@dataclass
class PairSpec:
    pair: PairDatum
    orbit_document: Optional[Any] = None
    little_weyl: Optional[list[str]] = None

    @property
    def builtin(self) -> bool:
        return self.pair.family is not None


def parse_pair_spec(text: str) -> PairSpec:
    """``builtin:family:n`` or the path of a pair JSON document."""
    if text.startswith("builtin:"):
        parts = text.split(":")
        if len(parts) != 3:
            raise InputError(f"expected builtin:family:n, got {text!r}")
        try:
            n = int(parts[2])
        except ValueError:
            raise InputError(f"n must be an integer in {text!r}") from None
        return PairSpec(builtin_pair(parts[1], n))
    path = Path(text)
    try:
        document = json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"pair file {text} not found") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"pair file {text} is not valid JSON: {exc}") from None
    return pair_spec_from_document(document)


def pair_spec_from_document(document: Any) -> PairSpec:
    if not isinstance(document, dict):
        raise InputError("pair document must be a JSON object")
    keys = {"builtin", "custom"} & set(document)
    if len(keys) != 1:
        raise InputError("pair document needs exactly one of 'builtin' or 'custom'")
    if "builtin" in document:
        body = document["builtin"]
        if not isinstance(body, dict) or "family" not in body or "n" not in body:
            raise InputError("'builtin' needs 'family' and 'n'")
        if not isinstance(body["n"], int):
            raise InputError("'builtin.n' must be an integer")
        return PairSpec(builtin_pair(str(body["family"]), body["n"]))
    body = document["custom"]
    if not isinstance(body, dict):
        raise InputError("'custom' must be an object")
    missing = [k for k in ("cartan_type", "rank", "theta_star") if k not in body]
    if missing:
        raise InputError(f"'custom' is missing {missing}")
    theta = body["theta_star"]
    if not isinstance(theta, list) or not all(
        isinstance(row, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in row) for row in theta
    ):
        raise InputError("theta_star must be a list of integer rows")
    if not isinstance(body["rank"], int):
        raise InputError("'rank' must be an integer")
    datum = build_root_datum(str(body["cartan_type"]), body["rank"], str(body.get("lattice_mode", "adjoint")))
    label = str(body.get("label", f"{datum.name} custom"))
    pair = PairDatum(datum, theta, label)
    little = body.get("little_weyl")
    if little is not None and not (isinstance(little, list) and all(isinstance(x, str) for x in little)):
        raise InputError("'little_weyl' must be a list of words such as \"s1.s2\"")
    return PairSpec(pair, body.get("orbits"), little)


def invariants_for(spec: PairSpec) -> PairInvariants:
    little = None
    if spec.little_weyl is not None:
        group = weyl_group(spec.pair.datum)
        little = [group.from_word(parse_word(word)) for word in spec.little_weyl]
    return derive_invariants(spec.pair, little)


def graph_for(spec: PairSpec) -> OrbitGraph:
    if spec.builtin:
        return generate_AI_orbits(spec.pair)
    if spec.orbit_document is None:
        raise InputError("orbit data required: custom pairs must supply an 'orbits' document")
    return load_orbits(spec.orbit_document, spec.pair)


def describe(spec: PairSpec) -> dict[str, Any]:
    inv = invariants_for(spec)
    datum = spec.pair.datum
    group = weyl_group(datum)
    samples = list({w.matrix: w for w in [group.simple(i) for i in range(datum.rank)] + [group.longest]}.values())
    return {
        "pair": spec.pair.label or datum.name,
        "cartan_type": datum.cartan_type,
        "rank": datum.rank,
        "lattice_mode": datum.lattice_mode,
        "weyl_order": len(group),
        "theta_star": [list(r) for r in spec.pair.theta_star],
        "K_full": inv.K_full.to_json(),
        "K_circ": inv.K_circ.to_json(),
        "C_factors": list(inv.C_group.invariant_factors),
        "C_order": inv.C_group.order,
        "W0_order": len(inv.W0),
        "rho2": list(datum.rho2),
        "rho_shift_samples": [{"w": w.word_string(), "shift": list(rho_shift(datum, w))} for w in samples],
    }


def classes(spec: PairSpec) -> dict[str, Any]:
    inv = invariants_for(spec)
    out = {"pair": spec.pair.label or spec.pair.datum.name}
    out.update(class_table(inv).to_json())
    return out


def blocks(spec: PairSpec, dot: Optional[str] = None) -> dict[str, Any]:
    graph = graph_for(spec)
    inv = invariants_for(spec)
    table = class_table(inv)
    paths = check_path_independence(graph, inv, table)
    if not paths.ok:
        raise ConsistencyError(f"path independence fails: {paths.violations[0]} ({len(paths.violations)} total)")
    report = block_report(graph, inv, table)
    if dot:
        Path(dot).write_text(graph.to_dot(trivial_character_colors(graph, report)))
    return report.to_json()


def orbits(spec: PairSpec, dot: Optional[str] = None) -> dict[str, Any]:
    graph = graph_for(spec)
    if dot:
        Path(dot).write_text(graph.to_dot())
    doc = graph.to_json()
    doc["pair"] = spec.pair.label or spec.pair.datum.name
    doc["irreducible_count"] = graph.irreducible_count()
    doc["W(Y)"] = {oid: [w.word_string() for w in graph.wY_candidates(oid)] for oid in graph.nodes}
    return doc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json-indent", type=int, default=2, metavar="K", help="JSON indentation (default 2)")
    with_pair = argparse.ArgumentParser(add_help=False)
    with_pair.add_argument(
        "--pair", required=True, help=f"builtin:FAMILY:N (families {', '.join(sorted(BUILTIN_FAMILIES))}) or a JSON file"
    )
    parser = argparse.ArgumentParser(prog="sphereblock", description="Monodromy classes and blocks of spherical pairs.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("describe", parents=[common, with_pair], help="root datum, X*(C) and W0")
    sub.add_parser("classes", parents=[common, with_pair], help="monodromy class table")
    p = sub.add_parser("blocks", parents=[common, with_pair], help="block decomposition of the irreducibles")
    p.add_argument("--dot", metavar="PATH", help="also write the orbit graph coloured by block")
    p = sub.add_parser("orbits", parents=[common, with_pair], help="orbit graph with W(Y) words")
    p.add_argument("--dot", metavar="PATH", help="also write the orbit graph as DOT")
    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--max-n", type=int, default=8, metavar="K", help="largest n to run (default 8)")
    p.add_argument("--json", action="store_true", help="emit results as JSON instead of a table")
    p.add_argument("--inject-fault", choices=FAULTS, help=argparse.SUPPRESS)
    return parser


def _emit(doc: Any, indent: int) -> None:
    sys.stdout.write(json.dumps(doc, indent=indent if indent > 0 else None, ensure_ascii=False) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            if args.max_n < 2:
                raise InputError("--max-n must be at least 2")
            results = run_all(args.max_n, args.inject_fault)
            if args.json:
                _emit([r.to_json() for r in results], args.json_indent)
            else:
                for r in results:
                    print(r.line())
            failed = [r.key for r in results if not r.ok]
            print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=sys.stderr)
            return EXIT_CONSISTENCY if failed else EXIT_OK
        spec = parse_pair_spec(args.pair)
        if args.command == "describe":
            doc = describe(spec)
        elif args.command == "classes":
            doc = classes(spec)
        elif args.command == "blocks":
            doc = blocks(spec, args.dot)
        else:
            doc = orbits(spec, args.dot)
        _emit(doc, args.json_indent)
        return EXIT_OK
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        print(f"consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
