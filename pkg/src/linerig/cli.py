"""Command-line front end.

Subcommands::

    linerig analyze PATH            decision sheet for one instance
    linerig certify PATH            global-rigidity certificate (exit 3 on NO)
    linerig random -n N -k K ...    sample an instance file
    linerig verify PATH             cross-check deciders, exact rank, oracle

Instance files are JSON (UTF-8) in format 1::

    {
      "format": 1,
      "dim": 2,
      "lines": [{"base": [0, 0], "direction": [1, 2]}, ...],
      "graph": {"n": 4, "part": [0, 1, 0, 1], "edges": [[0, 1], ...]},
      "placement": {"t": [...], "seed": 7}         // optional
    }

Coordinates are JSON integers, floats, or exact rationals written as
strings like "3/7". Integers and rational strings stay exact end to end.

Exit codes: 0 success (whatever the verdict), 2 parse or usage errors,
3 verdict-dependent failure (certify on a NO instance, sampling budget
exhausted), 4 internal cross-check disagreement. The env var LINERIG_SEED
supplies the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .characterize import (
    InternalInconsistency,
    NotCrossing,
    NotGeneralPosition,
    certificate_to_json,
    construction_from_json,
    is_generically_globally_rigid,
    is_partition_connected,
    is_redundantly_rigid,
    is_rigid,
    replay,
)
from .linegeom import LineSet, is_general_position, line_from_point_direction
from .oracle import MAX_VERTICES, fiber_search
from .pgraph import PartitionedGraph, is_crossing, partitioned_graph
from .randgen import SamplingBudgetExceeded, random_decided_instance, random_instance
from .rigidity import framework, infinitesimally_rigid, random_generic_framework

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VERDICT = 3
EXIT_DISAGREE = 4


class ParseError(ValueError):
    """The instance file is malformed (exit 2)."""


class VerdictIsNo(RuntimeError):
    """certify was asked for a construction that cannot exist (exit 3)."""


@dataclass(frozen=True)
class Instance:
    dim: int
    lines: LineSet
    graph: PartitionedGraph
    placement: Optional[tuple] = None
    placement_seed: Optional[int] = None


def _num_from_json(x):
    if isinstance(x, bool):
        raise ParseError(f"{x!r} is not a coordinate")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad rational literal {x!r}") from None
    raise ParseError(f"bad coordinate {x!r}")


def _num_to_json(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return float(x)


def parse_instance(data) -> Instance:
    """Validate a decoded format-1 JSON object."""
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")
    if data.get("format") != 1:
        raise ParseError('unsupported instance format (want "format": 1)')
    try:
        dim = data["dim"]
        lines_raw = data["lines"]
        graph_raw = data["graph"]
        n = graph_raw["n"]
        part = graph_raw["part"]
        edges = graph_raw["edges"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing or misplaced field: {exc}") from None
    if not isinstance(dim, int) or not isinstance(n, int):
        raise ParseError("dim and graph.n must be integers")
    try:
        lines = LineSet(
            [
                line_from_point_direction(
                    [_num_from_json(c) for c in entry["base"]],
                    [_num_from_json(c) for c in entry["direction"]],
                )
                for entry in lines_raw
            ]
        )
        graph = partitioned_graph(n, part, edges)
    except ParseError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ParseError(f"bad instance data: {exc}") from None
    if lines.dim != dim:
        raise ParseError(f"lines live in dimension {lines.dim}, header says {dim}")
    if n and max(graph.part) >= len(lines):
        raise ParseError(f"part {max(graph.part)} has no line (only {len(lines)} given)")
    placement = None
    placement_seed = None
    if "placement" in data:
        try:
            placement = tuple(_num_from_json(x) for x in data["placement"]["t"])
            placement_seed = data["placement"].get("seed")
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad placement: {exc}") from None
        if len(placement) != n:
            raise ParseError(f"placement has {len(placement)} parameters, graph has {n}")
    return Instance(dim, lines, graph, placement, placement_seed)


def instance_to_json(inst: Instance) -> dict:
    data = {
        "format": 1,
        "dim": inst.dim,
        "lines": [
            {
                "base": [_num_to_json(c) for c in line.base],
                "direction": [_num_to_json(c) for c in line.direction],
            }
            for line in inst.lines
        ],
        "graph": {
            "n": inst.graph.n,
            "part": list(inst.graph.part),
            "edges": [list(e) for e in inst.graph.edges],
        },
    }
    if inst.placement is not None:
        data["placement"] = {"t": [_num_to_json(x) for x in inst.placement]}
        if inst.placement_seed is not None:
            data["placement"]["seed"] = inst.placement_seed
    return data


def load_instance(path) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from None
    return parse_instance(data)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _env_seed() -> int:
    raw = os.environ.get("LINERIG_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"LINERIG_SEED={raw!r} is not an integer") from None


def analyze_report(g: PartitionedGraph, lines: LineSet) -> dict:
    """The full decision sheet of one instance as a JSON-ready dict."""
    gp = is_general_position(lines)
    verdict = is_rigid(g, lines)
    red = is_redundantly_rigid(g, lines)
    pc = is_partition_connected(g)
    crossing = is_crossing(g)
    rep = {
        "format": 1,
        "general_position": gp is True,
        "general_position_violation": (
            None if gp is True else {"kind": gp.kind, "lines": sorted(gp.lines)}
        ),
        "regime": verdict.regime,
        "crossing": crossing,
        "rigid": verdict.rigid,
        "redundantly_rigid": red.redundant,
        "partition_connected": pc.connected,
    }
    if gp is True and crossing:
        cert = is_generically_globally_rigid(g, lines)
        rep["globally_rigid"] = cert.decision
        rep["globally_rigid_note"] = None
        if not cert.decision:
            v = cert.violation
            rep["violation"] = {
                "kind": v.kind,
                "rule": v.rule,
                "vertex": v.vertex,
                "edge": list(v.edge) if v.edge is not None else None,
                "component": list(v.component) if v.component is not None else None,
            }
    else:
        reasons = []
        if gp is not True:
            reasons.append("lines not in general position")
        if not crossing:
            reasons.append("graph is not crossing")
        rep["globally_rigid"] = None
        rep["globally_rigid_note"] = "verdict undefined: " + "; ".join(reasons)
    return rep


def cmd_analyze(args) -> int:
    inst = load_instance(args.path)
    rep = analyze_report(inst.graph, inst.lines)
    _emit(json.dumps(rep, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    inst = load_instance(args.path)
    try:
        cert = is_generically_globally_rigid(inst.graph, inst.lines)
    except (NotGeneralPosition, NotCrossing) as exc:
        raise ParseError(f"instance outside the decider's hypotheses: {exc}") from None
    data = certificate_to_json(cert)
    text = json.dumps(data, indent=2) + "\n"
    if not cert.decision:
        sys.stdout.write(text)
        v = cert.violation
        raise VerdictIsNo(f"not globally rigid ({v.kind}); no construction exists")
    _emit(text, args.out)
    if args.replay:
        replay(inst.graph, construction_from_json(data["construction"]))
        print("replay: ok", file=sys.stderr)
    return EXIT_OK


def cmd_random(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    if args.ensure is None:
        g, ls = random_instance(args.n, args.k, args.d, seed)
    else:
        g, ls, _ = random_decided_instance(args.n, args.k, args.d, seed, args.ensure == "yes")
    inst = Instance(dim=args.d, lines=ls, graph=g)
    _emit(json.dumps(instance_to_json(inst), indent=2) + "\n", args.out)
    return EXIT_OK


def _verify_one(path, restarts: int, seed: int) -> dict:
    inst = load_instance(path)
    g, lines = inst.graph, inst.lines
    comb = is_rigid(g, lines)
    rank_rep = infinitesimally_rigid(g, lines, seed=seed)
    entry = {
        "file": str(path),
        "rigid_combinatorial": comb.rigid,
        "rigid_rank": rank_rep.rigid,
        "rigidity_agreement": comb.rigid == rank_rep.rigid,
    }
    if is_general_position(lines) is True and is_crossing(g):
        entry["globally_rigid"] = is_generically_globally_rigid(g, lines).decision
    else:
        entry["globally_rigid"] = None
    if g.n == 0:
        entry["oracle"] = "skipped: empty graph"
    elif g.n > MAX_VERTICES:
        entry["oracle"] = f"skipped: {g.n} vertices exceed the oracle cap {MAX_VERTICES}"
    else:
        if inst.placement is not None:
            fw = framework(g, lines, [float(x) for x in inst.placement])
        else:
            fw = random_generic_framework(g, lines, seed=seed, mode="float")
        res = fiber_search(fw, restarts=restarts, seed=seed)
        entry["oracle_classes"] = len(res.classes)
        entry["oracle_converged"] = res.n_converged
        warn = None
        if entry["globally_rigid"] is True and len(res.classes) != 1:
            warn = f"decider says YES but the oracle found {len(res.classes)} classes"
        elif entry["globally_rigid"] is False and len(res.classes) < 2:
            warn = f"decider says NO but the oracle found {len(res.classes)} classes"
        entry["oracle"] = "ok" if warn is None else f"warning: {warn}"
    return entry


def cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    p = Path(args.path)
    if p.is_dir():
        paths = sorted(p.glob("*.json"))
        if not paths:
            raise ParseError(f"no *.json files in {p}")
    else:
        paths = [p]
    results = [_verify_one(path, args.restarts, seed) for path in paths]
    disagreements = sum(1 for e in results if not e["rigidity_agreement"])
    report = {
        "format": 1,
        "files": len(results),
        "rigidity_disagreements": disagreements,
        "results": results,
    }
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_DISAGREE if disagreements else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linerig",
        description="Rigidity and global rigidity of bar-joint frameworks "
        "with vertices constrained to fixed lines.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="decision sheet for one instance")
    pa.add_argument("path", help="instance JSON file")
    pa.add_argument("--out", help="write the report here instead of stdout")
    pa.set_defaults(func=cmd_analyze)

    pc = sub.add_parser("certify", help="emit a global-rigidity certificate")
    pc.add_argument("path", help="instance JSON file")
    pc.add_argument("--out", help="write the certificate here instead of stdout")
    pc.add_argument("--replay", action="store_true", help="re-validate the emitted certificate")
    pc.set_defaults(func=cmd_certify)

    pr = sub.add_parser("random", help="sample a random instance")
    pr.add_argument("-n", type=int, required=True, help="number of vertices (>= 1)")
    pr.add_argument("-k", type=int, required=True, help="number of lines (>= 1)")
    pr.add_argument("-d", type=int, default=2, help="ambient dimension (default 2)")
    pr.add_argument("--seed", type=int, default=None, help="sampling seed (default LINERIG_SEED)")
    pr.add_argument(
        "--ensure",
        choices=("yes", "no"),
        default=None,
        help="resample until the global verdict matches",
    )
    pr.add_argument("--out", help="write the instance here instead of stdout")
    pr.set_defaults(func=cmd_random)

    pv = sub.add_parser("verify", help="cross-check deciders, exact rank, and the oracle")
    pv.add_argument("path", help="instance file or a directory of *.json files")
    pv.add_argument("--restarts", type=int, default=200, help="oracle restarts (default 200)")
    pv.add_argument("--seed", type=int, default=None, help="placement seed (default LINERIG_SEED)")
    pv.add_argument("--out", help="write the report here instead of stdout")
    pv.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "random" and (args.n < 1 or args.k < 1 or args.d < 2):
        parser.error("random needs n >= 1, k >= 1, d >= 2")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (VerdictIsNo, SamplingBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_DISAGREE


if __name__ == "__main__":
    sys.exit(main())
