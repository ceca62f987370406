import json
import subprocess
import sys
from fractions import Fraction
from types import SimpleNamespace

import pytest

import linerig.cli as cli
from linerig.cli import (
    EXIT_DISAGREE,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_VERDICT,
    Instance,
    instance_to_json,
    main,
    parse_instance,
)
from linerig import partitioned_graph

from _fixtures import FOUR_CYCLE, THETA, general_lines


def write_instance(tmp_path, name, graph, lines, placement=None):
    inst = Instance(dim=lines.dim, lines=lines, graph=graph, placement=placement)
    p = tmp_path / name
    p.write_text(json.dumps(instance_to_json(inst)), encoding="utf-8")
    return p


def test_instance_roundtrip_preserves_exact_numbers():
    data = {
        "format": 1,
        "dim": 2,
        "lines": [
            {"base": ["1/3", 0], "direction": [2, "-5/7"]},
            {"base": [4, -1], "direction": [1, 3]},
        ],
        "graph": {"n": 2, "part": [0, 1], "edges": [[0, 1]]},
        "placement": {"t": [1, "3/2"], "seed": 9},
    }
    inst = parse_instance(data)
    assert inst.lines.exact
    assert inst.placement == (Fraction(1), Fraction(3, 2))
    assert inst.placement_seed == 9
    again = parse_instance(instance_to_json(inst))
    assert again.lines.lines == inst.lines.lines
    assert again.graph == inst.graph
    assert again.placement == inst.placement

    out = instance_to_json(inst)
    assert out["lines"][0]["base"][0] == "1/3"
    assert out["lines"][0]["direction"][0] == 2  # whole fractions print as ints


def test_instance_floats_stay_floats():
    data = {
        "format": 1,
        "dim": 2,
        "lines": [{"base": [0.5, 0.0], "direction": [1.0, 2.0]}],
        "graph": {"n": 1, "part": [0], "edges": []},
    }
    inst = parse_instance(data)
    assert not inst.lines.exact
    assert instance_to_json(inst)["lines"][0]["base"][0] == 0.5


@pytest.mark.parametrize(
    "mangle",
    [
        lambda d: d.pop("format"),
        lambda d: d.update(format=2),
        lambda d: d.pop("lines"),
        lambda d: d["graph"].update(part=[0, 5]),  # part without a line
        lambda d: d["graph"].update(edges=[[0, 0]]),
        lambda d: d["lines"][0]["base"].__setitem__(0, "1/0"),
        lambda d: d["lines"][0]["base"].__setitem__(0, True),
        lambda d: d.update(dim=3),  # header disagrees with the lines
        lambda d: d.update(placement={"t": [1, 2, 3]}),
    ],
)
def test_parse_rejects_malformed_instances(tmp_path, mangle):
    data = {
        "format": 1,
        "dim": 2,
        "lines": [
            {"base": [0, 0], "direction": [1, 1]},
            {"base": [3, 1], "direction": [1, -2]},
        ],
        "graph": {"n": 2, "part": [0, 1], "edges": [[0, 1]]},
    }
    mangle(data)
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data), encoding="utf-8")
    assert main(["analyze", str(p)]) == EXIT_PARSE


def test_parse_rejects_garbage_files(tmp_path):
    p = tmp_path / "garbage.json"
    p.write_text("{not json", encoding="utf-8")
    assert main(["analyze", str(p)]) == EXIT_PARSE
    assert main(["analyze", str(tmp_path / "missing.json")]) == EXIT_PARSE


def test_analyze_yes_instance(tmp_path, capsys):
    p = write_instance(tmp_path, "theta.json", THETA, general_lines(2))
    assert main(["analyze", str(p)]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["format"] == 1
    assert rep["general_position"] and rep["crossing"]
    assert rep["regime"] == "general"
    assert rep["rigid"] and rep["redundantly_rigid"] and rep["partition_connected"]
    assert rep["globally_rigid"] is True
    assert rep["globally_rigid_note"] is None


def test_analyze_no_instance(tmp_path, capsys):
    p = write_instance(tmp_path, "c4.json", FOUR_CYCLE, general_lines(2))
    assert main(["analyze", str(p)]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["globally_rigid"] is False
    assert rep["violation"]["kind"] == "not_redundantly_rigid"
    assert tuple(rep["violation"]["edge"]) in FOUR_CYCLE.edges


def test_analyze_undefined_verdict(tmp_path, capsys):
    non_crossing = partitioned_graph(3, (0, 0, 0), [(0, 1), (1, 2), (0, 2)])
    p = write_instance(tmp_path, "flat.json", non_crossing, general_lines(1))
    assert main(["analyze", str(p)]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["globally_rigid"] is None
    assert "not crossing" in rep["globally_rigid_note"]


def test_analyze_out_flag(tmp_path):
    p = write_instance(tmp_path, "theta.json", THETA, general_lines(2))
    out = tmp_path / "report.json"
    assert main(["analyze", str(p), "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text(encoding="utf-8"))["globally_rigid"] is True


def test_certify_yes_with_replay(tmp_path, capsys):
    p = write_instance(tmp_path, "theta.json", THETA, general_lines(2))
    assert main(["certify", str(p), "--replay"]) == EXIT_OK
    captured = capsys.readouterr()
    cert = json.loads(captured.out)
    assert cert["decision"] is True
    assert cert["construction"]["components"]
    assert "replay: ok" in captured.err


def test_certify_no_exits_three_with_certificate(tmp_path, capsys):
    p = write_instance(tmp_path, "c4.json", FOUR_CYCLE, general_lines(2))
    assert main(["certify", str(p)]) == EXIT_VERDICT
    captured = capsys.readouterr()
    cert = json.loads(captured.out)
    assert cert["decision"] is False
    assert cert["violation"]["kind"] == "not_redundantly_rigid"
    assert "error:" in captured.err


def test_certify_rejects_out_of_scope_instances(tmp_path, capsys):
    non_crossing = partitioned_graph(3, (0, 0, 0), [(0, 1), (1, 2), (0, 2)])
    p = write_instance(tmp_path, "flat.json", non_crossing, general_lines(1))
    assert main(["certify", str(p)]) == EXIT_PARSE
    capsys.readouterr()


def test_random_is_deterministic(capsys):
    assert main(["random", "-n", "5", "-k", "2", "--seed", "42"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["random", "-n", "5", "-k", "2", "--seed", "42"]) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    inst = parse_instance(json.loads(first))
    assert inst.graph.n == 5 and len(inst.lines) == 2


def test_random_seed_env(monkeypatch, capsys):
    monkeypatch.setenv("LINERIG_SEED", "42")
    assert main(["random", "-n", "5", "-k", "2"]) == EXIT_OK
    via_env = capsys.readouterr().out
    assert main(["random", "-n", "5", "-k", "2", "--seed", "42"]) == EXIT_OK
    via_flag = capsys.readouterr().out
    assert via_env == via_flag
    monkeypatch.setenv("LINERIG_SEED", "not-a-seed")
    assert main(["random", "-n", "5", "-k", "2"]) == EXIT_PARSE


def test_random_ensure_yes(tmp_path, capsys):
    out = tmp_path / "inst.json"
    assert main(["random", "-n", "6", "-k", "3", "--seed", "3", "--ensure", "yes", "--out", str(out)]) == EXIT_OK
    assert main(["analyze", str(out)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["globally_rigid"] is True


def test_random_ensure_no(tmp_path, capsys):
    out = tmp_path / "inst.json"
    assert main(["random", "-n", "6", "-k", "3", "--seed", "3", "--ensure", "no", "--out", str(out)]) == EXIT_OK
    assert main(["analyze", str(out)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["globally_rigid"] is False


def test_random_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["random", "-n", "4", "-k", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["random", "-n", "0", "-k", "2"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["random", "-n", "4", "-k", "2", "-d", "1"])
    assert exc.value.code == 2


def test_verify_single_file_and_directory(tmp_path, capsys):
    write_instance(tmp_path, "a_theta.json", THETA, general_lines(2))
    write_instance(tmp_path, "b_c4.json", FOUR_CYCLE, general_lines(2))
    assert main(["verify", str(tmp_path), "--restarts", "80"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["files"] == 2 and rep["rigidity_disagreements"] == 0
    by_name = {e["file"]: e for e in rep["results"]}
    theta_entry = by_name[str(tmp_path / "a_theta.json")]
    c4_entry = by_name[str(tmp_path / "b_c4.json")]
    assert theta_entry["globally_rigid"] is True and theta_entry["oracle"] == "ok"
    assert theta_entry["oracle_classes"] == 1
    assert c4_entry["globally_rigid"] is False and c4_entry["oracle_classes"] >= 2


def test_verify_respects_stored_placement(tmp_path, capsys):
    placement = (Fraction(1), Fraction(2), Fraction(-1), Fraction(3))
    p = write_instance(tmp_path, "pinned.json", THETA, general_lines(2), placement)
    assert main(["verify", str(p), "--restarts", "60"]) == EXIT_OK
    entry = json.loads(capsys.readouterr().out)["results"][0]
    assert entry["oracle"] == "ok" and entry["oracle_classes"] == 1


def test_verify_skips_oracle_above_cap(tmp_path, capsys):
    n = 14
    part = tuple(i % 2 for i in range(n))
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1), (0, 2), (1, 3)]
    big = partitioned_graph(n, part, edges)
    p = write_instance(tmp_path, "big.json", big, general_lines(2))
    assert main(["verify", str(p)]) == EXIT_OK
    entry = json.loads(capsys.readouterr().out)["results"][0]
    assert entry["oracle"].startswith("skipped")
    assert entry["rigidity_agreement"]


def test_verify_empty_directory_is_a_parse_error(tmp_path):
    assert main(["verify", str(tmp_path)]) == EXIT_PARSE


def test_verify_flags_disagreements(tmp_path, monkeypatch, capsys):
    p = write_instance(tmp_path, "theta.json", THETA, general_lines(2))
    real = cli.is_rigid

    def contrarian(g, lines):
        v = real(g, lines)
        return SimpleNamespace(rigid=not v.rigid, regime=v.regime)

    monkeypatch.setattr(cli, "is_rigid", contrarian)
    assert main(["verify", str(p), "--restarts", "40"]) == EXIT_DISAGREE
    rep = json.loads(capsys.readouterr().out)
    assert rep["rigidity_disagreements"] == 1
    assert rep["results"][0]["rigidity_agreement"] is False


def test_module_entry_point(tmp_path):
    """The package runs as python -m linerig.cli with byte-identical output."""
    cmd = [sys.executable, "-m", "linerig.cli", "random", "-n", "4", "-k", "2", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, cwd=tmp_path)
    b = subprocess.run(cmd, capture_output=True, cwd=tmp_path)
    assert a.returncode == 0 and a.stdout == b.stdout
    json.loads(a.stdout)
