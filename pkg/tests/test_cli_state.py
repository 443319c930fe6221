import json

import pytest

from coprime_approx.checks import run_checks
from coprime_approx.cli import main
from coprime_approx.state import FORMAT_VERSION, ConstructionState, StateFormatError


def test_round_trip_reproduces_checks(state16):
    again = ConstructionState.loads(state16.dumps())
    assert again.dumps() == state16.dumps()
    assert [r.line() for r in run_checks(again)] == [r.line() for r in run_checks(state16)]


def test_integers_are_strings(state2):
    def walk(x, path=""):
        if isinstance(x, dict):
            for k, v in x.items():
                walk(v, f"{path}.{k}")
        elif isinstance(x, list):
            for v in x:
                walk(v, path)
        elif isinstance(x, int) and not isinstance(x, bool):
            raise AssertionError(f"native integer at {path}")
    walk(json.loads(state2.dumps()))


def test_canonical_text(state2):
    text = state2.dumps()
    assert text.endswith("\n") and ", " not in text and ": " not in text
    assert list(json.loads(text)) == sorted(json.loads(text))


def test_version_checked(state2):
    d = json.loads(state2.dumps())
    d["format_version"] = "999"
    with pytest.raises(StateFormatError):
        ConstructionState.from_json(d)
    assert FORMAT_VERSION == "1"


def test_deepened_keeps_prefix(state2):
    deep = state2.deepened(6)
    assert deep.levels[:3] == state2.levels
    assert deep.conv.v[:4] == state2.conv.v


def test_build_cli_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["build", "--depth", "6", "--out", str(a)]) == 0
    assert main(["build", "--depth", "6", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_build_default_dir_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("COPRIME_APPROX_OUT", str(tmp_path / "out"))
    assert main(["build", "--depth", "2"]) == 0
    assert (tmp_path / "out" / "state-d2.json").exists()


def test_usage_errors(tmp_path, capsys):
    assert main(["build", "--depth", "0"]) == 2
    assert main(["build", "--depth", "4", "--w-policy", "linear:3"]) == 2
    assert main(["build", "--depth", "4", "--perm", "seeded"]) == 2
    p = tmp_path / "s.json"
    main(["build", "--depth", "2", "--out", str(p)])
    assert main(["scan", str(p), "--qmax", "100"]) == 2
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_minimal_build_checks(tmp_path, capsys):
    p = tmp_path / "s.json"
    assert main(["build", "--depth", "2", "--out", str(p)]) == 0
    capsys.readouterr()
    assert main(["check", str(p)]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "(xy)" in out


def test_corrupted_x1_is_detected(tmp_path, capsys, state16):
    d = json.loads(state16.dumps())
    X = d["crt_pairs"][1]["X"]
    digit = "1" if X[4] != "1" else "2"
    d["crt_pairs"][1]["X"] = X[:4] + digit + X[5:]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d))
    assert main(["check", str(p)]) == 1
    out = capsys.readouterr().out
    failed = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert any("(xy)" in line or "CRT" in line for line in failed)


def test_truncated_and_missing_files(tmp_path, state2):
    p = tmp_path / "t.json"
    p.write_text(state2.dumps()[:500])
    assert main(["check", str(p)]) == 4
    assert main(["check", str(tmp_path / "nope.json")]) == 4
    p.write_text("[1, 2]")
    assert main(["digits", str(p)]) == 4


def test_scan_cli_writes_both_records(tmp_path, capsys):
    s = tmp_path / "s.json"
    main(["build", "--depth", "4", "--out", str(s)])
    prefix = tmp_path / "rep"
    assert main(["scan", str(s), "--qmax", "3000", "--out", str(prefix)]) == 0
    rep = json.loads((tmp_path / "rep.json").read_text())
    assert rep["best_primitive"]["coprime"] is True
    assert rep["best_nonprimitive"]["coprime"] is False
    assert "c_hat_lower" in (tmp_path / "rep.txt").read_text()


def test_digits_cli_deepens(tmp_path, capsys):
    s = tmp_path / "s.json"
    main(["build", "--depth", "2", "--out", str(s)])
    capsys.readouterr()
    assert main(["digits", str(s), "--digits", "25"]) == 0
    out = capsys.readouterr().out
    assert "eta   = 0.4579923055563808679654662" in out
    assert main(["digits", str(s), "--digits", "400", "--max-extra", "0"]) == 3


def test_erdos_subcommands(capsys):
    assert main(["erdos-grid", "--k", "2", "--json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert len(d["certificate"]["entries"]) == 21
    assert main(["erdos-b", "--samples", "50"]) == 0
    assert json.loads(capsys.readouterr().out)["samples"] == 50
