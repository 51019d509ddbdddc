import json

import pytest

from closurelab.cli import main, run_command
from closurelab.fixtures import E1, E4


@pytest.fixture
def files(tmp_path):
    e1 = tmp_path / "e1.fd"
    e1.write_text(E1)
    e4 = tmp_path / "e4.facets"
    e4.write_text(E4)
    return str(e1), str(e4)


def ok(*argv):
    res = run_command(argv)
    assert res.code == 0, res.stderr
    assert res.stderr == ""
    return res.stdout


def test_closure(files):
    e1, _ = files
    assert ok("closure", "--fds", e1, "--set", "b c") == "a b c d\n"
    lines = ok("closure", "--fds", e1, "--set", "b c", "--trace").splitlines()
    assert lines[0] == "a b c d" and lines[1] == "stage 0: b c"
    assert ok("closure", "--fds", e1, "--set", "{}") == "{}\n"


def test_keys_and_closed_sets(files):
    e1, _ = files
    assert ok("keys", "--fds", e1, "--of", "a b c d") == "a c / b c\n"
    assert ok("keys", "--fds", e1) == "{} / a / b / c / d / a c / a d / b c / b d / c d\n"
    assert ok("closed-sets", "--fds", e1) == "{} / c / d / a b / c d / a b d / a b c d\n"


def test_dd(files):
    e1, _ = files
    out = ok("dd", "--fds", e1, "--from", "a c", "--to", "b c").splitlines()
    assert out[0] == "yes"
    assert out[1:] == ["stage 0: a c", "stage 1: a b c  <= a -> a b"]
    assert ok("dd", "--fds", e1, "--from", "a", "--to", "b").splitlines()[0] == "no"


def test_functions(files):
    e1, _ = files
    assert ok("mincover", "--fds", e1) == E1.replace("a -> b", "a -> a b").replace(
        "b -> a\n", "b -> a b\n").replace("a c -> d", "a c -> a b c d")
    assert ok("canonicalize", "--fds", e1) == ok("mincover", "--fds", e1)
    assert ok("bases", "--fds", e1).splitlines() == [
        "a -> a b; b -> a b; a c -> a b c d",
        "a -> a b; b -> a b; b c -> a b c d",
        "a -> a b; b -> a b; a b c -> a b c d",
    ]
    assert ok("top-signature", "--fds", e1) == "a b / a b c d\n"
    span = ok("span", "--fds", e1, "--lefts", "a c").splitlines()
    assert "a b c -> a b c d" in span and "b c -> a b c d" not in span
    assert "b c -> a b c d" in ok("span", "--fds", e1, "--lefts", "a c; b").splitlines()


def test_flats_and_singleton(files):
    e1, e4 = files
    assert ok("flats", "--facets", e4, "--set", "c").splitlines()[:3] == [
        "topdown: c", "bottomup: a b c", "divergent: yes"]
    out = ok("singleton", "--fds", e1, "--left", "a b c", "--closed", "a b c d")
    assert "conflict: yes" in out and "mat12_dependent: yes" in out


def test_json_schema(files):
    e1, e4 = files
    cases = [
        ("closure", "--fds", e1, "--set", "b c", "--trace"),
        ("closed-sets", "--fds", e1),
        ("keys", "--fds", e1, "--of", "a b c d"),
        ("mincover", "--fds", e1),
        ("canonicalize", "--fds", e1),
        ("span", "--fds", e1, "--lefts", "a c"),
        ("dd", "--fds", e1, "--from", "a c", "--to", "b c"),
        ("bases", "--fds", e1),
        ("top-signature", "--fds", e1),
        ("flats", "--facets", e4, "--set", "c"),
        ("singleton", "--fds", e1, "--left", "a c", "--closed", "a b c d"),
        ("audit", "--fds", e1, "--claims", "MAT4,MAT12"),
    ]
    for argv in cases:
        res = run_command([*argv, "--json"])
        doc = json.loads(res.stdout)
        assert list(doc)[:3] == ["command", "universe", "result"]
        assert doc["command"] == argv[0]
        assert set(doc) <= {"command", "universe", "result", "verdicts"}
        assert all(isinstance(a, str) for a in doc["universe"])
    doc = json.loads(run_command(cases[-1] + ("--json",)).stdout)
    assert [v["claim"] for v in doc["verdicts"]] == ["MAT4", "MAT12"]
    assert doc["verdicts"][1]["status"] == "fail" and "witness" in doc["verdicts"][1]
    assert json.loads(run_command(cases[0] + ("--json",)).stdout)["result"]["closure"] == list("abcd")


def test_audit_exit_codes(files):
    e1, e4 = files
    assert run_command(["audit", "--fds", e1]).code == 0
    assert run_command(["audit", "--facets", e4, "--claims", "FL6"]).code == 0
    res = run_command(["audit", "--random", "3", "--universe", "3", "--seed", "5", "--json"])
    assert res.code == 0 and json.loads(res.stdout)["result"]["instances"] == 3


def test_audit_exit_one_on_must_pass_failure(files, monkeypatch):
    from closurelab import audit

    def broken(ctx):
        return {"error": "forced"}

    claim = audit.REGISTRY["CO6"]
    monkeypatch.setitem(audit.REGISTRY, "CO6", audit.Claim("CO6", claim.group, broken, claim.summary))
    assert run_command(["audit", "--fds", files[0], "--claims", "CO6"]).code == 1


@pytest.mark.parametrize("argv", [
    ["closure", "--fds", "missing.fd", "--set", "a"],
    ["frobnicate"],
    ["closure", "--set", "a"],
    ["audit", "--random", "2"],
    ["audit", "--random", "2", "--universe", "3", "--claims", "NOPE"],
])
def test_usage_errors_exit_two(argv):
    res = run_command(argv)
    assert res.code == 2 and res.stdout == ""
    assert res.stderr.count("\n") == 1 and res.stderr.startswith("closurelab: error:")


def test_parse_errors_exit_two(files, tmp_path):
    bad = tmp_path / "bad.fd"
    bad.write_text("attrs: a\nb -> a\n")
    res = run_command(["closure", "--fds", str(bad), "--set", "a"])
    assert res.code == 2 and "line 2" in res.stderr
    res = run_command(["closure", "--fds", files[0], "--set", "z"])
    assert res.code == 2
    res = run_command(["dd", "--fds", files[0], "--from", "a", "--to", "c"])
    assert res.code == 2


def test_output_is_deterministic(files):
    e1, _ = files
    argv = ["audit", "--fds", e1, "--json"]
    assert run_command(argv).stdout == run_command(argv).stdout


def test_main_writes_streams(files, capsys):
    assert main(["closure", "--fds", files[0], "--set", "b c"]) == 0
    assert capsys.readouterr().out == "a b c d\n"
    assert main(["closure"]) == 2
    assert "error" in capsys.readouterr().err
