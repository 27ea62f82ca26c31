import json

import pytest

from frontend import cli
from frontend.cli import EXIT_ERROR, EXIT_FALSE, EXIT_LIMIT, EXIT_OK, build_parser, run


def _read(path):
    return json.loads(path.read_text())


def test_group_by_name(tmp_path):
    out = tmp_path / "z4.json"
    assert run(["group", "--name", "Z4", "--out", str(out)]) == EXIT_OK
    data = _read(out)
    assert data["invocation"]["subcommand"] == "group"
    assert data["invocation"]["parameters"]["name"] == "Z4"
    assert len(data["result"]["mul"]) == 4


def test_group_file_roundtrip(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["group", "--name", "S3", "--individualize", "1", "--out", str(first)]) == EXIT_OK
    assert run(["group", "--table", str(first), "--out", str(second)]) == EXIT_OK
    assert _read(first)["result"] == _read(second)["result"]


def test_am_writes_rank_five(tmp_path):
    out = tmp_path / "a2.json"
    assert run(["am", "--group", "Z3", "--m", "2", "--out", str(out)]) == EXIT_OK
    result = _read(out)["result"]
    assert result["rank"] == 5
    assert len(result["class_of"]) == 9
    assert result["structure_constants"] is None


def test_am_with_constants(tmp_path):
    out = tmp_path / "a1.json"
    assert run(["am", "--group", "Z2", "--m", "1", "--constants", "--out", str(out)]) == EXIT_OK
    assert _read(out)["result"]["structure_constants"]


def test_stdout_output(capsys):
    assert run(["cyc", "--group", "Z4", "--m", "1"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["result"]["rank"] == 3
    assert data["invocation"]["parameters"]["m"] == 1


def test_wl(tmp_path):
    out = tmp_path / "wl.json"
    assert run(["wl", "--group", "Z3", "--m", "2", "--out", str(out)]) == EXIT_OK
    assert _read(out)["result"]["arity"] == 2


def test_cap_exceeded(tmp_path):
    assert run(["am", "--group", "Z4", "--m", "3", "--cap", "10", "--out", str(tmp_path / "x.json")]) == EXIT_LIMIT
    assert not (tmp_path / "x.json").exists()


def test_verify_cap_exceeded(tmp_path):
    out = tmp_path / "v.json"
    args = ["verify", "--theorem", "stabilization", "--group", "Z4", "--m", "2", "--k", "2", "--cap", "64"]
    assert run(args + ["--out", str(out)]) == EXIT_LIMIT
    assert _read(out)["result"][0]["verdict"] == "skipped"
    assert run(["verify", "--theorem", "stabilization", "--group", "Z4", "--m", "2"]) == EXIT_ERROR


def test_missing_file_and_bad_name(tmp_path):
    assert run(["compare", "--a", str(tmp_path / "missing.json"), "--b", str(tmp_path / "missing.json")]) == EXIT_ERROR
    assert run(["am", "--group", "Q4", "--m", "1"]) == EXIT_ERROR


def test_invalid_group_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "bad", "order": 2, "mul": [[0, 1], [0, 1]]}))
    assert run(["am", "--group", str(bad), "--m", "1"]) == EXIT_ERROR


def test_fingerprint_verdicts(tmp_path):
    out = tmp_path / "fp.json"
    assert run(["fingerprint", "--a", "Z4", "--b", "Z2xZ2", "--m", "2", "--out", str(out)]) == EXIT_FALSE
    assert _read(out)["result"]["fingerprint"]["equal"] is False
    assert run(["fingerprint", "--a", "Z3", "--b", "Z3", "--m", "2", "--confirm", "--out", str(out)]) == EXIT_OK
    assert _read(out)["result"]["matching"]["checked"] is True


def test_fingerprint_confirm_colors_once(monkeypatch, tmp_path):
    calls = []
    original = cli.joint_colorings

    def counting(*args, **kwargs):
        calls.append(args)
        return original(*args, **kwargs)

    monkeypatch.setattr(cli, "joint_colorings", counting)
    out = tmp_path / "fp.json"
    assert run(["fingerprint", "--a", "Z4", "--b", "Z4", "--m", "2", "--confirm", "--out", str(out)]) == EXIT_OK
    assert len(calls) == 1
    assert _read(out)["result"]["matching"]["discrepancies"] == []


def test_compare(tmp_path):
    a1, a2 = tmp_path / "a1.json", tmp_path / "a2.json"
    assert run(["am", "--group", "Z4", "--m", "1", "--out", str(a1)]) == EXIT_OK
    assert run(["cyc", "--group", "Z4", "--m", "1", "--out", str(a2)]) == EXIT_OK
    assert run(["compare", "--a", str(a1), "--b", str(a1), "--out", str(tmp_path / "c.json")]) == EXIT_OK
    assert run(["compare", "--a", str(a1), "--b", str(a2), "--mode", "coarser", "--out", str(tmp_path / "c.json")]) == EXIT_OK
    assert run(["compare", "--a", str(a1), "--b", str(a2), "--mode", "finer", "--out", str(tmp_path / "c.json")]) == EXIT_FALSE
    assert _read(tmp_path / "c.json")["result"]["classes_b"] == 3


def test_iso_group(tmp_path):
    out = tmp_path / "iso.json"
    assert run(["iso", "--mode", "group", "--a", "Z4", "--b", "Z2xZ2", "--out", str(out)]) == EXIT_FALSE
    assert _read(out)["result"]["found"] is False
    assert run(["iso", "--mode", "group", "--a", "Z6", "--b", "Z2xZ3", "--oracle", "via_aut", "--out", str(out)]) == EXIT_OK
    assert len(_read(out)["result"]["map"]) == 6


def test_iso_srings_from_files(tmp_path):
    a1 = tmp_path / "a1.json"
    assert run(["am", "--group", "Z3", "--m", "2", "--out", str(a1)]) == EXIT_OK
    out = tmp_path / "iso.json"
    assert run(["iso", "--mode", "algebraic", "--a", str(a1), "--b", "Z3", "--m", "2", "--out", str(out)]) == EXIT_OK
    assert _read(out)["result"]["class_map"][0] == 0
    assert run(["iso", "--mode", "combinatorial", "--a", str(a1), "--b", str(a1), "--out", str(out)]) == EXIT_OK


def test_verify_needs_seed_and_group(tmp_path):
    out = str(tmp_path / "v.json")
    assert run(["verify", "--theorem", "word", "--group", "Z3", "--m", "3", "--out", out]) == EXIT_ERROR
    assert run(["verify", "--theorem", "rank5", "--out", out]) == EXIT_ERROR


def test_verify_single_checks(tmp_path):
    out = tmp_path / "v.json"
    assert run(["verify", "--theorem", "rank5", "--group", "Z3", "--out", str(out)]) == EXIT_OK
    [report] = _read(out)["result"]
    assert report["verdict"] == "pass"
    assert "elapsed_seconds" not in report
    args = ["verify", "--theorem", "word", "--group", "Z3", "--m", "3", "--seed", "1", "--samples", "5"]
    assert run(args + ["--out", str(out)]) == EXIT_OK
    assert _read(out)["result"][0]["parameters"]["seed"] == 1


def test_verify_with_timings(tmp_path):
    out = tmp_path / "v.json"
    assert run(["verify", "--theorem", "iso_reductions", "--group", "Z4", "--group", "Z2xZ2", "--timings", "--out", str(out)]) == EXIT_OK
    assert _read(out)["result"][0]["elapsed_seconds"] is not None


@pytest.mark.slow
def test_verify_small_grid(tmp_path):
    out = tmp_path / "grid.json"
    assert run(["verify", "--group", "Z2", "--group", "Z3", "--seed", "0", "--samples", "5", "--stabilization-cap", "243", "--out", str(out)]) == EXIT_OK
    assert all(r["verdict"] in ("pass", "skipped") for r in _read(out)["result"])


def test_parser_requires_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])
