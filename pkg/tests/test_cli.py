import csv
import io
import json
import subprocess
import sys

import pytest

from synclist.bounds import read_csv
from synclist.cli import main

CODEC = ["--field-size", "16", "--n", "15", "--k", "3", "--delta", "1/5", "--gamma", "2/5", "--epsilon", "1/4"]


def run(*argv):
    return main([str(a) for a in argv])


def test_sync_round_trip_and_determinism(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run("sync", "--n", 30, "--epsilon", "1/2", "--seed", 4, "--out", a, "-q", "--no-timestamp") == 0
    assert run("sync", "--n", 30, "--epsilon", "1/2", "--seed", 4, "--out", b, "-q", "--no-timestamp") == 0
    assert a.read_bytes() == b.read_bytes()
    assert run("verify", a, "--substrings", "--out", tmp_path / "v.json", "-q") == 0
    report = json.loads((tmp_path / "v.json").read_text())
    assert report["sync"] and report["substrings_self_matching"]


def test_timestamp_header(tmp_path):
    out = tmp_path / "s.txt"
    assert run("sync", "--n", 10, "--epsilon", "1/2", "--out", out, "-q") == 0
    assert out.read_text().startswith("# synclist sync ")
    assert run("verify", out, "-q", "--no-timestamp", "--out", tmp_path / "v.json") == 0


def test_usage_errors():
    assert run("sync", "--n", 10, "--epsilon", "3/2", "-q") == 2
    assert run("sync", "--n", 10, "--epsilon", 0, "-q") == 2
    with pytest.raises(SystemExit) as exc:
        run("sync", "--n", 10)
    assert exc.value.code == 2
    assert run("pipeline", "--n", 15, "-q") == 2
    assert run("mc", "--n", 8, "--rate", 0.1, "-q") == 2


def test_runtime_failures(tmp_path):
    assert run("sync", "--n", 30, "--epsilon", "1/2", "--q", 2, "--max-attempts", 20, "-q") == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("3 3 1 2\n1 1 2\n")
    assert run("verify", bad, "-q", "--out", tmp_path / "v.json") == 1
    assert run("verify", tmp_path / "missing.txt", "-q") == 1


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("SYNCLIST_OUTPUT_DIR", str(tmp_path / "outs"))
    assert run("bounds", "--q", 2, "--delta", "1/2", "--bounds", "deletion_upper", "--out", "b.csv", "-q") == 0
    rows = read_csv(io.StringIO((tmp_path / "outs" / "b.csv").read_text()))
    assert len(rows) == 1 and rows[0].value == 0.0


def test_bounds_csv(tmp_path):
    out = tmp_path / "grid.csv"
    assert run("bounds", "--q", "2,4", "--delta", "0,1/4,1/2,3/4", "--gamma", "0,1,2", "--l", "1,4",
               "--out", out, "-q", "--no-timestamp") == 0
    text = out.read_text()
    rows = list(csv.DictReader(io.StringIO(text)))
    assert any(r["provenance"] == "domain_error" and r["value"] == "" for r in rows)
    assert len(read_csv(io.StringIO(text))) == len(rows)
    assert run("bounds", "--q", 2, "--bounds", "nope", "-q") == 2


def test_encode_corrupt_decode(tmp_path):
    enc, rec, dec = tmp_path / "enc.json", tmp_path / "rec.json", tmp_path / "dec.json"
    assert run("encode", *CODEC, "--message", "4,0,9", "-o", enc, "--no-timestamp") == 0
    assert run("corrupt", "--input", enc, "--strategy", "random", "--delta", "1/5", "--gamma", "2/5",
               "--seed", 2, "-o", rec, "--no-timestamp") == 0
    pattern = json.loads(rec.read_text())["pattern"]
    assert len(pattern["del"]) == 3 and len(pattern["ins"]) == 6
    assert run("decode", *CODEC, "--input", rec, "-o", dec, "-q", "--no-timestamp") == 0
    assert [4, 0, 9] in json.loads(dec.read_text())["decoded"]


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "codec.json"
    cfg.write_text(json.dumps({"field_size": 16, "n": 15, "k": 3, "delta": "1/5", "gamma": "2/5",
                               "epsilon": "1/4", "L_cap": 8}))
    out = tmp_path / "p.json"
    assert run("pipeline", "--config", cfg, "--L-cap", 16, "--trials", 2, "-o", out, "-q",
               "--no-timestamp") == 0
    report = json.loads(out.read_text())
    assert report["config"]["codec"]["L_cap"] == 16
    assert report["codec"]["L_cap"] == 16


def test_pipeline_report(tmp_path):
    out = tmp_path / "p.json"
    assert run("pipeline", *CODEC, "--trials", 4, "--strategy", "none", "--strategy", "random",
               "-o", out, "-q", "--no-timestamp") == 0
    report = json.loads(out.read_text())
    rows = report["rows"]
    assert len(rows) == 8
    assert set(rows[0]) >= {"trial", "strategy", "num_del", "num_ins", "hit_count", "max_list", "avg_list",
                            "decoded_list_size", "contains_truth", "in_contract"}
    for r in rows:
        assert r["contains_truth"] and r["in_contract"]
        if r["strategy"] == "none":
            assert r["hit_count"] == 15
    assert report["summary"]["in_contract_failures"] == 0


def test_pipeline_over_budget_is_flagged(tmp_path):
    out = tmp_path / "p.csv"
    assert run("pipeline", *CODEC, "--trials", 3, "--strategy", "random", "--channel-delta", "3/5",
               "--format", "csv", "-o", out, "-q", "--no-timestamp") == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# config ")
    rows = list(csv.DictReader(lines[1:]))
    assert len(rows) == 3 and all(r["in_contract"] == "False" for r in rows)


def test_pipeline_jobs_same_output(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    common = ["pipeline", *CODEC, "--trials", 3, "-q", "--no-timestamp"]
    assert run(*common, "-o", a) == 0
    assert run(*common, "--jobs", 2, "-o", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_mc_and_confuse(tmp_path):
    out = tmp_path / "mc.json"
    assert run("mc", "--n", "6,8", "--rate", 0.2, "--delta", "1/2", "--trials", 10, "-o", out, "-q",
               "--no-timestamp") == 0
    res = json.loads(out.read_text())["results"]
    assert [r["n"] for r in res] == [6, 8]
    assert all({"seed", "trials", "estimate", "ci"} <= set(r) for r in res)
    out = tmp_path / "c.json"
    assert run("confuse", "--n", 8, "--delta", "1/4", "--gamma", "1/8", "-o", out, "-q", "--no-timestamp") == 0
    pair = json.loads(out.read_text())["pair"]
    assert pair["reachable"] and pair["x"] != pair["y"]


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "synclist.cli", "bounds", "--q", "2", "--delta", "1/2",
                           "--bounds", "deletion_upper", "-q", "--no-timestamp"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].startswith("2,1/2,,,deletion_upper,0.0")
