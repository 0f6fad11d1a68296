"""CLI orchestration: smoke runs, CSV schema, determinism across workers."""

import json
import subprocess
import sys

import pytest

from mbftqc.cli import main


def run_cli(args):
    return main(args)


def test_prep_smoke(tmp_path, capsys):
    out = tmp_path / "prep.csv"
    rc = run_cli(["prep", "--code", "steane", "--p", "1e-3",
                  "--shots", "1e5", "--seed", "7", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 2
    assert lines[0].startswith("experiment,code,gate,p,r,n_shots,accepted")
    man = json.loads((tmp_path / "prep.manifest.json").read_text())
    assert man["config"]["seed"] == 7 and "config_hash" in man


def test_gate_bench_sweep_with_fit(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = run_cli(["sweep", "--experiment", "gate-bench", "--gate", "H",
                  "--code", "steane", "--p", "3e-3,6e-3,1e-2",
                  "--shots", "2e5", "--seed", "3", "--fit",
                  "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert len(lines) == 5              # header + 3 points + fit row
    fit_row = lines[-1].split(",")
    alpha = float(fit_row[-2])
    assert 1.4 < alpha < 2.6


def test_worker_count_does_not_change_csv(tmp_path):
    texts = []
    for workers in ("1", "2"):
        out = tmp_path / ("w%s.csv" % workers)
        rc = run_cli(["prep", "--code", "steane", "--p", "2e-3",
                      "--shots", "3e5", "--seed", "11",
                      "--workers", workers, "--out", str(out)])
        assert rc == 0
        texts.append(out.read_text())
    assert texts[0] == texts[1]


def test_estimate_golden(capsys):
    rc = run_cli(["estimate"])
    captured = capsys.readouterr().out
    assert rc == 0
    assert "2240" in captured
    assert "11700" in captured
    assert "133029" in captured and "175383" in captured


def test_estimate_json(capsys):
    rc = run_cli(["estimate", "--json"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["steane"]["m"] == 64
    assert out["golay"]["n_t_per_rotation"] == 74
    assert abs(out["golay"]["m"] - 2844) <= 1


def test_circuit_dump_roundtrip(tmp_path, capsys):
    rc = run_cli(["circuit", "rz_prep", "--p", "0.001"])
    text = capsys.readouterr().out
    assert rc == 0
    from mbftqc.circuit import Circuit
    back = Circuit.from_text(text)
    assert back.to_text() == text


def test_bad_config_rejected(capsys):
    rc = run_cli(["prep", "--code", "steane", "--p", "2.0",
                  "--shots", "100"])
    assert rc == 2


def test_config_file_defaults(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"shots": "5e4"}))
    out = tmp_path / "o.csv"
    rc = run_cli(["--config", str(cfg), "prep", "--code", "steane",
                  "--p", "1e-3", "--out", str(out)])
    assert rc == 0
    assert ",50000," in out.read_text()


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mbftqc.cli", "estimate"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "2240" in proc.stdout
