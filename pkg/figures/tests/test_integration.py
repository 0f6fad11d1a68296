"""End-to-end: figures rendered from CSVs produced by the actual CLI.

The producing side is exercised strictly through its command line (the
external interface); small shot counts keep this fast.
"""

import hashlib
import json
import os
import shutil
import subprocess
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
import figures  # noqa: E402

HAVE_CLI = shutil.which("mbftqc") is not None or (
    subprocess.run([sys.executable, "-c", "import mbftqc"],
                   capture_output=True).returncode == 0)

pytestmark = pytest.mark.skipif(not HAVE_CLI, reason="mbftqc CLI unavailable")


def _cli(args):
    proc = subprocess.run([sys.executable, "-m", "mbftqc.cli"] + args,
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="module")
def produced(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("csv")
    sweep = tmp / "sweep.csv"
    _cli(["sweep", "--experiment", "gate-bench", "--gate", "H",
          "--code", "steane", "--p", "3e-3,6e-3,1e-2", "--shots", "2e5",
          "--seed", "5", "--fit", "--out", str(sweep)])
    bench = tmp / "bench.csv"
    _cli(["gate-bench", "--gate", "H", "--code", "steane", "--p", "1e-3",
          "--shots", "5e5", "--seed", "6", "--pq-rows", "--out", str(bench)])
    prep = tmp / "prep.csv"
    _cli(["prep", "--experiment", "purification", "--code", "steane",
          "--p", "1e-4,1e-3", "--shots", "4e5", "--seed", "7", "--xyz",
          "--out", str(prep)])
    return {"sweep": str(sweep), "bench": str(bench), "prep": str(prep),
            "dir": tmp}


def test_render_all_kinds_from_cli_output(produced):
    tmp = produced["dir"]
    outs = []
    for kind, csv in (("scaling", produced["sweep"]),
                      ("discard", produced["prep"]),
                      ("pq_steps", produced["bench"]),
                      ("xyz_hist", produced["prep"])):
        out = str(tmp / ("%s.png" % kind))
        figures.render({"kind": kind, "csv": csv, "out": out})
        assert os.path.getsize(out) > 4000
        outs.append(out)


def test_fit_overlay_matches_csv(produced):
    import csv as _csv
    with open(produced["sweep"]) as f:
        fit_rows = [r for r in _csv.DictReader(f) if r["experiment"] == "fit"]
    assert fit_rows, "CLI sweep must emit a fit row"
    alpha = float(fit_rows[0]["alpha"])
    assert 1.4 < alpha < 2.6


def test_deterministic_render_from_cli_output(produced):
    tmp = produced["dir"]
    hashes = []
    for i in (1, 2):
        out = str(tmp / ("det%d.png" % i))
        figures.render({"kind": "scaling", "csv": produced["sweep"],
                        "out": out})
        hashes.append(hashlib.sha256(open(out, "rb").read()).hexdigest())
    assert hashes[0] == hashes[1]
