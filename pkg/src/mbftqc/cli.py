"""Command-line entry point.

Subcommands run one experiment cell or a sweep, write a CSV of results plus
a JSON manifest (fully resolved configuration, seeds, config hash) so any
run can be reproduced bit for bit, and print resource estimates.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import subprocess
import sys

from . import experiments as E
from . import estimator as ES
from .gadgets import REGISTRY, NoisePolicy


def _manifest(args: argparse.Namespace, extra=None) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items())
           if k not in ("func",) and not k.startswith("_")}
    blob = json.dumps(cfg, sort_keys=True, default=str).encode()
    man = {
        "config": cfg,
        "config_hash": hashlib.sha256(blob).hexdigest()[:16],
        "git_revision": _git_rev(),
    }
    if extra:
        man.update(extra)
    return man


def _git_rev() -> str:
    try:
        out = subprocess.run(["git", "rev-parse", "HEAD"],
                             capture_output=True, text=True, timeout=5)
        return out.stdout.strip() or "unknown"
    except Exception:
        return "unknown"


def _write_outputs(args, rows, manifest):
    csv_text = E.rows_to_csv(rows)
    if args.out:
        with open(args.out, "w") as f:
            f.write(csv_text)
        with open(args.out.rsplit(".", 1)[0] + ".manifest.json", "w") as f:
            json.dump(manifest, f, indent=2, sort_keys=True, default=str)
        print("wrote %s (%d rows)" % (args.out, len(rows)))
    else:
        sys.stdout.write(csv_text)


def _parse_plist(text: str):
    return [float(tok) for tok in text.split(",") if tok]


def _workers(args) -> int:
    if args.workers:
        return args.workers
    return int(os.environ.get("MBFTQC_WORKERS", "1"))


def cmd_prep(args):
    rows = []
    r = args.r if args.experiment == "distill" else None
    for p in _parse_plist(args.p):
        res = E.prep_benchmark(args.experiment, args.code, p,
                               int(float(args.shots)), args.seed,
                               r=r, workers=_workers(args),
                               tally_inference=getattr(args, 'xyz', False))
        rows.append(res.csv_row())
        if getattr(args, 'xyz', False):
            for gate, freqs in _xyz_rows(args.code, res):
                for q, f in enumerate(freqs):
                    rows.append({"experiment": "xyz", "code": args.code,
                                 "gate": gate, "p": p, "r": q,
                                 "n_shots": res.n_shots,
                                 "p_L": "%.6g" % f})
    _write_outputs(args, rows, _manifest(args))
    return 0


def _xyz_rows(code_name, res):
    """Per-qubit X/Y/Z occurrence frequencies from syndrome inference."""
    import numpy as np
    from . import codes
    inf = res.extra["inference"]
    lut = codes.lookup_for(code_name)
    n = codes.get_code(code_name).n
    size = len(lut.valid)
    marg_a = np.zeros(n)
    marg_b = np.zeros(n)
    joint = np.zeros(n)
    for syn in range(1, size):
        sup = int(lut.support[syn])
        for q in range(n):
            if (sup >> q) & 1:
                marg_a[q] += inf["syn_primary"][syn]
                marg_b[q] += inf["syn_locator"][syn]
    for key, cnt in inf["joint"].items():
        both = int(lut.support[int(key) // size]) & int(lut.support[int(key) % size])
        for q in range(n):
            if (both >> q) & 1:
                joint[q] += cnt
    n_ok = max(inf["accepted_ok"], 1)
    return (("X", (marg_a - joint) / n_ok), ("Y", joint / n_ok),
            ("Z", (marg_b - joint) / n_ok))


def cmd_gate_bench(args):
    rows = []
    pts = []
    for p in _parse_plist(args.p):
        res = E.repeated_gate_benchmark(args.gate, args.code, p, args.q_max,
                                        int(float(args.shots)), args.seed,
                                        workers=_workers(args))
        rows.append(res.csv_row())
        if getattr(args, 'pq_rows', False):
            # one row per step, reusing the r column for the step index
            for q in range(1, args.q_max + 1):
                rows.append({"experiment": "pq", "code": args.code,
                             "gate": args.gate, "p": p, "r": q,
                             "n_shots": res.n_shots,
                             "p_L": "%.6g" % res.p_of_q[q]})
        pts.append((p, res.p_l,
                    int(res.first_failures[res.extra["q_star"]])))
    if args.fit and len(pts) >= 3:
        fit = E.fit_power_law(pts)
        rows.append({"experiment": "fit", "code": args.code,
                     "gate": args.gate, "alpha": "%.4f" % fit.alpha,
                     "C": "%.6g" % fit.c})
    _write_outputs(args, rows, _manifest(args))
    return 0


def cmd_sweep(args):
    if args.experiment == "gate-bench":
        return cmd_gate_bench(args)
    rows, pts = [], []
    r = args.r if args.experiment == "distill" else None
    for p in _parse_plist(args.p):
        res = E.prep_benchmark(args.experiment, args.code, p,
                               int(float(args.shots)), args.seed,
                               r=r, workers=_workers(args))
        rows.append(res.csv_row())
        pts.append((p, res.p_l, res.failures))
    if args.fit and len(pts) >= 3:
        fit = E.fit_power_law(pts)
        rows.append({"experiment": "fit", "code": args.code,
                     "alpha": "%.4f" % fit.alpha, "C": "%.6g" % fit.c})
    _write_outputs(args, rows, _manifest(args))
    return 0


def cmd_rz_budget(args):
    budget = E.rz_budget(args.p, int(float(args.shots)), args.seed,
                         workers=_workers(args))
    prep, tele = budget.parts["prep"], budget.parts["tele"]
    rows = [prep.csv_row(), tele.csv_row(),
            {"experiment": "rz-budget", "code": "steane", "gate": "RZ",
             "p": args.p, "p_L": "%.6g" % budget.total}]
    print("p_rot  = %.4g" % budget.parts["p_rot"])
    print("p_tele = %.4g" % budget.parts["p_tele"])
    print("p_RZ   = %.4g  (= 2 (p_rot + p_tele), two RUS attempts)"
          % budget.total)
    _write_outputs(args, rows, _manifest(args))
    return 0


def cmd_distill(args):
    if args.extrapolate:
        budget = E.distill_budget(args.p, args.r, int(float(args.shots)),
                                  args.seed, workers=_workers(args),
                                  extrapolate_from=_parse_plist(args.extrapolate))
        sfit, tfit = budget.parts["s_fit"], budget.parts["t_fit"]
        print("p_S fit:    C=%.4g alpha=%d" % (sfit.c, sfit.alpha))
        print("p_tele fit: C=%.4g alpha=%d" % (tfit.c, tfit.alpha))
        rows = [{"experiment": "distill-extrapolated", "code": "golay",
                 "gate": "T", "p": args.p, "r": args.r,
                 "p_L": "%.6g" % budget.total}]
    else:
        budget = E.distill_budget(args.p, args.r, int(float(args.shots)),
                                  args.seed, workers=_workers(args))
        rows = [budget.parts["dist"].csv_row(), budget.parts["tele"].csv_row(),
                {"experiment": "distill-budget", "code": "golay", "gate": "T",
                 "p": args.p, "r": args.r, "p_L": "%.6g" % budget.total}]
    print("p_T = %.4g" % budget.total)
    _write_outputs(args, rows, _manifest(args))
    return 0


def cmd_fit(args):
    pts = []
    import csv as _csv
    with open(args.csv) as f:
        for row in _csv.DictReader(f):
            if row.get("p_L") and row.get("p"):
                pts.append((float(row["p"]), float(row["p_L"]),
                            int(float(row.get("accepted") or 1e9))))
    fit = E.fit_power_law(pts, fixed_alpha=args.alpha)
    print("C = %.6g, alpha = %.4f +- %.4f (domain %s)"
          % (fit.c, fit.alpha, fit.alpha_err, list(fit.domain)))
    return 0


def cmd_estimate(args):
    tables = ES.estimate_tables()
    sv, gv, rz = tables["steane"], tables["golay"], tables["rz"]
    if args.json:
        out = {
            "steane": {"m": sv.m, "m_raw": sv.m_raw, "eta": sv.eta,
                       "n_physical": sv.n_physical},
            "golay": {"m": gv.m, "m_raw": gv.m_raw, "eta": gv.eta,
                      "n_physical": gv.n_physical, "delta": gv.delta,
                      "n_t_per_rotation": gv.n_t_per_rotation},
            "rz": rz,
            "workloads": {k: vars(w) for k, w in tables["workloads"].items()},
        }
        print(json.dumps(out, indent=2, sort_keys=True))
        return 0
    print("Analog-rotation path (reference rates at p = 1e-4):")
    print("  log2 QV m = %d (raw %.1f), eta = %d, physical qubits = %,d"
          .replace(",d", "d") % (sv.m, sv.m_raw, sv.eta, sv.n_physical))
    print("  one rotation ~ %d T gates; ~%.2g rotations, ~%.2g T-equivalents"
          % (rz["t_per_rotation"], rz["rotations"], rz["t_equivalents"]))
    print("Distillation path (p_T = %.3g):" % ES.REFERENCE_PT_P1E4_GOLAY)
    print("  synthesis delta = %.4g, %d T per rotation" %
          (gv.delta, gv.n_t_per_rotation))
    print("  log2 QV m = %d (raw %.1f), eta = %d, physical qubits = %d"
          % (gv.m, gv.m_raw, gv.eta, gv.n_physical))
    print("  width-100 device: %d physical qubits" % (100 * ES.ETA_GOLAY))
    print("Workloads:")
    for name, w in tables["workloads"].items():
        verdict = ("feasible" if w.feasible
                   else "marginal" if w.marginal else "infeasible")
        print("  %-9s %d logical -> %d physical, total error %.3g (%s)"
              % (name, w.logical_qubits, w.n_physical, w.total_error, verdict))
    return 0


def cmd_circuit(args):
    from . import sampler as S
    noise = NoisePolicy(args.p)
    builder = REGISTRY[args.gadget]
    if args.gadget in ("lobt_h", "lobt_cz"):
        gc = builder(args.code, args.q_max, noise)
    elif args.gadget in ("lobt_rz", "lobt_t"):
        gc = builder(args.q_max, noise)
    elif args.gadget == "distill":
        gc = builder(args.r, noise)
    elif args.gadget == "rz_prep":
        gc = builder(noise)
    else:
        gc = builder(args.code, noise)
    text = gc.circuit.to_text()
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="mbftqc",
        description="Monte Carlo lab for teleportation-based fault-tolerant "
                    "gadgets on the Steane and Golay codes")
    ap.add_argument("--config", help="JSON file of defaults (flags win)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=2024)
        p.add_argument("--shots", default="1e6")
        p.add_argument("--workers", type=int, default=0,
                       help="worker processes (default MBFTQC_WORKERS or 1)")
        p.add_argument("--out", help="CSV output path")

    p = sub.add_parser("prep", help="state preparation benchmark")
    p.add_argument("--experiment", default="purification",
                   choices=["purification", "rz_prep", "distill"])
    p.add_argument("--code", default="steane", choices=["steane", "golay"])
    p.add_argument("--p", required=True, help="comma-separated error rates")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--xyz", action="store_true",
                   help="emit per-qubit X/Y/Z frequency rows")
    common(p)
    p.set_defaults(func=cmd_prep)

    p = sub.add_parser("gate-bench", help="repeated-application gate benchmark")
    p.add_argument("--gate", required=True,
                   choices=["H", "CZ", "RZ_tele", "T_tele"])
    p.add_argument("--code", default="steane", choices=["steane", "golay"])
    p.add_argument("--p", required=True)
    p.add_argument("--q-max", type=int, default=12)
    p.add_argument("--fit", action="store_true")
    p.add_argument("--pq-rows", action="store_true",
                   help="emit one row per benchmark step")
    common(p)
    p.set_defaults(func=cmd_gate_bench)

    p = sub.add_parser("sweep", help="sweep p and optionally fit C p^alpha")
    p.add_argument("--experiment", required=True,
                   choices=["gate-bench", "purification", "rz_prep", "distill"])
    p.add_argument("--gate", default="H",
                   choices=["H", "CZ", "RZ_tele", "T_tele"])
    p.add_argument("--code", default="steane", choices=["steane", "golay"])
    p.add_argument("--p", required=True)
    p.add_argument("--q-max", type=int, default=12)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--fit", action="store_true")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("rz-budget", help="analog-rotation error budget")
    p.add_argument("--p", type=float, required=True)
    common(p)
    p.set_defaults(func=cmd_rz_budget)

    p = sub.add_parser("distill", help="distillation budget / extrapolation")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--extrapolate",
                   help="comma-separated larger p values to fit from")
    common(p)
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("fit", help="fit C p^alpha to an existing CSV")
    p.add_argument("csv")
    p.add_argument("--alpha", type=float, default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("estimate", help="resource and QV estimates")
    p.add_argument("--json", action="store_true")
    p.add_argument("--table2", action="store_true",
                   help="kept for compatibility; same output")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("circuit", help="dump a gadget circuit as text")
    p.add_argument("gadget", choices=sorted(REGISTRY))
    p.add_argument("--code", default="steane", choices=["steane", "golay"])
    p.add_argument("--p", type=float, default=0.001)
    p.add_argument("--q-max", type=int, default=6)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_circuit)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    given = list(sys.argv[1:] if argv is None else argv)
    args = ap.parse_args(given)
    if args.config:
        with open(args.config) as f:
            defaults = json.load(f)
        for key, val in defaults.items():
            flag = "--" + key.replace("_", "-")
            if flag not in given and hasattr(args, key.replace("-", "_")):
                setattr(args, key.replace("-", "_"), val)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
