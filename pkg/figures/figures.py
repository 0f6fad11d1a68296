#!/usr/bin/env python3
"""Batch regeneration of the benchmark figures from the lab's CSV output.

Reads the result CSV schema produced by the mbftqc CLI (one row per
experiment cell plus optional "fit", "pq" and "xyz" rows) and renders
publication-style plots:

  scaling   log-log logical error rate vs physical error rate, with the
            C p^alpha overlay taken from the CSV's fit row (never re-fit)
  discard   log-log post-selection discard rate vs physical error rate
  pq_steps  per-step failure probability p(Q) against the step index
  xyz_hist  per-qubit X/Y/Z occurrence frequencies with the model lines

Driven by a JSON spec file:

    {"kind": "scaling", "csv": "sweep.csv", "out": "scaling.png",
     "title": "...", "fit_overlay": true}

Rendering is deterministic: fixed style, no timestamps, byte-stable for a
fixed matplotlib version.  No statistics are computed here beyond reading
columns; analysis authority stays with the producer of the CSV.
"""

import argparse
import csv
import json
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 4.2),
    "figure.dpi": 130,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.bbox": "tight",
}

MARKERS = ("o", "^", "s", "d", "v", "*")
COLORS = ("#1f6fb4", "#d1342f", "#2e9950", "#8333b0", "#c7731d", "#3b3b3b")


class FigureError(Exception):
    pass


def read_rows(paths):
    rows = []
    for path in ([paths] if isinstance(paths, str) else paths):
        with open(path) as f:
            reader = csv.DictReader(f)
            got = list(reader)
        if not got:
            raise FigureError("no data rows in %s" % path)
        rows.extend(got)
    return rows


def _need(row, cols, where):
    for c in cols:
        if row.get(c) in (None, ""):
            raise FigureError("missing column %r in %s row" % (c, where))
    return [float(row[c]) for c in cols]


def _check_header(rows, cols):
    missing = [c for c in cols if c not in rows[0]]
    if missing:
        raise FigureError("missing column %r" % missing[0])


def _series_label(row):
    bits = [row.get("code") or "", row.get("gate") or row.get("experiment") or ""]
    return " ".join(b for b in bits if b)


def render_scaling(rows, spec, ax):
    _check_header(rows, ("p", "p_L"))
    fits = [r for r in rows if r.get("experiment") == "fit"]
    data = [r for r in rows if r.get("experiment") not in ("fit", "pq", "xyz")
            and r.get("p_L") not in (None, "")]
    if not data:
        raise FigureError("no scaling points")
    groups = {}
    for r in data:
        groups.setdefault(_series_label(r), []).append(r)
    for i, (label, rs) in enumerate(sorted(groups.items())):
        pts = sorted((_need(r, ["p", "p_L"], "scaling") for r in rs))
        xs = [a for a, b in pts if b > 0]
        ys = [b for a, b in pts if b > 0]
        lo = [max(float(r.get("ci_lo") or 0), 1e-300) for r in rs]
        hi = [float(r.get("ci_hi") or 0) for r in rs]
        if len(lo) == len(ys) and all(h > 0 for h in hi):
            err = ([max(y - l, 0) for y, l in zip(ys, sorted(lo))],
                   [max(h - y, 0) for y, h in zip(ys, sorted(hi))])
            ax.errorbar(xs, ys, yerr=err, fmt=MARKERS[i % 6],
                        color=COLORS[i % 6], label=label, ms=5, capsize=2,
                        lw=0, elinewidth=1)
        else:
            ax.plot(xs, ys, MARKERS[i % 6], color=COLORS[i % 6], label=label)
    if spec.get("fit_overlay", True) and fits:
        import numpy as np
        for i, fr in enumerate(fits):
            alpha, c = _need(fr, ["alpha", "C"], "fit")
            ps = sorted(float(r["p"]) for r in data if r.get("p"))
            xs = np.geomspace(ps[0], ps[-1], 64)
            ax.plot(xs, c * xs ** alpha, "--", color=COLORS[i % 6], lw=1,
                    label="%s fit: %.3g p^%.2f" % (fr.get("gate") or "", c, alpha))
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("physical error rate p")
    ax.set_ylabel("logical error rate")


def render_discard(rows, spec, ax):
    _check_header(rows, ("p", "discard_rate"))
    data = [r for r in rows if r.get("discard_rate") not in (None, "")
            and r.get("experiment") not in ("fit", "pq", "xyz")]
    if not data:
        raise FigureError("no discard points")
    groups = {}
    for r in data:
        groups.setdefault(_series_label(r), []).append(r)
    for i, (label, rs) in enumerate(sorted(groups.items())):
        pts = sorted(_need(r, ["p", "discard_rate"], "discard") for r in rs)
        xs = [a for a, b in pts if b > 0]
        ys = [b for a, b in pts if b > 0]
        ax.plot(xs, ys, MARKERS[i % 6] + "-", color=COLORS[i % 6],
                label=label, ms=5, lw=1)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("physical error rate p")
    ax.set_ylabel("discard rate")


def render_pq_steps(rows, spec, ax):
    _check_header(rows, ("r", "p_L"))
    data = [r for r in rows if r.get("experiment") == "pq"]
    if not data:
        raise FigureError("no pq rows")
    groups = {}
    for r in data:
        key = "%s %s p=%s" % (r.get("code"), r.get("gate"), r.get("p"))
        groups.setdefault(key, []).append(r)
    for i, (label, rs) in enumerate(sorted(groups.items())):
        pts = sorted((int(float(r["r"])), float(r["p_L"])) for r in rs)
        ax.plot([q for q, _ in pts], [v for _, v in pts],
                MARKERS[i % 6] + "-", color=COLORS[i % 6], label=label,
                ms=4, lw=1)
    ax.set_xlabel("step Q")
    ax.set_ylabel("per-step failure probability p(Q)")
    ax.set_yscale("log")


def render_xyz_hist(rows, spec, ax):
    _check_header(rows, ("r", "p_L", "gate"))
    data = [r for r in rows if r.get("experiment") == "xyz"]
    if not data:
        raise FigureError("no xyz rows")
    width = 0.27
    p = float(data[0]["p"])
    n = 1 + max(int(float(r["r"])) for r in data)
    for i, kind in enumerate(("X", "Y", "Z")):
        rs = sorted((int(float(r["r"])), float(r["p_L"]))
                    for r in data if r.get("gate") == kind)
        ax.bar([q + (i - 1) * width for q, _ in rs], [v for _, v in rs],
               width=width, color=COLORS[i], label=kind)
    # model lines: purified-block channel weights in units of p/15
    for w, c in ((6, COLORS[0]), (2, COLORS[1])):
        ax.axhline(w * p / 15.0, color=c, ls="--", lw=1)
    ax.set_xticks(range(n))
    ax.set_xlabel("qubit")
    ax.set_ylabel("per-qubit occurrence frequency")


RENDERERS = {
    "scaling": render_scaling,
    "discard": render_discard,
    "pq_steps": render_pq_steps,
    "xyz_hist": render_xyz_hist,
}


def render(spec: dict) -> str:
    kind = spec.get("kind")
    if kind not in RENDERERS:
        raise FigureError("unknown figure kind %r" % kind)
    for field in ("csv", "out"):
        if not spec.get(field):
            raise FigureError("spec needs %r" % field)
    rows = read_rows(spec["csv"])
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        RENDERERS[kind](rows, spec, ax)
        if spec.get("title"):
            ax.set_title(spec["title"])
        if spec.get("xlim"):
            ax.set_xlim(*spec["xlim"])
        if spec.get("ylim"):
            ax.set_ylim(*spec["ylim"])
        handles, _ = ax.get_legend_handles_labels()
        if handles:
            ax.legend(fontsize=7)
        fig.savefig(spec["out"], metadata={"Software": None})
        plt.close(fig)
    return spec["out"]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        description="render benchmark figures from result CSVs")
    ap.add_argument("--spec", required=True,
                    help="JSON figure spec (object or list of objects)")
    args = ap.parse_args(argv)
    with open(args.spec) as f:
        specs = json.load(f)
    if isinstance(specs, dict):
        specs = [specs]
    for spec in specs:
        try:
            out = render(spec)
        except FigureError as exc:
            print("error: %s" % exc, file=sys.stderr)
            return 2
        print("wrote %s" % out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
