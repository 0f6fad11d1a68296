"""Benchmarking procedures: preparation error/discard rates, repeated-gate
benchmarking with per-step failure extraction, error budgets, power-law fits.

Per-step rates follow the first-failure construction: record the first step
Q whose decoded validation disagrees with the expected outcome (or whose
byproduct decode failed), histogram N(Q) over shots, and form

    p(Q) = N(Q) / (N_shots - sum_{q<Q} N(q)),

taking p_L = max_Q p(Q) to skip the fill-in transient.  Preparation
benchmarks instead discard on any postselect detector and count validation
failures among accepted shots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import sampler as S
from . import codes as _codes
from .gadgets.base import AncillaModel, NoisePolicy
from .gadgets.purification import purification_zero
from .gadgets.analog import analog_ancilla_prep
from .gadgets.distill import distillation
from .gadgets import lobt


def wilson_interval(k: int, n: int, z: float = 1.96):
    """95% Wilson score interval for a binomial proportion."""
    if n == 0:
        return 0.0, 1.0
    ph = k / n
    denom = 1 + z * z / n
    center = (ph + z * z / (2 * n)) / denom
    half = z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class BenchmarkResult:
    experiment: str
    code: str
    gate: str
    p: float
    n_shots: int
    q_max: int
    first_failures: np.ndarray      # N(Q), index 0 unused
    p_of_q: np.ndarray
    p_l: float
    ci: tuple
    accepted: int = 0
    discard_rate: float = 0.0
    failures: int = 0
    extra: dict = field(default_factory=dict)

    def csv_row(self, **over):
        row = {
            "experiment": self.experiment, "code": self.code,
            "gate": self.gate, "p": self.p, "r": self.extra.get("r", ""),
            "n_shots": self.n_shots, "accepted": self.accepted,
            "discard_rate": "%.6g" % self.discard_rate,
            "p_L": "%.6g" % self.p_l,
            "ci_lo": "%.6g" % self.ci[0], "ci_hi": "%.6g" % self.ci[1],
            "alpha": "", "C": "",
        }
        row.update(over)
        return row


@dataclass
class PowerLawFit:
    c: float
    alpha: float
    alpha_err: float
    c_log_err: float
    domain: tuple                   # p values actually used
    fixed_alpha: float = None

    def predict(self, p):
        return self.c * p ** self.alpha


@dataclass
class ErrorBudget:
    p: float
    parts: dict
    total: float
    label: str


CSV_COLUMNS = ["experiment", "code", "gate", "p", "r", "n_shots", "accepted",
               "discard_rate", "p_L", "ci_lo", "ci_hi", "alpha", "C"]


def rows_to_csv(rows) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(str(row.get(c, "")) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


# -- chunked drivers -------------------------------------------------------------


def _chunk_plan(n_shots: int):
    n_chunks = (n_shots + S.CHUNK_SHOTS - 1) // S.CHUNK_SHOTS
    for cid in range(n_chunks):
        lo = cid * S.CHUNK_SHOTS
        yield cid, min(S.CHUNK_SHOTS, n_shots - lo)


def run_prep(gadget, cs, n_shots, seed, tally_inference=False,
             collect_probes=False, workers=1):
    """Drive a single-step postselected gadget.

    Returns dict with accepted, failures, and optionally per-syndrome tallies
    (for error-location inference) and probe-derived residual patterns.
    """
    val = gadget.info["validation_group"]
    loc = gadget.info.get("locator_group")
    out = {
        "n_shots": n_shots, "accepted": 0, "failures": 0,
        "syn_primary": None, "syn_locator": None,
        "probe_x": [], "probe_z": [], "probe_identity": 0,
    }

    def work(args):
        cid, take = args
        dirty, flips = S.sample_chunk_flips(cs, seed, cid, S.CHUNK_SHOTS)
        keep = dirty < take
        dirty, flips = dirty[keep], flips[keep]
        res = S.process_groups(cs, flips, record_syndromes=tally_inference)
        det = S.detector_bits(cs, flips, gadget.postselect)
        rej = np.zeros(len(dirty), np.uint8)
        for name in gadget.postselect:
            rej |= det[name]
        acc = rej == 0
        n_clean = take - len(dirty)
        part = {
            "accepted": n_clean + int(acc.sum()),
            "failures": int(res.delta[val][acc].sum()),
        }
        if tally_inference:
            ok = acc & (res.delta[val] == 0)
            size = len({g.name: g for g in cs.groups}[val].lut_valid)
            sp = np.zeros(size, np.int64)
            sl = np.zeros(size, np.int64)
            joint = {}
            a = res.syndrome[val][0][ok]
            b = res.syndrome[loc][0][ok]
            sp += np.bincount(a, minlength=size)
            sl += np.bincount(b, minlength=size)
            both = a.astype(np.int64) * size + b
            nz = both[(a > 0) & (b > 0)]
            if nz.size:
                vals, cnts = np.unique(nz, return_counts=True)
                joint = dict(zip(vals.tolist(), cnts.tolist()))
            part.update(syn_primary=sp, syn_locator=sl, joint=joint,
                        clean_ok=n_clean)
        if collect_probes:
            slots = gadget.info["probe_slots"]
            xm = np.zeros(len(dirty), np.int64)
            zm = np.zeros(len(dirty), np.int64)
            for q, (sx, sz) in enumerate(slots):
                xm |= S.slot_bits(flips, sx).astype(np.int64) << q
                zm |= S.slot_bits(flips, sz).astype(np.int64) << q
            nzp = acc & ((xm != 0) | (zm != 0))
            part.update(probe_x=xm[nzp], probe_z=zm[nzp],
                        probe_identity=n_clean + int((acc & ~nzp).sum()))
        return part

    for part in _parallel_map(work, list(_chunk_plan(n_shots)), workers):
        out["accepted"] += part["accepted"]
        out["failures"] += part["failures"]
        if tally_inference:
            out["syn_primary"] = (part["syn_primary"] if out["syn_primary"] is None
                                  else out["syn_primary"] + part["syn_primary"])
            out["syn_locator"] = (part["syn_locator"] if out["syn_locator"] is None
                                  else out["syn_locator"] + part["syn_locator"])
            out.setdefault("joint", {})
            for k, v in part["joint"].items():
                out["joint"][k] = out["joint"].get(k, 0) + v
            out["clean_ok"] = out.get("clean_ok", 0) + part["clean_ok"]
        if collect_probes:
            out["probe_x"].append(part["probe_x"])
            out["probe_z"].append(part["probe_z"])
            out["probe_identity"] += part["probe_identity"]
    if collect_probes:
        out["probe_x"] = (np.concatenate(out["probe_x"])
                          if out["probe_x"] else np.empty(0, np.int64))
        out["probe_z"] = (np.concatenate(out["probe_z"])
                          if out["probe_z"] else np.empty(0, np.int64))
    return out


def run_bench(gadget, cs, n_shots, seed, workers=1):
    """First-failure histogram over the gadget's step specs."""
    steps = gadget.steps
    q_max = max(s.index for s in steps)

    def work(args):
        cid, take = args
        dirty, flips = S.sample_chunk_flips(cs, seed, cid, S.CHUNK_SHOTS)
        keep = dirty < take
        dirty, flips = dirty[keep], flips[keep]
        res = S.process_groups(cs, flips)
        first = np.full(len(dirty), q_max + 1, dtype=np.int32)
        for step in reversed(steps):
            fail = np.zeros(len(dirty), dtype=bool)
            for clause in step.clauses:
                acc = np.zeros(len(dirty), np.uint8)
                for gname in clause:
                    acc ^= res.delta[gname]
                fail |= acc != 0
            for gname in step.byproduct_groups:
                fail |= ~res.valid[gname]
            first[fail] = step.index
        hist = np.bincount(first, minlength=q_max + 2)
        hist[q_max + 1] += take - len(dirty)   # clean shots never fail
        return hist

    total = np.zeros(q_max + 2, dtype=np.int64)
    for hist in _parallel_map(work, list(_chunk_plan(n_shots)), workers):
        total += hist
    return total[:q_max + 2]


_POOL_STATE = {}


def _pool_call(arg):
    return _POOL_STATE["fn"](arg)


def _parallel_map(fn, args, workers):
    """Chunk-level parallelism; results arrive in submission order.

    Each chunk's randomness is keyed by its chunk id, so worker count never
    changes the sampled bits.  Workers inherit the (unpicklable) chunk
    closure through fork.
    """
    if workers <= 1 or len(args) <= 1:
        for a in args:
            yield fn(a)
        return
    import multiprocessing as mp
    _POOL_STATE["fn"] = fn
    ctx = mp.get_context("fork")
    with ctx.Pool(workers) as pool:
        for r in pool.imap(_pool_call, args):
            yield r


# -- benchmark front-ends --------------------------------------------------------


def _p_of_q(hist: np.ndarray, n_shots: int):
    q_max = len(hist) - 2
    p_q = np.zeros(q_max + 1)
    remaining = n_shots
    for q in range(1, q_max + 1):
        p_q[q] = hist[q] / remaining if remaining else 0.0
        remaining -= hist[q]
    return p_q


def prep_benchmark(kind: str, code: str, p: float, n_shots: int, seed: int,
                   r: int = None, ancilla=AncillaModel(), workers=1,
                   tally_inference=False, pools=None) -> BenchmarkResult:
    """State-preparation benchmark: purification, rotated ancilla, distillation."""
    noise = NoisePolicy(p)
    if kind == "purification":
        gadget = purification_zero(code, noise)
    elif kind == "rz_prep":
        gadget = analog_ancilla_prep(noise, ancilla)
    elif kind == "distill":
        gadget = distillation(r, noise, ancilla)
    else:
        raise ValueError(kind)
    cs = S.compile(gadget.circuit, pools=pools)
    stats = run_prep(gadget, cs, n_shots, seed,
                     tally_inference=tally_inference, workers=workers)
    acc = stats["accepted"]
    fail = stats["failures"]
    p_l = fail / acc if acc else 0.0
    res = BenchmarkResult(
        kind, code, "", p, n_shots, 1,
        np.array([0, fail]), np.array([0.0, p_l]), p_l,
        wilson_interval(fail, acc) if acc else (0.0, 1.0),
        accepted=acc, discard_rate=1.0 - acc / n_shots, failures=fail,
        extra={"r": r} if r is not None else {})
    if tally_inference:
        res.extra["inference"] = {
            "syn_primary": stats["syn_primary"],
            "syn_locator": stats["syn_locator"],
            "joint": stats.get("joint", {}),
            "accepted_ok": acc - fail,
        }
    return res


_GATE_BUILDERS = {
    "H": lambda code, q, nz, anc: lobt.lobt_h(code, q, nz, anc),
    "CZ": lambda code, q, nz, anc: lobt.lobt_cz(code, q, nz, anc),
    "RZ_tele": lambda code, q, nz, anc: lobt.lobt_rz(q, nz, anc),
    "T_tele": lambda code, q, nz, anc: lobt.lobt_t(q, nz, anc),
}


def repeated_gate_benchmark(gate: str, code: str, p: float, q_max: int,
                            n_shots: int, seed: int,
                            ancilla=AncillaModel(), workers=1,
                            pools=None) -> BenchmarkResult:
    if q_max < 6:
        raise ValueError("q_max must be at least 6 to pass the transient")
    gadget = _GATE_BUILDERS[gate](code, q_max, NoisePolicy(p), ancilla)
    cs = S.compile(gadget.circuit, pools=pools)
    hist = run_bench(gadget, cs, n_shots, seed, workers=workers)
    p_q = _p_of_q(hist, n_shots)
    q_star = int(np.argmax(p_q))
    remaining = n_shots - int(hist[1:q_star].sum())
    res = BenchmarkResult(
        "gate-bench", code, gate, p, n_shots, q_max,
        hist, p_q, float(p_q[q_star]),
        wilson_interval(int(hist[q_star]), remaining),
        accepted=n_shots, discard_rate=0.0,
        failures=int(hist[1:].sum() - hist[-1]))
    res.extra["q_star"] = q_star
    return res


def fit_power_law(points, fixed_alpha=None, validity_cap=0.2,
                  min_events=100) -> PowerLawFit:
    """Weighted least squares of log p_L on log p.

    Points are (p, p_L, n_events) or (p, p_L, n_events, sigma); points with
    fewer than ``min_events`` failures or with p_L above ``validity_cap``
    (outside the power law's small-p domain) are excluded from the fit.
    """
    usable = []
    for pt in points:
        p, pl, ev = pt[0], pt[1], pt[2]
        if ev >= min_events and 0 < pl <= validity_cap:
            sigma_log = 1.0 / math.sqrt(ev)
            usable.append((p, pl, sigma_log))
    need = 2 if fixed_alpha is not None else 3
    if len(usable) < need:
        raise ValueError("only %d usable fit points (need %d)"
                         % (len(usable), need))
    x = np.log(np.array([u[0] for u in usable]))
    y = np.log(np.array([u[1] for u in usable]))
    w = 1.0 / np.array([u[2] for u in usable]) ** 2
    if fixed_alpha is not None:
        c_log = np.sum(w * (y - fixed_alpha * x)) / np.sum(w)
        c_err = 1.0 / math.sqrt(np.sum(w))
        return PowerLawFit(math.exp(c_log), fixed_alpha, 0.0, c_err,
                           tuple(u[0] for u in usable), fixed_alpha)
    A = np.vstack([np.ones_like(x), x]).T
    W = np.diag(w)
    cov = np.linalg.inv(A.T @ W @ A)
    beta = cov @ A.T @ W @ y
    return PowerLawFit(math.exp(beta[0]), float(beta[1]),
                       float(math.sqrt(cov[1, 1])),
                       float(math.sqrt(cov[0, 0])),
                       tuple(u[0] for u in usable))


# -- error budgets ---------------------------------------------------------------


def collect_ancilla_pools(p: float, specs, n_shots: int, seed: int,
                          max_pool: int = 1 << 20) -> dict:
    """Harvest residual error patterns of accepted preparation runs.

    ``specs`` lists (code, basis) pairs; each yields the pool named
    ``purified_<code>_<state>`` holding per-qubit X/Z masks of accepted
    shots (identity patterns included), for the explicit ancilla mode.
    """
    pools = {}
    for code, basis in specs:
        gadget = purification_zero(code, NoisePolicy(p), basis=basis,
                                   probes=True)
        cs = S.compile(gadget.circuit)
        stats = run_prep(gadget, cs, n_shots, seed, collect_probes=True)
        xs, zs = stats["probe_x"], stats["probe_z"]
        n_id = stats["probe_identity"]
        total = n_id + xs.size
        if total > max_pool:
            keep = max(1, int(round(xs.size * max_pool / total)))
            rng = np.random.default_rng(seed ^ 0x9E3779B9)
            sel = rng.choice(xs.size, size=keep, replace=False)
            xs, zs = xs[sel], zs[sel]
            n_id = max_pool - keep
        x = np.concatenate([np.zeros(n_id, np.int64), xs])
        z = np.concatenate([np.zeros(n_id, np.int64), zs])
        state = "zero" if basis == "Z" else "plus"
        pools["purified_%s_%s" % (code, state)] = {"x": x, "z": z}
        seed += 1
    return pools


def rz_budget(p: float, n_shots: int, seed: int, q_max: int = 12,
              workers=1) -> ErrorBudget:
    """Analog-rotation budget: p_RZ = 2 (p_rot + p_tele).

    The factor two is the expected number of repeat-until-success attempts;
    p_rot comes from the rotated-ancilla factory benchmark and p_tele from
    the teleportation benchmark with the gadget-output ancilla channel.
    """
    prep = prep_benchmark("rz_prep", "steane", p, n_shots, seed)
    tele = repeated_gate_benchmark("RZ_tele", "steane", p, q_max,
                                   n_shots, seed + 1, workers=workers)
    p_rot = prep.p_l
    p_tele = tele.p_l
    return ErrorBudget(p, {
        "p_rot": p_rot, "p_tele": p_tele,
        "p_rot_ci": prep.ci, "p_tele_ci": tele.ci,
        "prep": prep, "tele": tele,
    }, 2.0 * (p_rot + p_tele), "p_RZ")


def distill_budget(p: float, r: int, n_shots: int, seed: int,
                   q_max: int = 12, workers=1,
                   extrapolate_from=None) -> ErrorBudget:
    """T-gate budget p_T = 2 p_S + p_tele on the Golay code.

    For small p direct sampling is infeasible; pass ``extrapolate_from``
    (a list of larger p values) to fit C p^(r+1) for the distillation and
    C p^4 for teleportation, then evaluate both at ``p``.
    """
    if extrapolate_from is None:
        dist = prep_benchmark("distill", "golay", p, n_shots, seed, r=r)
        tele = repeated_gate_benchmark("T_tele", "golay", p, q_max,
                                       n_shots, seed + 1, workers=workers)
        p_s, p_tele = dist.p_l, tele.p_l
        parts = {"p_S": p_s, "p_tele": p_tele, "dist": dist, "tele": tele,
                 "success": 1.0 - dist.discard_rate}
    else:
        spts, tpts = [], []
        for i, pp in enumerate(extrapolate_from):
            dist = prep_benchmark("distill", "golay", pp, n_shots,
                                  seed + 10 * i, r=r, workers=workers)
            tele = repeated_gate_benchmark("T_tele", "golay", pp, q_max,
                                           max(n_shots // 10, 200_000),
                                           seed + 10 * i + 5, workers=workers)
            spts.append((pp, dist.p_l, dist.failures))
            tpts.append((pp, tele.p_l, int(tele.first_failures[tele.extra["q_star"]])))
        sfit = fit_power_law(spts, fixed_alpha=float(r + 1))
        tfit = fit_power_law(tpts, fixed_alpha=4.0)
        p_s, p_tele = sfit.predict(p), tfit.predict(p)
        parts = {"p_S": p_s, "p_tele": p_tele, "s_fit": sfit, "t_fit": tfit,
                 "s_points": spts, "t_points": tpts}
    return ErrorBudget(p, parts, 2.0 * p_s + p_tele, "p_T")
