"""High-throughput Pauli-frame Monte Carlo sampler.

Compilation lowers a noisy circuit to

  * reference measurement outcomes from one noiseless oracle run
    (nondeterministic outcomes forced to the 0 branch),
  * one packed flip row per concrete fault: which measurement, check and
    probe slots that single Pauli fault flips after propagating through the
    remaining circuit,
  * one flip row per CORRECT op (the byproduct Pauli it would inject), and
  * per decode group, the slot parities and lookup arrays needed to evaluate
    corrected logical values per shot.

Sampling a shot then reduces to drawing which error sites fire (geometric
skips over the site-by-shot grid), XOR-ing the matching flip rows, and
running the decode/inject pipeline, which is where the only nonlinearity
(syndrome lookup) lives.  Frames compose linearly, so this is exact.

Reproducibility: shot space is divided into fixed chunks; chunk k of a run
seeded with s draws from Philox(key=(s, k)) regardless of how chunks are
assigned to workers.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from . import codes as _codes
from . import tableau as _tableau
from .pauli import PauliString

CHUNK_SHOTS = 1 << 20

_TWO_QUBIT_PAULIS = [(a, b) for a in "IXYZ" for b in "IXYZ"][1:]  # II excluded


class CompileError(Exception):
    pass


@dataclass
class ErrorSite:
    index: int
    op_index: int
    kind: str
    targets: tuple
    probs: tuple          # outcome probabilities (conditional on nothing)
    fault_base: int       # first fault column id
    n_outcomes: int

    @property
    def total_p(self) -> float:
        return float(sum(self.probs))


@dataclass
class CompiledGroup:
    name: str
    position: int
    families: list        # list of (np.ndarray syndrome-bit slot lists)
    raw_slots: np.ndarray
    lut_overlap: np.ndarray
    lut_valid: np.ndarray
    lut_support: np.ndarray
    inject_row: int = None   # row into G_packed if a CORRECT consumes this
    m_ref: int = 0


@dataclass
class CompiledSampler:
    circuit: object
    n_slots: int
    slot_words: int
    reference_bits: np.ndarray
    sites: list
    n_faults: int
    F: np.ndarray                 # (n_faults, slot_words) uint64
    G: np.ndarray                 # (n_injections, slot_words)
    groups: list
    detector_slots: dict          # name -> np.ndarray of slot indices
    classes: list = field(default_factory=list)   # sampling classes
    pool_sites: list = field(default_factory=list)
    pool_flips: dict = field(default_factory=dict)
    pool_nonzero: dict = field(default_factory=dict)

    def detector_names(self):
        return list(self.detector_slots)


# -- bit packing helpers ------------------------------------------------------

def _pack_rows(bits: np.ndarray) -> np.ndarray:
    """(n, S) bool/uint8 -> (n, ceil(S/64)) uint64, little-endian bit order."""
    n, s = bits.shape
    words = (s + 63) // 64
    padded = np.zeros((n, words * 64), dtype=np.uint8)
    padded[:, :s] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view(np.uint64).reshape(n, words)


def slot_bits(flips: np.ndarray, slot: int) -> np.ndarray:
    """Extract one slot's flip bit for every row of a packed flip matrix."""
    return ((flips[:, slot >> 6] >> np.uint64(slot & 63)) & np.uint64(1)).astype(np.uint8)


def _parity_of(flips: np.ndarray, slots) -> np.ndarray:
    acc = np.zeros(flips.shape[0], dtype=np.uint8)
    for s in slots:
        acc ^= slot_bits(flips, int(s))
    return acc


# -- compilation ---------------------------------------------------------------

def _fault_paulis(op):
    """Concrete Pauli outcomes of one noise annotation, in canonical order."""
    if op.kind == "DEPOLARIZE1":
        p = op.arg[0] / 3.0
        return [({op.targets[0]: k}, p) for k in "XYZ"]
    if op.kind == "PAULI_CHANNEL1":
        return [({op.targets[0]: k}, op.arg[i]) for i, k in enumerate("XYZ")]
    if op.kind == "DEPOLARIZE2":
        p = op.arg[0] / 15.0
        out = []
        for a, b in _TWO_QUBIT_PAULIS:
            pat = {}
            if a != "I":
                pat[op.targets[0]] = a
            if b != "I":
                pat[op.targets[1]] = b
            out.append((pat, p))
        return out
    raise ValueError(op.kind)


def compile(circuit, pools: dict = None) -> CompiledSampler:  # noqa: A001
    """Lower a circuit for fast sampling; verifies detector determinism."""
    pools = pools or {}
    ref = _tableau.run(circuit)
    n_slots = circuit.n_slots
    nq = circuit.n_qubits

    # enumerate columns: faults, pool basis columns, injections, branch deltas
    sites, col_paulis, col_birth = [], [], []
    pool_cols = {}        # op_index -> (qubits, name, base col)
    inject_of_group = {}
    delta_cols = []
    for i, op in enumerate(circuit.ops):
        if op.kind in ("DEPOLARIZE1", "DEPOLARIZE2", "PAULI_CHANNEL1"):
            outs = _fault_paulis(op)
            sites.append(ErrorSite(len(sites), i, op.kind, op.targets,
                                   tuple(p for _, p in outs),
                                   len(col_paulis), len(outs)))
            for pat, _ in outs:
                col_paulis.append(pat)
                col_birth.append(i)
        elif op.kind == "PAULI_POOL":
            if op.name not in pools:
                raise CompileError("no pool data supplied for %r" % op.name)
            base = len(col_paulis)
            for q in op.targets:
                col_paulis.append({q: "X"})
                col_birth.append(i)
                col_paulis.append({q: "Z"})
                col_birth.append(i)
            pool_cols[i] = (op.targets, op.name, base)
    n_faults = len(col_paulis)
    for i, op in enumerate(circuit.ops):
        if op.kind == "CORRECT":
            if op.name in inject_of_group:
                raise CompileError("group %r driven by two CORRECT ops" % op.name)
            inject_of_group[op.name] = len(col_paulis)
            col_paulis.append(op.pauli)
            col_birth.append(i)
    slot_op = {s.index: s.op_index for s in circuit.slots}
    for slot, replaced in ref.nondet:
        delta_cols.append(len(col_paulis))
        col_paulis.append(replaced)
        col_birth.append(slot_op[slot])

    n_cols = len(col_paulis)
    X = np.zeros((n_cols, nq), dtype=bool)
    Z = np.zeros((n_cols, nq), dtype=bool)
    F = np.zeros((n_cols, n_slots), dtype=np.uint8)
    births = {}
    for c, b in enumerate(col_birth):
        births.setdefault(b, []).append(c)

    def activate(c):
        pat = col_paulis[c]
        if isinstance(pat, PauliString):
            for q in range(nq):
                if (pat.x >> q) & 1:
                    X[c, q] ^= True
                if (pat.z >> q) & 1:
                    Z[c, q] ^= True
        else:
            for q, k in pat.items():
                if k in "XY":
                    X[c, q] ^= True
                if k in "ZY":
                    Z[c, q] ^= True

    slot_at_op = {}
    for s in circuit.slots:
        slot_at_op.setdefault(s.op_index, []).append(s)

    for i, op in enumerate(circuit.ops):
        for c in births.get(i, ()):
            activate(c)
        k = op.kind
        if k == "H":
            (q,) = op.targets
            X[:, q], Z[:, q] = Z[:, q].copy(), X[:, q].copy()
        elif k in ("S", "S_DAG"):
            (q,) = op.targets
            Z[:, q] ^= X[:, q]
        elif k == "CNOT":
            c, t = op.targets
            X[:, t] ^= X[:, c]
            Z[:, c] ^= Z[:, t]
        elif k == "CZ":
            c, t = op.targets
            Z[:, t] ^= X[:, c]
            Z[:, c] ^= X[:, t]
        elif k in ("X", "Y", "Z"):
            pass
        elif k in ("PREP_Z", "PREP_X", "PREP_LOGICAL"):
            pass  # builders never reuse qubits, so no frame reaches a prep
        elif k == "MEAS_Z":
            (q,) = op.targets
            F[:, slot_at_op[i][0].index] = X[:, q]
        elif k == "MEAS_X":
            (q,) = op.targets
            F[:, slot_at_op[i][0].index] = Z[:, q]
        elif k == "CHECK":
            obs = op.pauli
            acc = np.zeros(n_cols, dtype=bool)
            for q in range(nq):
                if (obs.z >> q) & 1:
                    acc ^= X[:, q]
                if (obs.x >> q) & 1:
                    acc ^= Z[:, q]
            F[:, slot_at_op[i][0].index] = acc
        elif k == "PROBE":
            (q,) = op.targets
            sx, sz = slot_at_op[i][0].index, slot_at_op[i][1].index
            F[:, sx] = X[:, q]
            F[:, sz] = Z[:, q]
        elif k in ("DEPOLARIZE1", "DEPOLARIZE2", "PAULI_CHANNEL1",
                   "PAULI_POOL", "CORRECT"):
            pass
        else:
            raise CompileError("unsupported op kind %r" % k)

    packed = _pack_rows(F)
    slot_words = packed.shape[1]
    Fp = packed[:n_faults]
    # injection rows, then delta rows, in the order they were appended
    n_inj = len(inject_of_group)
    Gp = packed[n_faults:n_faults + n_inj]
    deltas = packed[n_faults + n_inj:]

    groups = []
    inj_row_of = {}
    for row, (gname, col) in enumerate(sorted(inject_of_group.items(),
                                              key=lambda kv: kv[1])):
        inj_row_of[gname] = row
    # Gp rows are in column order already (appended in op order)
    correct_pos = {op.name: i for i, op in enumerate(circuit.ops)
                   if op.kind == "CORRECT"}
    for gname, g in circuit.decode_groups.items():
        code = _codes.get_code(g.code)
        table = _codes.lookup_for(code)
        fams = [[np.asarray(subset, dtype=np.int64) for subset in fam]
                for fam in g.syndromes]
        pos = correct_pos.get(gname)
        if pos is None:
            last = 0
            for fam in g.syndromes:
                for subset in fam:
                    for s in subset:
                        last = max(last, slot_op[s])
            if g.raw:
                for s in g.raw:
                    last = max(last, slot_op[s])
            pos = last
        groups.append(CompiledGroup(
            gname, pos, fams,
            np.asarray(g.raw, dtype=np.int64) if g.raw else None,
            table.logical_overlap, table.valid, table.support,
            inj_row_of.get(gname), ref.group_values.get(gname, 0)))
    groups.sort(key=lambda g: g.position)

    det_slots = {name: np.asarray(slots, dtype=np.int64)
                 for name, slots in circuit.detectors}

    cs = CompiledSampler(
        circuit, n_slots, slot_words,
        np.asarray(ref.bits, dtype=np.uint8),
        sites, n_faults, Fp, Gp, groups, det_slots)

    # sampling classes: group sites by (total_p, conditional outcome cdf)
    classes = {}
    for s in sites:
        tot = s.total_p
        if tot <= 0.0:
            continue
        cond = tuple(p / tot for p in s.probs)
        classes.setdefault((tot, cond), []).append(s)
    for (tot, cond), ss in sorted(classes.items()):
        cs.classes.append({
            "p": tot,
            "cdf": np.cumsum(np.asarray(cond)),
            "bases": np.asarray([s.fault_base for s in ss], dtype=np.int64),
            "n_sites": len(ss),
        })

    # pool flip rows
    for i, (qubits, name, base) in pool_cols.items():
        data = pools[name]
        xm = np.asarray(data["x"], dtype=np.int64)
        zm = np.asarray(data["z"], dtype=np.int64)
        rows = np.zeros((len(xm), slot_words), dtype=np.uint64)
        for li, q in enumerate(qubits):
            for masks, off in ((xm, 0), (zm, 1)):
                sel = (masks >> li) & 1 == 1
                if sel.any():
                    rows[sel] ^= Fp[base + 2 * li + off]
        key = (i, name)
        cs.pool_sites.append(key)
        cs.pool_flips[key] = rows
        cs.pool_nonzero[key] = rows.any(axis=1)

    _verify_determinism(cs, deltas, ref)
    return cs


def _verify_determinism(cs: CompiledSampler, deltas: np.ndarray, ref):
    """Every branch-difference Pauli must leave detectors and validations flat."""
    if deltas.shape[0] == 0:
        return
    flips = deltas.copy()
    res = process_groups(cs, flips)
    for gname, g in ((g.name, g) for g in cs.groups):
        if g.inject_row is None and res.delta[gname].any():
            raise CompileError(
                "validation group %r is branch dependent (not deterministic)"
                % gname)
    for dname, slots in cs.detector_slots.items():
        if _parity_of(flips, slots).any():
            raise CompileError("detector %r is not deterministic" % dname)


# -- per-shot pipeline ----------------------------------------------------------


@dataclass
class GroupResults:
    delta: dict          # group name -> uint8 array (corrected value XOR reference)
    valid: dict          # group name -> bool array (syndrome inside table)
    syndrome: dict       # group name -> list of int32 arrays per family (optional)


def process_groups(cs: CompiledSampler, flips: np.ndarray,
                   record_syndromes=False) -> GroupResults:
    """Evaluate decode groups in time order, applying byproduct injections.

    ``flips`` is modified in place (injection rows XOR-ed into the shots whose
    decoded byproduct deviates from the reference).
    """
    n = flips.shape[0]
    out = GroupResults({}, {}, {})
    for g in cs.groups:
        contrib = np.zeros(n, dtype=np.uint8)
        valid = np.ones(n, dtype=bool)
        syns = []
        for fam in g.families:
            syn = np.zeros(n, dtype=np.int32)
            for j, subset in enumerate(fam):
                par = _parity_of(flips, subset)
                syn |= par.astype(np.int32) << j
            contrib ^= g.lut_overlap[syn]
            valid &= g.lut_valid[syn]
            if record_syndromes:
                syns.append(syn)
        delta = contrib
        if g.raw_slots is not None:
            delta = delta ^ _parity_of(flips, g.raw_slots)
        if g.inject_row is not None:
            hit = np.nonzero(delta)[0]
            if hit.size:
                flips[hit] ^= cs.G[g.inject_row]
        out.delta[g.name] = delta
        out.valid[g.name] = valid
        if record_syndromes:
            out.syndrome[g.name] = syns
    return out


def detector_bits(cs: CompiledSampler, flips: np.ndarray, names=None) -> dict:
    names = cs.detector_names() if names is None else names
    return {n: _parity_of(flips, cs.detector_slots[n]) for n in names}


# -- event sampling ---------------------------------------------------------------

def _chunk_rng(seed: int, chunk_id: int):
    return np.random.Generator(np.random.Philox(key=[seed & 0xFFFFFFFFFFFFFFFF,
                                                     chunk_id]))


def _draw_positions(rng, p: float, space: int) -> np.ndarray:
    if p <= 0.0 or space == 0:
        return np.empty(0, dtype=np.int64)
    mean = space * p
    out = []
    drawn = 0
    pos = -1
    while True:
        est = int(mean - drawn + 6 * np.sqrt(mean + 9) + 16)
        gaps = rng.geometric(p, size=est)
        cum = np.cumsum(gaps) + pos
        out.append(cum)
        pos = int(cum[-1])
        drawn = sum(len(o) for o in out)
        if pos >= space - 1:
            break
    allpos = np.concatenate(out)
    return allpos[allpos < space]


def sample_chunk_flips(cs: CompiledSampler, seed: int, chunk_id: int,
                       chunk_len: int):
    """Returns (dirty_shot_indices, packed flip rows for those shots)."""
    rng = _chunk_rng(seed, chunk_id)
    ev_shots, ev_faults = [], []
    for cl in cs.classes:
        space = cl["n_sites"] * chunk_len
        pos = _draw_positions(rng, cl["p"], space)
        if pos.size == 0:
            continue
        site_local = pos // chunk_len
        shot = pos % chunk_len
        u = rng.random(pos.size)
        idx = np.searchsorted(cl["cdf"], u, side="right")
        np.clip(idx, 0, len(cl["cdf"]) - 1, out=idx)
        ev_shots.append(shot)
        ev_faults.append(cl["bases"][site_local] + idx)
    pool_draws = []
    for key in cs.pool_sites:
        rows = cs.pool_flips[key]
        pidx = rng.integers(0, rows.shape[0], size=chunk_len)
        pool_draws.append((key, pidx))

    if ev_shots:
        shots = np.concatenate(ev_shots)
        faults = np.concatenate(ev_faults)
    else:
        shots = np.empty(0, dtype=np.int64)
        faults = np.empty(0, dtype=np.int64)

    dirty = shots
    for key, pidx in pool_draws:
        dirty = np.union1d(dirty, np.nonzero(cs.pool_nonzero[key][pidx])[0])
    dirty = np.unique(dirty)
    flips = np.zeros((dirty.size, cs.slot_words), dtype=np.uint64)
    if shots.size:
        rowpos = np.searchsorted(dirty, shots)
        order = np.argsort(faults, kind="stable")
        rp, fl = rowpos[order], faults[order]
        starts = np.flatnonzero(np.r_[True, fl[1:] != fl[:-1]])
        ends = np.r_[starts[1:], fl.size]
        for a, b in zip(starts, ends):
            flips[rp[a:b]] ^= cs.F[fl[a]]
    for key, pidx in pool_draws:
        sel = cs.pool_nonzero[key][pidx[dirty]]
        if sel.any():
            rows = np.nonzero(sel)[0]
            flips[rows] ^= cs.pool_flips[key][pidx[dirty[rows]]]
    return dirty, flips


def flips_for_faults(cs: CompiledSampler, fault_cols) -> np.ndarray:
    """Deterministic single-shot flip row for an explicit fault pattern."""
    row = np.zeros((1, cs.slot_words), dtype=np.uint64)
    for c in fault_cols:
        row[0] ^= cs.F[c]
    return row


def enumerate_single_faults(cs: CompiledSampler, sites=None):
    """(site, outcome, fault column) for every realizable concrete fault."""
    src = cs.sites if sites is None else sites
    for s in src:
        for o in range(s.n_outcomes):
            if s.probs[o] > 0.0:
                yield s, o, s.fault_base + o


# -- ShotBatch --------------------------------------------------------------------

@dataclass
class ShotBatch:
    n_shots: int
    n_slots: int
    n_detectors: int
    rng_seed: int
    shot_offset: int
    measurement_bits: np.ndarray   # (n_shots, slot_words) uint64, ref ^ flips
    detector_bits: np.ndarray      # (n_shots, det_words) uint64
    detector_names: list

    def save(self, path):
        with open(path, "wb") as f:
            f.write(b"MBFTBAT1")
            f.write(struct.pack("<QIIQQ", self.n_shots, self.n_slots,
                                self.n_detectors, self.rng_seed,
                                self.shot_offset))
            names = ",".join(self.detector_names).encode()
            f.write(struct.pack("<I", len(names)))
            f.write(names)
            f.write(self.measurement_bits.astype("<u8").tobytes())
            f.write(self.detector_bits.astype("<u8").tobytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as f:
            raw = f.read()
        if raw[:8] != b"MBFTBAT1":
            raise ValueError("bad batch header")
        n_shots, n_slots, n_det, seed, off = struct.unpack("<QIIQQ", raw[8:40])
        (nlen,) = struct.unpack("<I", raw[40:44])
        names = raw[44:44 + nlen].decode().split(",") if nlen else []
        body = raw[44 + nlen:]
        mw = (n_slots + 63) // 64
        dw = (n_det + 63) // 64
        mb = np.frombuffer(body[:8 * n_shots * mw], dtype="<u8").reshape(n_shots, mw)
        db = np.frombuffer(body[8 * n_shots * mw:8 * n_shots * (mw + dw)],
                           dtype="<u8").reshape(n_shots, dw)
        return cls(n_shots, n_slots, n_det, seed, off, mb.copy(), db.copy(), names)

    def detector_counts(self) -> dict:
        out = {}
        for j, name in enumerate(self.detector_names):
            out[name] = int(slot_bits(self.detector_bits, j).sum())
        return out

    def detector_counts_csv(self) -> str:
        lines = ["detector,flips,shots"]
        for name, cnt in self.detector_counts().items():
            lines.append("%s,%d,%d" % (name, cnt, self.n_shots))
        return "\n".join(lines) + "\n"


def sample(cs: CompiledSampler, n_shots: int, seed: int,
           shot_offset: int = 0) -> ShotBatch:
    """Materialize measurement and detector bits for a batch of shots."""
    if n_shots < 1:
        raise ValueError("n_shots must be positive")
    det_names = cs.detector_names()
    mw = cs.slot_words
    meas = np.zeros((n_shots, mw), dtype=np.uint64)
    dets = np.zeros((n_shots, len(det_names)), dtype=np.uint8)
    first_chunk = shot_offset // CHUNK_SHOTS
    last_chunk = (shot_offset + n_shots - 1) // CHUNK_SHOTS
    for chunk_id in range(first_chunk, last_chunk + 1):
        lo = chunk_id * CHUNK_SHOTS
        take_lo = max(lo, shot_offset)
        take_hi = min(lo + CHUNK_SHOTS, shot_offset + n_shots)
        dirty, flips = sample_chunk_flips(cs, seed, chunk_id, CHUNK_SHOTS)
        process_groups(cs, flips)
        db = detector_bits(cs, flips, det_names)
        local = dirty + lo
        keep = (local >= take_lo) & (local < take_hi)
        rows = local[keep] - shot_offset
        meas[rows] = flips[keep]
        for j, name in enumerate(det_names):
            dets[rows, j] = db[name][keep]
    ref_row = _pack_rows(cs.reference_bits.reshape(1, -1))[0]
    meas ^= ref_row
    det_packed = _pack_rows(dets)
    return ShotBatch(n_shots, cs.n_slots, len(det_names), seed, shot_offset,
                     meas, det_packed, det_names)


def split_records(batch: ShotBatch, postselect, observables):
    """Accepted-shot count and observable flip tallies after postselection.

    ``postselect`` and ``observables`` are disjoint detector-name subsets.
    """
    if set(postselect) & set(observables):
        raise ValueError("postselect and observable subsets overlap")
    names = batch.detector_names
    sel = np.zeros(batch.n_shots, dtype=np.uint8)
    for name in postselect:
        sel |= slot_bits(batch.detector_bits, names.index(name))
    accepted = sel == 0
    counts = {}
    for name in observables:
        bits = slot_bits(batch.detector_bits, names.index(name))
        counts[name] = int(bits[accepted].sum())
    return int(accepted.sum()), counts
