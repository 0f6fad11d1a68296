"""Reference stabilizer simulator.

Destabilizer/stabilizer tableau in the Aaronson-Gottesman style, stored
column-wise: for qubit q, ``xcol[q]`` and ``zcol[q]`` are 2n-bit integers
whose bit r says whether row r carries X (resp. Z) on q.  Rows 0..n-1 are
destabilizers, rows n..2n-1 stabilizers.  Row signs live in the bitmask
``rsign``.

This simulator is the correctness anchor for the frame sampler: it fixes
reference measurement outcomes at compile time (nondeterministic outcomes
forced to the 0 branch) and serves as the brute-force side of the
exhaustive fault-equivalence tests.  It is deliberately simple; throughput
lives in :mod:`mbftqc.sampler`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pauli import PauliString
from . import codes as _codes


class Tableau:
    def __init__(self, n: int):
        self.n = n
        self.xcol = [1 << q for q in range(n)]          # destab q = X_q
        self.zcol = [1 << (n + q) for q in range(n)]    # stab q = Z_q
        self.rsign = 0

    def copy(self) -> "Tableau":
        t = Tableau.__new__(Tableau)
        t.n = self.n
        t.xcol = list(self.xcol)
        t.zcol = list(self.zcol)
        t.rsign = self.rsign
        return t

    # -- row access -----------------------------------------------------

    def _row(self, r: int) -> PauliString:
        x = z = 0
        for q in range(self.n):
            x |= ((self.xcol[q] >> r) & 1) << q
            z |= ((self.zcol[q] >> r) & 1) << q
        n_y = bin(x & z).count("1")
        phase = (n_y + (2 if (self.rsign >> r) & 1 else 0)) & 3
        return PauliString(self.n, x, z, phase)

    def stabilizer(self, i: int) -> PauliString:
        return self._row(self.n + i)

    def destabilizer(self, i: int) -> PauliString:
        return self._row(i)

    def check_invariants(self):
        """Commutation structure of a valid tableau; used by debug tests."""
        rows = [self._row(r) for r in range(2 * self.n)]
        n = self.n
        for i in range(n):
            for j in range(n):
                si, sj = rows[n + i], rows[n + j]
                if not si.commutes_with(sj):
                    raise AssertionError("stabilizers %d,%d anticommute" % (i, j))
                want = i != j
                if rows[i].commutes_with(rows[n + j]) != want:
                    raise AssertionError("destab %d vs stab %d pairing broken" % (i, j))

    # -- gates ------------------------------------------------------------

    def apply_gate(self, op):
        """Apply one unitary Clifford or preparation op.

        Noise kinds are rejected: the oracle is noiseless by construction
        and noisy runs sample explicit Pauli insertions first.
        """
        k = op.kind
        if k in ("H", "S", "S_DAG", "X", "Y", "Z", "CNOT", "CZ"):
            getattr(self, k.lower())(*op.targets)
        elif k == "PREP_Z":
            self.prep_z(*op.targets)
        elif k == "PREP_X":
            self.prep_z(*op.targets)
            self.h(*op.targets)
        else:
            raise ValueError("oracle rejects op kind %r" % k)

    def h(self, q):
        xc, zc = self.xcol[q], self.zcol[q]
        self.rsign ^= xc & zc
        self.xcol[q], self.zcol[q] = zc, xc

    def s(self, q):
        xc, zc = self.xcol[q], self.zcol[q]
        self.rsign ^= xc & zc
        self.zcol[q] = zc ^ xc

    def s_dag(self, q):
        xc, zc = self.xcol[q], self.zcol[q]
        self.rsign ^= xc & ~zc
        self.zcol[q] = zc ^ xc

    def x(self, q):
        self.rsign ^= self.zcol[q]

    def y(self, q):
        self.rsign ^= self.xcol[q] ^ self.zcol[q]

    def z(self, q):
        self.rsign ^= self.xcol[q]

    def cnot(self, c, t):
        xc, zc = self.xcol, self.zcol
        self.rsign ^= xc[c] & zc[t] & ~(xc[t] ^ zc[c])
        xc[t] ^= xc[c]
        zc[c] ^= zc[t]

    def cz(self, c, t):
        xc, zc = self.xcol, self.zcol
        self.rsign ^= xc[c] & xc[t] & (zc[c] ^ zc[t])
        zc[t] ^= xc[c]
        zc[c] ^= xc[t]

    def apply_pauli(self, p: PauliString):
        """Pauli gates only reshuffle signs (conjugation by X/Y/Z)."""
        for q in range(self.n):
            xb, zb = (p.x >> q) & 1, (p.z >> q) & 1
            if xb:
                self.rsign ^= self.zcol[q]
            if zb:
                self.rsign ^= self.xcol[q]

    # -- measurement -------------------------------------------------------

    def _rowmult_into(self, mask: int, p: int):
        """row_r <- row_r * row_p for every row r set in mask.

        Valid only when each such product is Hermitian (the measurement
        routine guarantees this).  Phase bookkeeping follows the usual
        i-exponent counting with two accumulator bitplanes.
        """
        rp = (self.rsign >> p) & 1
        acc0 = 0
        acc1 = mask if rp else 0
        for q in range(self.n):
            xp = (self.xcol[q] >> p) & 1
            zp = (self.zcol[q] >> p) & 1
            if not (xp or zp):
                continue
            xr, zr = self.xcol[q], self.zcol[q]
            if xp and not zp:          # p has X: g=+1 on Y, g=-1 on Z
                g1 = zr & xr
                g3 = zr & ~xr
            elif xp and zp:            # p has Y: g=+1 on Z, g=-1 on X
                g1 = zr & ~xr
                g3 = xr & ~zr
            else:                      # p has Z: g=+1 on X, g=-1 on Y
                g1 = xr & ~zr
                g3 = xr & zr
            m = g1 & mask
            carry = acc0 & m
            acc0 ^= m
            acc1 ^= carry
            m = g3 & mask
            borrow = ~acc0 & m
            acc0 ^= m
            acc1 ^= borrow
            if xp:
                self.xcol[q] ^= mask
            if zp:
                self.zcol[q] ^= mask
        self.rsign ^= acc1 & mask

    def measure_z(self, q: int, rng=None, forced: int = None):
        """Measure Z on qubit q.

        Returns (bit, deterministic).  Random outcomes are taken from
        ``forced`` when given, else fair-coin sampled from ``rng``.
        """
        n = self.n
        stab_anti = self.xcol[q] >> n
        if stab_anti:
            p_local = (stab_anti & -stab_anti).bit_length() - 1
            p = n + p_local
            mask = self.xcol[q] & ~(1 << p) & ~(1 << p_local)
            if mask:
                self._rowmult_into(mask, p)
            # destabilizer p_local <- old stabilizer row p
            keep = ~((1 << p_local) | (1 << p))
            for qq in range(n):
                bx = (self.xcol[qq] >> p) & 1
                bz = (self.zcol[qq] >> p) & 1
                self.xcol[qq] = (self.xcol[qq] & keep) | (bx << p_local)
                self.zcol[qq] = (self.zcol[qq] & keep) | (bz << p_local)
            sp = (self.rsign >> p) & 1
            self.rsign = (self.rsign & keep) | (sp << p_local)
            if forced is not None:
                bit = forced & 1
            elif rng is not None:
                bit = int(rng.integers(2))
            else:
                raise ValueError("nondeterministic measurement needs rng or forced")
            self.zcol[q] |= 1 << p
            if bit:
                self.rsign |= 1 << p
            return bit, False
        # deterministic: product of stabilizer partners of anticommuting destabs
        mask = self.xcol[q] & ((1 << n) - 1)
        phase = 0
        sx = sz = 0
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            r = n + i
            rx = rz = 0
            for qq in range(n):
                rx |= ((self.xcol[qq] >> r) & 1) << qq
                rz |= ((self.zcol[qq] >> r) & 1) << qq
            rphase = (bin(rx & rz).count("1") + 2 * ((self.rsign >> r) & 1)) & 3
            phase = (phase + rphase + 2 * bin(sz & rx).count("1")) & 3
            sx ^= rx
            sz ^= rz
        if sx != 0 or sz != (1 << q):
            raise AssertionError("deterministic measurement reduction failed")
        return phase >> 1, True

    def _row_masks(self, r: int):
        x = z = 0
        for q in range(self.n):
            x |= ((self.xcol[q] >> r) & 1) << q
            z |= ((self.zcol[q] >> r) & 1) << q
        phase = (bin(x & z).count("1") + 2 * ((self.rsign >> r) & 1)) & 3
        return x, z, phase

    def measure_observable(self, obs: PauliString):
        """Eigenvalue of a Pauli product if it is +-(stabilizer group element).

        Returns (eigenvalue, defined); the state is never collapsed.  The
        candidate decomposition is found bit-sliced: XOR-ing the columns on
        the observable's support gives, per row, its symplectic product
        with the observable.
        """
        if obs.n != self.n:
            raise ValueError("observable length mismatch")
        n = self.n
        acc = 0
        zz, xx = obs.z, obs.x
        while zz:
            q = (zz & -zz).bit_length() - 1
            zz &= zz - 1
            acc ^= self.xcol[q]
        while xx:
            q = (xx & -xx).bit_length() - 1
            xx &= xx - 1
            acc ^= self.zcol[q]
        mask = acc & ((1 << n) - 1)   # destabilizers anticommuting with obs
        phase = 0
        sx = sz = 0
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            rx, rz, rp = self._row_masks(n + i)
            phase = (phase + rp + 2 * bin(sz & rx).count("1")) & 3
            sx ^= rx
            sz ^= rz
        if sx != obs.x or sz != obs.z:
            return 0, False
        rel = (phase - obs.phase) & 3
        if rel & 1:
            raise ValueError("observable carries an imaginary phase")
        return (1 if rel == 0 else -1), True

    def prep_z(self, q: int):
        bit, _ = self.measure_z(q, forced=0)
        if bit:
            self.rsign ^= self.zcol[q]  # apply X to flip back to |0>

    def install_block(self, qubits, block: "CanonicalBlock"):
        """Write a canonical code-block tableau onto fresh qubits."""
        n = self.n
        for q in qubits:
            if self.xcol[q] != (1 << q) or self.zcol[q] != (1 << (n + q)):
                raise ValueError("PREP_LOGICAL target qubit %d is not fresh" % q)
        rows_mask = 0
        for q in qubits:
            rows_mask |= (1 << q) | (1 << (n + q))
        for l, g in enumerate(qubits):
            xnew = znew = 0
            for j, gj in enumerate(qubits):
                xnew |= ((block.dest_x[j] >> l) & 1) << gj
                xnew |= ((block.stab_x[j] >> l) & 1) << (n + gj)
                znew |= ((block.dest_z[j] >> l) & 1) << gj
                znew |= ((block.stab_z[j] >> l) & 1) << (n + gj)
            self.xcol[g] = (self.xcol[g] & ~rows_mask) | xnew
            self.zcol[g] = (self.zcol[g] & ~rows_mask) | znew
        for j, gj in enumerate(qubits):
            self.rsign &= ~((1 << gj) | (1 << (n + gj)))
            if (block.dest_sign >> j) & 1:
                self.rsign |= 1 << gj
            if (block.stab_sign >> j) & 1:
                self.rsign |= 1 << (n + gj)


@dataclass
class CanonicalBlock:
    """Per-qubit destab/stab rows of a code block state, in local indices."""
    k: int
    dest_x: list
    dest_z: list
    stab_x: list
    stab_z: list
    dest_sign: int
    stab_sign: int


_BLOCK_CACHE: dict = {}


def canonical_block(code_name: str, state: str) -> CanonicalBlock:
    """Tableau of an ideal logical block state, computed once per (code, state)."""
    key = (code_name, state)
    if key in _BLOCK_CACHE:
        return _BLOCK_CACHE[key]
    code = _codes.get_code(code_name)
    circ = _codes.encoding_circuit(code, 1)
    t = Tableau(code.n)
    run(circ, t)
    if state in ("plus", "s_plus"):
        for q in range(code.n):
            t.h(q)
    if state == "s_plus":
        layer = _codes.logical_s_layer(code)
        for q in range(code.n):
            getattr(t, layer)(q)
    elif state != "zero" and state != "plus":
        raise ValueError("unknown logical state %r" % state)
    blk = CanonicalBlock(
        code.n,
        [t._row(i).x for i in range(code.n)],
        [t._row(i).z for i in range(code.n)],
        [t._row(code.n + i).x for i in range(code.n)],
        [t._row(code.n + i).z for i in range(code.n)],
        sum(((t.rsign >> i) & 1) << i for i in range(code.n)),
        sum(((t.rsign >> (code.n + i)) & 1) << i for i in range(code.n)),
    )
    _BLOCK_CACHE[key] = blk
    return blk


@dataclass
class RunRecord:
    """Everything a reference or faulted oracle run produced."""
    bits: list                    # one bit per slot
    group_values: dict            # decode group name -> corrected bit
    nondet: list = field(default_factory=list)  # (slot, replaced stab row Pauli)
    detector_parities: dict = field(default_factory=dict)


def run(circuit, tableau: Tableau = None, inject: dict = None,
        rng=None, forced_branch: int = 0, start_op: int = 0,
        bits_init=None, stop_op: int = None) -> RunRecord:
    """Execute a circuit on the oracle.

    Noise annotations are skipped (explicit faults go through ``inject``,
    a map op_index -> list of PauliString applied after that op).  Every
    nondeterministic measurement takes the ``forced_branch`` outcome and the
    replaced stabilizer row is recorded, which is what the sampler's
    determinism check needs.

    ``start_op``/``bits_init``/``stop_op`` let exhaustive-fault harnesses
    resume from a cached prefix state instead of replaying the whole
    circuit for every fault pattern.
    """
    if tableau is None:
        tableau = Tableau(circuit.n_qubits)
    t = tableau
    bits = list(bits_init) if bits_init is not None else [0] * circuit.n_slots
    nondet = []
    group_values = {}
    slot_at_op = {}
    for s in circuit.slots:
        slot_at_op.setdefault(s.op_index, []).append(s)

    def decode_group(g):
        code = _codes.get_code(g.code)
        table = _codes.lookup_for(code)
        corr = 0
        for basis, fam in zip(g.bases, g.syndromes):
            syn = 0
            for j, subset in enumerate(fam):
                par = 0
                for slot in subset:
                    par ^= bits[slot]
                syn |= par << j
            corr ^= table.logical_overlap[syn]
        raw = 0
        if g.raw is not None:
            for slot in g.raw:
                raw ^= bits[slot]
        return raw ^ corr

    upto = len(circuit.ops) if stop_op is None else stop_op
    for i in range(start_op, upto):
        op = circuit.ops[i]
        k = op.kind
        if k == "H":
            t.h(*op.targets)
        elif k == "S":
            t.s(*op.targets)
        elif k == "S_DAG":
            t.s_dag(*op.targets)
        elif k == "X":
            t.x(*op.targets)
        elif k == "Y":
            t.y(*op.targets)
        elif k == "Z":
            t.z(*op.targets)
        elif k == "CNOT":
            t.cnot(*op.targets)
        elif k == "CZ":
            t.cz(*op.targets)
        elif k == "PREP_Z":
            t.prep_z(*op.targets)
        elif k == "PREP_X":
            t.prep_z(*op.targets)
            t.h(*op.targets)
        elif k == "MEAS_Z" or k == "MEAS_X":
            (q,) = op.targets
            slot = slot_at_op[i][0].index
            if k == "MEAS_X":
                t.h(q)
            before = t.xcol[q] >> t.n
            if before:
                p_local = (before & -before).bit_length() - 1
                replaced = t._row(t.n + p_local)
            bit, det = t.measure_z(q, rng=rng,
                                   forced=None if rng is not None else forced_branch)
            if not det:
                nondet.append((slot, replaced))
            bits[slot] = bit
            if k == "MEAS_X":
                t.h(q)
        elif k == "PREP_LOGICAL":
            t.install_block(op.targets, canonical_block(op.code, op.state))
        elif k == "CHECK":
            slot = slot_at_op[i][0].index
            val, defined = t.measure_observable(op.pauli)
            if not defined:
                raise ValueError("CHECK %r is not deterministic" % (op.name or slot))
            bits[slot] = 0 if val > 0 else 1
        elif k == "PROBE":
            pass  # frame-only diagnostic; both slots stay 0
        elif k == "CORRECT":
            g = circuit.decode_groups[op.name]
            m = decode_group(g)
            group_values[op.name] = m
            if m:
                t.apply_pauli(op.pauli)
        elif k in ("DEPOLARIZE1", "DEPOLARIZE2", "PAULI_CHANNEL1", "PAULI_POOL"):
            pass
        else:
            raise ValueError("oracle cannot run op kind %r" % k)
        if inject and i in inject:
            for p in inject[i]:
                t.apply_pauli(p)

    rec = RunRecord(bits, group_values, nondet)
    if upto < len(circuit.ops):
        return rec   # prefix run: caller only wants the state and bits
    for dname, slots in circuit.detectors:
        par = 0
        for s in slots:
            par ^= bits[s]
        rec.detector_parities[dname] = par
    # validation-style groups (no CORRECT op) still get decoded values
    for gname, g in circuit.decode_groups.items():
        if gname not in group_values:
            group_values[gname] = decode_group(g)
    return rec
