"""Circuit intermediate representation.

A Circuit is an ordered op list over a fixed qubit register plus the
bookkeeping the samplers need: measurement slots, labeled detectors
(parities of slot subsets), and decode groups (slot subsets that are fed
through a code's lookup decoder, either to form a teleportation byproduct
that classically controls a CORRECT op, or to stand as an ideal validation
of a logical value).

Op kinds
--------
physical:   H S S_DAG X Y Z CNOT CZ PREP_Z PREP_X MEAS_Z MEAS_X
noise:      DEPOLARIZE1(p) DEPOLARIZE2(p) PAULI_CHANNEL1(px,py,pz)
            PAULI_POOL[name] (empirical per-block error patterns)
simulator:  PREP_LOGICAL(code,state)  CHECK[label] <pauli>  PROBE q
            CORRECT[group] <pauli>

CHECK records the ideal eigenvalue of a Pauli product without collapse;
PROBE dumps the X/Z frame components of one qubit into two slots; CORRECT
applies a Pauli iff the decoded value of its group is 1.  None of the
simulator kinds carry noise and none are part of the physical gate set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pauli import PauliString

UNITARY_1Q = ("H", "S", "S_DAG", "X", "Y", "Z")
UNITARY_2Q = ("CNOT", "CZ")
PREP_KINDS = ("PREP_Z", "PREP_X")
MEAS_KINDS = ("MEAS_Z", "MEAS_X")
NOISE_KINDS = ("DEPOLARIZE1", "DEPOLARIZE2", "PAULI_CHANNEL1", "PAULI_POOL")
SIM_KINDS = ("PREP_LOGICAL", "CHECK", "PROBE", "CORRECT")

UNITARY_KINDS = UNITARY_1Q + UNITARY_2Q
ALL_KINDS = UNITARY_KINDS + PREP_KINDS + MEAS_KINDS + NOISE_KINDS + SIM_KINDS


@dataclass
class Op:
    kind: str
    targets: tuple = ()
    arg: tuple = ()          # channel probabilities
    pauli: PauliString = None  # CHECK / CORRECT payload
    name: str = None         # CORRECT group, PAULI_POOL pool, CHECK label
    code: str = None         # PREP_LOGICAL
    state: str = None        # PREP_LOGICAL: zero | plus | s_plus


@dataclass
class DecodeGroup:
    """Inputs of one lookup-decoded logical value.

    ``bases`` lists the syndrome families involved ("X" rows detect Z-type
    flips of an X-basis readout and vice versa); ``syndromes[i][j]`` is the
    slot subset whose parity is syndrome bit j of family i.  ``raw`` is the
    slot subset whose parity is the uncorrected logical readout (None for
    syndrome-only groups used to locate errors).
    """

    name: str
    code: str
    bases: tuple
    syndromes: tuple
    raw: tuple = None


@dataclass
class SlotInfo:
    index: int
    op_index: int
    kind: str      # "meas" | "check" | "probe_x" | "probe_z"
    qubit: int = None
    label: str = None


class Circuit:
    """Ordered gate list plus measurement/detector bookkeeping."""

    def __init__(self, n_qubits: int):
        self.n_qubits = n_qubits
        self.ops: list[Op] = []
        self.slots: list[SlotInfo] = []
        self.detectors: list = []       # (name, tuple(slot indices))
        self.decode_groups: dict[str, DecodeGroup] = {}

    # -- builder API ----------------------------------------------------

    def _check_targets(self, targets, distinct=True):
        for q in targets:
            if not 0 <= q < self.n_qubits:
                raise ValueError("qubit %d out of range (n=%d)" % (q, self.n_qubits))
        if distinct and len(set(targets)) != len(targets):
            raise ValueError("repeated target in %r" % (targets,))

    def append(self, kind: str, *targets):
        if kind not in UNITARY_KINDS + PREP_KINDS:
            raise ValueError("append() is for unitary/prep kinds, got %r" % kind)
        want = 2 if kind in UNITARY_2Q else 1
        if len(targets) != want:
            raise ValueError("%s takes %d target(s)" % (kind, want))
        self._check_targets(targets)
        self.ops.append(Op(kind, tuple(targets)))

    def measure(self, q: int, basis: str = "Z", label: str = None) -> int:
        self._check_targets((q,))
        kind = "MEAS_" + basis
        if kind not in MEAS_KINDS:
            raise ValueError("bad measurement basis %r" % basis)
        slot = len(self.slots)
        self.slots.append(SlotInfo(slot, len(self.ops), "meas", q, label))
        self.ops.append(Op(kind, (q,)))
        return slot

    def depolarize1(self, q: int, p: float):
        self._noise("DEPOLARIZE1", (q,), (p,))

    def depolarize2(self, a: int, b: int, p: float):
        self._noise("DEPOLARIZE2", (a, b), (p,))

    def pauli_channel1(self, q: int, px: float, py: float, pz: float):
        self._noise("PAULI_CHANNEL1", (q,), (px, py, pz))

    def pauli_pool(self, name: str, qubits):
        self._check_targets(tuple(qubits))
        self.ops.append(Op("PAULI_POOL", tuple(qubits), name=name))

    def _noise(self, kind, targets, probs):
        self._check_targets(targets)
        if not all(0.0 <= p <= 1.0 for p in probs) or sum(probs) > 1.0 + 1e-12:
            raise ValueError("bad probabilities %r" % (probs,))
        self.ops.append(Op(kind, targets, tuple(probs)))

    def prep_logical(self, code: str, state: str, qubits):
        qubits = tuple(qubits)
        self._check_targets(qubits)
        if state not in ("zero", "plus", "s_plus"):
            raise ValueError("bad logical state %r" % state)
        self.ops.append(Op("PREP_LOGICAL", qubits, code=code, state=state))

    def check(self, pauli: PauliString, label: str = None) -> int:
        if pauli.n != self.n_qubits:
            raise ValueError("observable length mismatch")
        slot = len(self.slots)
        self.slots.append(SlotInfo(slot, len(self.ops), "check", None, label))
        self.ops.append(Op("CHECK", (), pauli=pauli, name=label))
        return slot

    def probe(self, q: int) -> tuple:
        """Dump the accumulated frame on q into two slots (x then z part)."""
        self._check_targets((q,))
        sx = len(self.slots)
        self.slots.append(SlotInfo(sx, len(self.ops), "probe_x", q))
        self.slots.append(SlotInfo(sx + 1, len(self.ops), "probe_z", q))
        self.ops.append(Op("PROBE", (q,)))
        return sx, sx + 1

    def correct(self, group: str, pauli: PauliString):
        if group not in self.decode_groups:
            raise ValueError("unknown decode group %r" % group)
        if self.decode_groups[group].raw is None:
            raise ValueError("group %r has no raw logical readout" % group)
        if pauli.n != self.n_qubits:
            raise ValueError("correction length mismatch")
        self.ops.append(Op("CORRECT", (), pauli=pauli, name=group))

    def detector(self, name: str, slots):
        slots = tuple(slots)
        for s in slots:
            if not 0 <= s < len(self.slots):
                raise ValueError("detector %r references missing slot %d" % (name, s))
        self.detectors.append((name, slots))

    def decode_group(self, name, code, bases, syndromes, raw=None):
        if name in self.decode_groups:
            raise ValueError("duplicate decode group %r" % name)
        bases = tuple(bases)
        syndromes = tuple(tuple(tuple(s) for s in fam) for fam in syndromes)
        for fam in syndromes:
            for subset in fam:
                for s in subset:
                    if not 0 <= s < len(self.slots):
                        raise ValueError("decode group %r: missing slot %d" % (name, s))
        raw = tuple(raw) if raw is not None else None
        self.decode_groups[name] = DecodeGroup(name, code, bases, syndromes, raw)

    # -- queries ----------------------------------------------------------

    @property
    def n_slots(self) -> int:
        return len(self.slots)

    def meas_slot_indices(self):
        return [s.index for s in self.slots if s.kind == "meas"]

    def detector_map(self) -> dict:
        return dict(self.detectors)

    def error_sites(self):
        """(op index, kind, probs, targets) for every noise annotation, in order."""
        out = []
        for i, op in enumerate(self.ops):
            if op.kind in NOISE_KINDS:
                out.append((i, op.kind, op.arg, op.targets))
        return out

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        lines = ["QUBITS %d" % self.n_qubits]
        slot_at_op = {}
        for s in self.slots:
            slot_at_op.setdefault(s.op_index, []).append(s)
        for i, op in enumerate(self.ops):
            lines.append(_op_line(op, slot_at_op.get(i, ())))
        for name, slots in self.detectors:
            lines.append("DETECTOR[%s] %s" % (name, " ".join(map(str, slots))))
        for g in self.decode_groups.values():
            parts = ["DECODE[%s] %s %s" % (g.name, g.code, "".join(g.bases))]
            for basis, fam in zip(g.bases, g.syndromes):
                parts.append("syn%s=%s" % (basis.lower(),
                             ";".join(",".join(map(str, s)) for s in fam)))
            if g.raw is not None:
                parts.append("raw=%s" % ",".join(map(str, g.raw)))
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        return _parse(text)

    def __eq__(self, other):
        return isinstance(other, Circuit) and self.to_text() == other.to_text()


def _pauli_terms(p: PauliString) -> str:
    terms = [] if p.sign > 0 else ["-"]
    for q in range(p.n):
        k = p.kind_at(q)
        if k != "I":
            terms.append("%s%d" % (k, q))
    return " ".join(terms) if terms else "+"


def _op_line(op: Op, slots) -> str:
    k = op.kind
    if k in UNITARY_KINDS + PREP_KINDS:
        return "%s %s" % (k, " ".join(map(str, op.targets)))
    if k in MEAS_KINDS:
        s = slots[0]
        tag = "[%s]" % s.label if s.label else ""
        return "%s%s %d" % (k, tag, op.targets[0])
    if k in ("DEPOLARIZE1", "DEPOLARIZE2"):
        return "%s(%r) %s" % (k, op.arg[0], " ".join(map(str, op.targets)))
    if k == "PAULI_CHANNEL1":
        return "PAULI_CHANNEL1(%r,%r,%r) %d" % (*op.arg, op.targets[0])
    if k == "PAULI_POOL":
        return "PAULI_POOL[%s] %s" % (op.name, " ".join(map(str, op.targets)))
    if k == "PREP_LOGICAL":
        return "PREP_LOGICAL(%s,%s) %s" % (op.code, op.state,
                                           " ".join(map(str, op.targets)))
    if k == "CHECK":
        tag = "[%s]" % op.name if op.name else ""
        return "CHECK%s %s" % (tag, _pauli_terms(op.pauli))
    if k == "PROBE":
        return "PROBE %d" % op.targets[0]
    if k == "CORRECT":
        return "CORRECT[%s] %s" % (op.name, _pauli_terms(op.pauli))
    raise ValueError("unhandled op kind %r" % k)


def _parse_pauli_terms(n, toks, where):
    sign = 1
    x_sup, z_sup = [], []
    for t in toks:
        if t in ("+", "-"):
            sign = -1 if t == "-" else 1
            continue
        kind, q = t[0].upper(), t[1:]
        if kind not in "XYZ" or not q.isdigit():
            raise ValueError("%s: bad Pauli term %r" % (where, t))
        q = int(q)
        if kind in "XY":
            x_sup.append(q)
        if kind in "YZ":
            z_sup.append(q)
    return PauliString.from_supports(n, x_sup, z_sup, sign)


def _parse(text: str) -> Circuit:
    circ = None
    for lineno, rawline in enumerate(text.splitlines(), 1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head, rest = toks[0], toks[1:]
        name = None
        if "[" in head:
            head, name = head[:-1].split("[", 1)
        arg = None
        if "(" in head:
            head, arg = head[:-1].split("(", 1)
        where = "line %d" % lineno
        try:
            if head == "QUBITS":
                circ = Circuit(int(rest[0]))
                continue
            if circ is None:
                raise ValueError("first line must be QUBITS n")
            if head in UNITARY_KINDS + PREP_KINDS:
                circ.append(head, *map(int, rest))
            elif head in MEAS_KINDS:
                circ.measure(int(rest[0]), head[-1], label=name)
            elif head == "DEPOLARIZE1":
                circ.depolarize1(int(rest[0]), float(arg))
            elif head == "DEPOLARIZE2":
                circ.depolarize2(int(rest[0]), int(rest[1]), float(arg))
            elif head == "PAULI_CHANNEL1":
                px, py, pz = (float(v) for v in arg.split(","))
                circ.pauli_channel1(int(rest[0]), px, py, pz)
            elif head == "PAULI_ERROR":
                # sugar: single-Pauli channel, e.g. PAULI_ERROR(X,0.001) 3
                kind, prob = arg.split(",")
                probs = {"X": (float(prob), 0.0, 0.0),
                         "Y": (0.0, float(prob), 0.0),
                         "Z": (0.0, 0.0, float(prob))}[kind.strip().upper()]
                circ.pauli_channel1(int(rest[0]), *probs)
            elif head == "PAULI_POOL":
                circ.pauli_pool(name, tuple(map(int, rest)))
            elif head == "PREP_LOGICAL":
                code, state = arg.split(",")
                circ.prep_logical(code.strip(), state.strip(), tuple(map(int, rest)))
            elif head == "CHECK":
                circ.check(_parse_pauli_terms(circ.n_qubits, rest, where), label=name)
            elif head == "PROBE":
                circ.probe(int(rest[0]))
            elif head == "DETECTOR":
                circ.detector(name, tuple(map(int, rest)))
            elif head == "DECODE":
                code, bases = rest[0], rest[1]
                syndromes, raw = [], None
                for item in rest[2:]:
                    key, val = item.split("=", 1)
                    if key.startswith("syn"):
                        fam = [tuple(map(int, s.split(","))) for s in val.split(";")]
                        syndromes.append(tuple(fam))
                    elif key == "raw":
                        raw = tuple(map(int, val.split(",")))
                    else:
                        raise ValueError("%s: bad DECODE field %r" % (where, key))
                circ.decode_group(name, code, tuple(bases), tuple(syndromes), raw)
            elif head == "CORRECT":
                # group may be declared later in the text; validated below
                pauli = _parse_pauli_terms(circ.n_qubits, rest, where)
                circ.ops.append(Op("CORRECT", (), pauli=pauli, name=name))
            else:
                raise ValueError("%s: unknown op %r" % (where, head))
        except (ValueError, IndexError, KeyError) as e:
            raise ValueError("parse error at line %d: %s" % (lineno, e)) from None
    if circ is None:
        raise ValueError("empty circuit text")
    for op in circ.ops:
        if op.kind == "CORRECT" and op.name not in circ.decode_groups:
            raise ValueError("CORRECT references unknown decode group %r" % op.name)
    return circ
