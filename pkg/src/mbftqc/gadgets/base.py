"""Shared plumbing for the gadget builders.

Noise placement convention (one authority for the whole package): a
depolarizing site goes right after every physical one- and two-qubit gate,
after every physical |0> preparation, and right before every Z-basis
measurement.  X-basis preparation and measurement are compiled to |0>+H and
H+measure, so they carry the corresponding gate-noise site as well.
Simulator bookkeeping ops (CHECK, CORRECT, PREP_LOGICAL, PROBE) never carry
noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..circuit import Circuit
from ..codes import get_code, encoder_ops, logical_s_layer
from ..pauli import PauliString


@dataclass(frozen=True)
class NoisePolicy:
    """Physical error rate and which site categories are active."""

    p: float
    apply_gate_noise: bool = True
    apply_prep_noise: bool = True
    apply_meas_noise: bool = True

    @classmethod
    def noiseless(cls) -> "NoisePolicy":
        return cls(0.0, False, False, False)

    @property
    def gate_p(self):
        return self.p if self.apply_gate_noise else 0.0

    @property
    def prep_p(self):
        return self.p if self.apply_prep_noise else 0.0

    @property
    def meas_p(self):
        return self.p if self.apply_meas_noise else 0.0


# Per-qubit Pauli channels of modeled ancilla blocks, in units of p/15.
# "purified" blocks come out of two-round entanglement purification
# (X-heavy on |0>-type blocks, the basis-mirrored twin for |+>-type);
# "gadget" blocks come out of Steane-gadget post-selection (Z-heavy).
_MODEL_WEIGHTS = {
    ("purified", "zero"): (6, 2, 2),
    ("purified", "plus"): (2, 2, 6),
    ("purified", "s_plus"): (2, 2, 6),
    ("gadget", "plus"): (2, 2, 10),
    ("gadget", "s_plus"): (2, 2, 10),
}


@dataclass(frozen=True)
class AncillaModel:
    """How verified logical ancilla blocks enter a circuit.

    ``transversal`` draws independent per-qubit Paulis on an ideally
    prepared block; ``explicit`` replays residual error patterns collected
    from actual post-selected preparation runs (a pool per (code, state)).

    Kinds: ``purified`` blocks carry the purification-output channel as is;
    ``teleport`` blocks are purified |0> blocks turned into |+> by an
    explicit noisy transversal H layer (the factory step that feeds gate
    teleportation); ``gadget`` blocks carry the Steane-gadget output
    channel on an ideally prepared state.
    """

    mode: str = "transversal"      # "transversal" | "explicit"
    kind: str = "purified"         # "purified" | "teleport" | "gadget"

    def channel(self, p: float, state: str):
        key = ("purified" if self.kind == "teleport" else self.kind, state)
        w = _MODEL_WEIGHTS[key]
        return tuple(wi * p / 15.0 for wi in w)

    def pool_name(self, code: str, state: str) -> str:
        kind = "purified" if self.kind == "teleport" else self.kind
        return "%s_%s_%s" % (kind, code, state)


@dataclass
class StepSpec:
    """Crash condition of one benchmark step.

    The step fails when any clause (XOR of the listed groups' corrected
    deviations) is nonzero, or when any byproduct decode hit an invalid
    syndrome.
    """

    index: int
    byproduct_groups: tuple
    clauses: tuple


@dataclass
class GadgetCircuit:
    circuit: Circuit
    postselect: tuple = ()
    steps: tuple = ()
    pools_needed: tuple = ()
    info: dict = field(default_factory=dict)

    @property
    def byproduct_groups(self):
        out = []
        for s in self.steps:
            out.extend(s.byproduct_groups)
        return tuple(out)


class Builder:
    """Circuit builder that places noise sites by policy."""

    def __init__(self, n_qubits: int, noise: NoisePolicy):
        self.c = Circuit(n_qubits)
        self.noise = noise
        self._pools = []

    def gate1(self, kind: str, q: int):
        self.c.append(kind, q)
        if self.noise.gate_p > 0:
            self.c.depolarize1(q, self.noise.gate_p)

    def gate2(self, kind: str, a: int, b: int):
        self.c.append(kind, a, b)
        if self.noise.gate_p > 0:
            self.c.depolarize2(a, b, self.noise.gate_p)

    def prep(self, q: int, basis: str = "Z"):
        self.c.append("PREP_Z", q)
        if self.noise.prep_p > 0:
            self.c.depolarize1(q, self.noise.prep_p)
        if basis == "X":
            self.gate1("H", q)

    def measure(self, q: int, basis: str = "Z", label=None) -> int:
        if basis == "X":
            self.gate1("H", q)
        if self.noise.meas_p > 0:
            self.c.depolarize1(q, self.noise.meas_p)
        return self.c.measure(q, "Z", label=label)

    # -- block-level helpers -------------------------------------------

    def encoder(self, code_name: str, variant: int, state: str, qubits):
        """Noisy physical encoder for |0>_L or |+>_L."""
        plus, cnots = encoder_ops(code_name, variant, state)
        for lq, q in enumerate(qubits):
            self.prep(q, "X" if lq in plus else "Z")
        for c, t in cnots:
            self.gate2("CNOT", qubits[c], qubits[t])

    def s_layer(self, code_name: str, qubits, dagger=False):
        """Transversal layer implementing logical S (or S dagger)."""
        kind = logical_s_layer(get_code(code_name))
        if dagger:
            kind = "s" if kind == "s_dag" else "s_dag"
        for q in qubits:
            self.gate1(kind.upper(), q)

    def model_block(self, code_name: str, state: str, qubits,
                    ancilla: AncillaModel):
        """Verified ancilla block under the chosen ancilla model.

        Teleport-kind blocks request state "plus": the underlying purified
        |0> block (channel or pool) is emitted first and the |0> -> |+>
        transversal H layer is applied explicitly with its gate noise.
        """
        base_state = state
        if ancilla.kind == "teleport":
            if state != "plus":
                raise ValueError("teleport ancillas are |+>-type")
            base_state = "zero"
        self.c.prep_logical(code_name, base_state, qubits)
        if ancilla.mode == "transversal":
            px, py, pz = ancilla.channel(self.noise.p, base_state)
            if px or py or pz:
                for q in qubits:
                    self.c.pauli_channel1(q, px, py, pz)
        elif ancilla.mode == "explicit":
            name = ancilla.pool_name(code_name, base_state)
            self.c.pauli_pool(name, qubits)
            self._pools.append(name)
        else:
            raise ValueError("unknown ancilla mode %r" % ancilla.mode)
        if ancilla.kind == "teleport":
            for q in qubits:
                self.gate1("H", q)

    def measure_block(self, qubits, basis: str, prefix: str):
        return [self.measure(q, basis, label="%s%d" % (prefix, i))
                for i, q in enumerate(qubits)]

    # -- checks / decode groups ------------------------------------------

    def stab_checks(self, code_name: str, qubits, basis: str, prefix: str):
        """Ideal stabilizer-row probes; returns one slot per check row."""
        code = get_code(code_name)
        h = code.h_x if basis == "X" else code.h_z
        slots = []
        for i, row in enumerate(h):
            sup = [qubits[q] for q in range(code.n) if row[q]]
            obs = (PauliString.from_supports(self.c.n_qubits, x_support=sup)
                   if basis == "X" else
                   PauliString.from_supports(self.c.n_qubits, z_support=sup))
            slots.append(self.c.check(obs, label="%s%d" % (prefix, i)))
        return slots

    def logical_check(self, code_name: str, qubits, basis: str, label: str):
        code = get_code(code_name)
        sup = [qubits[q] for q in range(code.n)
               if (code.logical_x.x >> q) & 1]
        if basis == "X":
            obs = PauliString.from_supports(self.c.n_qubits, x_support=sup)
        elif basis == "Z":
            obs = PauliString.from_supports(self.c.n_qubits, z_support=sup)
        else:
            obs = PauliString.from_supports(self.c.n_qubits, sup, sup)
        return self.c.check(obs, label=label)

    def logical_pauli(self, code_name: str, qubits, basis: str) -> PauliString:
        code = get_code(code_name)
        sup = [qubits[q] for q in range(code.n)
               if (code.logical_x.x >> q) & 1]
        if basis == "X":
            return PauliString.from_supports(self.c.n_qubits, x_support=sup)
        if basis == "Z":
            return PauliString.from_supports(self.c.n_qubits, z_support=sup)
        return PauliString.from_supports(self.c.n_qubits, sup, sup)

    def syndrome_detectors(self, code_name: str, slots, basis: str,
                           prefix: str, with_logical=False):
        """Parity detectors of measured block bits against check rows."""
        code = get_code(code_name)
        h = code.h_x if basis == "X" else code.h_z
        names = []
        for i, row in enumerate(h):
            name = "%s_s%d" % (prefix, i)
            self.c.detector(name, [slots[q] for q in range(code.n) if row[q]])
            names.append(name)
        if with_logical:
            lmask = code.logical_x.x if basis == "X" else code.logical_z.z
            name = "%s_log" % prefix
            self.c.detector(name, [slots[q] for q in range(code.n)
                                   if (lmask >> q) & 1])
            names.append(name)
        return names

    def byproduct_group(self, name: str, code_name: str, slots, basis: str):
        """Decode group over a transversally measured block."""
        code = get_code(code_name)
        h = code.h_x if basis == "X" else code.h_z
        fam = [tuple(slots[q] for q in range(code.n) if row[q]) for row in h]
        lmask = (code.logical_x.x if basis == "X" else code.logical_z.z)
        raw = tuple(slots[q] for q in range(code.n) if (lmask >> q) & 1)
        self.c.decode_group(name, code_name, (basis,), (tuple(fam),), raw)
        return name

    def validation_group(self, name: str, code_name: str, families, raw_slot):
        """Decode group over ideal checks; families = [(basis, slots), ...]."""
        bases = tuple(b for b, _ in families)
        syn = tuple(tuple((s,) for s in slots) for _, slots in families)
        self.c.decode_group(name, code_name, bases, syn,
                            (raw_slot,) if raw_slot is not None else None)
        return name
