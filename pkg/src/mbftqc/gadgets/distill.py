"""Higher-order zero-level magic-state distillation on the Golay code.

The data block is initialized by state injection: one physical qubit is
rotated into the magic state (the S|+> Clifford stand-in for T|+>) and a
bare encoder folds it into the logical qubit, so a single fault on the
injection line is already a logical error.  Each round then runs an
eigenvalue test of the transversally conjugated X through a two-qubit Bell
ancilla (the second CNOT returns the Bell partner to |0>, so its readout
flags control faults that would otherwise stream onto the data), postselects
on the test outcome, and applies Steane-gadget syndrome post-selection.
A logical injection error only escapes when every round's test outcome is
itself corrupted, so the surviving error scales as O(p^(r+1)).
"""

from __future__ import annotations

from ..codes import get_code, injection_encoder
from .analog import steane_gadget
from .base import AncillaModel, Builder, GadgetCircuit, NoisePolicy, StepSpec


def distillation(r: int, noise: NoisePolicy,
                 ancilla: AncillaModel = AncillaModel(),
                 probes: bool = False) -> GadgetCircuit:
    if not 1 <= r <= 3:
        raise ValueError("rounds r must be in 1..3")
    code = get_code("golay")
    n = code.n
    # layout: data block, then per round 2 control qubits + 2 gadget blocks
    n_total = n + r * (2 + 2 * n)
    b = Builder(n_total, noise)
    data = tuple(range(n))

    # non-fault-tolerant injection of the physical magic state
    lq, pivots, cnots = injection_encoder("golay")
    b.prep(data[lq], "Z")
    b.gate1("H", data[lq])
    b.gate1("S", data[lq])
    for q in range(n):
        if q != lq:
            b.prep(data[q], "X" if q in pivots else "Z")
    for c, t in cnots:
        b.gate2("CNOT", data[c], data[t])

    postselect = []
    nxt = n
    for k in range(1, r + 1):
        anc_bell, anc_ctl = nxt, nxt + 1
        g_zero = tuple(range(nxt + 2, nxt + 2 + n))
        g_plus = tuple(range(nxt + 2 + n, nxt + 2 + 2 * n))
        nxt += 2 + 2 * n

        b.prep(anc_bell, "Z")
        b.prep(anc_ctl, "X")
        b.gate2("CNOT", anc_ctl, anc_bell)
        # controlled (S X S^dag)^(x n) via phase layers around transversal CNOT
        b.s_layer("golay", data, dagger=True)
        for q in data:
            b.gate2("CNOT", anc_ctl, q)
        b.s_layer("golay", data)
        b.gate2("CNOT", anc_ctl, anc_bell)
        ht = b.measure(anc_ctl, "X", label="ht%d" % k)
        bell = b.measure(anc_bell, "Z", label="bell%d" % k)
        b.c.detector("ht%d" % k, (ht,))
        b.c.detector("bell%d" % k, (bell,))
        postselect += ["ht%d" % k, "bell%d" % k]
        postselect += steane_gadget(b, "golay", data, ancilla, "ps%d" % k,
                                    (g_zero, g_plus))

    syn_x = b.stab_checks("golay", data, "X", "vx_")
    syn_z = b.stab_checks("golay", data, "Z", "vz_")
    raw = b.logical_check("golay", data, "Y", "vlog")
    val = b.validation_group("val", "golay",
                             [("X", syn_x), ("Z", syn_z)], raw)
    probe_slots = [b.c.probe(q) for q in data] if probes else None

    return GadgetCircuit(
        b.c, tuple(postselect),
        (StepSpec(1, (), ((val,),)),),
        tuple(b._pools),
        {"code": "golay", "r": r, "output_block": data,
         "validation_group": val, "probe_slots": probe_slots})
