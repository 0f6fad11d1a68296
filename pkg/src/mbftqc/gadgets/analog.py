"""Steane-gadget post-selection and the analog-rotation ancilla factory.

The gadget couples a data block to two verified logical ancillas and reads
both syndrome types destructively: first a zero-type ancilla is CNOT-coupled
onto the data and measured transversally in X (its X-stabilizer parities
catch Z errors on the data), then the data is CNOT-coupled onto a plus-type
ancilla measured in Z (catching X errors).  Any nonzero parity discards the
shot.  With modeled ancillas this ordering leaves the accepted data block
with per-qubit X/Y/Z errors of 2p/15, 2p/15, 10p/15, which is what the
teleportation benchmarks assume.

The rotated-ancilla factory encodes |+_theta>_L with nine two-qubit gates.
After the first two CNOTs, qubits 0-3 hold the state stabilized by
{XXXX, ZIZI, IZIZ}; the ZZ rotation acts on qubits 2,3 where the ZZ
component of its depolarizing channel is exactly a logical Z.  At theta=0
the rotation is the identity and only its noise channel remains, so the
whole preparation is Clifford and the logical X probe flips exactly when
the protocol suffered a logical Z error.
"""

from __future__ import annotations

from ..codes import get_code
from .base import AncillaModel, Builder, GadgetCircuit, NoisePolicy, StepSpec

# nine two-qubit operations: indices into the block's local qubits
THETA_PLUS_PREPS = (0, 1, 5, 6)
THETA_ZERO_PREPS = (2, 3, 4)
THETA_PRE_CNOTS = ((0, 2), (1, 3))
THETA_RZZ_PAIR = (2, 3)
THETA_POST_CNOTS = ((1, 4), (5, 0), (5, 4), (6, 3), (3, 0), (0, 1))


def steane_gadget(b: Builder, code_name: str, data, ancilla: AncillaModel,
                  prefix: str, blocks):
    """Append syndrome post-selection on ``data`` to an open builder.

    ``blocks`` supplies the two fresh ancilla blocks (zero-type, plus-type).
    Returns the postselect detector names.
    """
    a_zero, a_plus = blocks
    n = get_code(code_name).n
    postselect = []

    b.model_block(code_name, "zero", a_zero, ancilla)
    for q in range(n):
        b.gate2("CNOT", a_zero[q], data[q])
    slots = b.measure_block(a_zero, "X", "%s_za_" % prefix)
    postselect += b.syndrome_detectors(code_name, slots, "X", "%s_x" % prefix)

    b.model_block(code_name, "plus", a_plus, ancilla)
    for q in range(n):
        b.gate2("CNOT", data[q], a_plus[q])
    slots = b.measure_block(a_plus, "Z", "%s_pa_" % prefix)
    postselect += b.syndrome_detectors(code_name, slots, "Z", "%s_z" % prefix)
    return postselect


def analog_ancilla_prep(noise: NoisePolicy,
                        ancilla: AncillaModel = AncillaModel(),
                        theta_is_zero: bool = True,
                        probes: bool = False) -> GadgetCircuit:
    """|+_theta>_L factory on the Steane code, theta fixed to the Clifford
    instance (theta = 0, so the rotation site is a bare two-qubit channel)."""
    if not theta_is_zero:
        raise ValueError("only the theta=0 Clifford instance is simulable")
    code = get_code("steane")
    n = code.n
    b = Builder(3 * n, noise)
    data = tuple(range(n))
    a_zero = tuple(range(n, 2 * n))
    a_plus = tuple(range(2 * n, 3 * n))

    enc_start = len(b.c.ops)
    for q in THETA_PLUS_PREPS:
        b.prep(data[q], "X")
    for q in THETA_ZERO_PREPS:
        b.prep(data[q], "Z")
    for c, t in THETA_PRE_CNOTS:
        b.gate2("CNOT", data[c], data[t])
    rzz_site_op = len(b.c.ops)
    if noise.gate_p > 0:
        b.c.depolarize2(data[THETA_RZZ_PAIR[0]], data[THETA_RZZ_PAIR[1]],
                        noise.gate_p)
    for c, t in THETA_POST_CNOTS:
        b.gate2("CNOT", data[c], data[t])
    enc_end = len(b.c.ops)

    postselect = steane_gadget(b, "steane", data, ancilla, "ps",
                               (a_zero, a_plus))

    syn_x = b.stab_checks("steane", data, "X", "vx_")
    raw = b.logical_check("steane", data, "X", "vlog")
    val = b.validation_group("val", "steane", [("X", syn_x)], raw)

    probe_slots = [b.c.probe(q) for q in data] if probes else None

    return GadgetCircuit(
        b.c, tuple(postselect),
        (StepSpec(1, (), ((val,),)),),
        tuple(b._pools),
        {"code": "steane", "output_block": data, "validation_group": val,
         "rzz_site_op": rzz_site_op if noise.gate_p > 0 else None,
         "encoder_op_range": (enc_start, enc_end),
         "probe_slots": probe_slots})
