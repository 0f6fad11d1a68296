"""Two-round entanglement purification of logical |0> (or |+>).

Four independently encoded blocks; round one couples (1,2) and (3,4) with
transversal CNOTs and reads blocks 2 and 4 out destructively, checking the
measured-basis stabilizers and the logical eigenvalue; round two couples the
survivors in the reverse direction and reads block 3 out in the conjugate
basis, checking stabilizers only (the logical is not an eigenvalue there).
Any firing detector discards the shot; block 1 is the output.

The |+> variant is the basis-mirrored circuit, used when verified plus-type
blocks are needed as explicit ancillas.
"""

from __future__ import annotations

from ..codes import get_code
from .base import Builder, GadgetCircuit, NoisePolicy, StepSpec


def purification_zero(code_name: str, noise: NoisePolicy, basis: str = "Z",
                      probes: bool = False) -> GadgetCircuit:
    code = get_code(code_name)
    n = code.n
    b = Builder(4 * n, noise)
    blocks = [tuple(range(i * n, (i + 1) * n)) for i in range(4)]

    encoder_ranges = []
    for i in range(4):
        start = len(b.c.ops)
        b.encoder(code_name, i + 1, "zero" if basis == "Z" else "plus",
                  blocks[i])
        encoder_ranges.append((start, len(b.c.ops)))

    # round one: check the errors that flip the prepared eigenbasis
    meas_basis = basis                  # Z-state: Z readout catches X errors
    conj_basis = "X" if basis == "Z" else "Z"
    for src, dst in ((0, 1), (2, 3)):
        for q in range(n):
            if basis == "Z":
                b.gate2("CNOT", blocks[src][q], blocks[dst][q])
            else:
                b.gate2("CNOT", blocks[dst][q], blocks[src][q])
    postselect = []
    for blk in (1, 3):
        slots = b.measure_block(blocks[blk], meas_basis, "r1b%d_" % blk)
        postselect += b.syndrome_detectors(code_name, slots, meas_basis,
                                           "r1b%d" % blk, with_logical=True)

    # round two: reversed coupling, conjugate-basis readout of block 3
    for q in range(n):
        if basis == "Z":
            b.gate2("CNOT", blocks[2][q], blocks[0][q])
        else:
            b.gate2("CNOT", blocks[0][q], blocks[2][q])
    slots = b.measure_block(blocks[2], conj_basis, "r2b2_")
    postselect += b.syndrome_detectors(code_name, slots, conj_basis, "r2b2",
                                       with_logical=False)

    # ideal output validation: corrected logical value of the prepared basis
    out = blocks[0]
    syn_same = b.stab_checks(code_name, out, basis, "vs_")
    raw = b.logical_check(code_name, out, basis, "vlog")
    val = b.validation_group("val", code_name, [(basis, syn_same)], raw)
    # conjugate-family syndrome probes locate the other error type
    syn_conj = b.stab_checks(code_name, out, conj_basis, "vc_")
    locator = b.validation_group("locator", code_name,
                                 [(conj_basis, syn_conj)], None)

    probe_slots = None
    if probes:
        probe_slots = [b.c.probe(q) for q in out]

    return GadgetCircuit(
        b.c, tuple(postselect),
        (StepSpec(1, (), ((val,),)),),
        tuple(b._pools),
        {"code": code_name, "basis": basis, "output_block": out,
         "validation_group": val, "locator_group": locator,
         "probe_slots": probe_slots, "encoder_op_ranges": encoder_ranges})
