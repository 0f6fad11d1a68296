"""Logical one-bit teleportation and its repeated-application benchmarks.

One LOBT step couples the data block to a verified ancilla block with a
transversal CZ, measures the data block transversally in X, decodes the
corrected logical X bit m, and applies the byproduct to the teleported
state, which simulation-side is a classically controlled frame injection.
Each step is followed by ideal decoded validation of the expected logical
state, producing the first-failure records that Eq.-style per-step rates
are built from.

Benchmarks:
  H       ancilla = purified |0>_L block ((6,2,2) p/15 channel) plus a noisy
          transversal H layer
  RZ_tele ancilla |+_0>_L with the gadget-output channel (2,2,10) p/15
  T_tele  ancilla S|+>_L with the purified-family channel (2,2,6) p/15
  CZ      ancilla pair CZ|++>_L assembled in-factory from two purified
          blocks with noisy transversal CNOT and H layers
"""

from __future__ import annotations

from ..codes import get_code
from ..pauli import pauli_mul
from .base import AncillaModel, Builder, GadgetCircuit, NoisePolicy, StepSpec


def _lobt_step(b: Builder, code_name: str, data, anc, tag: str):
    """One teleportation step in the native gate set.

    The transversal CZ plus X-basis readout compiles to H on the data,
    CNOT from the ancilla onto the data, and a Z-basis readout (the CZ
    conjugation H cancels against the measurement H).  The readout bits
    are the X-basis pattern of the teleported block, so the byproduct
    decode checks X-type stabilizer parities.
    """
    n = get_code(code_name).n
    slots = []
    for q in range(n):
        b.gate1("H", data[q])
        b.gate2("CNOT", anc[q], data[q])
    for i in range(n):
        slots.append(b.measure(data[i], "Z", label="m%s_%d" % (tag, i)))
    group = b.byproduct_group("bp%s" % tag, code_name, slots, "X")
    return group


# validation schedule: logical state after q applications of the step gate
#   H:      |+> -> |0> -> |+> ...          bases Z, X alternating
#   S then H (non-Clifford proxies):
#           S|+> -> |+> -> |0> -> S|+> ... bases X, Z, Y cycling
_BASIS_CYCLE = {
    "H": ("Z", "X"),
    "RZ_tele": ("Z", "X"),
    "T_tele": ("X", "Z", "Y"),
}


def _tele_bench(code_name: str, gate: str, q_max: int, noise: NoisePolicy,
                ancilla: AncillaModel) -> GadgetCircuit:
    code = get_code(code_name)
    n = code.n
    b = Builder((q_max + 1) * n, noise)
    blocks = [tuple(range(i * n, (i + 1) * n)) for i in range(q_max + 1)]

    if gate == "T_tele":
        # the distilled-state consumer is benchmarked with the standard
        # purified-family channel; see the module docstring
        anc_state, anc_model = "s_plus", AncillaModel(ancilla.mode, "purified")
    elif gate == "RZ_tele":
        anc_state, anc_model = "plus", AncillaModel(ancilla.mode, "gadget")
    else:
        anc_state, anc_model = "plus", AncillaModel(ancilla.mode, "teleport")

    b.c.prep_logical(code_name, anc_state if gate == "T_tele" else "plus",
                     blocks[0])
    steps = []
    cycle = _BASIS_CYCLE[gate]
    for q in range(1, q_max + 1):
        data, anc = blocks[q - 1], blocks[q]
        b.model_block(code_name, anc_state, anc, anc_model)
        group = _lobt_step(b, code_name, data, anc, str(q))
        if gate == "T_tele":
            # S|+> ancilla: the failed branch applies S^dag = Z S, so the
            # byproduct is X^m followed by Z^m (Pauli-fixable at this angle)
            byp = pauli_mul(b.logical_pauli(code_name, anc, "Z"),
                            b.logical_pauli(code_name, anc, "X"))
        else:
            byp = b.logical_pauli(code_name, anc, "X")
        b.c.correct(group, byp)
        basis = cycle[(q - 1) % len(cycle)]
        if basis == "Y":
            fams = [("X", b.stab_checks(code_name, anc, "X", "v%dx_" % q)),
                    ("Z", b.stab_checks(code_name, anc, "Z", "v%dz_" % q))]
        else:
            fams = [(basis, b.stab_checks(code_name, anc, basis,
                                          "v%d_" % q))]
        raw = b.logical_check(code_name, anc, basis, "vlog%d" % q)
        val = b.validation_group("val%d" % q, code_name, fams, raw)
        steps.append(StepSpec(q, ("bp%d" % q,), ((val,),)))

    return GadgetCircuit(
        b.c, (), tuple(steps), tuple(b._pools),
        {"code": code_name, "gate": gate, "q_max": q_max})


def _cz_bench(code_name: str, q_max: int, noise: NoisePolicy,
              ancilla: AncillaModel) -> GadgetCircuit:
    """Repeated CZ(H x H) on two logical qubits via graph-state ancillas."""
    code = get_code(code_name)
    n = code.n
    b = Builder(2 * (q_max + 1) * n, noise)
    blk = lambda i: tuple(range(i * n, (i + 1) * n))  # noqa: E731
    d1, d2 = blk(0), blk(1)
    b.c.prep_logical(code_name, "plus", d1)
    b.c.prep_logical(code_name, "plus", d2)

    # stabilizer pair of (CZ (HxH))^q |++>: period three
    pair_cycle = (
        (("Z", "I"), ("I", "Z")),
        (("X", "Z"), ("Z", "X")),
        (("X", "I"), ("I", "X")),
    )
    steps = []
    for q in range(1, q_max + 1):
        a, c2 = blk(2 * q), blk(2 * q + 1)
        # graph-state pair in the native gate set:
        # CZ |++> = (I x H) CNOT (|+> x |0>), every layer noisy
        b.model_block(code_name, "plus", a, AncillaModel(ancilla.mode, "teleport"))
        b.model_block(code_name, "zero", c2, AncillaModel(ancilla.mode, "purified"))
        for i in range(n):
            b.gate2("CNOT", a[i], c2[i])
        for i in range(n):
            b.gate1("H", c2[i])
        g1 = _lobt_step(b, code_name, d1, a, "%da" % q)
        b.c.correct(g1, pauli_mul(b.logical_pauli(code_name, a, "X"),
                                  b.logical_pauli(code_name, c2, "Z")))
        g2 = _lobt_step(b, code_name, d2, c2, "%db" % q)
        b.c.correct(g2, pauli_mul(b.logical_pauli(code_name, a, "Z"),
                                  b.logical_pauli(code_name, c2, "X")))
        d1, d2 = a, c2

        clauses = []
        fam_cache = {}

        def family(block, basis, tag):
            key = (tag, basis)
            if key not in fam_cache:
                fam_cache[key] = (basis, b.stab_checks(
                    code_name, block, basis, "v%d%s%s_" % (q, tag, basis.lower())))
            return fam_cache[key]

        for idx, (pa, pb) in enumerate(pair_cycle[(q - 1) % 3]):
            fams, raw_pauli = [], None
            for tag, block, basis in (("a", d1, pa), ("b", d2, pb)):
                if basis == "I":
                    continue
                fams.append(family(block, basis, tag))
                lp = b.logical_pauli(code_name, block, basis)
                raw_pauli = lp if raw_pauli is None else pauli_mul(raw_pauli, lp)
            raw = b.c.check(raw_pauli, label="vpair%d_%d" % (q, idx))
            val = b.validation_group("val%d_%d" % (q, idx), code_name,
                                     fams, raw)
            clauses.append((val,))
        steps.append(StepSpec(q, ("bp%da" % q, "bp%db" % q), tuple(clauses)))

    return GadgetCircuit(
        b.c, (), tuple(steps), tuple(b._pools),
        {"code": code_name, "gate": "CZ", "q_max": q_max})


def lobt_h(code_name: str, q_max: int, noise: NoisePolicy,
           ancilla: AncillaModel = AncillaModel()) -> GadgetCircuit:
    return _tele_bench(code_name, "H", q_max, noise, ancilla)


def lobt_rz(q_max: int, noise: NoisePolicy,
            ancilla: AncillaModel = AncillaModel()) -> GadgetCircuit:
    """Teleportation half of the analog rotation, theta = 0 instance."""
    return _tele_bench("steane", "RZ_tele", q_max, noise, ancilla)


def lobt_t(q_max: int, noise: NoisePolicy,
           ancilla: AncillaModel = AncillaModel()) -> GadgetCircuit:
    """Teleportation half of the distilled T gate (S proxy), Golay code."""
    return _tele_bench("golay", "T_tele", q_max, noise, ancilla)


def lobt_cz(code_name: str, q_max: int, noise: NoisePolicy,
            ancilla: AncillaModel = AncillaModel()) -> GadgetCircuit:
    return _cz_bench(code_name, q_max, noise, ancilla)
