"""Demo: the two non-Clifford pipelines.

Steane path: the nine-gate rotated-ancilla factory whose only first-order
survivor is the ZZ component at the rotation site (a logical Z, hence the
p/15 floor), plus the teleportation that consumes the ancilla; budget
p_RZ = 2 (p_rot + p_tele) for the expected two repeat-until-success tries.

Golay path: Bell-ancilla eigenvalue test plus syndrome post-selection,
repeated r times, detecting up to r faults; the budget p_T = 2 p_S + p_tele
is evaluated by exponent-pinned extrapolation where direct sampling is
out of reach.
"""

from mbftqc import experiments as E
from mbftqc import sampler as S
from mbftqc.gadgets import NoisePolicy, analog_ancilla_prep

# the 15-Pauli mechanism at the rotation site
gc = analog_ancilla_prep(NoisePolicy(1e-3))
cs = S.compile(gc.circuit)
site = [s for s in cs.sites if s.op_index == gc.info["rzz_site_op"]][0]
labels = [a + b for a in "IXYZ" for b in "IXYZ"][1:]
survivors = []
for o in range(15):
    rows = S.flips_for_faults(cs, [site.fault_base + o])
    res = S.process_groups(cs, rows)
    fired = any(int(v[0]) for v in
                S.detector_bits(cs, rows, gc.postselect).values())
    if not fired:
        survivors.append((labels[o], int(res.delta["val"][0])))
print("rotation-site faults surviving post-selection:", survivors)

budget = E.rz_budget(1e-3, 2_000_000, seed=5)
print("analog rotation budget at p=1e-3: p_rot=%.3g p_tele=%.3g p_RZ=%.3g"
      % (budget.parts["p_rot"], budget.parts["p_tele"], budget.total))

res = E.prep_benchmark("distill", "golay", 1e-2, 2_000_000, seed=6, r=1)
print("distillation r=1 at p=1e-2: success %.3f, output error %.3g"
      % (1 - res.discard_rate, res.p_l))
