"""Demo: analytic resource estimation from benchmarked gate error rates."""

from mbftqc import estimator as ES

tables = ES.estimate_tables()
sv, gv, rz = tables["steane"], tables["golay"], tables["rz"]

print("Analog-rotation path (reference rates at p = 1e-4):")
print("  quantum volume width m = %d (raw %.1f)" % (sv.m, sv.m_raw))
print("  physical qubits: %d logical data qubits x %d = %d"
      % (sv.m, sv.eta, sv.n_physical))
print("  one rotation = %d T gates; %.2g rotations = %.2g T-equivalents"
      % (rz["t_per_rotation"], rz["rotations"], rz["t_equivalents"]))

print("Distillation path (p_T = %.3g):" % ES.REFERENCE_PT_P1E4_GOLAY)
print("  synthesis accuracy fixed point delta = %.4g -> %d T per rotation"
      % (gv.delta, gv.n_t_per_rotation))
print("  QV bound m = %d, footprint %d qubits; a width-100 machine needs %d"
      % (gv.m, gv.n_physical, 100 * ES.ETA_GOLAY))

for name, w in tables["workloads"].items():
    verdict = ("feasible" if w.feasible else
               "marginal" if w.marginal else "infeasible")
    print("  %-9s: %.2g T gates on %d logical -> %d physical qubits (%s)"
          % (name, w.t_count, w.logical_qubits, w.n_physical, verdict))
