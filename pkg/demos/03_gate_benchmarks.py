"""Demo: repeated-application gate benchmarking.

One teleportation step per round, ideal decoded validation after each, and
the per-step failure rate p(Q) = N(Q) / survivors.  The rate saturates
after a short transient; odd and even steps differ because measurement-side
errors only matter when the byproduct acts nontrivially, and the CZ bench
shows the period-three cycle of its stabilizer pair.
"""

import numpy as np

from mbftqc import experiments as E

P = 1e-3

def fmt(v):
    return np.array2string(v, formatter={"float_kind": lambda x: "%.2e" % x})


h = E.repeated_gate_benchmark("H", "steane", P, 12, 1_000_000, seed=7)
print("Steane H at p=%g: p_L = %.3g (max over steps, at Q=%d)"
      % (P, h.p_l, h.extra["q_star"]))
print("  p(Q):", fmt(h.p_of_q[1:]))

cz = E.repeated_gate_benchmark("CZ", "steane", P, 12, 500_000, seed=8)
print("Steane CZ at p=%g: p_L = %.3g" % (P, cz.p_l))
print("  p(Q):", fmt(cz.p_of_q[1:]))

sweep = []
for p in (1e-3, 3e-3, 1e-2):
    r = E.repeated_gate_benchmark("H", "steane", p, 12, 400_000, seed=9)
    ev = int(r.first_failures[r.extra["q_star"]])
    sweep.append((p, r.p_l, ev))
fit = E.fit_power_law(sweep)
print("H scaling fit: p_L = %.3g * p^%.2f  (expect exponent 2)"
      % (fit.c, fit.alpha))
