"""
Exact time evolution
====================

Propagator entries are summed from the exact series with a rigorous
error bound. Long times need more bits because the alternating terms
grow before they shrink; the precision is raised automatically.
"""
import math

import numpy as np

from bosonladder import gamma, make_custom, make_k_photon, propagator
from bosonladder.evolution import scale_tau
from bosonladder.oracle import dense_propagator

# two-level system: amplitudes are cos and sin
two_level = make_custom([1, 0])
for tau in (0.0, 0.5, 1.0):
    r = gamma(two_level, 0, 0, tau)
    print(f"tau={tau}: gamma_00={float(r):+.15f}  cos={math.cos(tau):+.15f}  bound={r.abs_error_bound:.1e}")

# precision grows with tau
kp = make_k_photon(1, 2)
for tau in (1.0, 10.0, 30.0):
    r = gamma(kp, 0, 0, tau, 1e-12)
    print(f"tau={tau:5}: {r.terms_used:4d} terms at {r.precision_bits:4d} bits, "
          f"error vs cos^2: {abs(float(r) - math.cos(tau) ** 2):.1e}")

# full propagator for a larger model against the dense eigen-decomposition
model = make_k_photon(2, 20)
tau = scale_tau(model, 0.8)
P = propagator(model, tau)
print("N=20: max |U - dense| =", f"{np.max(np.abs(P.entries - dense_propagator(model, tau))):.1e}",
      " unitarity defect =", f"{P.unitarity_defect:.1e}")

# photon-number distribution starting from the pump-only state
probs = np.abs(P.entries[:, 0]) ** 2
print("occupation of |n> after tau:", np.round(probs[:6], 4))
