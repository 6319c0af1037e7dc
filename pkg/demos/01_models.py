"""
Ladder models and their beta sequences
======================================

Every model here is a finite list of non-negative numbers beta_0..beta_N
with beta_N = 0. The interaction couples neighbouring basis states with
strength sqrt(beta_n), so the list is all we need.
"""
import json

from bosonladder import from_spec, make_custom, make_k_photon, make_multi_mode, make_three_mode
from bosonladder.model import describe

# k-photon down-conversion: pump photons split into k signal photons
for k in (1, 2, 3):
    m = make_k_photon(k, 4)
    print(f"k_photon(k={k}, N=4):", m.betas)

# a three-mode model and the same thing spelled as a general multi-mode model
print("three_mode(5):      ", make_three_mode(5).betas)
print("multi_mode(1,[1,1]):", make_multi_mode(1, [1, 1], [0, 0], 5).betas)

# arbitrary sequences, exact rationals allowed
two_level = make_custom([1, 0])
print("custom two-level:", two_level.betas, "N =", two_level.N)
print("custom rational: ", make_custom(["1/3", "2", 0]).betas)

# an interior zero splits the ladder into independent blocks
print("reducible?", make_custom([1, 0, 2, 0]).reducible)

# models serialize to JSON and back
spec = json.dumps(describe(make_k_photon(2, 3)))
print(spec)
print(from_spec(spec) == make_k_photon(2, 3))
