"""
g-factors three ways
====================

The evolution amplitudes are power series in tau whose coefficients are
non-negative integers (for integer betas) called g-factors. We compute
them by a row recursion, by the explicit nested sums and by powers of a
lower Hessenberg matrix, and check they agree.
"""
from bosonladder import expand_A_power, g_hessenberg, g_nested_sum, g_recursive, make_k_photon

model = make_k_photon(2, 4)
k = 0
table = g_recursive(model, k, 4)

print("g^(l)_{n,0} for k_photon(2, 4); rows l, columns n")
for l in range(table.max_l + 1):
    print(f"l={l}:", [int(g) for g in table.column(l)])

# same table from the Hessenberg matrix, and entry by entry from nested sums
print("hessenberg agrees:", table == g_hessenberg(model, k, 4))
print("nested sums agree:", all(g == g_nested_sum(model, n, k, l) for (n, l), g in table.items()))

# the same numbers expand powers of the ladder Hamiltonian on |k>
# H^4 |0> = sum_j c_j (A^dag)^j |0>
print("H^4|0> coefficients:", {j: int(c) for j, c in expand_A_power(model, 4, 0).items()})
