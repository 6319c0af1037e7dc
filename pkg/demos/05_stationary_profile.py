"""
Zero-energy state of two-photon down-conversion
===============================================

For an odd-dimensional subspace there is a stationary state with energy
zero. Its even amplitudes are exact ratios of beta products. Here we print
psi_{2p}^2 for k=2, N=100 (normalized to psi_0 = 1): large at both ends,
small in the middle. Pipe the output into any plotting tool.

The same table comes from the command line:

    bosonladder stationary --model '{"family":"k_photon","params":{"k":2,"N":100}}'
"""
from bosonladder import make_k_photon, stationary_state

st = stationary_state(make_k_photon(2, 100), normalize="psi0")
print(f"# residual of H psi: {st.residual:.1e}")
print("p,psi_2p_squared")
for p, sq in enumerate(st.squares):
    print(f"{p},{float(sq):.6f}")

sq = [float(x) for x in st.squares]
print(f"# minimum at p={sq.index(min(sq))}, ends {sq[0]:.3f} and {sq[-1]:.4f}")
