"""
Energy spectrum without diagonalizing
=====================================

The principal minors Y_n(lambda) of the tridiagonal matrix obey a three-term
recurrence. Their sign changes count eigenvalues (Sturm sequence), which
gives bisection for every eigenvalue, and at an eigenvalue they give the
eigenvector in closed form.
"""
from fractions import Fraction

import numpy as np

from bosonladder import (char_poly, eigenvalues, eigenvector, make_three_mode, minor_sequence,
                         ratio_continued_fraction)
from bosonladder.oracle import dense_spectrum

model = make_three_mode(6)

# characteristic polynomial, exact integer coefficients
p = char_poly(model)
print("char poly (monomial, highest first):", p.monomial())

lams = eigenvalues(model)
print("eigenvalues:", np.round(lams, 6))
print("max deviation from dense solver:", f"{np.max(np.abs(lams - dense_spectrum(model)[0])):.1e}")

# eigenvector from the minors
ev = eigenvector(model, lams[-1])
print("top eigenvector:", np.round(ev.psi, 6), "residual", f"{ev.residual:.1e}")

# amplitude ratios via continued fractions, exact at a rational lambda
lam = Fraction(5, 2)
Y = minor_sequence(model, lam)
for n in range(3):
    pair = ratio_continued_fraction(model, n, lam)
    print(f"R_{n}({lam}) = {pair.ratio}  (from minors: {model.betas[n] * Y[n] / Y[n + 1]})")
