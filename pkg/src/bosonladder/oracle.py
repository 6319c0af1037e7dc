"""Brute-force reference computations.

Everything here works on the dense Jacobi matrix (zero diagonal, off-diagonal
sqrt(beta_n)) and shares no code with the series / recurrence modules:

* an in-repo implicit-shift QL eigensolver (float or mpmath),
* the propagator V exp(-i tau Lambda) V^T,
* exact arithmetic with formal square roots for matrix powers and for a naive
  Laplace-expansion determinant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .model import LadderModel

MAX_DET_SIZE = 14


@dataclass(frozen=True)
class DenseHamiltonian:
    size: int
    matrix: np.ndarray
    offdiag: tuple


def dense_hamiltonian(model: LadderModel) -> DenseHamiltonian:
    off = tuple(math.sqrt(float(b)) for b in model.betas[:-1])
    H = np.zeros((model.dim, model.dim))
    for i, x in enumerate(off):
        H[i, i + 1] = H[i + 1, i] = x
    return DenseHamiltonian(model.dim, H, off)


class _FloatOps:
    eps = np.finfo(float).eps
    sqrt = staticmethod(math.sqrt)
    hypot = staticmethod(math.hypot)
    zero, one = 0.0, 1.0

    @staticmethod
    def copysign(a, b):
        return math.copysign(a, b)


class _MpOps:
    def __init__(self):
        self.eps = mpmath.mpf(2) ** (-mpmath.mp.prec)
        self.sqrt = mpmath.sqrt
        self.hypot = mpmath.hypot
        self.zero, self.one = mpmath.mpf(0), mpmath.mpf(1)

    @staticmethod
    def copysign(a, b):
        return abs(a) if b >= 0 else -abs(a)


def tql_eigen(diag, sub, ops=_FloatOps, max_iter=60):
    """Symmetric tridiagonal eigenproblem by the implicit-shift QL method.

    ``sub[i]`` couples rows i and i+1. Returns (eigenvalues, Z) with Z[:, j] the
    eigenvector for eigenvalue j, both unsorted, as nested lists.
    """
    n = len(diag)
    d = list(diag)
    e = list(sub) + [ops.zero]
    z = [[ops.one if i == j else ops.zero for j in range(n)] for i in range(n)]
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= ops.eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise RuntimeError("QL iteration did not converge")
            g = (d[l + 1] - d[l]) / (2 * e[l])
            r = ops.hypot(g, ops.one)
            g = d[m] - d[l] + e[l] / (g + ops.copysign(r, g))
            s = c = ops.one
            p = ops.zero
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = ops.hypot(f, g)
                e[i + 1] = r
                if r == 0:
                    d[i + 1] -= p
                    e[m] = ops.zero
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for row in z:
                    f = row[i + 1]
                    row[i + 1] = s * row[i] + c * f
                    row[i] = c * row[i] - s * f
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = ops.zero
    return d, z


def dense_spectrum(model: LadderModel, dps: int | None = None):
    """Sorted eigenvalues and orthonormal eigenvectors (columns) of the Jacobi matrix.

    With ``dps`` the same QL sweep runs in mpmath at that many decimal digits and
    mpmath matrices are returned.
    """
    if dps is None:
        off = dense_hamiltonian(model).offdiag
        vals, Z = tql_eigen([0.0] * model.dim, off)
        vals = np.array(vals)
        Z = np.array(Z)
        order = np.argsort(vals)
        vecs = Z[:, order]
        # deterministic sign: first component positive
        signs = np.where(vecs[0] < 0, -1.0, 1.0)
        return vals[order], vecs * signs
    with mpmath.workdps(dps):
        ops = _MpOps()
        off = [mpmath.sqrt(mpmath.mpf(b.numerator) / b.denominator)
               if isinstance(b, Fraction) else mpmath.sqrt(b) for b in model.betas[:-1]]
        vals, Z = tql_eigen([ops.zero] * model.dim, off, ops)
        order = sorted(range(model.dim), key=lambda j: vals[j])
        V = mpmath.matrix(model.dim, model.dim)
        for c, j in enumerate(order):
            sgn = -1 if Z[0][j] < 0 else 1
            for i in range(model.dim):
                V[i, c] = sgn * Z[i][j]
        return [vals[j] for j in order], V


def dense_propagator(model: LadderModel, tau: float) -> np.ndarray:
    """U = V exp(-i tau Lambda) V^T from the dense eigendecomposition."""
    vals, V = dense_spectrum(model)
    return (V * np.exp(-1j * tau * vals)) @ V.T


# -- exact arithmetic with formal radicals ------------------------------------
#
# A value is (coef, mask): coef * prod_{s in mask} sqrt(beta_s), with coef
# rational and mask a frozenset of edge indices. Products fold repeated edges
# into the rational coefficient, so the representation stays canonical.


def surd_mul(x, y, betas):
    cx, mx = x
    cy, my = y
    c = cx * cy
    for s in mx & my:
        c *= betas[s]
    return (c, mx ^ my) if c else (0, frozenset())


def surd_add(x, y):
    cx, mx = x
    cy, my = y
    if cx == 0:
        return y
    if cy == 0:
        return x
    if mx != my:
        raise ArithmeticError("incompatible radicals in sum")
    c = cx + cy
    return (c, mx) if c else (0, frozenset())


SURD_ZERO = (0, frozenset())


def surd_hamiltonian(model: LadderModel) -> list:
    """Jacobi matrix with entries sqrt(beta_s) kept symbolic."""
    n = model.dim
    H = [[SURD_ZERO] * n for _ in range(n)]
    for s in range(n - 1):
        if model.betas[s]:
            H[s][s + 1] = H[s + 1][s] = (1, frozenset([s]))
    return H


def surd_power_apply(model: LadderModel, m: int, k: int) -> list:
    """H^m e_k in exact formal-radical arithmetic (dense matrix-vector products)."""
    H = surd_hamiltonian(model)
    v = [SURD_ZERO] * model.dim
    v[k] = (1, frozenset())
    for _ in range(m):
        w = []
        for row in H:
            acc = SURD_ZERO
            for h, x in zip(row, v):
                if h[0] and x[0]:
                    acc = surd_add(acc, surd_mul(h, x, model.betas))
            w.append(acc)
        v = w
    return v


def _laplace_det(M, betas):
    """Cofactor expansion along the first row, skipping zero entries."""
    n = len(M)
    if n == 0:
        return (1, frozenset())
    total = SURD_ZERO
    for j, a in enumerate(M[0]):
        if a[0] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = surd_mul(a, _laplace_det(minor, betas), betas)
        if j % 2:
            term = (-term[0], term[1])
        total = surd_add(total, term)
    return total


def exact_char_det(model: LadderModel, lam, n: int | None = None):
    """det(lam I_n - J_n) for the leading n x n block, exactly (naive Laplace).

    ``n`` defaults to N+1 (the full characteristic determinant).
    """
    if n is None:
        n = model.dim
    if n > MAX_DET_SIZE + 1 or model.N > MAX_DET_SIZE:
        raise ValueError(f"exact determinant limited to N <= {MAX_DET_SIZE}")
    lam = Fraction(lam)
    H = surd_hamiltonian(model)
    M = [[(lam if i == j else 0, frozenset()) if i == j else
          ((-H[i][j][0], H[i][j][1]) if H[i][j][0] else SURD_ZERO)
          for j in range(n)] for i in range(n)]
    coef, mask = _laplace_det(M, model.betas)
    if mask:
        raise ArithmeticError("determinant left an unpaired radical")
    return Fraction(coef)
