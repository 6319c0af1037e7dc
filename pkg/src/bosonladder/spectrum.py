"""Energy spectrum of one invariant subspace.

Eigenvalues are roots of Y_{N+1}(lambda), where the principal minors
Y_n = det(lambda I_n - J_n) obey Y_{n+1} = lambda Y_n - beta_{n-1} Y_{n-1}.
The minors form a Sturm sequence: the number of positive ratios
Y_{n+1}/Y_n (n = 0..N) equals the number of eigenvalues below lambda, which
drives a bisection. The ratios are the minor sequence renormalised at every
step, so the count never overflows even though the minors themselves grow
like beta^(n/2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from numbers import Rational
from typing import NamedTuple

import mpmath
import numpy as np

from .model import LadderModel


class ReducibleModelError(ValueError):
    """Spectral operations need every interior beta to be positive."""


class NotAnEigenvalue(ValueError):
    pass


def _require_irreducible(model: LadderModel):
    if model.reducible:
        raise ReducibleModelError(
            "model has an interior zero beta; split it into blocks first")


def _mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def minor_sequence(model: LadderModel, lam) -> list:
    """[Y_0, ..., Y_{N+1}] at ``lam`` (exact when lam is an int or Fraction)."""
    _require_irreducible(model)
    if isinstance(lam, Rational) and not isinstance(lam, int):
        lam = Fraction(lam)
    Y = [1, lam]
    for n in range(1, model.N + 1):
        Y.append(lam * Y[n] - model.betas[n - 1] * Y[n - 1])
    return Y


# -- characteristic polynomial ---------------------------------------------


@dataclass(frozen=True)
class CharPolynomial:
    """Y_{N+1}(lambda) = sum_l (-1)^l coeffs[l] lambda^(degree - 2l)."""

    degree: int
    coeffs: tuple

    def monomial(self) -> list:
        """Dense coefficient list, highest power first (signs included)."""
        out = [0] * (self.degree + 1)
        for l, G in enumerate(self.coeffs):
            out[2 * l] = (-1) ** l * G
        return out

    def __call__(self, lam):
        return sum((-1) ** l * G * lam ** (self.degree - 2 * l)
                   for l, G in enumerate(self.coeffs))

    def scaled(self, scale) -> list:
        """Float coefficients G_l / scale^l, i.e. the polynomial in lambda/sqrt(scale)."""
        return [float(Fraction(G) / Fraction(scale) ** l) for l, G in enumerate(self.coeffs)]


def char_poly(model: LadderModel) -> CharPolynomial:
    """Coefficients G^{(l)}_N from G^{(l)}_n = G^{(l)}_{n-1} + beta_{n-1} G^{(l-1)}_{n-2}."""
    N = model.N
    lmax = (N + 1) // 2
    # G[n + 1][l] stores G^{(l)}_n for n = -1..N
    G = [[1] + [0] * lmax, [1] + [0] * lmax]
    for n in range(1, N + 1):
        row = [1] + [G[n][l] + model.betas[n - 1] * G[n - 1][l - 1] for l in range(1, lmax + 1)]
        G.append(row)
    return CharPolynomial(N + 1, tuple(G[N + 1]))


def char_poly_nested(model: LadderModel) -> CharPolynomial:
    """Same coefficients by direct nested sums with index gaps of at least 2."""
    N = model.N
    b = model.betas

    def nested(l, start):
        if l == 0:
            return 1
        return sum(b[s] * nested(l - 1, s + 2) for s in range(start, N))

    return CharPolynomial(N + 1, tuple(nested(l, 0) for l in range((N + 1) // 2 + 1)))


# -- eigenvalues ---------------------------------------------------------------


def _scaled_betas(model: LadderModel) -> np.ndarray:
    mb = Fraction(model.max_beta)
    return np.array([float(Fraction(b) / mb) for b in model.betas[:-1]])


def sturm_count(b: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Number of eigenvalues below each x for the Jacobi matrix with off-diagonal sqrt(b)."""
    x = np.asarray(x, dtype=float)
    tiny = np.finfo(float).tiny
    q = x.copy()
    q[q == 0] = -tiny
    cnt = (q > 0).astype(int)
    # bn / -tiny may overflow to inf; the sign is still right
    with np.errstate(over="ignore"):
        for bn in b:
            q = x - bn / q
            q[q == 0] = -tiny
            cnt += q > 0
    return cnt


def eigenvalues(model: LadderModel, tol: float = 1e-12) -> np.ndarray:
    """All N+1 eigenvalues, ascending, by Sturm-count bisection.

    Each root is bracketed to width <= tol, and never coarser than a few ulps
    of the (scaled) matrix norm, where Sturm counting stops being informative.
    """
    _require_irreducible(model)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if model.N == 0:
        return np.zeros(1)
    scale = math.sqrt(float(model.max_beta))
    b = _scaled_betas(model)
    bound = 1.0 / scale + 2.0  # Gershgorin bound on the scaled matrix, padded
    dim = model.dim
    idx = np.arange(dim)
    lo = np.full(dim, -bound)
    hi = np.full(dim, bound)
    if sturm_count(b, lo).any() or (sturm_count(b, hi) != dim).any():
        raise ArithmeticError("Gershgorin bracket failed")
    stol = min(tol / scale, 16 * np.finfo(float).eps)
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        active = (hi - lo > stol) & (mid > lo) & (mid < hi)
        if not active.any():
            break
        below = sturm_count(b, mid) > idx
        hi = np.where(active & below, mid, hi)
        lo = np.where(active & ~below, mid, lo)
    return 0.5 * (lo + hi) * scale


# -- eigenvectors --------------------------------------------------------------


class Eigenvector(NamedTuple):
    psi: np.ndarray
    residual: float
    eigenvalue: float


def _refine(model: LadderModel, x0, bits: int, steps: int = 30):
    """Newton iteration on the scaled Y_{N+1}; returns the refined scaled root."""
    mb = Fraction(model.max_beta)
    with mpmath.workprec(bits):
        b = [_mpf(Fraction(v) / mb) for v in model.betas[:-1]]
        x = mpmath.mpf(x0)
        for _ in range(steps):
            y0, y1, d0, d1 = mpmath.mpf(1), x, mpmath.mpf(0), mpmath.mpf(1)
            for bn in b:
                y0, y1, d0, d1 = y1, x * y1 - bn * y0, d1, y1 + x * d1 - bn * d0
            if d1 == 0:
                break
            dx = y1 / d1
            x -= dx
            if abs(dx) <= mpmath.mpf(2) ** (8 - bits) * (1 + abs(x)):
                break
        return x


def _residual(b: np.ndarray, x: float, psi: np.ndarray) -> float:
    """max_n |x psi_n - sqrt(b_{n-1}) psi_{n-1} - sqrt(b_n) psi_{n+1}| (scaled units)."""
    s = np.sqrt(b)
    r = x * psi
    r[1:] -= s * psi[:-1]
    r[:-1] -= s * psi[1:]
    return float(np.max(np.abs(r)))


def eigenvector(model: LadderModel, lam: float, normalize: str = "unit",
                atol: float = 1e-8) -> Eigenvector:
    """Amplitudes psi_n = (prod_{s<n} beta_s)^(-1/2) Y_n(lambda), psi_0 = 1.

    ``lam`` is first polished by Newton's method on Y_{N+1} in extended precision;
    a shift larger than ``atol`` (in units of sqrt(max beta)) means ``lam`` was
    not an eigenvalue. ``normalize='unit'`` returns a unit vector with psi_0 > 0,
    ``'psi0'`` keeps psi_0 = 1. The residual is measured at the given ``lam``
    in units of sqrt(max beta).
    """
    _require_irreducible(model)
    if normalize not in ("unit", "psi0"):
        raise ValueError("normalize must be 'unit' or 'psi0'")
    if model.N == 0:
        if abs(lam) > atol:
            raise NotAnEigenvalue(f"{lam} is not an eigenvalue")
        return Eigenvector(np.ones(1), abs(float(lam)), 0.0)
    mb = Fraction(model.max_beta)
    scale = math.sqrt(float(mb))
    x0 = float(lam) / scale
    bits = 128 + 8 * model.N
    x = _refine(model, x0, bits)
    if abs(float(x) - x0) > atol:
        raise NotAnEigenvalue(f"{lam} is not an eigenvalue (nearest root {float(x) * scale})")
    with mpmath.workprec(bits):
        b = [_mpf(Fraction(v) / mb) for v in model.betas[:-1]]
        y_prev, y = mpmath.mpf(0), mpmath.mpf(1)
        P = mpmath.mpf(1)
        psi = [mpmath.mpf(1)]
        for n in range(1, model.dim):
            bm1 = b[n - 1]
            y_prev, y = y, x * y - (b[n - 2] if n >= 2 else 0) * y_prev
            P *= bm1
            psi.append(y / mpmath.sqrt(P))
        if normalize == "unit":
            nrm = mpmath.sqrt(mpmath.fsum(p * p for p in psi))
            psi = [p / nrm for p in psi]
        out = np.array([float(p) for p in psi])
    bf = _scaled_betas(model)
    unit = out / np.linalg.norm(out)
    return Eigenvector(out, _residual(bf, x0, unit), float(x) * scale)


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    amplitudes: np.ndarray  # row j: normalised eigenvector of eigenvalue j
    residual: float


def spectral_decomposition(model: LadderModel, tol: float = 1e-12) -> SpectralDecomposition:
    lams = eigenvalues(model, tol)
    vecs = [eigenvector(model, lam) for lam in lams]
    return SpectralDecomposition(
        lams, np.array([v.psi for v in vecs]), max(v.residual for v in vecs))


# -- continued fractions -------------------------------------------------------


@dataclass(frozen=True)
class ProjectivePair:
    """Result of a Moebius-matrix product applied to (0, 1)^T.

    upward:   R_n = -p / q         (left continued fraction)
    downward: beta_n / R_n = -p / q (right continued fraction)
    """

    p: object
    q: object
    direction: str
    beta_n: object

    @property
    def ratio(self):
        """R_n = sqrt(beta_n) psi_n / psi_{n+1}; ``inf`` at a pole."""
        if self.direction == "upward":
            return -self.p / self.q if self.q != 0 else math.inf
        return -self.beta_n * self.q / self.p if self.p != 0 else math.inf


def _mobius_chain(betas, lam, indices, exact):
    p, q = (0, 1) if exact else (0.0, 1.0)
    for s in indices:
        p, q = -betas[s] * q, p + lam * q
        if not exact:
            m = max(abs(p), abs(q))
            if m > 0:
                p, q = p / m, q / m
    return p, q


def ratio_continued_fraction(model: LadderModel, n: int, lam,
                             direction: str = "upward") -> ProjectivePair:
    """Evaluate R_n projectively via products of the matrices [[0, -beta_s], [1, lam]].

    ``upward`` multiplies M_n ... M_0, ``downward`` M_n ... M_{N-1}. Exact for
    rational ``lam``; for floats the pair is renormalised after every step,
    which does not change the projective point.
    """
    if not 0 <= n <= model.N - 1:
        raise IndexError(f"n={n} outside 0..{model.N - 1}")
    exact = isinstance(lam, Rational)
    if exact and not isinstance(lam, int):
        lam = Fraction(lam)
    betas = model.betas if exact else [float(b) for b in model.betas]
    # matrices act right-to-left, so the innermost index is applied first
    if direction == "upward":
        order = range(0, n + 1)
    elif direction == "downward":
        order = range(model.N - 1, n - 1, -1)
    else:
        raise ValueError("direction must be 'upward' or 'downward'")
    p, q = _mobius_chain(betas, lam, order, exact)
    return ProjectivePair(p, q, direction, model.betas[n])


def characteristic_value(model: LadderModel, lam, direction: str = "upward"):
    """p + lam q for the outermost pair; vanishes exactly at the eigenvalues.

    Upward uses R_{N-1} = lam, downward beta_0 / R_0 = lam.
    """
    if model.N == 0:
        return lam
    n = model.N - 1 if direction == "upward" else 0
    pair = ratio_continued_fraction(model, n, lam, direction)
    return pair.p + lam * pair.q


# -- stationary (zero-energy) state --------------------------------------------


class StationaryState(NamedTuple):
    psi: np.ndarray
    squares: tuple  # exact psi_{2p}^2 with psi_0 = 1, p = 0..N/2
    residual: float


def stationary_squares(model: LadderModel) -> tuple:
    """Exact psi_{2p}^2 = prod_{s<p} beta_{2s} / prod_{s<p} beta_{2s+1} (psi_0 = 1)."""
    _require_irreducible(model)
    if model.N % 2:
        raise ValueError("odd N: no zero eigenvalue")
    out = [Fraction(1)]
    for p in range(1, model.N // 2 + 1):
        out.append(out[-1] * Fraction(model.betas[2 * p - 2]) / Fraction(model.betas[2 * p - 1]))
    return tuple(out)


def _falling(x: Fraction, p: int) -> Fraction:
    return prod((x - i for i in range(p)), start=Fraction(1))


def k_photon_stationary_squares(k: int, N: int) -> tuple:
    """Closed form for k-photon down-conversion (N = 2M):
    psi_{2p}^2 = (M)_p / (M - 1/2)_p * prod_{s=1}^p ((2s-1)k)!^2 / (((2s-2)k)! (2sk)!).
    """
    if N % 2:
        raise ValueError("odd N: no zero eigenvalue")
    M = N // 2
    out = []
    for p in range(M + 1):
        v = _falling(Fraction(M), p) / _falling(Fraction(2 * M - 1, 2), p)
        for s in range(1, p + 1):
            v *= Fraction(factorial((2 * s - 1) * k) ** 2,
                          factorial((2 * s - 2) * k) * factorial(2 * s * k))
        out.append(v)
    return tuple(out)


def _double_factorial(n: int) -> int:
    return prod(range(n, 0, -2)) if n > 0 else 1


def three_mode_stationary_squares(N: int) -> tuple:
    """Closed form for beta_n = (N - n)(n + 1)^2:
    psi_{2p}^2 = (M)_p / (M - 1/2)_p * ((2p-1)!! / (2p)!!)^2.
    """
    if N % 2:
        raise ValueError("odd N: no zero eigenvalue")
    M = N // 2
    return tuple(
        _falling(Fraction(M), p) / _falling(Fraction(2 * M - 1, 2), p)
        * Fraction(_double_factorial(2 * p - 1), _double_factorial(2 * p)) ** 2
        for p in range(M + 1))


def stationary_residual(model: LadderModel, squares, dps: int = 60) -> float:
    """max |J psi| for the unit-normalised stationary state, evaluated at ``dps`` digits."""
    with mpmath.workdps(dps):
        amps = []
        for p, sq in enumerate(squares):
            a = mpmath.sqrt(_mpf(Fraction(sq)))
            amps.append(-a if p % 2 else a)
        nrm = mpmath.sqrt(mpmath.fsum(_mpf(Fraction(s)) for s in squares))
        psi = [mpmath.mpf(0)] * model.dim
        for p, a in enumerate(amps):
            psi[2 * p] = a / nrm
        sb = [mpmath.sqrt(_mpf(Fraction(b))) for b in model.betas]
        worst = mpmath.mpf(0)
        for n in range(model.dim):
            r = (sb[n - 1] * psi[n - 1] if n else 0) + (sb[n] * psi[n + 1] if n < model.N else 0)
            worst = max(worst, abs(r))
        return float(worst)


def stationary_state(model: LadderModel, normalize: str = "unit") -> StationaryState:
    """Zero-energy eigenstate (N even): psi_{2p+1} = 0, psi_{2p} = (-1)^p sqrt(squares[p]).

    For the k_photon and three_mode families the closed forms are evaluated as
    well and must agree exactly with the general product form.
    """
    if normalize not in ("unit", "psi0"):
        raise ValueError("normalize must be 'unit' or 'psi0'")
    sq = stationary_squares(model)
    params = dict(model.params)
    if model.family == "k_photon":
        closed = k_photon_stationary_squares(params["k"], params["N"])
    elif model.family == "three_mode":
        closed = three_mode_stationary_squares(params["N"])
    else:
        closed = sq
    if closed != sq:
        raise ArithmeticError("closed-form stationary amplitudes disagree with product form")
    with mpmath.workdps(40):
        total = mpmath.fsum(_mpf(s) for s in sq) if normalize == "unit" else mpmath.mpf(1)
        psi = np.zeros(model.dim)
        for p, s in enumerate(sq):
            psi[2 * p] = (-1) ** p * float(mpmath.sqrt(_mpf(s) / total))
    return StationaryState(psi, sq, stationary_residual(model, sq))
