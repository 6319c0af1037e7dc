"""Time evolution from the exact g-factor power series.

gamma_{n,k}(tau) = sum_{l >= l0} (-1)^l tau^(n-k+2l) / (n-k+2l)! * g^{(l)}_{n,k},
l0 = max(k-n, 0). Since g^{(l)} <= S^l with S = sum(beta), the term magnitudes
are bounded by b_l = |tau|^p S^l / p! (p = n-k+2l), which gives both a stopping
rule (geometric tail once the bound ratio drops below 1/2) and the magnitude
used to size the working precision. The series alternates with terms far
larger than the result, so it is summed in mpmath at
log2(max b_l / tol) + 64 bits, doubling on demand up to a ceiling.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import NamedTuple

import mpmath
import numpy as np

from .gfactors import cached_rows
from .model import LadderModel, make_custom

GUARD_BITS = 64
MIN_BITS = 64
DEFAULT_MAX_BITS = int(os.environ.get("BOSONLADDER_MAX_PRECISION_BITS", "16384"))
_DOUBLE_ULP = 2.0 ** -52


class ToleranceUnreachable(ArithmeticError):
    """Requested tolerance cannot be certified within the precision ceiling."""

    def __init__(self, msg, achieved_bound):
        super().__init__(f"{msg} (achieved bound {achieved_bound:.3e})")
        self.achieved_bound = achieved_bound


@dataclass(frozen=True)
class AmplitudeResult:
    """gamma_{n,k}(tau) as an mpmath number with a certified absolute error bound."""

    value: mpmath.mpf
    abs_error_bound: float
    terms_used: int
    precision_bits: int

    def __float__(self):
        return float(self.value)


class ElementResult(NamedTuple):
    value: complex
    abs_error_bound: float


@dataclass(frozen=True)
class PropagatorMatrix:
    tau: float
    entries: np.ndarray
    max_abs_error: float

    @property
    def unitarity_defect(self) -> float:
        U = self.entries
        return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def scale_tau(model: LadderModel, t: float) -> float:
    """Convert a time in units of 1/sqrt(max beta) to the raw dimensionless tau."""
    mb = model.max_beta
    return float(t) / math.sqrt(float(mb)) if mb else float(t)


def _check_index(model, name, i):
    if not 0 <= i <= model.N:
        raise IndexError(f"{name}={i} outside 0..{model.N}")


def _log2(x) -> float:
    return float(mpmath.log(x, 2))


def _plan(S, tau: float, n: int, k: int, tol: float):
    """Choose the last order L and return (l0, L, tail_bound, log2_max_bound).

    Bounds are evaluated in log2 so they cannot overflow.
    """
    l0 = max(k - n, 0)
    d = n - k
    at = abs(tau)
    if S == 0:
        # only l = 0 survives (g^{(l)} = 0 for l >= 1)
        p = d
        lb = p * math.log2(at) - _log2(mpmath.factorial(p)) if p > 0 else 0.0
        return l0, l0, 0.0, lb
    with mpmath.workprec(80):
        lS = _log2(mpmath.mpf(S.numerator) / S.denominator) if isinstance(S, Fraction) else _log2(S)
        lt = math.log2(at)
        s_tau2 = mpmath.mpf(2) ** (lS + 2 * lt)

        def log_b(l):
            p = d + 2 * l
            return p * lt + l * lS - _log2(mpmath.factorial(p))

        def ratio(l):
            p = d + 2 * l
            return s_tau2 / ((p + 1) * (p + 2))

        log_tol = math.log2(tol)
        lmax = log_b(l0)
        l = l0
        while True:
            nxt = log_b(l + 1)
            r = ratio(l + 1)
            if r <= 0.5 and nxt + 1 <= log_tol:
                tail = float(mpmath.mpf(2) ** nxt / (1 - r))
                return l0, l, tail * (1 + 1e-12), lmax
            lmax = max(lmax, nxt)
            l += 1


def _sum_series(rows, n, k, tau, l0, L, bits):
    """Sum the truncated series at ``bits`` of precision."""
    d = n - k
    with mpmath.workprec(bits):
        t = mpmath.mpf(tau)
        t2 = t * t
        p = d + 2 * l0
        c = t ** p / mpmath.factorial(p)
        total = mpmath.mpf(0)
        for l in range(l0, L + 1):
            g = rows[l][n]
            if g:
                gm = mpmath.mpf(g) if not isinstance(g, Fraction) else \
                    mpmath.mpf(g.numerator) / g.denominator
                term = gm * c
                total = total - term if l % 2 else total + term
            c = c * t2 / ((p + 1) * (p + 2))
            p += 2
        return +total


def gamma(model: LadderModel, n: int, k: int, tau: float, tol: float = 1e-12,
          max_bits: int | None = None) -> AmplitudeResult:
    """Expansion coefficient gamma_{n,k}(tau) with certified absolute error <= tol."""
    _check_index(model, "n", n)
    _check_index(model, "k", k)
    if not tol > 0:
        raise ValueError("tol must be positive")
    max_bits = max_bits or DEFAULT_MAX_BITS
    tau = float(tau)
    if tau == 0.0:
        return AmplitudeResult(mpmath.mpf(int(n == k)), 0.0, 1, MIN_BITS)
    S = sum(model.betas)
    l0, L, tail, lmax = _plan(S, tau, n, k, tol / 2)
    rows = cached_rows(model, k, L)
    n_terms = L - l0 + 1
    p_last = n - k + 2 * L
    # relative rounding per term <= (2p + 3l + 8) u, summation adds n_terms u
    factor = math.log2(n_terms * (2 * p_last + 4 * n_terms + 10))
    bits = max(MIN_BITS, math.ceil(lmax - math.log2(tol)) + GUARD_BITS)
    while True:
        use = min(bits, max_bits)
        rounding = 2.0 ** (lmax + factor + 1 - use)
        if rounding <= tol / 2 or use == max_bits:
            break
        bits *= 2
    total_bound = tail + rounding
    if total_bound > tol:
        raise ToleranceUnreachable(
            f"gamma_{n},{k} at tau={tau} needs more than {max_bits} bits", total_bound)
    value = _sum_series(rows, n, k, tau, l0, L, use)
    return AmplitudeResult(value, total_bound, n_terms, use)


def gamma_coefficients(model: LadderModel, n: int, k: int, max_l: int) -> list:
    """Exact nonzero series coefficients [(power, coefficient)] up to order max_l.

    The coefficient of tau^p is (-1)^l g^{(l)}_{n,k} / p!; orders with p < 0 are
    skipped since the g-factor vanishes there.
    """
    _check_index(model, "n", n)
    _check_index(model, "k", k)
    rows = cached_rows(model, k, max_l)
    out = []
    for l in range(max_l + 1):
        p = n - k + 2 * l
        g = rows[l][n]
        if p < 0:
            assert g == 0
            continue
        if g:
            out.append((p, Fraction((-1) ** l * g, factorial(p))))
    return out


def _blocks(model: LadderModel) -> list:
    """Index ranges [a, b] of the irreducible blocks (split at interior zero betas)."""
    out, start = [], 0
    for i, b in enumerate(model.betas):
        if b == 0:
            out.append((start, i))
            start = i + 1
    return out


def _block_model(model, a, b):
    return make_custom(model.betas[a:b + 1])


_PHASE = (1, -1j, -1, 1j)


def propagator_element(model: LadderModel, n: int, k: int, tau: float, tol: float = 1e-12,
                       max_bits: int | None = None) -> ElementResult:
    """<Psi_n| exp(-i tau H) |Psi_k> with certified absolute error.

    Reducible models are handled block by block: states in different blocks do
    not couple.
    """
    _check_index(model, "n", n)
    _check_index(model, "k", k)
    if model.reducible:
        for a, b in _blocks(model):
            if a <= n <= b or a <= k <= b:
                if not (a <= n <= b and a <= k <= b):
                    return ElementResult(0j, 0.0)
                return propagator_element(_block_model(model, a, b), n - a, k - a,
                                          tau, tol, max_bits)
    lo, hi = min(n, k), max(n, k)
    ratio = math.prod(model.betas[lo:hi])  # prod_{s=lo}^{hi-1} beta_s, exact
    with mpmath.workprec(96):
        sq = mpmath.sqrt(mpmath.mpf(Fraction(ratio).numerator) / Fraction(ratio).denominator)
        pref_est = sq if n >= k else 1 / sq
        pref_f = float(pref_est * (1 + mpmath.mpf(2) ** -80))
    g_tol = tol / 2 / pref_f if pref_f > 0 else tol
    res = gamma(model, n, k, tau, g_tol, max_bits)
    with mpmath.workprec(res.precision_bits):
        fr = Fraction(ratio)
        sq = mpmath.sqrt(mpmath.mpf(fr.numerator) / fr.denominator)
        val = res.value * sq if n >= k else res.value / sq
        v = float(val)
    err = pref_f * res.abs_error_bound + abs(v) * 2 * _DOUBLE_ULP + 1e-300
    if err > tol:
        raise ToleranceUnreachable(f"entry ({n},{k}) below double resolution", err)
    return ElementResult(_PHASE[(n - k) % 4] * v, err)


def propagator(model: LadderModel, tau: float, tol: float = 1e-12,
               max_bits: int | None = None) -> PropagatorMatrix:
    """Full (N+1) x (N+1) matrix of <Psi_n|U(tau)|Psi_k>."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    d = model.dim
    U = np.zeros((d, d), dtype=complex)
    worst = 0.0
    for k in range(d):
        for n in range(d):
            val, err = propagator_element(model, n, k, tau, tol, max_bits)
            U[n, k] = val
            worst = max(worst, err)
    return PropagatorMatrix(float(tau), U, worst)


def evolve_state(model: LadderModel, amplitudes, tau: float, tol: float = 1e-12,
                 max_bits: int | None = None) -> np.ndarray:
    """U(tau) applied to a vector of basis amplitudes."""
    a = np.asarray(amplitudes, dtype=complex)
    if a.shape != (model.dim,):
        raise ValueError(f"expected {model.dim} amplitudes, got shape {a.shape}")
    return propagator(model, tau, tol, max_bits).entries @ a


def gamma_derivative_check(model: LadderModel, n: int, k: int, tau: float,
                           h: float = 1e-4) -> float:
    """Residual of d gamma_n / d tau = gamma_{n-1} - beta_n gamma_{n+1}.

    The derivative is a central difference of step h; gamma values come from the
    series at a tolerance far below the O(h^2) difference error.
    """
    _check_index(model, "n", n)
    _check_index(model, "k", k)
    tol = 1e-24

    def g(i, t):
        if not 0 <= i <= model.N:
            return mpmath.mpf(0)
        return gamma(model, i, k, t, tol).value

    with mpmath.workprec(128):
        fd = (g(n, tau + h) - g(n, tau - h)) / (2 * mpmath.mpf(h))
        rhs = g(n - 1, tau) - model.beta(n) * g(n + 1, tau)
        return float(abs(fd - rhs))
