"""Cross-check battery: every production path against the dense oracle."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import evolution, gfactors, oracle, spectrum
from .model import LadderModel


class CheckResult(NamedTuple):
    name: str
    passed: bool
    deviation: float
    threshold: float

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name}: max_dev={self.deviation:.3e} threshold={self.threshold:.1e}"


def _check(name, dev, thr):
    return CheckResult(name, bool(dev <= thr), float(dev), float(thr))


def run_checks(model: LadderModel, tau: float, tol: float = 1e-12,
               max_bits: int | None = None) -> list[CheckResult]:
    out = []
    N = model.N
    max_l = 8
    mismatches = 0
    for k in range(N + 1):
        a = gfactors.g_recursive(model, k, max_l)
        b = gfactors.g_hessenberg(model, k, max_l)
        mismatches += a.rows != b.rows
        if N <= 12:
            mismatches += sum(g != gfactors.g_nested_sum(model, n, k, l) for (n, l), g in a.items())
    out.append(_check("gfactor evaluators agree exactly", mismatches, 0))

    P = evolution.propagator(model, tau, tol, max_bits)
    D = oracle.dense_propagator(model, tau)
    out.append(_check("propagator vs dense exponential", np.max(np.abs(P.entries - D)), 1e-9))
    out.append(_check("unitarity", P.unitarity_defect, 10 * (N + 1) * tol))

    if model.reducible:
        return out
    scale = math.sqrt(float(model.max_beta)) if N else 1.0
    lams = spectrum.eigenvalues(model, tol)
    dvals, dvecs = oracle.dense_spectrum(model)
    out.append(_check("eigenvalues vs dense (scaled)", np.max(np.abs(lams - dvals)) / scale, 1e-10))
    out.append(_check("spectrum symmetric under negation",
                      np.max(np.abs(lams + lams[::-1])) / scale, 1e-10))
    resid, vdev = 0.0, 0.0
    for j, lam in enumerate(lams):
        ev = spectrum.eigenvector(model, lam)
        resid = max(resid, ev.residual)
        vdev = max(vdev, np.max(np.abs(ev.psi - dvecs[:, j])))
    out.append(_check("eigenvector residual", resid, 1e-10))
    out.append(_check("eigenvectors vs dense", vdev, 1e-8))

    cp = spectrum.char_poly(model)
    if N <= 12:
        out.append(_check("char poly recursion vs nested sums",
                          int(cp != spectrum.char_poly_nested(model)), 0))
    coeffs = cp.scaled(model.max_beta) if N else [1.0]
    x = lams / scale
    vals = [abs(sum((-1) ** l * c * xi ** (N + 1 - 2 * l) for l, c in enumerate(coeffs)))
            for xi in x]
    norm = sum(abs(c) for c in coeffs) * max(1.0, float(np.max(np.abs(x)))) ** (N + 1)
    out.append(_check("char poly vanishes at eigenvalues", max(vals) / norm, 1e-10))
    if N <= 10:
        bad = 0
        for lam in (Fraction(0), Fraction(1), Fraction(-3, 2)):
            Y = spectrum.minor_sequence(model, lam)
            bad += sum(Y[n] != oracle.exact_char_det(model, lam, n) for n in range(N + 2))
        out.append(_check("minors vs Laplace determinants", bad, 0))
    return out
