"""One test per acceptance criterion; each prints a PASS/FAIL line with the measured value."""
import math
import time
from fractions import Fraction

import numpy as np

from bosonladder.evolution import gamma, propagator, propagator_element, scale_tau
from bosonladder.gfactors import expand_A_power, g_hessenberg, g_nested_sum, g_recursive
from bosonladder.model import make_custom, make_k_photon
from bosonladder.oracle import SURD_ZERO, dense_propagator, dense_spectrum, surd_mul, surd_power_apply
from bosonladder.spectrum import (char_poly, char_poly_nested, eigenvalues, minor_sequence,
                                  ratio_continued_fraction, spectral_decomposition)

from conftest import builtin_models, record_acceptance

# tolerances and time budgets, fixed up front
C2_TOL, C2_BUDGET = 1e-9, 120.0
C3_TOL, C3_BUDGET = 1e-12, 300.0
C4_TOL = 1e-12
C5_TOL, C5_BUDGET = 1e-10, 120.0
C6_REL = 1e-8
C7_RESID, C7_VEC, C7_RATIO = 1e-10, 1e-8, 1e-12
C8_RESID, C8_BUDGET = 1e-10, 30.0
C1_BUDGET = 60.0


def _scale(model):
    return math.sqrt(float(model.max_beta)) if model.N else 1.0


def test_c1_gfactor_triple_equivalence():
    t0 = time.perf_counter()
    mismatches = checked = 0
    for kk in (1, 2, 3):
        for N in range(13):
            model = make_k_photon(kk, N)
            for k in range(model.dim):
                a = g_recursive(model, k, 8)
                ok = a == g_hessenberg(model, k, 8)
                for (n, l), g in a.items():
                    checked += 1
                    if g != g_nested_sum(model, n, k, l):
                        ok = False
                mismatches += not ok
    dt = time.perf_counter() - t0
    passed = mismatches == 0 and dt <= C1_BUDGET
    record_acceptance(1, "g-factor triple equivalence", passed,
                      f"{checked} entries, {mismatches} mismatching tables, {dt:.1f}s <= {C1_BUDGET:.0f}s")
    assert passed


def test_c2_evolution_matches_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    for model in builtin_models(20):
        for t in (0.1, 0.5, 1.0):
            tau = scale_tau(model, t)
            P = propagator(model, tau)
            worst = max(worst, float(np.max(np.abs(P.entries - dense_propagator(model, tau)))))
    dt = time.perf_counter() - t0
    passed = worst <= C2_TOL and dt <= C2_BUDGET
    record_acceptance(2, "evolution vs dense oracle", passed,
                      f"max dev {worst:.2e} <= {C2_TOL:g}, {dt:.1f}s <= {C2_BUDGET:.0f}s")
    assert passed


def test_c3_unitarity():
    t0 = time.perf_counter()
    worst_ratio, worst_bits = 0.0, 0
    # the largest time in criterion 2 plus a long time that forces precision escalation
    for model in builtin_models(40, sparse=True):
        for t in (1.0, 8.0):
            P = propagator(model, scale_tau(model, t), C3_TOL)
            worst_ratio = max(worst_ratio, P.unitarity_defect / (10 * model.dim * C3_TOL))
            for k in (0, model.N):
                worst_bits = max(worst_bits, gamma(model, model.N, k, scale_tau(model, t),
                                                   C3_TOL).precision_bits)
    dt = time.perf_counter() - t0
    passed = worst_ratio <= 1 and dt <= C3_BUDGET
    record_acceptance(3, "unitarity", passed,
                      f"max defect / 10(N+1)tol = {worst_ratio:.3f}, up to {worst_bits} bits, "
                      f"{dt:.1f}s <= {C3_BUDGET:.0f}s")
    assert passed


def test_c4_closed_forms():
    two_level, kp = make_custom([1, 0]), make_k_photon(1, 2)
    worst = 0.0
    for tau in np.linspace(0, math.pi, 41):
        c, s = math.cos(tau), math.sin(tau)
        worst = max(worst,
                    abs(float(gamma(two_level, 0, 0, tau, C4_TOL / 4)) - c),
                    abs(propagator_element(two_level, 1, 0, tau, C4_TOL / 4).value - (-1j * s)),
                    abs(propagator_element(kp, 0, 0, tau, C4_TOL / 4).value - c * c),
                    abs(propagator_element(kp, 2, 0, tau, C4_TOL / 4).value - (-s * s)))
    passed = worst <= C4_TOL
    record_acceptance(4, "analytic closed forms", passed, f"max dev {worst:.2e} <= {C4_TOL:g}")
    assert passed


def test_c5_spectrum_equivalence():
    t0 = time.perf_counter()
    worst, sym_ok, zero_ok = 0.0, True, True
    for model in builtin_models(30):
        s = _scale(model)
        ev = eigenvalues(model)
        vals, _ = dense_spectrum(model)
        worst = max(worst, float(np.max(np.abs(ev - vals))) / s)
        sym_ok &= float(np.max(np.abs(ev + ev[::-1]))) / s <= C5_TOL
        zero_ok &= (float(np.min(np.abs(ev))) / s <= C5_TOL) == (model.N % 2 == 0)
    dt = time.perf_counter() - t0
    passed = worst <= C5_TOL and sym_ok and zero_ok and dt <= C5_BUDGET
    record_acceptance(5, "spectrum equivalence", passed,
                      f"max scaled dev {worst:.2e} <= {C5_TOL:g}, symmetric={sym_ok}, "
                      f"zero iff N even={zero_ok}, {dt:.1f}s <= {C5_BUDGET:.0f}s")
    assert passed


def test_c6_char_poly():
    exact_ok = all(char_poly(m) == char_poly_nested(m) for m in builtin_models(12))
    worst = 0.0
    for model in builtin_models(10):
        s = _scale(model)
        vals, _ = dense_spectrum(model)
        expanded = np.poly(vals / s)
        p = char_poly(model)
        coeffs = p.scaled(model.max_beta)
        big = max(abs(c) for c in coeffs)
        for l, c in enumerate(coeffs):
            ref = (-1) ** l * c
            worst = max(worst, abs(expanded[2 * l] - ref) / abs(ref))
        # odd powers vanish
        for i in range(1, len(expanded), 2):
            worst = max(worst, abs(expanded[i]) / big)
    passed = exact_ok and worst <= C6_REL
    record_acceptance(6, "characteristic polynomial", passed,
                      f"recursion == nested sums: {exact_ok}, max rel dev {worst:.2e} <= {C6_REL:g}")
    assert passed


def test_c7_eigenvectors_and_ratios():
    resid, vec = 0.0, 0.0
    for model in builtin_models(20):
        dec = spectral_decomposition(model)
        _, V = dense_spectrum(model)
        resid = max(resid, dec.residual)
        # both sides fix sign by psi_0 > 0
        vec = max(vec, float(np.max(np.abs(dec.amplitudes - V.T))))
    ratio = 0.0
    for model in builtin_models(20, sparse=True):
        if model.N == 0:
            continue
        s = _scale(model)
        for x in (Fraction(3, 7), Fraction(-5, 4), Fraction(21, 10)):
            lam = float(x) * s
            Y = minor_sequence(model, Fraction(lam))
            for n in range(model.N):
                if Y[n + 1] == 0:
                    continue
                exact = model.betas[n] * Y[n] / Y[n + 1]
                r = ratio_continued_fraction(model, n, lam).ratio
                ratio = max(ratio, abs(r - float(exact)) / abs(float(exact)))
    passed = resid <= C7_RESID and vec <= C7_VEC and ratio <= C7_RATIO
    record_acceptance(7, "eigenvector consistency", passed,
                      f"residual {resid:.2e} <= {C7_RESID:g}, vs dense {vec:.2e} <= {C7_VEC:g}, "
                      f"ratios {ratio:.2e} <= {C7_RATIO:g}")
    assert passed


def test_c8_stationary_via_cli(capsys):
    from bosonladder.cli import main
    t0 = time.perf_counter()
    code = main(["stationary", "--model", '{"family":"k_photon","params":{"k":2,"N":100}}'])
    out = capsys.readouterr().out
    dt = time.perf_counter() - t0
    lines = out.splitlines()
    resid = float(next(l for l in lines if l.startswith("# residual=")).split("=")[1])
    rows = [l.split(",") for l in lines if not l.startswith("#")][1:]
    sq = [float(r[3]) for r in rows]
    passed = (code == 0 and len(sq) == 51 and sq[0] == 1 and all(x > 0 for x in sq)
              and sq[1] < sq[0] and sq[49] < sq[50] and resid <= C8_RESID and dt <= C8_BUDGET)
    record_acceptance(8, "stationary state of k_photon(2,100)", passed,
                      f"psi_2^2={sq[1]:.4f}, psi_98^2={sq[49]:.4f} < psi_100^2={sq[50]:.4f}, "
                      f"min {min(sq):.2e}, residual {resid:.1e} <= {C8_RESID:g}, {dt:.1f}s")
    assert passed


def test_c9_expansion_vs_exact_power():
    checked = bad = 0
    for model in builtin_models(10):
        for k in range(model.dim):
            for m in range(13):
                coeffs = expand_A_power(model, m, k)
                lhs = [SURD_ZERO] * model.dim
                for j, c in coeffs.items():
                    lhs[j] = (c, frozenset(range(j)))
                rhs = [surd_mul((1, frozenset(range(k))), x, model.betas)
                       for x in surd_power_apply(model, m, k)]
                checked += 1
                bad += lhs != rhs
    passed = bad == 0
    record_acceptance(9, "operator-power expansion vs exact H^m", passed,
                      f"{checked} (model, k, m) cases, {bad} mismatches")
    assert passed
