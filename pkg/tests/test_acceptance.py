"""One test per acceptance criterion, each printing a single PASS/FAIL line."""

import math
import time

import numpy as np
import pytest

from gasbound.connective import delta_phi_upper, vk_monte_carlo, vk_quadrature_1d
from gasbound.constants import TemperednessConstants, temperedness_constants
from gasbound.oracle import (
    ActivityField,
    Region1D,
    check_contraction_bound,
    check_density_correspondence,
    check_log_z_identity,
    check_recursion_identity,
    check_self_map,
    partition_terms,
    tonks_reference,
    tonks_window_estimates,
    zero_free_scan,
)
from gasbound.potentials import ThermoState, hard_sphere, kac_exponential, square_well
from gasbound.threshold import analyticity_threshold, lambert_w0, m_max, solve_optimizer

T1 = ThermoState(1.0)
HR = hard_sphere(1, 1.0)
SW = square_well(1, 1.0, 1.5, math.log(2))
KAC = kac_exponential(1.0, 1.0, 1.0)
BOX = Region1D.interval(0.0, 1.5)


def test_criterion_01_constants(criterion):
    t0 = time.perf_counter()
    hr = temperedness_constants(HR, T1)
    hs = temperedness_constants(hard_sphere(3, 1.0), T1)
    sw = temperedness_constants(SW, T1)
    elapsed = time.perf_counter() - t0
    errs = [abs(hr.c_phi - 2), abs(hs.c_phi - 4 * math.pi / 3)]
    sw_err = max(abs(a - b) for a, b in zip((sw.c_phi, sw.a_phi, sw.p_phi, sw.c_hat_phi), (3, 1, 2, 2.5)))
    ok = errs[0] <= 1e-10 and errs[1] <= 1e-8 and sw_err <= 1e-8 and elapsed < 1.0
    criterion(1, "temperedness constants", ok,
              f"hard rod err {errs[0]:.1e}, 3D sphere err {errs[1]:.1e}, square well err {sw_err:.1e}, {elapsed:.2f}s")


def test_criterion_02_lambert_w(criterion):
    t0 = time.perf_counter()
    x = -1 / math.e + np.geomspace(1e-6, 1e6 + 1 / math.e, 10_000)
    w = lambert_w0(x)
    resid = np.abs(w * np.exp(w) - x) / np.maximum(np.abs(x), 1)
    we = abs(lambert_w0(math.e) - 1)
    elapsed = time.perf_counter() - t0
    ok = resid.max() <= 1e-12 and we <= 1e-14 and elapsed < 1.0
    criterion(2, "Lambert W round trip", ok, f"max scaled residual {resid.max():.1e}, |W(e)-1| {we:.1e}, {elapsed:.2f}s")


def _grid_best(k, delta, sol, n=400):
    lam = np.linspace(0, 2 * sol.lambda_tilde, n)
    z2 = np.linspace(0, 4 * sol.z_tilde_sq, n)
    best = 0.0
    for z in z2:
        ok = (lam * np.exp(k.a_phi * z) <= z) & (lam * m_max(k, z) * delta <= 1)
        if ok.any():
            best = max(best, lam[ok].max())
    return best, lam[1] - lam[0]


def test_criterion_03_optimizer_vs_grid(criterion):
    t0 = time.perf_counter()
    details, ok = [], True
    for a, delta in [(0.0, 2.0), (1.0, 3.0), (0.5, 2.5)]:
        k = TemperednessConstants(c_phi=2.0 + a, a_phi=a, p_phi=2.0, c_hat_phi=2.0 + a, beta=1.0)
        sol = solve_optimizer(k, delta)
        best, cell = _grid_best(k, delta, sol)
        ok &= best <= sol.lambda_tilde + cell
        details.append(f"A={a}: closed {sol.lambda_tilde:.6f} vs grid {best:.6f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5.0
    criterion(3, "optimizer beats or ties 400x400 grid", ok, "; ".join(details) + f", {elapsed:.2f}s")


def test_criterion_04_threshold_reduction(criterion):
    errs = []
    for delta in (0.5, 1.0, 2.0, 3.7):
        k = TemperednessConstants(c_phi=delta, a_phi=0.0, p_phi=delta, c_hat_phi=delta, beta=1.0)
        errs.append(abs(analyticity_threshold(k, delta, 0.0).new_threshold - math.e / delta))
    rep = analyticity_threshold(temperedness_constants(HR, T1), 2.0, 0.0)
    ratio_err = abs(rep.ratio_pr - math.e**2) / math.e**2
    ok = max(errs) == 0.0 and ratio_err <= 1e-10
    criterion(4, "repulsive threshold e/Delta and hard-rod ratio e^2", ok,
              f"max |new - e/Delta| {max(errs):.1e}, ratio rel err {ratio_err:.1e}")


def test_criterion_05_walk_integrals(criterion):
    t0 = time.perf_counter()
    lines, ok = [], True
    for p in (HR, SW, KAC):
        c = temperedness_constants(p, T1).c_phi
        m = vk_monte_carlo(p, T1, 1, 10**6, seed=42)
        rel_se = m.std_error / m.mean
        ok &= abs(m.mean - c) <= 3 * m.std_error + 1e-12 and rel_se < 0.01
        lines.append(f"{p.label} V1 {m.mean:.5f} vs {c:.5f}")
    q2 = vk_quadrature_1d(HR, T1, 2)
    q3 = vk_quadrature_1d(HR, T1, 3)
    ok &= abs(q2.mean - 4) <= 1e-6 and abs(q3.mean - 5) <= 1e-5
    for q in (q2, q3):
        m = vk_monte_carlo(HR, T1, q.k, 10**6, seed=42)
        ok &= abs(m.mean - q.mean) <= 3 * m.std_error
        lines.append(f"V{q.k} quad {q.mean:.8f} MC {m.mean:.4f}+-{m.std_error:.4f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    criterion(5, "walk integrals V_k", ok, "; ".join(lines) + f", {elapsed:.1f}s")


def test_criterion_06_strict_improvement(criterion):
    v3 = vk_quadrature_1d(HR, T1, 3).mean
    v2l = vk_quadrature_1d(HR, T1, 2, convention="leading").mean
    ok = v3 ** (1 / 3) < 2 and math.sqrt(v2l) < 2
    lines = [f"hard rod V3^(1/3) {v3 ** (1 / 3):.5f}, leading V2^(1/2) {math.sqrt(v2l):.5f}"]
    for beta in (0.25, 0.5, 1.0):
        t = ThermoState(beta)
        k = temperedness_constants(KAC, t)
        margins = {}
        for conv in ("trailing", "leading"):
            est = [vk_monte_carlo(KAC, t, j, 10**6, seed=42, convention=conv) for j in (1, 2, 3)]
            d = delta_phi_upper(est, k.a_phi)
            margins[conv] = (k.c_phi - d.delta_hat) / d.std_error
            lines.append(f"Kac beta={beta} {conv}: {d.delta_hat:.4f} vs C {k.c_phi:.4f}")
        ok &= max(margins.values()) > 3
    criterion(6, "strict improvement Delta < C_phi", ok, "; ".join(lines))


def test_criterion_07_identity_suite(criterion):
    t0 = time.perf_counter()
    worst = {"logz": 0.0, "recursion": 0.0, "k1": 0.0, "k2": 0.0}
    ok = True
    for p in (HR, SW):
        for lam in (0.05, 0.2, 0.1 + 0.05j):
            a = ActivityField(p, T1, lam, support=BOX)
            lz = check_log_z_identity(a, BOX, rel_tol=1e-6)
            rec = check_recursion_identity(a, BOX, 0.75, rel_tol=1e-6)
            c1 = check_density_correspondence(a, BOX, 1, 0.75, tol=1e-5)
            c2 = check_density_correspondence(a, BOX, 2, 0.75, tol=1e-3)
            ok &= lz.passed and rec.passed and c1.passed and c2.passed
            worst["logz"] = max(worst["logz"], lz.residual / lz.tolerance * 1e-6)
            worst["recursion"] = max(worst["recursion"], rec.residual / rec.tolerance * 1e-6)
            worst["k1"] = max(worst["k1"], c1.residual)
            worst["k2"] = max(worst["k2"], c2.residual)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120
    criterion(7, "log Z, recursion and tree correspondence identities", ok,
              f"max rel logz {worst['logz']:.1e}, rel recursion {worst['recursion']:.1e}, "
              f"k=1 {worst['k1']:.1e}, k=2 {worst['k2']:.1e}, {elapsed:.1f}s")


def test_criterion_08_self_map_and_contraction(criterion):
    lines, ok = [], True
    for p in (HR, SW):
        s = check_self_map(p, T1, BOX, trials=100, seed=42, slack=1e-10)
        c = check_contraction_bound(p, T1, BOX, k=1, trials=200, seed=42, slack=1e-10)
        ok &= s.passed and c.passed and c.details["violations"] == 0
        lines.append(f"{p.label}: self-map range [{s.details['min']:.3f}, {s.details['max']:.3f}] "
                     f"in [0, {s.details['z_tilde_sq']:.3f}], contraction violations {c.details['violations']}/200")
    criterion(8, "self-map and contraction bound", ok, "; ".join(lines))


def test_criterion_09_zero_freeness_probe(criterion):
    lam_star = math.e / 2
    coef = np.real_if_close(partition_terms(ActivityField(HR, T1, 1.0, support=BOX), BOX))
    exact = np.allclose(coef, [1.0, 1.5, 0.125], atol=1e-14)
    # 0.125 lam^2 + 1.5 lam + 1 = 0  <=>  lam = -6 +- sqrt(28)
    roots = [-6 + math.sqrt(28), -6 - math.sqrt(28)]
    analytic_outside = all(abs(r) >= lam_star for r in roots)
    scan = zero_free_scan(HR, T1, BOX, lam_star, n_angles=512, n_radii=32)
    ok = exact and analytic_outside and scan.zero_free and math.isfinite(scan.max_log_ratio)
    criterion(9, "zero-freeness of hard-rod Z in |lam| < e/2", ok,
              f"roots {roots[0]:.4f}, {roots[1]:.4f}; zeros inside {len(scan.zeros_inside)}; "
              f"min |Z| on grid {scan.min_abs_z:.2e}; max |log Z|/|Lambda| {scan.max_log_ratio:.3f}")


def test_criterion_10_tonks_cross_check(criterion):
    bp = tonks_reference(1.0, 0.5)
    rows = tonks_window_estimates(1.0, 0.5, [1.5, 2.5, 3.5])
    est = np.array([r[1] for r in rows])
    err = np.abs(est - bp) / bp
    bracket = all(lower <= bp <= upper for _, upper, lower in rows)
    ok = bracket and bool(np.all(np.diff(err) < 0)) and err[-1] < 0.5 and abs(bp - 0.351733711249196) < 1e-14
    criterion(10, "Tonks pressure from growing windows", ok,
              f"beta p {bp:.6f}; log Z/L {', '.join(f'{e:.5f}' for e in est)}; "
              f"rel errors {', '.join(f'{e:.3f}' for e in err)}")
