"""Two-sided numerical checks of the density identities on small 1D systems.

Every check evaluates both sides independently with the exact partition
function oracle and reports the residual against a tolerance.
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from ..connective import classify_sequence, gamma_c_eval, vk_quadrature_1d
from ..constants import tail_cutoff, temperedness_constants
from ..potentials import PairPotential, ThermoState, mayer
from ..threshold import m_max, solve_optimizer
from .activity import ActivityField, chain_modulation, step_modulation
from .partition import (
    OracleConfig,
    ZeroFreenessViolation,
    one_point_density,
    partition_function,
    partition_terms,
)
from .region import Region1D

logger = logging.getLogger(__name__)

__all__ = [
    "CheckResult",
    "check_log_z_identity",
    "check_recursion_identity",
    "tree_recursion_eval",
    "density_boundary_condition",
    "check_density_correspondence",
    "check_modulation_bound",
    "check_self_map",
    "check_contraction_bound",
    "ZeroScanReport",
    "zero_free_scan",
    "neighbourhood_scan",
    "tonks_window_estimates",
]


@dataclass(frozen=True)
class CheckResult:
    check: str
    residual: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"check": self.check, "residual": self.residual,
                "tolerance": self.tolerance, "pass": self.passed, **self.details}


def _quad_complex(f, a, b, points, cfg: OracleConfig):
    """Adaptive integral of a complex function over ``[a, b]`` split at ``points``."""
    edges = [a, *sorted(x for x in set(points) if a < x < b), b]
    total, err = 0j, 0.0
    for lo, hi in zip(edges, edges[1:]):
        if hi - lo <= 1e-14:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, e = integrate.quad(f, lo, hi, complex_func=True, epsabs=cfg.outer_tol,
                                    epsrel=cfg.outer_tol, limit=cfg.outer_limit)
        total += val
        err += abs(e[0]) + abs(e[1]) if isinstance(e, tuple) else abs(e)
    return total, err


def _gauss_nodes(edges, nodes, max_panel):
    x, w = np.polynomial.legendre.leggauss(nodes)
    xs, ws = [], []
    for a, b in zip(edges, edges[1:]):
        if b - a <= 1e-14:
            continue
        m = max(1, int(math.ceil((b - a) / max_panel)))
        e = np.linspace(a, b, m + 1)
        for lo, hi in zip(e[:-1], e[1:]):
            xs.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
            ws.append(0.5 * (hi - lo) * w)
    if not xs:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(xs), np.concatenate(ws)


def _shift_points(base_points, D, depth=2):
    """``b +- (sums of up to depth elements of D)`` and midpoints, as candidate kinks."""
    shifts = {0.0}
    for _ in range(depth):
        shifts |= {s + c for s in shifts for c in D}
    pts = set()
    for b in base_points:
        for s in shifts:
            pts.update((b - s, b + s, (b - s) / 2, (b + s) / 2))
    return pts


def _mayer_window(p: PairPotential, t: ThermoState):
    r_max, _ = tail_cutoff(p, t)
    return r_max


def _log_branch(z: complex, target: complex) -> complex:
    """``log z`` on the branch closest to ``target``."""
    lz = cmath.log(z)
    k = round((target.imag - lz.imag) / (2 * math.pi))
    return lz + 2j * math.pi * k


# --------------------------------------------------------------------------
# log Z and the density recursion


def check_log_z_identity(a: ActivityField, domain: Region1D, cfg: OracleConfig = OracleConfig(),
                         rel_tol: float = 1e-6) -> CheckResult:
    """``log Z(lam)`` against ``int_Lambda rho_{lam_x}(x) dx``, ``lam_x = 1_{|.| >= |x|} lam``.

    The logarithm is taken on the branch nearest the integral, which is the
    branch continued from ``Z = 1`` whenever the interpolation is zero-free.
    """
    z = partition_function(a, domain, cfg)
    if abs(z) <= cfg.zero_guard:
        raise ZeroFreenessViolation(f"|Z| = {abs(z):.3g}", z)
    if a.alpha == 0:
        return CheckResult("logz", 0.0, 0.0, True, {"log_z": 0.0})

    def integrand(x):
        lam_x = a.modulate(region=Region1D.outside_ball(0.0, abs(x)))
        return one_point_density(lam_x, domain, x, cfg)

    D = a.potential.tail_breakpoints
    static = set(domain.breakpoints) | set(a.breakpoints) | {0.0}
    lo, hi = domain.hull
    rhs, err = _quad_complex(integrand, lo, hi, _shift_points(static, D, depth=1), cfg)
    lhs = _log_branch(z, rhs)
    resid = abs(lhs - rhs)
    tol = rel_tol * abs(lhs)
    return CheckResult("logz", resid, tol, resid <= tol,
                       {"log_z": [lhs.real, lhs.imag], "integral": [rhs.real, rhs.imag], "quad_error": err})


def check_recursion_identity(a: ActivityField, domain: Region1D, v: float,
                             cfg: OracleConfig = OracleConfig(), rel_tol: float = 1e-6,
                             abs_tol: float = 0.0) -> CheckResult:
    """``rho(v)`` against ``lam(v) exp(-int [1 - e^{-beta phi(v-w)}] rho_{lam_{v->w}}(w) dw)``."""
    v = float(v)
    lam_v = complex(a(np.array([v]))[0]) * bool(domain.contains(v))
    if lam_v == 0:
        return CheckResult("recursion", 0.0, abs_tol, True, {"rho": 0.0})
    p, t = a.potential, a.thermo
    rho = one_point_density(a, domain, v, cfg)

    def integrand(w):
        if not domain.contains(w):
            return 0j
        return complex(mayer(p, t, abs(v - w))) * one_point_density(step_modulation(a, v, w), domain, w, cfg)

    r_max = _mayer_window(p, t)
    lo, hi = domain.hull
    lo, hi = max(lo, v - r_max), min(hi, v + r_max)
    D = p.tail_breakpoints
    static = set(domain.breakpoints) | set(a.breakpoints) | {v + s * b for b in D for s in (-1, 1)}
    pts = _shift_points(static, D, depth=1) | {v}
    expo, err = _quad_complex(integrand, lo, hi, pts, cfg)
    rhs = lam_v * cmath.exp(-expo)
    resid = abs(rho - rhs)
    tol = max(rel_tol * abs(rho), abs_tol)
    return CheckResult("recursion", resid, tol, resid <= tol,
                       {"rho": [rho.real, rho.imag], "rhs": [rhs.real, rhs.imag], "quad_error": err})


# --------------------------------------------------------------------------
# tree recursions


def _gamma(a: ActivityField, prefix, w) -> float:
    """``1_{prefix in A} * gamma_c(prefix, w)``."""
    if not np.all(a.support.contains(np.asarray(prefix))):
        return 0.0
    return gamma_c_eval(prefix, [w], a.potential, a.thermo)


def _level_breaks(a, domain, prefix, r_max):
    p = a.potential
    D = p.tail_breakpoints
    prev = prefix[-1]
    pts = set(domain.breakpoints) | set(a.breakpoints)
    pts |= {prev + s * b for b in D for s in (-1, 1)}
    for i, v in enumerate(prefix[:-1]):
        d = abs(prefix[i + 1] - v)
        pts |= {v + s * c for c in (*D, d) for s in (-1, 1)}
    pts |= {prev + s * b / 2 for b in D for s in (-1, 1)}
    lo, hi = prev - r_max, prev + r_max
    return lo, hi, sorted(x for x in pts if lo < x < hi)


def tree_recursion_eval(a: ActivityField, domain: Region1D, tau: Callable, k: int, v0: float,
                        cfg: OracleConfig = OracleConfig(), nodes: int = 8, max_panel: float = 0.125,
                        window: Region1D | None = None) -> complex:
    """Depth-``k`` tree recursion ``pi(v0)`` with ``gamma = 1_{prefix in A} gamma_c``.

    ``tau(prefix, ws)`` returns boundary values at the paths ``prefix + (w,)``
    for an array ``ws``.  Depth 1 integrates adaptively; depth 2 uses
    Gauss-Legendre panels split at the indicator edges of each level.
    ``window`` optionally restricts the final integration (e.g. to the
    region where ``tau`` can be nonzero).
    """
    if k not in (1, 2):
        raise ValueError("tree recursions are evaluated for depth 1 or 2 only")
    p, t = a.potential, a.thermo
    r_max = _mayer_window(p, t)

    def lam(x):
        return complex(a(np.array([x]))[0]) * bool(domain.contains(x))

    def last_level(prefix):
        lo, hi, pts = _level_breaks(a, domain, prefix, r_max)
        if window is not None:
            wlo, whi = window.hull
            lo, hi = max(lo, wlo), min(hi, whi)
            pts = [x for x in pts + list(window.breakpoints) if lo < x < hi]
        if hi <= lo:
            return 0j
        if k == 1:
            f = lambda w: complex(mayer(p, t, abs(prefix[-1] - w))) * complex(tau(prefix, np.array([w]))[0])
            val, _ = _quad_complex(f, lo, hi, pts, cfg)
            return val
        xs, ws = _gauss_nodes([lo, *pts, hi], nodes, max_panel)
        vals = mayer(p, t, np.abs(prefix[-1] - xs)) * np.asarray(tau(prefix, xs), dtype=complex)
        return complex(np.sum(ws * vals))

    def pi(prefix):
        head = lam(prefix[-1])
        if head == 0:
            return 0j
        g = _gamma(a, prefix, prefix[-1])
        if g == 0:
            return 0j
        if len(prefix) == k:
            return head * g * cmath.exp(-last_level(prefix))
        # intermediate level (only for k = 2)
        lo, hi, pts = _level_breaks(a, domain, prefix, r_max)
        dlo, dhi = domain.hull
        lo, hi = max(lo, dlo), min(hi, dhi)
        xs, ws = _gauss_nodes([lo, *[x for x in pts if lo < x < hi], hi], nodes, max_panel)
        acc = 0j
        for x, wt in zip(xs, ws):
            m = float(mayer(p, t, abs(prefix[-1] - x)))
            if m == 0:
                continue
            acc += wt * m * pi(prefix + (x,))
        return head * g * cmath.exp(-acc)

    return pi((float(v0),))


def density_boundary_condition(a: ActivityField, domain: Region1D, cfg: OracleConfig = OracleConfig()):
    """Boundary values ``rho_{lam_{v0 -> ... -> vk}}(v_k)`` on good paths, zero on bad ones."""

    def tau(prefix, ws):
        out = np.zeros(len(ws), dtype=complex)
        for i, w in enumerate(ws):
            path = tuple(prefix) + (float(w),)
            if not classify_sequence(path, a.R).good:
                continue
            field_ = chain_modulation(a, path)
            if field_.alpha == 0:
                continue
            out[i] = one_point_density(field_, domain, path[-1], cfg)
        return out

    return tau


def check_density_correspondence(a: ActivityField, domain: Region1D, k: int, v0: float,
                                 cfg: OracleConfig = OracleConfig(), tol: float | None = None,
                                 nodes: int = 6, max_panel: float = 0.25) -> CheckResult:
    """Tree recursion with density boundary values against ``rho_{lam}(v0)``."""
    tol = tol if tol is not None else (1e-5 if k == 1 else 1e-3)
    rho = one_point_density(a, domain, v0, cfg)
    tau = density_boundary_condition(a, domain, cfg)
    pi = tree_recursion_eval(a, domain, tau, k, v0, cfg, nodes=nodes, max_panel=max_panel, window=domain)
    resid = abs(pi - rho)
    return CheckResult(f"correspondence_k{k}", resid, tol, resid <= tol,
                       {"rho": [rho.real, rho.imag], "pi": [pi.real, pi.imag]})


# --------------------------------------------------------------------------
# bounds


def _random_modulation(a: ActivityField, domain: Region1D, rng: np.random.Generator, max_factors=2):
    """A random admissible modulation of ``a`` supported in ``domain``."""
    R = a.R
    lo, hi = domain.hull
    span = max(a.potential.range - R, 0.5 * R)
    centers = []
    for _ in range(rng.integers(0, max_factors + 1)):
        c = rng.uniform(lo - span, hi + span)
        if all(abs(c - x) >= R for x in centers):
            centers.append(float(c))
    region = domain
    for c in centers:
        region = region.intersect(Region1D.outside_ball(c, R))
    factors = [(c, R + rng.uniform(0, 2 * span)) for c in centers]
    return a.modulate(alpha=float(rng.uniform(0.5, 1.0)), factors=factors, region=region)


def check_modulation_bound(a: ActivityField, domain: Region1D, n_samples: int = 2000,
                           seed: int = 42, beta_c: float | None = None, max_len: int = 4) -> CheckResult:
    """Sampled check of ``|gamma(prefix, y) lam_m(y)| <= e^{beta C} sup|lam|``.

    Prefixes are random points of the modulation's support (bad ones
    included); ``lam_m`` is a random modulation of ``a``.
    """
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 3])))
    p, t = a.potential, a.thermo
    bc = t.beta * p.local_stability_unit if beta_c is None else beta_c
    bound = math.exp(bc) * a.sup_base + 1e-12
    worst = 0.0
    lo, hi = domain.hull
    pad = max(p.range - p.core_radius, p.core_radius)
    for _ in range(n_samples):
        m = _random_modulation(a, domain, rng)
        j = int(rng.integers(1, max_len + 1))
        prefix = rng.uniform(lo - pad, hi + pad, size=j)
        y = float(rng.uniform(lo - pad, hi + pad))
        g = _gamma(m, prefix, y)
        val = abs(g * complex(m(np.array([y]))[0])) * bool(domain.contains(y))
        worst = max(worst, val)
    return CheckResult("modulation_bound", worst, bound, worst <= bound, {"samples": n_samples})


def _sinusoid_tau(z_sq, c, r, omega, phase):
    def tau(prefix, ws):
        ws = np.asarray(ws, dtype=float)
        return z_sq * (c + r * np.sin(omega * ws + phase))
    return tau


def _random_sinusoid(rng, z_sq):
    r = rng.uniform(0.0, 0.5)
    c = rng.uniform(r, 1.0 - r)
    return c, r, rng.uniform(0.5, 6.0), rng.uniform(0, 2 * math.pi)


def check_self_map(p: PairPotential, t: ThermoState, domain: Region1D, trials: int = 100,
                   seed: int = 42, k: int = 1, delta: float | None = None,
                   cfg: OracleConfig = OracleConfig(), slack: float = 1e-10) -> CheckResult:
    """Tree recursions with boundary values in ``[0, z^2]`` stay in ``[0, z^2]``.

    The activity is ``e^{-beta C} lam~ u`` with ``u`` uniform in ``(0.5, 1]``,
    so every modulated value is at most ``lam~``; ``(lam~, z~)`` is the
    optimizer at ``delta`` (default ``C_phi``).
    """
    k_consts = temperedness_constants(p, t)
    sol = solve_optimizer(k_consts, delta if delta is not None else k_consts.c_phi)
    z_sq = sol.z_tilde_sq
    base_scale = math.exp(-t.beta * p.local_stability_unit) * sol.lambda_tilde
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 1])))
    lo, hi = domain.hull
    worst = 0.0
    values = []
    for _ in range(trials):
        u = 1.0 - 0.5 * rng.random()
        a = ActivityField(p, t, base_scale * u, support=domain)
        tau = _sinusoid_tau(z_sq, *_random_sinusoid(rng, z_sq))
        v0 = float(rng.uniform(lo, hi))
        val = tree_recursion_eval(a, domain, tau, k, v0, cfg)
        if abs(val.imag) > 1e-12:
            raise ArithmeticError("real data produced a complex recursion value")
        x = val.real
        values.append(x)
        worst = max(worst, -x, x - z_sq)
    return CheckResult("selfmap", max(worst, 0.0), slack, worst <= slack,
                       {"z_tilde_sq": z_sq, "lambda_tilde": sol.lambda_tilde,
                        "min": float(min(values)), "max": float(max(values)), "trials": trials})


def check_contraction_bound(p: PairPotential, t: ThermoState, domain: Region1D, k: int = 1,
                            trials: int = 200, seed: int = 42, delta: float | None = None,
                            cfg: OracleConfig = OracleConfig(), slack: float = 1e-10,
                            vk: float | None = None) -> CheckResult:
    """``|sqrt(pi_1) - sqrt(pi_2)|^2 <= lam~^k M^k V_k ||tau_1 - tau_2||_inf`` on random pairs.

    Boundary conditions are ``z^2 (c + r sin(omega w + b))``, for which the
    sup-norm of the difference is ``|c_1 - c_2| + |r_1 e^{i b_1} - r_2 e^{i b_2}|``
    when both share ``omega``.  ``V_k`` comes from deterministic quadrature.
    The reported residual is the largest ``LHS - RHS``.
    """
    kc = temperedness_constants(p, t)
    sol = solve_optimizer(kc, delta if delta is not None else kc.c_phi)
    z_sq, lam_t = sol.z_tilde_sq, sol.lambda_tilde
    M = m_max(kc, z_sq)
    if vk is None:
        vk = vk_quadrature_1d(p, t, k).mean
    base_scale = math.exp(-t.beta * p.local_stability_unit) * lam_t
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 2])))
    lo, hi = domain.hull
    worst = -math.inf
    violations = 0
    for _ in range(trials):
        u = 1.0 - 0.5 * rng.random()
        a = ActivityField(p, t, base_scale * u, support=domain)
        c1, r1, omega, b1 = _random_sinusoid(rng, z_sq)
        c2, r2, _, b2 = _random_sinusoid(rng, z_sq)
        tau1 = _sinusoid_tau(z_sq, c1, r1, omega, b1)
        tau2 = _sinusoid_tau(z_sq, c2, r2, omega, b2)
        sup = z_sq * (abs(c1 - c2) + abs(r1 * cmath.exp(1j * b1) - r2 * cmath.exp(1j * b2)))
        v0 = float(rng.uniform(lo, hi))
        pi1 = tree_recursion_eval(a, domain, tau1, k, v0, cfg)
        pi2 = tree_recursion_eval(a, domain, tau2, k, v0, cfg)
        if min(pi1.real, pi2.real) < -1e-12 or abs(pi1.imag) + abs(pi2.imag) > 1e-12:
            raise ArithmeticError("square root of a negative or complex recursion value")
        lhs = (math.sqrt(max(pi1.real, 0.0)) - math.sqrt(max(pi2.real, 0.0))) ** 2
        rhs = lam_t**k * M**k * vk * sup
        worst = max(worst, lhs - rhs)
        violations += lhs > rhs + slack
    return CheckResult(f"contraction_k{k}", worst, slack, violations == 0,
                       {"violations": violations, "trials": trials, "v_k": vk, "m": M,
                        "lambda_tilde": lam_t})


# --------------------------------------------------------------------------
# zero-freeness


@dataclass(frozen=True)
class ZeroScanReport:
    lambda_star: float
    zero_free: bool
    min_abs_z: float
    max_log_ratio: float
    zeros_inside: tuple
    roots: tuple
    winding: tuple
    coefficients: tuple
    grid_points: int
    mode: str = "disk"

    def as_dict(self) -> dict:
        c = lambda z: [z.real, z.imag]
        return {
            "mode": self.mode,
            "lambda_star": self.lambda_star,
            "zero_free": self.zero_free,
            "min_abs_z": self.min_abs_z,
            "max_log_ratio": self.max_log_ratio,
            "zeros_inside": [c(z) for z in self.zeros_inside],
            "roots": [c(z) for z in self.roots],
            "winding": list(self.winding),
            "grid_points": self.grid_points,
        }


def _coefficients(p, t, domain, cfg):
    a = ActivityField(p, t, 1.0, support=domain)
    return np.real_if_close(partition_terms(a, domain, cfg))


def zero_free_scan(p: PairPotential, t: ThermoState, domain: Region1D, lambda_star: float,
                   n_angles: int = 512, n_radii: int = 32, cfg: OracleConfig = OracleConfig(),
                   guard: float = 1e-8) -> ZeroScanReport:
    """Scan ``Z_Lambda(lam) = sum_n c_n lam^n`` on the polar grid ``|lam| < lambda_star``.

    The grid test ``|Z| > guard`` is complemented by the argument principle
    on every ring (zeros between grid points still change the winding
    number) and by the polynomial roots themselves.  ``log Z`` is continued
    along rays from ``lam = 0``.
    """
    coef = _coefficients(p, t, domain, cfg)
    poly = np.polynomial.Polynomial(coef)
    radii = lambda_star * (np.arange(1, n_radii + 1) - 0.5) / n_radii
    theta = 2 * math.pi * np.arange(n_angles) / n_angles
    lam = radii[:, None] * np.exp(1j * theta)[None, :]
    z = poly(lam)
    abs_z = np.abs(z)
    # continuous log along each ray, starting from log Z(0) = 0
    phase = np.unwrap(np.vstack([np.zeros(n_angles), np.angle(z)]), axis=0)[1:]
    log_z = np.log(abs_z) + 1j * phase
    winding = []
    for ring in z:
        ang = np.unwrap(np.angle(np.append(ring, ring[0])))
        winding.append(int(round((ang[-1] - ang[0]) / (2 * math.pi))))
    roots = tuple(complex(r) for r in poly.roots()) if len(coef) > 1 else ()
    inside = tuple(r for r in roots if abs(r) < lambda_star)
    zero_free = bool(np.all(abs_z > guard)) and not inside and all(w == 0 for w in winding)
    ratio = float(np.max(np.abs(log_z)) / domain.measure)
    if inside:
        logger.warning("zeros of Z inside |lam| < %g: %s", lambda_star, inside)
    return ZeroScanReport(float(lambda_star), zero_free, float(abs_z.min()), ratio, inside, roots,
                          tuple(winding), tuple(float(np.real(c)) for c in coef), lam.size, "disk")


def neighbourhood_scan(p: PairPotential, t: ThermoState, domain: Region1D, lambda_star: float,
                       eps: float | None = None, n_x: int = 512, n_y: int = 32,
                       cfg: OracleConfig = OracleConfig(), guard: float = 1e-8) -> ZeroScanReport:
    """Zero-freeness on the strip ``{x + iy : -eps <= x < lambda_star, |y| <= eps}``.

    This is the thin complex neighbourhood of the real segment
    ``[0, lambda_star)``, where analyticity is established.  Roots within
    distance ``eps`` of the segment are reported.
    """
    eps = 0.05 * lambda_star if eps is None else eps
    coef = _coefficients(p, t, domain, cfg)
    poly = np.polynomial.Polynomial(coef)
    xs = np.linspace(-eps, lambda_star, n_x, endpoint=False)
    ys = np.linspace(-eps, eps, n_y)
    lam = xs[None, :] + 1j * ys[:, None]
    z = poly(lam)
    abs_z = np.abs(z)
    roots = tuple(complex(r) for r in poly.roots()) if len(coef) > 1 else ()

    def dist_to_segment(r):
        x = min(max(r.real, 0.0), lambda_star)
        return abs(r - x)

    inside = tuple(r for r in roots if dist_to_segment(r) <= eps and r.real < lambda_star)
    # log along horizontal lines from the real axis at x = 0 is continuous
    # when the strip is zero-free
    phase = np.unwrap(np.angle(z), axis=1)
    phase -= 2 * math.pi * np.round(phase[:, :1] / (2 * math.pi))
    log_z = np.log(abs_z) + 1j * phase
    zero_free = bool(np.all(abs_z > guard)) and not inside
    ratio = float(np.max(np.abs(log_z)) / domain.measure)
    return ZeroScanReport(float(lambda_star), zero_free, float(abs_z.min()), ratio, inside, roots,
                          (), tuple(float(np.real(c)) for c in coef), lam.size, "neighbourhood")


# --------------------------------------------------------------------------
# hard-rod pressure


def tonks_window_estimates(R: float, lam: float, lengths, cfg: OracleConfig = OracleConfig()):
    """``(L, log Z_L / L, log Z_L / (L + R))`` from the oracle on ``[0, L]``.

    Free boundaries make ``log Z_L`` superadditive up to one core length,
    so the two ratios bracket the infinite-volume pressure.
    """
    p = PairPotential(1, R)
    t = ThermoState(1.0)
    out = []
    for L in lengths:
        dom = Region1D.interval(0.0, L)
        z = partition_function(ActivityField(p, t, lam, support=dom), dom, cfg)
        lz = math.log(z.real)
        out.append((float(L), lz / L, lz / (L + R)))
    return out
