"""Analyticity threshold from the self-map and contraction conditions.

The recursion for the one-point density maps ``[0, z^2]`` into itself when
``lam * exp(A*z^2) <= z^2`` and contracts when ``lam * M(z) * Delta < 1``.
Maximising ``lam`` subject to both gives a closed form in the principal
branch of the Lambert W function; the threshold for the original activity is
that value times ``exp(-beta*C)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from .constants import TemperednessConstants, temperedness_constants
from .potentials import PairPotential, ThermoState

logger = logging.getLogger(__name__)

__all__ = [
    "lambert_w0",
    "m_max",
    "OptimizerSolution",
    "ThresholdReport",
    "solve_optimizer",
    "self_map_holds",
    "contraction_holds",
    "contraction_margin",
    "analyticity_threshold",
    "SweepRow",
    "sweep",
    "SWEEP_COLUMNS",
]

_INV_E = math.exp(-1.0)
BOUNDARY_TOL = 1e-12


def _w0_initial(x):
    """Piecewise starting guess for the principal branch."""
    w = np.empty_like(x)
    near = x < -0.25
    # branch-point series in p = sqrt(2(e x + 1))
    p = np.sqrt(np.maximum(2.0 * (math.e * x[near] + 1.0), 0.0))
    w[near] = -1.0 + p - p**2 / 3.0 + 11.0 / 72.0 * p**3
    mid = (~near) & (x <= math.e)
    w[mid] = np.log1p(x[mid]) * (1.0 - np.log1p(np.log1p(x[mid])) / (2.0 + np.log1p(x[mid])))
    big = (x > math.e) & np.isfinite(x)
    lx = np.log(x[big])
    llx = np.log(lx)
    w[big] = lx - llx + llx / lx
    return w


def lambert_w0(x, tol: float = 1e-14, max_iter: int = 50):
    """Principal branch ``W0`` of the Lambert W function for real ``x >= -1/e``.

    Halley iteration on ``w*exp(w) - x`` from a piecewise initial guess.

    Parameters
    ----------
    x : float or array_like
        Arguments, each ``>= -1/e``.
    tol : float
        Relative step size at which iteration stops.
    max_iter : int
        Iteration cap.

    Returns
    -------
    float or ndarray
        ``w >= -1`` with ``w*exp(w) = x``.
    """
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if np.any(np.isnan(xa)):
        raise ValueError("lambert_w0: nan argument")
    # allow a couple of ulps of slack at the branch point
    if np.any(xa < -_INV_E * (1 + 4e-16)):
        raise ValueError("lambert_w0 is real only for x >= -1/e")
    w = _w0_initial(xa)
    active = np.isfinite(xa) & (xa != 0.0) & (xa > -_INV_E)
    w[xa == 0.0] = 0.0
    w[xa <= -_INV_E] = -1.0
    w[np.isposinf(xa)] = np.inf
    for _ in range(max_iter):
        if not np.any(active):
            break
        wa = w[active]
        ew = np.exp(wa)
        f = wa * ew - xa[active]
        wp1 = wa + 1.0
        denom = ew * wp1 - (wa + 2.0) * f / (2.0 * wp1)
        step = np.where(denom != 0, f / denom, 0.0)
        new = wa - step
        # never step past the branch point
        new = np.maximum(new, -1.0)
        w[active] = new
        done = np.abs(step) <= tol * np.maximum(np.abs(new), 1e-300)
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    return float(w[0]) if scalar else w


def m_max(k: TemperednessConstants, z_tilde_sq: float) -> float:
    """Maximal contraction modulus ``M(z)`` of the square-root recursion."""
    z2 = float(z_tilde_sq)
    if z2 < 0:
        raise ValueError("z_tilde_sq must be nonnegative")
    P, A, C = k.p_phi, k.a_phi, k.c_phi
    if A == 0:
        x = P * z2
        return x * math.exp(-x) if x <= 1 else _INV_E
    if C * z2 <= 1:
        return C * z2 * math.exp(-(P - A) * z2)
    return math.exp(2 * A * z2 - 1)


@dataclass(frozen=True)
class OptimizerSolution:
    lambda_tilde: float
    z_tilde_sq: float
    w_value: float
    branch: str  # "repulsive" or "attractive"


@dataclass(frozen=True)
class ThresholdReport:
    optimizer: OptimizerSolution
    delta_used: float
    beta_c: float
    new_threshold: float
    penrose_ruelle: float
    procacci_yuhjtman: float
    ratio_pr: float
    ratio_py: float
    self_map: bool
    contraction: bool
    contraction_boundary: bool

    def as_dict(self) -> dict:
        out = asdict(self)
        out["new"] = out.pop("new_threshold")
        out["pr"] = out.pop("penrose_ruelle")
        out["py"] = out.pop("procacci_yuhjtman")
        return out


def solve_optimizer(k: TemperednessConstants, delta: float) -> OptimizerSolution:
    """Largest ``lam`` with a ``z`` satisfying both the self-map and contraction conditions.

    For ``A = 0`` any ``z^2 >= e/delta`` works; the smallest one is returned.
    """
    A = k.a_phi
    delta = float(delta)
    if not delta > 0:
        raise ValueError("delta must be positive")
    if delta < A * (1 - 1e-12):
        raise ValueError(f"delta={delta} is below A_phi={A}; the optimizer requires delta >= A_phi")
    if A == 0:
        lam = math.e / delta
        return OptimizerSolution(lam, lam, 0.0, "repulsive")
    w = lambert_w0(min(math.e * A / delta, math.e))
    return OptimizerSolution(math.exp(1 - 2 * w) / delta, w / A, w, "attractive")


def self_map_holds(lam: float, z_sq: float, a_phi: float, slack: float = BOUNDARY_TOL) -> bool:
    """``lam * exp(a_phi * z_sq) <= z_sq`` (with a rounding slack)."""
    return lam * math.exp(a_phi * z_sq) <= z_sq + slack


def contraction_margin(lam: float, z_sq: float, delta: float, k: TemperednessConstants) -> float:
    """``lam * M(z) * delta``; contraction requires this to be below one."""
    return lam * m_max(k, z_sq) * delta


def contraction_holds(lam: float, z_sq: float, delta: float, k: TemperednessConstants,
                      with_boundary: bool = False):
    """Strict contraction ``lam * M(z) * delta < 1``.

    With ``with_boundary=True`` returns ``(holds, boundary)`` where
    ``boundary`` flags values within ``1e-12`` of equality.
    """
    q = contraction_margin(lam, z_sq, delta, k)
    boundary = abs(q - 1.0) <= BOUNDARY_TOL
    holds = q < 1.0 - BOUNDARY_TOL
    return (holds, boundary) if with_boundary else holds


def analyticity_threshold(k: TemperednessConstants, delta: float, beta_c: float) -> ThresholdReport:
    """Threshold activity and the classical disk bounds it is compared against.

    Parameters
    ----------
    k : TemperednessConstants
    delta : float
        Upper bound on the potential-weighted connective constant,
        ``A_phi <= delta <= C_phi``.
    beta_c : float
        Local stability constant of ``beta*phi``.
    """
    if beta_c < 0:
        raise ValueError("beta_c must be nonnegative")
    if delta > k.c_phi * (1 + 1e-9) + 10 * k.quad_error:
        logger.warning("delta=%g exceeds C_phi=%g; any delta is valid but C_phi is better", delta, k.c_phi)
    sol = solve_optimizer(k, delta)
    new = math.exp(-beta_c) * sol.lambda_tilde
    B = beta_c / 2.0
    pr = math.exp(-(2 * B + 1)) / k.c_phi
    py = math.exp(-(B + 1)) / k.c_hat_phi
    holds, boundary = contraction_holds(sol.lambda_tilde, sol.z_tilde_sq, delta, k, with_boundary=True)
    return ThresholdReport(
        optimizer=sol,
        delta_used=float(delta),
        beta_c=float(beta_c),
        new_threshold=new,
        penrose_ruelle=pr,
        procacci_yuhjtman=py,
        ratio_pr=new / pr,
        ratio_py=new / py,
        self_map=self_map_holds(sol.lambda_tilde, sol.z_tilde_sq, k.a_phi),
        contraction=holds,
        contraction_boundary=boundary,
    )


SWEEP_COLUMNS = ("beta", "c_phi", "a_phi", "delta", "lambda_tilde", "z_tilde_sq",
                 "new", "pr", "py", "ratio_pr", "ratio_py")


@dataclass(frozen=True)
class SweepRow:
    beta: float
    report: ThresholdReport | None
    constants: TemperednessConstants | None
    error: str | None = None

    def values(self) -> list:
        if self.report is None:
            return [self.beta] + [math.nan] * (len(SWEEP_COLUMNS) - 1)
        r, c = self.report, self.constants
        return [self.beta, c.c_phi, c.a_phi, r.delta_used, r.optimizer.lambda_tilde,
                r.optimizer.z_tilde_sq, r.new_threshold, r.penrose_ruelle,
                r.procacci_yuhjtman, r.ratio_pr, r.ratio_py]


def sweep(p: PairPotential, delta_policy, betas) -> list[SweepRow]:
    """One threshold report per inverse temperature.

    ``delta_policy`` is ``"cphi"`` (use ``C_phi``), a number, or a callable
    ``(p, thermo, constants) -> delta``.  Failures are recorded per row.
    """
    betas = [float(b) for b in betas]
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("beta grid must be increasing")
    rows = []
    for beta in betas:
        try:
            t = ThermoState(beta)
            k = temperedness_constants(p, t)
            if callable(delta_policy):
                delta = float(delta_policy(p, t, k))
            elif delta_policy in (None, "cphi", "auto"):
                delta = k.c_phi
            else:
                delta = float(delta_policy)
            rep = analyticity_threshold(k, delta, beta * p.local_stability_unit)
            rows.append(SweepRow(beta, rep, k))
        except Exception as exc:  # recorded, sweep continues
            logger.warning("sweep row beta=%g failed: %s", beta, exc)
            rows.append(SweepRow(beta, None, None, str(exc)))
    return rows
