"""Temperedness constants by radial quadrature.

``C_phi = P_phi + A_phi`` integrates the Mayer magnitude over ``R^d``;
``P_phi`` collects the region where ``phi >= 0`` (hard core included),
``A_phi`` the attractive region and ``C_hat_phi`` the weak temperedness
integrand ``1 - exp(-|beta*phi|)``.  The hard core contributes the ball
volume ``omega_d R^d`` analytically; only the tail is integrated.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .potentials import PairPotential, ThermoState, boltzmann

logger = logging.getLogger(__name__)

__all__ = [
    "QuadratureError",
    "RadialQuadratureConfig",
    "TemperednessConstants",
    "unit_ball_volume",
    "sphere_area",
    "radial_integral",
    "tail_cutoff",
    "temperedness_constants",
    "stability_constant",
]


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge; ``partial`` holds the value reached."""

    def __init__(self, message, partial=None, error=None):
        super().__init__(message)
        self.partial = partial
        self.error = error


@dataclass(frozen=True)
class RadialQuadratureConfig:
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    tail_fraction: float = 1e-12

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")


@dataclass(frozen=True)
class TemperednessConstants:
    c_phi: float
    a_phi: float
    p_phi: float
    c_hat_phi: float
    beta: float
    quad_error: float = 0.0

    def as_dict(self):
        return {
            "c_phi": self.c_phi,
            "a_phi": self.a_phi,
            "p_phi": self.p_phi,
            "c_hat_phi": self.c_hat_phi,
            "beta": self.beta,
            "error": self.quad_error,
        }


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in ``R^d`` (2 for d = 1)."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


def radial_integral(f, d: int, cfg: RadialQuadratureConfig = RadialQuadratureConfig(),
                    breakpoints=(), lower=0.0, upper=math.inf):
    """Integrate a radial function over ``lower <= |w| < upper`` in ``R^d``.

    Returns ``(value, abs_error)``.  ``breakpoints`` are mandatory panel
    boundaries (discontinuities of ``f``).  Raises :class:`QuadratureError`
    carrying the partial value if any panel fails to converge.
    """
    area = sphere_area(d)
    edges = sorted({float(lower), float(upper), *(float(b) for b in breakpoints if lower < b < upper)})
    total, err, failures = 0.0, 0.0, []

    def g(r):
        return r ** (d - 1) * float(f(r))

    for a, b in zip(edges, edges[1:]):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            out = integrate.quad(
                g, a, b, epsabs=0.0, epsrel=cfg.rel_tol, limit=cfg.max_subdivisions, full_output=1
            )
        val, e = out[0], out[1]
        total += val
        err += e
        # quad appends a message only when it gives up
        if len(out) > 3:
            failures.append((a, b, e))
    value, error = area * total, area * err
    # roundoff-limited panels whose error is negligible for the whole integral are accepted
    failures = [f for f in failures if f[2] > max(100 * cfg.rel_tol * abs(total), 1e-13)]
    if failures:
        raise QuadratureError(f"radial quadrature did not converge on {failures}", value, error)
    return value, error


def _tail_bound(p: PairPotential, t: ThermoState, r_max: float) -> float:
    """Upper bound on ``int_{|w| >= r_max} |1 - exp(-beta*phi)|``.

    Uses ``|1 - e^-x| <= |x| e^|x|`` with the closed-form radial integrals of
    exponential and power-law pieces.
    """
    d = p.dimension
    bound = 0.0
    for piece in p.tail:
        if piece.end <= r_max:
            continue
        if math.isfinite(piece.end):
            # finite pieces are always swallowed by r_max in tail_cutoff
            return math.inf
        if piece.kind == "constant":
            continue
        a = abs(piece.params[0]) * t.beta
        if piece.kind == "exponential":
            k = piece.params[1]
            u0 = a * math.exp(-k * r_max)
            radial = a * special.gammaincc(d, k * r_max) * math.gamma(d) / k**d
        else:
            n = piece.params[1]
            u0 = a * r_max ** (-n)
            radial = a * r_max ** (d - n) / (n - d)
        bound += math.exp(u0) * radial
    return sphere_area(d) * bound


def tail_cutoff(p: PairPotential, t: ThermoState, cfg: RadialQuadratureConfig = RadialQuadratureConfig()):
    """Truncation radius and the analytic bound on the neglected Mayer mass.

    The bound is below ``cfg.tail_fraction * omega_d R^d``, which is itself a
    lower bound on ``C_phi``.
    """
    finite = [b for b in p.tail_breakpoints if math.isfinite(b)]
    r_max = max(finite + [p.core_radius])
    if math.isinf(p.range):
        target = cfg.tail_fraction * unit_ball_volume(p.dimension) * p.core_radius**p.dimension
        r_max = max(r_max, 2 * p.core_radius)
        while _tail_bound(p, t, r_max) > target:
            r_max *= 1.25
    return r_max, _tail_bound(p, t, r_max) if math.isinf(p.range) else 0.0


def temperedness_constants(p: PairPotential, t: ThermoState,
                           cfg: RadialQuadratureConfig = RadialQuadratureConfig()) -> TemperednessConstants:
    """Compute ``C_phi``, ``A_phi``, ``P_phi`` and ``C_hat_phi`` at ``t.beta``."""
    core = unit_ball_volume(p.dimension) * p.core_radius**p.dimension
    if not p.tail:
        return TemperednessConstants(core, 0.0, core, core, t.beta, 0.0)

    r_max, tail_err = tail_cutoff(p, t, cfg)
    pts = p.tail_breakpoints
    R = p.core_radius
    if r_max > 4 * R:
        # geometric panels keep slowly decaying tails resolvable at full tolerance
        pts = (*pts, *np.geomspace(2 * R, r_max, int(math.log2(r_max / R)) + 1)[:-1])

    def rep(r):
        return max(1.0 - boltzmann(p, t, r), 0.0)

    def att(r):
        return max(boltzmann(p, t, r) - 1.0, 0.0)

    def weak(r):
        return 1.0 - math.exp(-abs(t.beta * float(p.tail_value(r))))

    p_tail, e1 = radial_integral(rep, p.dimension, cfg, pts, R, r_max)
    a_tail, e2 = radial_integral(att, p.dimension, cfg, pts, R, r_max)
    w_tail, e3 = radial_integral(weak, p.dimension, cfg, pts, R, r_max)
    err = e1 + e2 + e3 + tail_err
    a_phi = 0.0 if p.is_repulsive else a_tail
    p_phi = core + p_tail
    consts = TemperednessConstants(p_phi + a_phi, a_phi, p_phi, core + w_tail, t.beta, err)
    logger.debug("temperedness constants %s (r_max=%g)", consts, r_max)
    return consts


def stability_constant(p: PairPotential, t: ThermoState) -> float:
    """Stability constant ``B = beta*C0/2`` implied by local stability."""
    return t.beta * p.local_stability_unit / 2.0
