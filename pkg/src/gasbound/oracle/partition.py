"""Exact finite-volume partition functions on the line.

With a hard core of radius ``R`` at most ``floor(|hull|/R) + 1`` particles
fit in a bounded region, so the grand-canonical series is a finite sum.
Each term is an ordered-simplex integral ``x_1 < ... < x_n`` evaluated by
nested Gauss-Legendre panels whose edges include every point where an
indicator in the integrand, or in an inner integral, switches.  For
piecewise-constant potentials the result is exact up to rounding.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..potentials import PairPotential, ThermoState, boltzmann
from ..threshold import lambert_w0
from .activity import ActivityField
from .region import Region1D

logger = logging.getLogger(__name__)

__all__ = [
    "OracleConfig",
    "ZeroFreenessViolation",
    "PartitionResult",
    "potential_energy",
    "partition_terms",
    "partition_function",
    "partition_result",
    "one_point_density",
    "tonks_reference",
    "tonks_partition_function",
]


class ZeroFreenessViolation(ArithmeticError):
    """A partition function in a denominator is (numerically) zero."""

    def __init__(self, message, value=None, location=None):
        super().__init__(message)
        self.value = value
        self.location = location


@dataclass(frozen=True)
class OracleConfig:
    nodes: int = 6
    max_panel: float = 0.25
    n_cap: int = 5
    zero_guard: float = 1e-12
    outer_tol: float = 1e-11
    outer_limit: int = 200


def potential_energy(points, p: PairPotential, t: ThermoState) -> float:
    """``sum_{i<j} beta*phi(|x_i - x_j|)``; ``+inf`` if two points overlap cores."""
    x = np.atleast_2d(np.asarray(points, dtype=float))
    if x.shape[0] == 1 and x.shape[1] != p.dimension:
        x = x.T
    n = len(x)
    if n < 2:
        return 0.0
    i, j = np.triu_indices(n, 1)
    r = np.linalg.norm(x[i] - x[j], axis=1) if p.dimension > 1 else np.abs(x[i, 0] - x[j, 0])
    if np.any(r < p.core_radius):
        return math.inf
    return float(t.beta * np.sum(p.tail_value(r)))


def _max_particles(region: Region1D, R: float) -> int:
    lo, hi = region.hull
    return int(math.floor((hi - lo) / R)) + 1


def _sums(D, upto):
    """All sums of ``0..upto`` elements of ``D`` (with repetition)."""
    out = {0.0}
    for r in range(1, upto + 1):
        for combo in itertools.combinations_with_replacement(D, r):
            out.add(float(sum(combo)))
    return sorted(out)


class _Nested:
    def __init__(self, a: ActivityField, domain: Region1D, cfg: OracleConfig, nodes: int | None = None):
        self.a, self.domain, self.cfg = a, domain, cfg
        p = a.potential
        self.R = p.core_radius
        self.D = sorted({self.R} | {b for b in p.tail_breakpoints if math.isfinite(b)})
        self.lo, self.hi = domain.hull
        self.static = sorted(set(a.breakpoints) | set(domain.breakpoints))
        x, w = np.polynomial.legendre.leggauss(nodes or cfg.nodes)
        self.gx, self.gw = x, w
        self.n_max = _max_particles(domain, self.R)
        self._sums = {r: _sums(self.D, r) for r in range(self.n_max + 1)}

    def _edges(self, prefix, lo, levels):
        shifts = self._sums[levels - 1]
        movers = list(self.static) + [q + c for q in prefix for c in self.D]
        pts = {b - s for b in movers for s in shifts}
        pts = {x for x in pts if lo < x < self.hi}
        return [lo, *sorted(pts), self.hi]

    def _nodes(self, edges):
        a_all, b_all = [], []
        for a, b in zip(edges, edges[1:]):
            if b - a <= 0:
                continue
            m = max(1, int(math.ceil((b - a) / self.cfg.max_panel)))
            e = np.linspace(a, b, m + 1)
            a_all.extend(e[:-1])
            b_all.extend(e[1:])
        if not a_all:
            return np.zeros(0), np.zeros(0)
        a = np.array(a_all)[:, None]
        b = np.array(b_all)[:, None]
        return (0.5 * (b - a) * self.gx + 0.5 * (a + b)).ravel(), (0.5 * (b - a) * self.gw).ravel()

    def terms(self, prefix=(), levels=None) -> np.ndarray:
        """Per-particle-number contributions of the points after ``prefix``."""
        if levels is None:
            levels = self.n_max
        out = np.zeros(levels + 1, dtype=complex)
        out[0] = 1.0
        if levels == 0:
            return out
        lo = prefix[-1] + self.R if prefix else self.lo
        if lo >= self.hi:
            return out
        xs, ws = self._nodes(self._edges(prefix, lo, levels))
        if xs.size == 0:
            return out
        f = self.a(xs) * self.domain.contains(xs)
        p, t = self.a.potential, self.a.thermo
        for q in prefix:
            f = f * boltzmann(p, t, xs - q)
        keep = f != 0
        xs, ws, f = xs[keep], ws[keep], f[keep]
        if xs.size == 0:
            return out
        if levels == 1:
            out[1] = np.sum(ws * f)
            return out
        inner = np.array([self.terms(prefix + (x,), levels - 1)[:levels] for x in xs])
        out[1:] = (ws * f) @ inner
        return out


def partition_terms(a: ActivityField, domain: Region1D, cfg: OracleConfig = OracleConfig(),
                    nodes: int | None = None) -> np.ndarray:
    """Coefficients ``Z_n`` with ``Z = sum_n Z_n`` (``Z_0 = 1``)."""
    if a.potential.dimension != 1:
        raise ValueError("the partition-function oracle is one-dimensional")
    if domain.empty or not math.isfinite(domain.measure):
        raise ValueError("domain must be a nonempty bounded region")
    nested = _Nested(a, domain, cfg, nodes)
    if nested.n_max > cfg.n_cap:
        raise ValueError(
            f"domain admits up to {nested.n_max} particles (cap {cfg.n_cap}); shrink the domain"
        )
    if a.alpha == 0:
        out = np.zeros(nested.n_max + 1, dtype=complex)
        out[0] = 1.0
        return out
    return nested.terms()


def partition_function(a: ActivityField, domain: Region1D, cfg: OracleConfig = OracleConfig()) -> complex:
    """Grand-canonical partition function of ``a`` restricted to ``domain``."""
    return complex(np.sum(partition_terms(a, domain, cfg)))


@dataclass(frozen=True)
class PartitionResult:
    value: complex
    terms: tuple
    error: float


def partition_result(a: ActivityField, domain: Region1D, cfg: OracleConfig = OracleConfig()) -> PartitionResult:
    """Partition function with an error estimate from a lower-order rule."""
    terms = partition_terms(a, domain, cfg)
    coarse = partition_terms(a, domain, cfg, nodes=max(2, cfg.nodes // 2 + 1))
    z = complex(np.sum(terms))
    err = abs(z - complex(np.sum(coarse))) + 1e-14 * abs(z)
    return PartitionResult(z, tuple(terms), err)


def one_point_density(a: ActivityField, domain: Region1D, v: float, cfg: OracleConfig = OracleConfig(),
                      z_denominator: complex | None = None) -> complex:
    """``rho(v) = lam(v) Z(lam * e^{-beta phi(v - .)}) / Z(lam)``.

    Raises :class:`ZeroFreenessViolation` when ``|Z(lam)|`` is below the guard.
    """
    v = float(v)
    lam_v = complex(a(np.array([v]))[0]) * bool(domain.contains(v))
    if lam_v == 0:
        return 0j
    z = partition_function(a, domain, cfg) if z_denominator is None else z_denominator
    if abs(z) <= cfg.zero_guard:
        raise ZeroFreenessViolation(f"|Z| = {abs(z):.3g} at density point {v}", z, v)
    # v lies in the support, hence outside every factor core: a valid modulation
    num = a.modulate(factors=[(v, math.inf)], region=Region1D.outside_ball(v, a.R))
    return lam_v * partition_function(num, domain, cfg) / z


def tonks_reference(R: float, lam: float) -> float:
    """Exact pressure ``beta*p = W(lam*R)/R`` of the hard-rod gas."""
    if lam < 0:
        raise ValueError("activity must be nonnegative")
    if lam == 0:
        return 0.0
    bp = lambert_w0(lam * R) / R
    # defining relation lam = beta_p * exp(beta_p * R)
    if abs(bp * math.exp(bp * R) - lam) > 1e-12 * max(lam, 1.0):
        raise ArithmeticError(f"pressure {bp} fails lam = bp * exp(bp * R) at lam = {lam}")
    return bp


def tonks_partition_function(R: float, L: float, lam: complex) -> complex:
    """Closed form ``sum_n lam^n (L - (n-1)R)^n / n!`` for hard rods on ``[0, L]``."""
    total = 0j
    n = 0
    while n == 0 or L - (n - 1) * R > 0:
        total += lam**n * max(L - (n - 1) * R, 0.0) ** n / math.factorial(n)
        n += 1
    return total
