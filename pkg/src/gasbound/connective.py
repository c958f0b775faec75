"""Walk integrals ``V_k`` weighted by the Mayer magnitude and the reference modulating function.

A walk ``v_0 = 0, v_1, ..., v_k`` in ``R^d`` is weighted by
``prod_l gamma_c(v_0..v_{l-1}, x_l) * |1 - exp(-beta*phi(v_{l-1} - v_l))|``
where ``x_l = v_{l-1}`` (``trailing``) or ``x_l = v_l`` (``leading``).
``V_k^{1/k}`` over admissible depths bounds the potential-weighted
connective constant from above.

Balls are open and their complements closed throughout; every distance goes
through :func:`_dist` so that a point compared against itself as a boundary
point always reproduces the same floating-point value.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .constants import (
    RadialQuadratureConfig,
    sphere_area,
    tail_cutoff,
    temperedness_constants,
    unit_ball_volume,
)
from .potentials import PairPotential, ThermoState, boltzmann, mayer_abs

logger = logging.getLogger(__name__)

__all__ = [
    "SequenceClass",
    "classify_sequence",
    "gamma_c_eval",
    "gamma_c_batch",
    "vk_integrand",
    "VkEstimate",
    "vk_monte_carlo",
    "vk_quadrature_1d",
    "DeltaEstimate",
    "delta_phi_upper",
    "CONVENTIONS",
    "worker_count",
]

CONVENTIONS = ("trailing", "leading")
CHAIN_SIZE = 1 << 16


def _dist(a, b):
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    if diff.shape[-1] == 1:
        return np.abs(diff[..., 0])
    return np.sqrt(np.sum(diff * diff, axis=-1))


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 0:
        pts = pts.reshape(1, 1)
    elif pts.ndim == 1:
        pts = pts[:, None]
    return pts


# --------------------------------------------------------------------------
# good / bad sequences


@dataclass(frozen=True)
class SequenceClass:
    """``good`` with the index set of long steps, or bad (``index_set`` empty)."""

    good: bool
    index_set: frozenset = frozenset()

    def __str__(self):
        return f"Good({sorted(self.index_set)})" if self.good else "Bad"


def classify_sequence(points, R: float) -> SequenceClass:
    """Classify ``v_0..v_{j-1}``.

    ``I`` collects the steps ``i`` with ``|v_i - v_{i+1}| >= R``; the
    sequence is good when every ``v_i`` with ``i`` in ``I`` stays at
    distance ``>= R`` from all later points.
    """
    pts = _as_points(points)
    if len(pts) == 0:
        raise ValueError("empty sequence")
    steps = _dist(pts[:-1], pts[1:])
    index = [i for i, s in enumerate(steps) if s >= R]
    for i in index:
        if np.any(_dist(pts[i + 1:], pts[i]) < R):
            return SequenceClass(False)
    return SequenceClass(True, frozenset(index))


def gamma_c_eval(prefix, w, p: PairPotential, t: ThermoState) -> float:
    """Reference modulating function ``gamma_c(prefix, w)``.

    Zero on bad prefixes.  Otherwise a product over the prefix: for long
    steps ``i`` (in ``I``) the factor ``1_{|w-v_i| >= R} * (1 + (e^{-beta phi}
    - 1) 1_{|w-v_i| < d_i})``, for short steps ``1_{|w-v_i| >= d_i}``, where
    ``d_i = |v_i - v_{i+1}|``.
    """
    pts = _as_points(prefix)
    w = np.asarray(w, dtype=float).reshape(1, -1)
    return float(gamma_c_batch(pts[None], w, p, t)[0])


def gamma_c_batch(prefix: np.ndarray, w: np.ndarray, p: PairPotential, t: ThermoState) -> np.ndarray:
    """Vectorised :func:`gamma_c_eval`; ``prefix`` is ``(n, j, d)``, ``w`` is ``(n, d)``."""
    prefix = np.asarray(prefix, dtype=float)
    w = np.asarray(w, dtype=float)
    n, j, _ = prefix.shape
    out = np.ones(n)
    R = p.core_radius
    if j < 2:
        return out
    steps = _dist(prefix[:, :-1], prefix[:, 1:])  # (n, j-1)
    long_step = steps >= R
    for i in range(j - 1):
        li = long_step[:, i]
        if i + 2 < j:
            # cross condition; i' = i + 1 holds by definition of I
            later = _dist(prefix[:, i + 2:], prefix[:, i:i + 1])
            out[li & np.any(later < R, axis=1)] = 0.0
        r = _dist(w, prefix[:, i])
        di = steps[:, i]
        boost = np.where(r < di, boltzmann(p, t, r), 1.0)
        long_factor = np.where(r >= R, boost, 0.0)
        short_factor = (r >= di).astype(float)
        out *= np.where(li, long_factor, short_factor)
    return out


def vk_integrand(path, p: PairPotential, t: ThermoState, convention: str = "trailing") -> float:
    """Weight of a single walk ``v_0..v_k`` (``v_0`` the origin)."""
    pts = _as_points(path)
    return float(_path_weights(pts[None], p, t, convention)[0])


def _path_weights(paths: np.ndarray, p, t, convention) -> np.ndarray:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    n, kp1, _ = paths.shape
    out = np.ones(n)
    for ell in range(1, kp1):
        x = paths[:, ell - 1] if convention == "trailing" else paths[:, ell]
        out *= gamma_c_batch(paths[:, :ell], x, p, t)
        out *= mayer_abs(p, t, _dist(paths[:, ell - 1], paths[:, ell]))
    return out


# --------------------------------------------------------------------------
# Monte Carlo


class _StepSampler:
    """Importance sampler for steps with density close to ``|1 - e^{-beta phi}| / C_phi``.

    The core ball is sampled uniformly; the tail uses a piecewise-constant
    radial density on cells whose masses are Gauss-Legendre estimates of the
    Mayer mass.  Each draw carries the exact ratio ``|f| / q`` so the
    estimator is unbiased regardless of how good the cell masses are.
    """

    def __init__(self, p: PairPotential, t: ThermoState, n_cells: int = 512,
                 cfg: RadialQuadratureConfig = RadialQuadratureConfig()):
        self.p, self.t, self.d = p, t, p.dimension
        d, R = self.d, p.core_radius
        self.core = unit_ball_volume(d) * R**d
        self.area = sphere_area(d)
        self.edges = np.array([R])
        self.masses = np.zeros(0)
        if p.tail:
            r_max, _ = tail_cutoff(p, t, cfg)
            fixed = sorted({b for b in p.tail_breakpoints if R <= b <= r_max} | {R, r_max})
            edges = [fixed[0]]
            h = (r_max - R) / n_cells
            for a, b in zip(fixed, fixed[1:]):
                m = max(1, int(math.ceil((b - a) / h)))
                edges.extend(np.linspace(a, b, m + 1)[1:])
            self.edges = np.array(edges)
            x, wq = np.polynomial.legendre.leggauss(16)
            a, b = self.edges[:-1, None], self.edges[1:, None]
            r = 0.5 * (b - a) * x + 0.5 * (a + b)
            f = r ** (d - 1) * mayer_abs(p, t, r)
            self.masses = self.area * 0.5 * (b - a)[:, 0] * (f @ wq)
        self.total = self.core + float(self.masses.sum())
        self.cum = np.cumsum(self.masses)
        # radial volume of each cell, for the proposal density
        self.shell = self.area * (self.edges[1:] ** d - self.edges[:-1] ** d) / d

    def draw(self, rng: np.random.Generator, n: int):
        d = self.d
        u = rng.random(n)
        v = rng.random(n)
        r = np.empty(n)
        wgt = np.empty(n)
        in_core = u * self.total < self.core
        r[in_core] = self.p.core_radius * v[in_core] ** (1.0 / d)
        wgt[in_core] = self.total
        tail = ~in_core
        if np.any(tail):
            target = u[tail] * self.total - self.core
            j = np.minimum(np.searchsorted(self.cum, target, side="right"), len(self.masses) - 1)
            a, b = self.edges[j], self.edges[j + 1]
            rt = (a**d + v[tail] * (b**d - a**d)) ** (1.0 / d)
            r[tail] = np.clip(rt, a, np.nextafter(b, a))
            q = self.masses[j] / self.shell[j] / self.total
            wgt[tail] = mayer_abs(self.p, self.t, r[tail]) / q
        if d == 1:
            direction = np.where(rng.random(n) < 0.5, -1.0, 1.0)[:, None]
        else:
            g = rng.standard_normal((n, d))
            direction = g / np.linalg.norm(g, axis=1, keepdims=True)
        return direction * r[:, None], wgt


@dataclass(frozen=True)
class VkEstimate:
    k: int
    mean: float
    std_error: float
    n_samples: int
    seed: int | None
    convention: str
    method: str = "monte_carlo"

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "mean": self.mean,
            "std_error": self.std_error,
            "samples": self.n_samples,
            "seed": self.seed,
            "convention": self.convention,
            "method": self.method,
        }


def worker_count() -> int:
    """Thread cap from ``GASBOUND_THREADS`` (default: CPU count)."""
    env = os.environ.get("GASBOUND_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning("ignoring non-integer GASBOUND_THREADS=%r", env)
    return os.cpu_count() or 1


def _run_chain(sampler, p, t, k, n, seed, chain, convention):
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chain])))
    paths = np.zeros((n, k + 1, p.dimension))
    weight = np.ones(n)
    for ell in range(1, k + 1):
        step, wgt = sampler.draw(rng, n)
        paths[:, ell] = paths[:, ell - 1] + step
        weight *= wgt
    for ell in range(1, k + 1):
        x = paths[:, ell - 1] if convention == "trailing" else paths[:, ell]
        weight *= gamma_c_batch(paths[:, :ell], x, p, t)
    if not np.all(np.isfinite(weight)):
        bad = int(np.flatnonzero(~np.isfinite(weight))[0])
        raise FloatingPointError(
            f"non-finite weight in chain {chain}, sample {bad}: path {paths[bad].ravel().tolist()}"
        )
    mean = float(weight.mean())
    m2 = float(np.sum((weight - mean) ** 2))
    return n, mean, m2


def _combine(a, b):
    """Pairwise merge of (count, mean, M2) summaries."""
    na, ma, qa = a
    nb, mb, qb = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, qa + qb + delta * delta * na * nb / n


def vk_monte_carlo(p: PairPotential, t: ThermoState, k: int, n_samples: int = 10**6,
                   seed: int = 42, convention: str = "trailing", threads: int | None = None,
                   sampler: _StepSampler | None = None) -> VkEstimate:
    """Importance-sampled estimate of ``V_k`` with standard error.

    Samples are split into chains of fixed size, chain ``c`` drawing from a
    Philox stream keyed by ``(seed, c)``; per-chain summaries are merged in
    chain order, so the result is identical for any number of threads.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n_samples = int(n_samples)
    if n_samples < 1000:
        raise ValueError("n_samples must be at least 1000")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    sampler = sampler or _StepSampler(p, t)
    sizes = [CHAIN_SIZE] * (n_samples // CHAIN_SIZE)
    if n_samples % CHAIN_SIZE:
        sizes.append(n_samples % CHAIN_SIZE)
    threads = threads or worker_count()
    args = [(sampler, p, t, k, n, seed, c, convention) for c, n in enumerate(sizes)]
    if threads > 1 and len(args) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda a: _run_chain(*a), args))
    else:
        parts = [_run_chain(*a) for a in args]
    acc = parts[0]
    for part in parts[1:]:
        acc = _combine(acc, part)
    n, mean, m2 = acc
    var = m2 / (n - 1) if n > 1 else 0.0
    est = VkEstimate(k, mean, math.sqrt(var / n), n, seed, convention)
    logger.info("V_%d (%s) = %.6g +- %.2g from %d samples", k, convention, mean, est.std_error, n)
    return est


# --------------------------------------------------------------------------
# deterministic 1D quadrature


class _Walk1D:
    """Nested quadrature of ``V_k`` on the line with indicator-aware panels."""

    def __init__(self, p, t, k, convention, nodes, max_panel, cfg):
        self.p, self.t, self.k, self.conv = p, t, k, convention
        self.R = p.core_radius
        self.r_max, _ = tail_cutoff(p, t, cfg)
        self.D = sorted({b for b in p.tail_breakpoints if b <= self.r_max} | {self.R, self.r_max})
        self.x, self.w = np.polynomial.legendre.leggauss(nodes)
        self.max_panel = max_panel
        self.c_phi = temperedness_constants(p, t, cfg).c_phi

    def _step_weight(self, prefix, xs):
        """``gamma * |M|`` for candidate positions ``xs`` of the next point."""
        prev = prefix[-1]
        m = mayer_abs(self.p, self.t, np.abs(xs - prev))
        n = len(xs)
        pre = np.broadcast_to(np.asarray(prefix)[None, :, None], (n, len(prefix), 1))
        if self.conv == "trailing":
            g = gamma_c_batch(pre[:1], np.array([[prev]]), self.p, self.t)[0]
        else:
            g = gamma_c_batch(pre, xs[:, None], self.p, self.t)
        return g * m

    def _breaks(self, prefix, induced):
        prev = prefix[-1]
        D = self.D
        pts = {prev + s * b for b in D for s in (-1, 1)}
        steps = [abs(a - b) for a, b in zip(prefix[:-1], prefix[1:])]
        radii = {i: set(D) | ({steps[i]} if i < len(steps) else set()) for i in range(len(prefix))}
        for i, v in enumerate(prefix[:-1]):
            pts.update(v + s * c for c in radii[i] for s in (-1, 1))
        if induced:
            for i, v in enumerate(prefix):
                for c in radii[i]:
                    for b in [0.0, *D]:
                        for s1 in (-1, 1):
                            for s2 in (-1, 1):
                                pts.add(v + s1 * c + s2 * b)
                                pts.add(2 * prev - v + s1 * c + s2 * b)
            pts.update(prev + s * b / 2 for b in D for s in (-1, 1))
        lo, hi = prev - self.r_max, prev + self.r_max
        return sorted(x for x in pts | {lo, hi} if lo <= x <= hi)

    def _panels(self, edges):
        a_all, b_all = [], []
        for a, b in zip(edges, edges[1:]):
            if b - a <= 1e-15:
                continue
            m = max(1, int(math.ceil((b - a) / self.max_panel)))
            e = np.linspace(a, b, m + 1)
            a_all.extend(e[:-1])
            b_all.extend(e[1:])
        a = np.array(a_all)[:, None]
        b = np.array(b_all)[:, None]
        xs = (0.5 * (b - a) * self.x + 0.5 * (a + b)).ravel()
        ws = (0.5 * (b - a) * self.w).ravel()
        return xs, ws

    def remaining(self, prefix) -> float:
        """Integral over the points after ``prefix`` (which has ``len(prefix) - 1`` steps done)."""
        level = len(prefix)
        if level > self.k:
            return 1.0
        if level == self.k and self.conv == "trailing":
            # gamma sits at the previous point, leaving the full Mayer mass
            g = gamma_c_eval(prefix, [prefix[-1]], self.p, self.t)
            return g * self.c_phi
        xs, ws = self._panels(self._breaks(prefix, induced=level < self.k))
        vals = self._step_weight(prefix, xs)
        keep = vals != 0
        if level == self.k - 1 and self.conv == "trailing":
            rows = np.array([prefix + [x] for x in xs[keep]])[:, :, None]
            inner = gamma_c_batch(rows, xs[keep][:, None], self.p, self.t) * self.c_phi
        elif level == self.k - 1:
            inner = self._last_level_batch(prefix, xs[keep])
        else:
            inner = np.array([self.remaining(prefix + [x]) for x in xs[keep]])
        return float(np.sum(ws[keep] * vals[keep] * inner))

    def _last_level_batch(self, prefix, xs):
        """Last-level integrals (leading convention) for many final prefix points at once."""
        nodes, weights, owner = [], [], []
        for i, x in enumerate(xs):
            px, pw = self._panels(self._breaks(prefix + [x], induced=False))
            nodes.append(px)
            weights.append(pw)
            owner.append(np.full(px.size, i))
        ys = np.concatenate(nodes)
        ws = np.concatenate(weights)
        idx = np.concatenate(owner)
        n = ys.size
        rows = np.empty((n, len(prefix) + 1, 1))
        rows[:, :-1, 0] = prefix
        rows[:, -1, 0] = xs[idx]
        vals = gamma_c_batch(rows, ys[:, None], self.p, self.t)
        vals *= mayer_abs(self.p, self.t, np.abs(ys - xs[idx]))
        return np.bincount(idx, weights=ws * vals, minlength=len(xs))


def vk_quadrature_1d(p: PairPotential, t: ThermoState, k: int, nodes: int = 8,
                     convention: str = "trailing", max_panel: float = 0.5,
                     cfg: RadialQuadratureConfig = RadialQuadratureConfig(),
                     tol: float = 1e-11) -> VkEstimate:
    """Deterministic ``V_k`` for ``d = 1`` and ``k <= 3``.

    The outermost variable is integrated adaptively with the direct
    breakpoints supplied; inner levels use Gauss-Legendre panels split at
    every indicator edge reachable from the prefix, including the points
    where two inner edges meet.  ``std_error`` holds the outer error estimate.
    """
    from scipy import integrate

    if p.dimension != 1:
        raise ValueError("vk_quadrature_1d requires dimension 1")
    if not 1 <= k <= 3:
        raise ValueError("vk_quadrature_1d supports 1 <= k <= 3")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    walk = _Walk1D(p, t, k, convention, nodes, max_panel, cfg)

    def outer(x):
        m = float(mayer_abs(p, t, abs(x)))
        return 0.0 if m == 0 else m * walk.remaining([0.0, x])

    edges = walk._breaks([0.0], induced=True)
    total, err = 0.0, 0.0
    for a, b in zip(edges, edges[1:]):
        if b - a <= 1e-15:
            continue
        val, e = integrate.quad(outer, a, b, epsabs=tol, epsrel=tol, limit=200)
        total += val
        err += e
    return VkEstimate(k, total, err, 0, None, convention, method="quadrature")


# --------------------------------------------------------------------------
# connective constant bound


@dataclass(frozen=True)
class DeltaEstimate:
    delta_hat: float
    std_error: float
    witnessing_k: int
    vk_values: tuple
    vk_errors: tuple
    admissible: tuple
    near_boundary: tuple
    fallback: bool = False
    convention: str = "trailing"
    roots: tuple = field(default=())

    def as_dict(self) -> dict:
        return {
            "delta_hat": self.delta_hat,
            "std_error": self.std_error,
            "witnessing_k": self.witnessing_k,
            "vk_values": list(self.vk_values),
            "vk_errors": list(self.vk_errors),
            "roots": list(self.roots),
            "admissible": list(self.admissible),
            "near_boundary": list(self.near_boundary),
            "fallback": self.fallback,
            "convention": self.convention,
        }


def delta_phi_upper(estimates, a_phi: float, k_max: int | None = None) -> DeltaEstimate:
    """Minimum of ``V_k^{1/k}`` over depths with ``V_k >= A_phi^k``.

    ``estimates`` are :class:`VkEstimate` (or ``(mean, std_error)`` pairs)
    for ``k = 1, 2, ...``.  The error of ``V^{1/k}`` is propagated as
    ``V^{1/k - 1} dV / k``.  Depths within three standard errors of the
    constraint are flagged as near-boundary.  If no depth is admissible the
    ``k = 1`` value is returned with a warning.
    """
    est = list(estimates)
    if k_max is not None:
        est = est[:k_max]
    if not est:
        raise ValueError("need at least one V_k estimate")
    means, errs = [], []
    for e in est:
        if isinstance(e, VkEstimate):
            means.append(e.mean)
            errs.append(e.std_error)
        else:
            means.append(float(e[0]))
            errs.append(float(e[1]))
    convention = next((e.convention for e in est if isinstance(e, VkEstimate)), "trailing")
    roots, root_err, adm, near = [], [], [], []
    for k, (v, dv) in enumerate(zip(means, errs), start=1):
        bound = a_phi**k
        roots.append(v ** (1.0 / k) if v > 0 else 0.0)
        root_err.append(v ** (1.0 / k - 1.0) * dv / k if v > 0 else math.inf)
        adm.append(bool(v >= bound))
        near.append(bool(abs(v - bound) <= 3 * dv) if dv > 0 else False)
    candidates = [i for i, ok in enumerate(adm) if ok]
    fallback = not candidates
    if fallback:
        logger.warning("no admissible depth; falling back to k = 1")
        best = 0
    else:
        best = min(candidates, key=lambda i: roots[i])
    return DeltaEstimate(
        delta_hat=roots[best],
        std_error=root_err[best],
        witnessing_k=best + 1,
        vk_values=tuple(means),
        vk_errors=tuple(errs),
        admissible=tuple(adm),
        near_boundary=tuple(near),
        fallback=fallback,
        convention=convention,
        roots=tuple(roots),
    )
