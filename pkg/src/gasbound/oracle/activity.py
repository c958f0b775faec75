"""Activity fields on the line: a base activity times a scale, a support
indicator and Boltzmann-type factors anchored at admissible centres."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from ..connective import classify_sequence
from ..potentials import PairPotential, ThermoState, boltzmann
from .region import Region1D

__all__ = ["ActivityField", "InvariantError", "step_modulation", "chain_modulation"]

_ATOL = 1e-12


class InvariantError(ValueError):
    """A requested modulation violates the admissibility constraints."""


@dataclass(frozen=True)
class ActivityField:
    """``alpha * 1_A(y) * prod_i [1 + (e^{-beta phi(x_i - y)} - 1) 1_{|y - x_i| < t_i}] * base(y)``.

    ``base`` is a complex number or a vectorised callable; for callables
    ``base_bound`` must bound ``|base|``.  ``factors`` holds ``(x_i, t_i)``
    with ``t_i`` in ``[R, inf]``.
    """

    potential: PairPotential
    thermo: ThermoState
    base: complex | Callable = 1.0
    alpha: float = 1.0
    support: Region1D = field(default_factory=Region1D.real_line)
    factors: tuple = ()
    base_bound: float | None = None
    check: bool = True

    def __post_init__(self):
        if self.potential.dimension != 1:
            raise ValueError("activity fields live on the line (dimension 1)")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvariantError("alpha must lie in [0, 1]")
        object.__setattr__(self, "factors", tuple((float(c), float(t)) for c, t in self.factors))
        if self.check:
            self.validate()

    @property
    def R(self) -> float:
        return self.potential.core_radius

    @property
    def sup_base(self) -> float:
        if callable(self.base):
            if self.base_bound is None:
                raise ValueError("callable base needs base_bound")
            return float(self.base_bound)
        return abs(complex(self.base))

    def validate(self):
        R = self.R
        centers = sorted(c for c, _ in self.factors)
        for a, b in zip(centers, centers[1:]):
            if b - a < R * (1 - 1e-14):
                raise InvariantError(f"factor centres {a} and {b} closer than the core radius")
        for c, t in self.factors:
            if t < R:
                raise InvariantError(f"factor radius {t} below the core radius")
            if not self.support.is_subset(Region1D.outside_ball(c, R)):
                raise InvariantError(f"support {self.support} meets the core around {c}")

    def base_values(self, y):
        y = np.asarray(y, dtype=float)
        if callable(self.base):
            return np.asarray(self.base(y), dtype=complex) * np.ones_like(y)
        return np.full(y.shape, complex(self.base))

    def factor_values(self, y):
        y = np.asarray(y, dtype=float)
        out = np.ones(y.shape)
        for c, t in self.factors:
            r = np.abs(y - c)
            out = out * np.where(r < t, boltzmann(self.potential, self.thermo, r), 1.0)
        return out

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if self.alpha == 0:
            return np.zeros(y.shape, dtype=complex)
        return self.alpha * self.support.contains(y) * self.factor_values(y) * self.base_values(y)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points where the field may jump or kink."""
        pts = set(self.support.breakpoints)
        D = [b for b in self.potential.tail_breakpoints if math.isfinite(b)]
        for c, t in self.factors:
            if math.isfinite(t):
                pts.update((c - t, c + t))
            pts.update(c + s * b for b in D for s in (-1, 1))
        return tuple(sorted(pts))

    def modulate(self, alpha: float = 1.0, factors=(), region: Region1D | None = None) -> "ActivityField":
        """Compose with a further modulation; the result is re-validated."""
        support = self.support if region is None else self.support.intersect(region)
        return replace(
            self,
            alpha=self.alpha * alpha,
            support=support,
            factors=self.factors + tuple(factors),
        )

    def with_base(self, base, base_bound=None) -> "ActivityField":
        return replace(self, base=base, base_bound=base_bound)


def step_modulation(a: ActivityField, v: float, w: float) -> ActivityField:
    """Activity seen from ``w`` after a step ``v -> w`` of the density recursion.

    Short steps (``|v - w| < R``) cut out the open ball of radius ``|v - w|``
    around ``v``; long steps cut out the core of ``v`` and add a Boltzmann
    factor from ``v`` active inside radius ``|v - w|``.
    """
    d = abs(float(w) - float(v))
    if d < a.R:
        return a.modulate(region=Region1D.outside_ball_through(v, w))
    return a.modulate(factors=[(v, d)], region=Region1D.outside_ball(v, a.R))


def chain_modulation(a: ActivityField, path) -> ActivityField:
    """``gamma(v_0..v_j, .) * a`` for ``gamma = 1_{path in A} * gamma_c`` as an activity field.

    Bad paths and paths leaving the support give ``alpha = 0``.
    """
    path = [float(x) for x in path]
    if not all(x in a.support for x in path):
        return a.modulate(alpha=0.0)
    cls = classify_sequence(path, a.R)
    if not cls.good:
        return a.modulate(alpha=0.0)
    factors, region = [], Region1D.real_line()
    for i in range(len(path) - 1):
        d = abs(path[i + 1] - path[i])
        if i in cls.index_set:
            factors.append((path[i], d))
            region = region.intersect(Region1D.outside_ball(path[i], a.R))
        else:
            region = region.intersect(Region1D.outside_ball_through(path[i], path[i + 1]))
    return a.modulate(factors=factors, region=region)
