"""Radially symmetric hard-core pair potentials.

A potential is a hard core of radius ``R`` (``phi = +inf`` for ``r < R``)
followed by a piecewise tail on ``[R, inf)``.  Tail pieces are constant,
exponential ``a*exp(-k*r)``, power law ``a*r**-n`` or a linearly
interpolated table.  Everything here is a pure function of immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "TailPiece",
    "PairPotential",
    "ThermoState",
    "evaluate",
    "boltzmann",
    "mayer",
    "mayer_abs",
    "builtin",
    "hard_sphere",
    "square_well",
    "kac_exponential",
    "tabulated",
    "load_potential",
    "parse_config",
    "ConfigError",
]


class ConfigError(ValueError):
    """Raised for malformed potential declarations."""


@dataclass(frozen=True)
class TailPiece:
    """One piece of the tail, active on ``start <= r < end``.

    ``kind`` is one of ``constant`` (params ``(value,)``), ``exponential``
    (``(amplitude, rate)``), ``power`` (``(amplitude, exponent)``) or
    ``table`` (``(r_nodes, phi_nodes)`` as tuples).
    """

    start: float
    end: float
    kind: str
    params: tuple

    def value(self, r: np.ndarray) -> np.ndarray:
        if self.kind == "constant":
            return np.full_like(r, float(self.params[0]))
        if self.kind == "exponential":
            a, k = self.params
            return a * np.exp(-k * r)
        if self.kind == "power":
            a, n = self.params
            return a * r ** (-float(n))
        if self.kind == "table":
            rs, ps = self.params
            return np.interp(r, rs, ps)
        raise ValueError(f"unknown tail kind {self.kind!r}")

    def breakpoints(self) -> list[float]:
        pts = [self.start]
        if math.isfinite(self.end):
            pts.append(self.end)
        if self.kind == "table":
            rs, ps = self.params
            pts.extend(rs)
            # sign changes of the interpolant split the Mayer function into
            # its repulsive and attractive parts
            for i in range(len(rs) - 1):
                if ps[i] * ps[i + 1] < 0:
                    pts.append(rs[i] - ps[i] * (rs[i + 1] - rs[i]) / (ps[i + 1] - ps[i]))
        return pts

    def sign_bounds(self) -> tuple[float, float]:
        """Lower and upper bound of the piece's values."""
        if self.kind == "constant":
            v = float(self.params[0])
            return v, v
        if self.kind in ("exponential", "power"):
            a = float(self.params[0])
            return min(a, 0.0), max(a, 0.0)
        rs, ps = self.params
        return min(min(ps), 0.0), max(max(ps), 0.0)


@dataclass(frozen=True)
class PairPotential:
    """Hard-core pair potential ``phi`` in ``dimension`` dimensions.

    ``local_stability_unit`` is an energy ``C0`` such that ``beta*phi`` is
    locally stable with constant ``beta*C0``; for purely repulsive tails it
    must be zero.
    """

    dimension: int
    core_radius: float
    tail: tuple[TailPiece, ...] = ()
    local_stability_unit: float = 0.0
    label: str = "potential"

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise ValueError("dimension must be a positive integer")
        if not (self.core_radius > 0 and math.isfinite(self.core_radius)):
            raise ValueError("core_radius must be positive and finite")
        if self.local_stability_unit < 0:
            raise ValueError("local_stability_unit must be nonnegative")
        for piece in self.tail:
            if piece.start < self.core_radius or piece.end <= piece.start:
                raise ValueError(f"tail piece [{piece.start}, {piece.end}) outside [R, inf)")
            if piece.kind == "table":
                rs, ps = piece.params
                if len(rs) != len(ps) or len(rs) < 2 or np.any(np.diff(rs) <= 0):
                    raise ValueError("table nodes must be strictly increasing, >= 2 nodes")
                if not np.all(np.isfinite(ps)):
                    raise ValueError("tabulated potential must be finite")
        ordered = sorted(self.tail, key=lambda p: p.start)
        for a, b in zip(ordered, ordered[1:]):
            if b.start < a.end:
                raise ValueError("tail pieces overlap")
        self._check_integrable()
        if self.is_repulsive and self.local_stability_unit != 0:
            raise ValueError("purely repulsive potential must have local_stability_unit = 0")

    def _check_integrable(self):
        for piece in self.tail:
            if math.isfinite(piece.end):
                continue
            if piece.kind == "constant" and piece.params[0] != 0:
                raise ValueError("nonzero constant tail extending to infinity is not integrable")
            if piece.kind == "exponential" and piece.params[1] <= 0 and piece.params[0] != 0:
                raise ValueError("exponential tail needs a positive decay rate")
            if piece.kind == "power" and piece.params[1] <= self.dimension and piece.params[0] != 0:
                raise ValueError(
                    f"power tail r^-{piece.params[1]} is not integrable in d={self.dimension}"
                )
            if piece.kind == "table":
                raise ValueError("table pieces must have finite extent")

    @property
    def is_repulsive(self) -> bool:
        return all(p.sign_bounds()[0] >= 0 for p in self.tail)

    @property
    def tail_breakpoints(self) -> tuple[float, ...]:
        """Radii ``>= R`` where the tail may be non-smooth (always contains ``R``)."""
        pts = {float(self.core_radius)}
        for piece in self.tail:
            pts.update(float(x) for x in piece.breakpoints())
        return tuple(sorted(pts))

    @property
    def range(self) -> float:
        """Radius beyond which ``phi`` vanishes identically (``inf`` for unbounded tails)."""
        r = float(self.core_radius)
        for piece in self.tail:
            if piece.kind == "constant" and piece.params[0] == 0:
                continue
            r = max(r, piece.end)
        return r

    def tail_value(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for piece in self.tail:
            mask = (r >= piece.start) & (r < piece.end)
            if np.any(mask):
                out[mask] += piece.value(r[mask])
        return out


@dataclass(frozen=True)
class ThermoState:
    """Inverse temperature; the effective potential is ``beta * phi``."""

    beta: float = 1.0

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError("beta must be positive")


def evaluate(p: PairPotential, r):
    """``phi(r)``: ``+inf`` inside the core, tail value outside."""
    r = np.asarray(r, dtype=float)
    out = np.where(r < p.core_radius, np.inf, 0.0)
    outside = r >= p.core_radius
    if np.any(outside):
        out = np.where(outside, p.tail_value(np.where(outside, r, p.core_radius)), out)
    return out[()] if out.ndim == 0 else out


def boltzmann(p: PairPotential, t: ThermoState, r):
    """``exp(-beta*phi(r))``, exactly zero inside the core."""
    r = np.asarray(r, dtype=float)
    outside = r >= p.core_radius
    tail = p.tail_value(np.where(outside, r, p.core_radius))
    out = np.where(outside, np.exp(-t.beta * tail), 0.0)
    return out[()] if out.ndim == 0 else out


def mayer(p: PairPotential, t: ThermoState, r):
    """Signed Mayer function ``1 - exp(-beta*phi(r))``."""
    return 1.0 - boltzmann(p, t, r)


def mayer_abs(p: PairPotential, t: ThermoState, r):
    """``|1 - exp(-beta*phi(r))|``; equal to 1 inside the core."""
    return np.abs(mayer(p, t, r))


# --------------------------------------------------------------------------
# built-in potentials


def hard_sphere(dimension: int = 1, core_radius: float = 1.0) -> PairPotential:
    return PairPotential(dimension, core_radius, (), 0.0, label=f"hard_sphere(d={dimension})")


def _well_neighbours(dimension: int, R: float, L: float) -> int:
    """Max number of hard-core-admissible points at distance in ``[R, L)`` from a point."""
    if dimension == 1:
        return 2 * math.ceil((L - R) / R)
    # disjoint balls of radius R/2 inside the annulus R/2 <= |x| < L + R/2
    return math.floor((2 * L / R + 1) ** dimension - 1)


def square_well(dimension: int, core_radius: float, well_range: float, well_depth: float) -> PairPotential:
    """``phi = -well_depth`` on ``R <= r < well_range``.

    The local stability unit is ``well_depth`` times a packing bound on the
    number of well-range neighbours (``2*ceil((L-R)/R)`` in 1D).
    """
    R, L, eps = float(core_radius), float(well_range), float(well_depth)
    if not L > R:
        raise ValueError("well_range must exceed core_radius")
    c0 = eps * _well_neighbours(dimension, R, L) if eps > 0 else 0.0
    tail = (TailPiece(R, L, "constant", (-eps,)),) if eps != 0 else ()
    return PairPotential(dimension, R, tail, c0, label=f"square_well(d={dimension})")


def kac_exponential(core_radius: float, alpha: float, gamma: float) -> PairPotential:
    """1D hard rods with the attractive tail ``-alpha*gamma*exp(-gamma*r)/2``.

    Hard-core-admissible neighbours on one side sit at distances ``>= n*R``,
    so the geometric series gives ``C0 = alpha*gamma*q/(1-q)`` with
    ``q = exp(-gamma*R)``.
    """
    R = float(core_radius)
    if alpha < 0 or gamma <= 0:
        raise ValueError("kac_exponential needs alpha >= 0 and gamma > 0")
    q = math.exp(-gamma * R)
    c0 = alpha * gamma * q / (1.0 - q)
    tail = (TailPiece(R, math.inf, "exponential", (-alpha * gamma / 2.0, gamma)),) if alpha > 0 else ()
    return PairPotential(1, R, tail, c0 if alpha > 0 else 0.0, label="kac_exponential")


def tabulated(dimension: int, core_radius: float, r_nodes, phi_nodes, local_stability_unit=None) -> PairPotential:
    """Linearly interpolated tail on ``[r_nodes[0], r_nodes[-1])``, zero beyond.

    Attractive tables need an explicit ``local_stability_unit``.
    """
    rs = tuple(float(x) for x in r_nodes)
    ps = tuple(float(x) for x in phi_nodes)
    if rs[0] < core_radius:
        raise ValueError("table must start at or beyond the core radius")
    piece = TailPiece(rs[0], rs[-1], "table", (rs, ps))
    if min(ps) < 0 and local_stability_unit is None:
        raise ValueError("attractive tabulated potential requires local_stability_unit")
    return PairPotential(dimension, core_radius, (piece,), float(local_stability_unit or 0.0), label="tabulated")


def builtin(kind: str, **params) -> PairPotential:
    """Construct a built-in potential by name."""
    kind = kind.lower()
    if kind in ("hard_sphere", "hard_rod", "hard_core"):
        return hard_sphere(int(params.get("dimension", 1)), float(params.get("core_radius", 1.0)))
    if kind == "square_well":
        return square_well(
            int(params.get("dimension", 1)),
            float(params.get("core_radius", 1.0)),
            float(params["well_range"]),
            float(params["well_depth"]),
        )
    if kind in ("kac_exponential", "kac"):
        if int(params.get("dimension", 1)) != 1:
            raise ValueError("kac_exponential is one-dimensional")
        return kac_exponential(
            float(params.get("core_radius", 1.0)),
            float(params.get("kac_alpha", params.get("alpha", 1.0))),
            float(params.get("kac_gamma", params.get("gamma", 1.0))),
        )
    if kind == "tabulated":
        table = params.get("table")
        if table is None:
            table = np.loadtxt(params["table_file"], ndmin=2)
        table = np.asarray(table, dtype=float)
        return tabulated(
            int(params.get("dimension", 1)),
            float(params.get("core_radius", 1.0)),
            table[:, 0],
            table[:, 1],
            params.get("local_stability_unit"),
        )
    raise ValueError(f"unknown potential kind {kind!r}")


# --------------------------------------------------------------------------
# config files: ``key = value`` lines, '#' comments, optional quotes


def _coerce(text: str):
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'":
        return text[1:-1]
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def parse_config(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = _coerce(value)
    return out


def load_potential(path) -> PairPotential:
    """Read a potential declaration (``kind``, ``dimension``, ``core_radius``, ...)."""
    path = Path(path)
    try:
        cfg = parse_config(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    if "kind" not in cfg:
        raise ConfigError(f"{path}: missing 'kind'")
    if "table_file" in cfg:
        cfg["table_file"] = str(path.parent / str(cfg["table_file"]))
    kind = str(cfg.pop("kind"))
    try:
        pot = builtin(kind, **cfg)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return pot
