"""Quantum and classical probability densities in position and momentum space."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .oscillator import EnergyMatch, OscillatorParams, QuantumLevel, energy_match
from .special import oscillator_density

SPACES = ("position", "momentum")
KINDS = ("quantum", "classical", "asymptotic_corrected")

DEFAULT_POINTS = 4096
DEFAULT_SPAN = 1.2
# extra room beyond the turning point, in oscillator lengths; keeps the
# evanescent tail inside the grid for small n
TAIL_PAD = 8.0


@dataclass(frozen=True)
class DensityProfile:
    """A density sampled on a 1-D grid."""

    space: str
    kind: str
    grid: np.ndarray
    values: np.ndarray
    params: OscillatorParams
    level: Optional[QuantumLevel] = None
    match: Optional[EnergyMatch] = field(default=None)

    def __post_init__(self):
        if self.space not in SPACES:
            raise ValueError(f"space must be one of {SPACES}")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-D arrays of equal length")
        if grid.size < 2 or np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.kind != "asymptotic_corrected" and np.any(values < 0):
            raise ValueError(f"{self.kind} density has negative values")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def turning_point(self) -> Optional[float]:
        if self.match is None:
            return None
        return self.match.x0 if self.space == "position" else self.match.p0

    def integral(self) -> float:
        return float(np.trapezoid(self.values, self.grid))

    def replace_values(self, values, kind=None) -> "DensityProfile":
        return DensityProfile(
            self.space, kind or self.kind, self.grid, values, self.params, self.level, self.match
        )


def qpd_position(params: OscillatorParams, level: QuantumLevel | int, x):
    """|psi_n(x)|**2 = sqrt(alpha) psi_n(sqrt(alpha) x)**2."""
    n = level.n if isinstance(level, QuantumLevel) else QuantumLevel(level).n
    # 1/length rather than sqrt(alpha) keeps this bit-identical to the
    # momentum density when m = omega = 1
    inv = 1.0 / params.length
    return inv * oscillator_density(n, inv * np.asarray(x, dtype=float))


def qpd_momentum(params: OscillatorParams, level: QuantumLevel | int, p):
    """Momentum density (1/sqrt(m w hbar)) psi_n(p / sqrt(m w hbar))**2."""
    n = level.n if isinstance(level, QuantumLevel) else QuantumLevel(level).n
    inv = 1.0 / params.momentum_scale
    return inv * oscillator_density(n, inv * np.asarray(p, dtype=float))


def _arcsine(amplitude, x):
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    if np.any(ax == amplitude):
        raise ValueError("classical density is singular at the turning point")
    inside = ax < amplitude
    gap = np.where(inside, amplitude * amplitude - x * x, 1.0)
    out = np.where(inside, 1.0 / (math.pi * np.sqrt(gap)), 0.0)
    return out if out.ndim else float(out)


def cpd_position(match: EnergyMatch, x):
    """Arcsine law 1/(pi sqrt(x0**2 - x**2)) inside (-x0, x0), zero outside."""
    return _arcsine(match.x0, x)


def cpd_momentum(match: EnergyMatch, p):
    return _arcsine(match.p0, p)


def default_grid(params: OscillatorParams, match: EnergyMatch, space="position",
                 points=DEFAULT_POINTS, span=DEFAULT_SPAN):
    """Uniform symmetric grid covering the classical region and the quantum tail.

    Half-width is ``max(span * x0, x0 + TAIL_PAD * length)``; any node that
    lands exactly on a turning point is nudged inward so classical profiles
    stay finite.
    """
    if points < 2:
        raise ValueError("need at least two grid points")
    if space == "position":
        amp, unit = match.x0, params.length
    elif space == "momentum":
        amp, unit = match.p0, params.momentum_scale
    else:
        raise ValueError(f"space must be one of {SPACES}")
    half = max(span * amp, amp + TAIL_PAD * unit)
    grid = np.linspace(-half, half, points)
    hit = np.abs(grid) == amp
    if np.any(hit):
        grid[hit] = np.nextafter(grid[hit], 0.0)
    return grid


def density_profile(params: OscillatorParams, level: QuantumLevel | int, kind="quantum",
                    space="position", grid=None) -> DensityProfile:
    """Sample a quantum or classical density on ``grid`` (default grid if None)."""
    if not isinstance(level, QuantumLevel):
        level = QuantumLevel(level)
    match = energy_match(params, level)
    if grid is None:
        grid = default_grid(params, match, space)
    grid = np.asarray(grid, dtype=float)
    if kind == "quantum":
        fn = qpd_position if space == "position" else qpd_momentum
        values = fn(params, level, grid)
    elif kind == "classical":
        fn = cpd_position if space == "position" else cpd_momentum
        values = fn(match, grid)
    else:
        raise ValueError("density_profile builds 'quantum' or 'classical' profiles; "
                         "see asymptotics.corrected_profile for the corrected kind")
    return DensityProfile(space, kind, grid, np.atleast_1d(values), params, level, match)
