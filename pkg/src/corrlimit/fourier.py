"""Fourier coefficients (characteristic functions) of the oscillator densities.

Convention: forward ``f(p) = int rho(x) exp(-i p x / hbar) dx`` and inverse
``rho(x) = (1 / (2 pi hbar)) int f(p) exp(i p x / hbar) dp``, so every
normalised density has ``f(0) = 1``.  All densities here are even, so the
transforms are taken in cosine form and the coefficients are real.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import simpson

from .densities import DensityProfile
from .oscillator import EnergyMatch, OscillatorParams, QuantumLevel, energy_match
from .special import bessel_j0, scaled_laguerre

FOURIER_SPACES = ("position_conjugate", "momentum_conjugate")
FOURIER_KINDS = ("quantum_analytic", "classical", "szego_asymptotic", "numeric_oracle")

TAIL_MASS_LIMIT = 1e-12


@dataclass(frozen=True)
class FourierProfile:
    """Fourier coefficients sampled over the conjugate variable.

    ``position_conjugate`` profiles are coefficients of a position density
    (grid in momentum units); ``momentum_conjugate`` the other way round.
    """

    space: str
    kind: str
    grid: np.ndarray
    values: np.ndarray
    params: OscillatorParams
    level: Optional[QuantumLevel] = None

    def __post_init__(self):
        if self.space not in FOURIER_SPACES:
            raise ValueError(f"space must be one of {FOURIER_SPACES}")
        if self.kind not in FOURIER_KINDS:
            raise ValueError(f"kind must be one of {FOURIER_KINDS}")
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values)
        if np.iscomplexobj(values):
            raise ValueError("coefficients of even densities must be real")
        values = values.astype(float)
        if grid.shape != values.shape or grid.ndim != 1:
            raise ValueError("grid and values must be 1-D arrays of equal length")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)


def _n(level):
    return level.n if isinstance(level, QuantumLevel) else QuantumLevel(level).n


def quantum_fourier_coeff(params: OscillatorParams, level: QuantumLevel | int, p):
    """exp(-p**2/(4 m w hbar)) L_n(p**2/(2 m w hbar)), the transform of |psi_n(x)|**2."""
    p = np.asarray(p, dtype=float)
    u2 = p * p / (2.0 * params.mass * params.omega * params.hbar)
    return scaled_laguerre(_n(level), u2)


def quantum_fourier_coeff_momentum(params: OscillatorParams, level: QuantumLevel | int, x):
    """Transform of the momentum density; ``x`` is the conjugate position."""
    x = np.asarray(x, dtype=float)
    u2 = x * x * params.mass * params.omega / (2.0 * params.hbar)
    return scaled_laguerre(_n(level), u2)


def classical_fourier_coeff(match: EnergyMatch, params: OscillatorParams, p):
    """J0(p x0 / hbar), the transform of the arcsine law on (-x0, x0)."""
    return bessel_j0(np.asarray(p, dtype=float) * (match.x0 / params.hbar))


def classical_fourier_coeff_momentum(match: EnergyMatch, params: OscillatorParams, x):
    return bessel_j0(np.asarray(x, dtype=float) * (match.p0 / params.hbar))


def _arcsine_transform(amplitude, q, hbar):
    # (1/pi) int_{-pi/2}^{pi/2} cos(c sin t) dt equals the average over a full
    # period, where the trapezoid rule converges geometrically once the
    # point count exceeds c
    c = np.abs(q) * amplitude / hbar
    m = int(np.max(c, initial=0.0)) + 64
    theta = 2.0 * math.pi * np.arange(m) / m
    return np.mean(np.cos(c[:, None] * np.sin(theta)[None, :]), axis=1)


def numeric_fourier_oracle(profile: DensityProfile, q_grid) -> FourierProfile:
    """Direct cosine transform of a sampled density.

    Quantum (and corrected) profiles use composite Simpson on the stored
    grid; classical profiles use the substitution x = x0 sin(theta), which
    removes the turning-point singularity.  Warns when the grid misses more
    than ``TAIL_MASS_LIMIT`` of the probability.
    """
    q = np.atleast_1d(np.asarray(q_grid, dtype=float))
    hbar = profile.params.hbar
    space = "position_conjugate" if profile.space == "position" else "momentum_conjugate"
    if profile.kind == "classical":
        if profile.match is None:
            raise ValueError("classical profile needs its EnergyMatch")
        values = _arcsine_transform(profile.turning_point, q, hbar)
    else:
        x, rho = profile.grid, profile.values
        mass = simpson(rho, x=x)
        if abs(1.0 - mass) > TAIL_MASS_LIMIT:
            warnings.warn(
                f"density mass on grid is {mass:.15g}; tail outside the grid exceeds "
                f"{TAIL_MASS_LIMIT:g}", RuntimeWarning, stacklevel=2,
            )
        values = np.array([simpson(rho * np.cos(qq * x / hbar), x=x) for qq in q])
    return FourierProfile(space, "numeric_oracle", q, values, profile.params, profile.level)


def fourier_profile(params: OscillatorParams, level: QuantumLevel | int, kind: str, grid,
                    space="position_conjugate") -> FourierProfile:
    """Sample the closed-form quantum or classical coefficients on ``grid``."""
    if not isinstance(level, QuantumLevel):
        level = QuantumLevel(level)
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    match = energy_match(params, level)
    position = space == "position_conjugate"
    if kind == "quantum_analytic":
        fn = quantum_fourier_coeff if position else quantum_fourier_coeff_momentum
        values = fn(params, level, grid)
    elif kind == "classical":
        fn = classical_fourier_coeff if position else classical_fourier_coeff_momentum
        values = fn(match, params, grid)
    elif kind == "szego_asymptotic":
        from .asymptotics import SzegoArgs, szego_iterate

        if not position:
            raise ValueError("szego_asymptotic profiles are built in position_conjugate space")
        values = np.array([szego_iterate(SzegoArgs.from_momentum(params, level, p)) for p in grid])
    else:
        raise ValueError(f"unsupported kind {kind!r}")
    return FourierProfile(space, kind, grid, np.atleast_1d(values), params, level)
