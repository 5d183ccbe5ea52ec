"""Oscillator parameters and the quantum-to-classical energy matching."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class OscillatorParams:
    """Physical constants of a one-dimensional harmonic oscillator.

    ``alpha = mass * omega / hbar`` is recomputed on access so it can never
    drift away from the three inputs.
    """

    mass: float = 1.0
    omega: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("mass", "omega", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def alpha(self) -> float:
        return self.mass * self.omega / self.hbar

    @property
    def length(self) -> float:
        """Oscillator length sqrt(hbar / (m omega))."""
        return math.sqrt(self.hbar / (self.mass * self.omega))

    @property
    def momentum_scale(self) -> float:
        """sqrt(m omega hbar), the momentum-space counterpart of ``length``."""
        return math.sqrt(self.mass * self.omega * self.hbar)


@dataclass(frozen=True)
class QuantumLevel:
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise ValueError(f"quantum number must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class EnergyMatch:
    """Classical orbit carrying the same energy as level ``n``.

    Attributes
    ----------
    n : int
        Quantum number.
    bigN : float
        n + 1/2, the index appearing in the Bessel asymptotic of L_n.
    x0, p0 : float
        Classical turning point and maximum momentum.
    action_x, action_p : float
        pi m omega x0**2 and pi p0**2 / (m omega); both equal (2n+1) pi hbar.
    energy : float
        hbar omega (n + 1/2).
    """

    n: int
    bigN: float
    x0: float
    p0: float
    action_x: float
    action_p: float
    energy: float

    @property
    def action(self) -> float:
        return self.action_x


def energy_match(params: OscillatorParams, level: QuantumLevel | int) -> EnergyMatch:
    """Match level ``n`` to the classical orbit of energy hbar*omega*(n + 1/2).

    The amplitude follows from (1/2) m omega**2 x0**2 = hbar omega (n + 1/2),
    i.e. x0**2 = (2n + 1) hbar / (m omega), so that 2 sqrt(N) u = p x0 / hbar
    with u = p / sqrt(2 m omega hbar).
    """
    if not isinstance(level, QuantumLevel):
        level = QuantumLevel(level)
    n = level.n
    m, w, hbar = params.mass, params.omega, params.hbar
    two_n1 = 2 * n + 1
    x0 = math.sqrt(two_n1 * hbar / (m * w))
    p0 = m * w * x0
    return EnergyMatch(
        n=n,
        bigN=n + 0.5,
        x0=x0,
        p0=p0,
        # both actions reduce to (2n+1) pi hbar; computed in that form so the
        # equality holds to the last bit
        action_x=two_n1 * math.pi * hbar,
        action_p=two_n1 * math.pi * hbar,
        energy=hbar * w * (n + 0.5),
    )


def hbar_over_action(match: EnergyMatch, params: OscillatorParams) -> float:
    """Small parameter hbar / S = 1 / ((2n + 1) pi)."""
    return params.hbar / match.action_x
