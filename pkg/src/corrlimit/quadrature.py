"""Quadrature controls and the small Gauss-Legendre toolkit behind them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class ConvergenceError(RuntimeError):
    """A quadrature or acceleration step missed its tolerance.

    ``estimate`` holds the best value reached and ``error`` its error
    estimate, so callers can decide whether to use it anyway.
    """

    def __init__(self, message, estimate=None, error=None, operation=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.operation = operation


@dataclass(frozen=True)
class QuadSpec:
    """Quadrature controls shared by the oscillatory integrals.

    Parameters
    ----------
    alpha_max : float
        Truncation of the outer correction integral (dimensionless).
    panel_width : float
        Panel length for the outer integral; must be a multiple of pi so
        that consecutive panel sums differ by a fixed phase.
    nodes : int
        Gauss-Legendre points per panel.
    rtol, atol : float
        Acceptance tolerance for accelerated and adaptive results.
    max_levels : int
        Cap on sequence-acceleration levels.
    u_max : float
        Upper end of the documented validity range for the Szego iterate.
    max_refinements : int
        Panel-doubling steps allowed in adaptive panel quadrature.
    """

    alpha_max: float = 200.0
    panel_width: float = math.pi
    nodes: int = 40
    rtol: float = 1e-5
    atol: float = 1e-12
    max_levels: int = 40
    u_max: float = 3.0
    max_refinements: int = 8

    def __post_init__(self):
        if not self.alpha_max > 0:
            raise ValueError("alpha_max must be positive")
        q = self.panel_width / math.pi
        if not (q >= 1 and abs(q - round(q)) < 1e-12):
            raise ValueError("panel_width must be a positive integer multiple of pi")
        if self.nodes < 2:
            raise ValueError("need at least two nodes per panel")
        if not (self.rtol > 0 and self.atol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_levels < 1 or self.max_refinements < 0:
            raise ValueError("max_levels >= 1 and max_refinements >= 0 required")
        if not self.u_max > 0:
            raise ValueError("u_max must be positive")

    @property
    def panel_multiple(self) -> int:
        return int(round(self.panel_width / math.pi))


@lru_cache(maxsize=32)
def gauss_legendre(m: int):
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (x + 1.0), 0.5 * w


def panel_rule(a: float, b: float, panels: int, nodes: int):
    """Composite Gauss-Legendre nodes/weights for [a, b] split evenly."""
    t, w = gauss_legendre(nodes)
    edges = np.linspace(a, b, panels + 1)
    h = np.diff(edges)
    x = edges[:-1, None] + h[:, None] * t[None, :]
    return x.ravel(), (h[:, None] * w[None, :]).ravel()


def integrate_panels(f, a: float, b: float, quad: QuadSpec, panels: int = 1, name="integral"):
    """Integrate a vectorised ``f`` over [a, b] by panel doubling.

    Returns ``(value, error)``; raises :class:`ConvergenceError` if the last
    two refinements still differ by more than the tolerance.
    """
    if b == a:
        return 0.0, 0.0
    x, w = panel_rule(a, b, panels, quad.nodes)
    prev = float(np.dot(w, f(x)))
    err = math.inf
    for _ in range(quad.max_refinements):
        panels *= 2
        x, w = panel_rule(a, b, panels, quad.nodes)
        cur = float(np.dot(w, f(x)))
        err = abs(cur - prev)
        if err <= max(quad.atol, quad.rtol * abs(cur)) * 1e-2 or err == 0.0:
            return cur, err
        prev = cur
    if err <= max(quad.atol, quad.rtol * abs(prev)):
        return prev, err
    raise ConvergenceError(
        f"{name} did not converge: error estimate {err:.3g}", prev, err, name
    )
