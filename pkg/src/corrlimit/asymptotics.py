"""Bessel asymptotics of the Fourier coefficients and the hbar/S corrections.

The scaled Laguerre function ``F(u**2) = exp(-u**2/2) L_n(u**2)`` obeys the
Volterra equation

    F(u^2) = J0(k u) - (pi/2) int_0^u t^3 F(t^2)
             [J0(k u) Y0(k t) - J0(k t) Y0(k u)] dt,     k = 2 sqrt(n + 1/2),

whose leading term J0(k u) becomes, under energy matching, the classical
coefficient J0(p x0 / hbar).  Transforming the first iterated term back to
position space produces the correction integral

    i1(r) = int dalpha exp(i alpha r) g(alpha),
    g(alpha) = int_0^alpha b^3 J0(b) [J0(alpha) Y0(b) - J0(b) Y0(alpha)] db,

and the corrected density

    rho(x) ~ 1/(pi sqrt(x0^2 - x^2))
             + (1/(2 pi x0)) (-pi/32) (hbar/S)^2 i1(x/x0).

``g`` grows like alpha**(5/2) while oscillating with odd multiples of the
unit frequency, so the outer integral only exists as a regularised
(Abel-type) limit.  It is evaluated over panels of width pi: with
``g(alpha + pi) ~ -g(alpha)`` consecutive panel sums of
``exp(i alpha r) g(alpha)`` differ by the fixed factor
``z = -exp(i pi r)`` times a slowly varying amplitude.  The weighted
iterated average ``S_k <- (S_{k+1} - z S_k) / (1 - z)`` of the partial sums
removes one power of that amplitude per level (for r = 0 it is the plain
Euler average of an alternating series).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .densities import DensityProfile, cpd_momentum, cpd_position, default_grid
from .oscillator import (
    EnergyMatch,
    OscillatorParams,
    QuantumLevel,
    energy_match,
    hbar_over_action,
)
from .quadrature import ConvergenceError, QuadSpec, gauss_legendre, integrate_panels
from .special import bessel_j0, bessel_j0_y0, scaled_laguerre

DEFAULT_QUAD = QuadSpec()

# rounding of g accumulates like a random walk in the partial sums; the
# coefficient is calibrated against the closed form of i1 (with margin)
_ROUNDING_WALK = 128 * np.finfo(float).eps
_NOISE_GAIN = 1.25
_NOISE_GAIN_FLOOR = 1.1
_MIN_LEVELS = 3


@dataclass(frozen=True)
class SzegoArgs:
    """Dimensionless arguments: N = n + 1/2 and u = p / sqrt(2 m omega hbar)."""

    bigN: float
    u: float

    def __post_init__(self):
        n = self.bigN - 0.5
        if n < 0 or abs(n - round(n)) > 1e-9:
            raise ValueError(f"bigN must be n + 1/2 for integer n >= 0, got {self.bigN!r}")
        if not (self.u >= 0 and math.isfinite(self.u)):
            raise ValueError(f"u must be finite and non-negative, got {self.u!r}")

    @property
    def n(self) -> int:
        return int(round(self.bigN - 0.5))

    @property
    def bessel_argument(self) -> float:
        """2 sqrt(N) u, equal to p x0 / hbar under energy matching."""
        return 2.0 * math.sqrt(self.bigN) * self.u

    @classmethod
    def from_momentum(cls, params: OscillatorParams, level: QuantumLevel | int, p: float):
        n = level.n if isinstance(level, QuantumLevel) else QuantumLevel(level).n
        u = abs(p) / math.sqrt(2.0 * params.mass * params.omega * params.hbar)
        return cls(n + 0.5, u)


def szego_leading(args: SzegoArgs) -> float:
    """J0(2 sqrt(N) u)."""
    return bessel_j0(args.bessel_argument)


def szego_iterate(args: SzegoArgs, quad: QuadSpec = DEFAULT_QUAD, kernel: str = "exact") -> float:
    """Right-hand side of the Volterra equation evaluated once.

    ``kernel="exact"`` feeds the exact F = scaled Laguerre into the integral;
    ``kernel="leading"`` feeds J0(2 sqrt(N) t) instead (one Picard step from
    the leading term).  Only ``u <= quad.u_max`` is accepted.
    """
    u = args.u
    if u > quad.u_max:
        raise ValueError(f"u = {u} outside the documented range [0, {quad.u_max}]")
    k = 2.0 * math.sqrt(args.bigN)
    if u == 0.0:
        return 1.0
    j_u, y_u = bessel_j0_y0(k * u)
    n = args.n

    def integrand(t):
        j_t, y_t = bessel_j0_y0(k * t)
        f = scaled_laguerre(n, t * t) if kernel == "exact" else j_t
        return t**3 * f * (j_u * y_t - j_t * y_u)

    if kernel not in ("exact", "leading"):
        raise ValueError("kernel must be 'exact' or 'leading'")
    # one panel per half period of the Bessel factors
    panels = max(1, math.ceil(k * u / math.pi))
    value, _ = integrate_panels(integrand, 0.0, u, quad, panels, name="szego_iterate")
    return j_u - 0.5 * math.pi * value


# ---------------------------------------------------------------------------
# correction integral i1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    error: float
    levels: int
    panels: int


@lru_cache(maxsize=8)
def _g_on_panels(n_panels: int, nodes: int):
    """g(alpha) at Gauss nodes of the panels [k pi, (k+1) pi], k < n_panels.

    The inner integrals A = int b^3 J0 Y0 and B = int b^3 J0^2 are carried
    across panels; inside a panel each outer node gets its own Gauss rule
    from the panel start.  Returns nodes, weights and g, each (n_panels, nodes).
    """
    t, w = gauss_legendre(nodes)
    h = math.pi
    starts = h * np.arange(n_panels)
    outer = starts[:, None] + h * t[None, :]                              # (K, m)
    # inner nodes between panel start and each outer node: (K, m, m)
    beta = starts[:, None, None] + (h * t)[None, :, None] * t[None, None, :]
    wb = (h * t)[None, :, None] * w[None, None, :]
    jb, yb = bessel_j0_y0(beta)
    b3 = beta**3
    a_part = np.sum(wb * b3 * jb * yb, axis=2)
    b_part = np.sum(wb * b3 * jb * jb, axis=2)
    # full-panel integrals equal the partial ones evaluated at the panel end
    jf, yf = bessel_j0_y0(outer)
    f3 = outer**3
    a_full = h * np.sum(w[None, :] * f3 * jf * yf, axis=1)
    b_full = h * np.sum(w[None, :] * f3 * jf * jf, axis=1)
    a_before = np.concatenate(([0.0], np.cumsum(a_full)[:-1]))
    b_before = np.concatenate(([0.0], np.cumsum(b_full)[:-1]))
    g = jf * (a_before[:, None] + a_part) - yf * (b_before[:, None] + b_part)
    weights = np.broadcast_to(h * w, outer.shape)
    for arr in (outer, g):
        arr.setflags(write=False)
    return outer, np.array(weights), g


def _accelerate(partial, z, max_levels):
    """Iterated weighted averages of ``partial``.

    Returns the last and second-to-last element of every level (the second
    column is NaN once a level has a single element).
    """
    seq = np.asarray(partial, dtype=complex)
    last, prev = [seq[-1]], [seq[-2] if seq.size > 1 else np.nan]
    for _ in range(min(max_levels, seq.size - 1)):
        seq = (seq[1:] - z * seq[:-1]) / (1.0 - z)
        last.append(seq[-1])
        prev.append(seq[-2] if seq.size > 1 else np.nan)
    return np.array(last), np.array(prev)


def correction_integral_i1(x_ratio: float, quad: QuadSpec = DEFAULT_QUAD) -> IntegralEstimate:
    """Regularised value of i1(r) for |r| < 1 with an error estimate.

    The outer integrand is even in alpha, so i1 = 2 Re int_0^inf exp(i alpha r) g.

    Error model per level: the change from the previous level plus the
    change from dropping the last panel, maximised over this level and the
    next and doubled, plus a rounding floor.  The floor treats the rounding
    of g (a difference of two terms each about alpha**3 / sqrt(alpha)) as a
    random walk through the partial sums, grown by the accelerator's noise
    gain.  The level with the smallest total is returned.  Raises
    :class:`ConvergenceError` when that total exceeds ``max(atol, rtol |i1|)``.
    """
    r = float(x_ratio)
    if not abs(r) < 1.0:
        raise ValueError("x_ratio must lie strictly inside (-1, 1)")
    q = quad.panel_multiple
    groups = max(1, math.ceil(quad.alpha_max / quad.panel_width))
    if groups < _MIN_LEVELS + 3:
        raise ConvergenceError("too few panels for acceleration; raise alpha_max",
                               math.nan, math.inf, "correction_integral_i1")
    alpha, w, g = _g_on_panels(groups * q, quad.nodes)
    base_sums = np.sum(w * np.exp(1j * r * alpha) * g, axis=1)
    partial = np.cumsum(base_sums.reshape(groups, q).sum(axis=1))
    z = (-1.0) ** q * np.exp(1j * q * math.pi * r)
    last, prev = _accelerate(partial, z, min(quad.max_levels, groups - 2))
    last, prev = 2.0 * last.real, 2.0 * prev.real
    trunc = np.full(last.size, np.inf)
    trunc[1:] = np.abs(np.diff(last)) + np.abs(last[1:] - prev[1:])
    gain = max(_NOISE_GAIN_FLOOR, _NOISE_GAIN * math.sqrt(2.0) / abs(1.0 - z))
    floor = _ROUNDING_WALK * np.max(np.abs(partial)) * math.sqrt(groups)
    total = np.full(last.size, np.inf)
    for b in range(_MIN_LEVELS, last.size - 1):
        total[b] = 2.0 * max(trunc[b], trunc[b + 1]) + floor * gain**b
    best = int(np.argmin(total))
    value, error = float(last[best]), float(total[best])
    if not error <= max(quad.atol, quad.rtol * abs(value)):
        raise ConvergenceError(
            f"i1({r}) acceleration stalled: error estimate {error:.3g} for value {value:.12g}",
            value, error, "correction_integral_i1",
        )
    return IntegralEstimate(value, error, best, groups)


def i1_values(ratios, quad: QuadSpec = DEFAULT_QUAD) -> np.ndarray:
    ratios = np.atleast_1d(np.asarray(ratios, dtype=float))
    return np.array([correction_integral_i1(r, quad).value for r in ratios])


# ---------------------------------------------------------------------------
# corrected densities
# ---------------------------------------------------------------------------

def correction_prefactor(match: EnergyMatch, params: OscillatorParams, k: int = 1) -> float:
    """(-pi/32)**k (hbar/S)**(2k)."""
    return (-math.pi / 32.0) ** k * hbar_over_action(match, params) ** (2 * k)


def _check_kmax(k_max):
    if k_max not in (0, 1):
        raise ValueError("only k_max in {0, 1} is available")


def _corrected(classical_fn, amplitude, match, params, v, k_max, quad):
    _check_kmax(k_max)
    v = np.asarray(v, dtype=float)
    if np.any(np.abs(v) >= amplitude):
        raise ValueError("corrected density is only defined inside the classical region")
    base = classical_fn(match, v)
    if k_max == 0:
        return base
    i1 = i1_values(np.ravel(v) / amplitude, quad).reshape(v.shape)
    out = base + correction_prefactor(match, params) * i1 / (2.0 * math.pi * amplitude)
    return out if out.ndim else float(out)


def corrected_density(params: OscillatorParams, level: QuantumLevel | int,
                      match: Optional[EnergyMatch], x, k_max: int = 1,
                      quad: QuadSpec = DEFAULT_QUAD):
    """Classical arcsine density plus the k <= k_max correction terms, |x| < x0."""
    match = match or energy_match(params, level)
    return _corrected(cpd_position, match.x0, match, params, x, k_max, quad)


def corrected_density_momentum(params: OscillatorParams, level: QuantumLevel | int,
                               match: Optional[EnergyMatch], p, k_max: int = 1,
                               quad: QuadSpec = DEFAULT_QUAD):
    """Momentum-space counterpart with p0 and the same dimensionless i1(p/p0)."""
    match = match or energy_match(params, level)
    return _corrected(cpd_momentum, match.p0, match, params, p, k_max, quad)


def relative_correction(params: OscillatorParams, level: QuantumLevel | int, x_ratio: float,
                        quad: QuadSpec = DEFAULT_QUAD) -> float:
    """k = 1 term divided by the classical term at the same x / x0.

    Dimensionless and independent of the space; equals
    -(pi/64) (hbar/S)**2 sqrt(1 - r**2) i1(r).
    """
    match = energy_match(params, level)
    r = float(x_ratio)
    i1 = correction_integral_i1(r, quad).value
    return correction_prefactor(match, params) * i1 * math.sqrt(1.0 - r * r) / 2.0


@dataclass(frozen=True)
class CorrectionSeries:
    """Sampled terms of the hbar/S expansion on a grid of x / x0.

    ``terms[k]`` holds i_k on ``ratios`` (``terms[0]`` is the classical
    profile in the same normalisation, 2 / sqrt(1 - r**2)); ``prefactors[k]``
    is (-pi/32)**k (hbar/S)**(2k).
    """

    match: EnergyMatch
    k_max: int
    ratios: np.ndarray
    terms: tuple
    prefactors: np.ndarray

    def scaled_density(self) -> np.ndarray:
        """x0 * rho on ``ratios``: sum_k prefactor_k * terms_k / (2 pi)."""
        total = np.zeros_like(self.ratios)
        for pref, term in zip(self.prefactors, self.terms):
            total = total + pref * term
        return total / (2.0 * math.pi)


def correction_series(params: OscillatorParams, level: QuantumLevel | int, ratios,
                      k_max: int = 1, quad: QuadSpec = DEFAULT_QUAD) -> CorrectionSeries:
    _check_kmax(k_max)
    match = energy_match(params, level)
    ratios = np.atleast_1d(np.asarray(ratios, dtype=float))
    if np.any(np.abs(ratios) >= 1):
        raise ValueError("ratios must lie inside (-1, 1)")
    terms = [2.0 / np.sqrt(1.0 - ratios**2)]
    prefactors = [1.0]
    if k_max >= 1:
        terms.append(i1_values(ratios, quad))
        prefactors.append(correction_prefactor(match, params, 1))
    return CorrectionSeries(match, k_max, ratios, tuple(terms), np.array(prefactors))


def corrected_profile(params: OscillatorParams, level: QuantumLevel | int, space="position",
                      grid=None, k_max: int = 1, quad: QuadSpec = DEFAULT_QUAD,
                      inner_fraction: float = 0.8) -> DensityProfile:
    """Corrected density sampled inside the classical region.

    The default grid keeps the points of the standard grid with
    ``|v| <= inner_fraction * turning point``.
    """
    if not isinstance(level, QuantumLevel):
        level = QuantumLevel(level)
    match = energy_match(params, level)
    amp = match.x0 if space == "position" else match.p0
    if grid is None:
        full = default_grid(params, match, space)
        grid = full[np.abs(full) <= inner_fraction * amp]
    fn = corrected_density if space == "position" else corrected_density_momentum
    values = fn(params, level, match, grid, k_max, quad)
    return DensityProfile(space, "asymptotic_corrected", grid, np.atleast_1d(values),
                          params, level, match)
