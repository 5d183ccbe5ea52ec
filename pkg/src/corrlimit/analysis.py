"""Coarse-graining, distances, moments and convergence sweeps."""

from __future__ import annotations

import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import simpson

from .asymptotics import DEFAULT_QUAD, correction_integral_i1, relative_correction
from .densities import DensityProfile, default_grid, density_profile
from .fourier import quantum_fourier_coeff
from .oscillator import OscillatorParams, QuantumLevel, energy_match
from .quadrature import QuadSpec
from .special import bessel_j0

TAIL_WARN = 1e-9
DOMAIN_FRACTION = 0.9
SINKHORN_TOL = 1e-14
SINKHORN_MAX_ITER = 500


@dataclass(frozen=True)
class CoarseGrainSpec:
    """Moving-average window.

    The rectangular window is truncated at the grid edges; weights are then
    balanced so that constants stay constant and the trapezoid integral is
    unchanged (see :func:`coarse_grain`).
    """

    window_width: float
    window_shape: str = "rectangular"
    boundary: str = "shrink"

    def __post_init__(self):
        if not (self.window_width > 0 and math.isfinite(self.window_width)):
            raise ValueError("window_width must be positive and finite")
        if self.window_shape != "rectangular":
            raise ValueError("only the rectangular window is available")
        if self.boundary != "shrink":
            raise ValueError("only the 'shrink' boundary is available")


def default_window(params: OscillatorParams, level: QuantumLevel | int, space="position") -> float:
    """pi * x0 / sqrt(2n + 1), i.e. pi oscillator lengths (momentum: pi sqrt(m w hbar)).

    Wide compared with one fringe of |psi_n|**2 (about pi x0 / (2n + 1))
    yet a shrinking fraction of the classical region as n grows.
    """
    match = energy_match(params, level)
    amp = match.x0 if space == "position" else match.p0
    return math.pi * amp / math.sqrt(2 * match.n + 1)


def _trapezoid_weights(x):
    dx = np.diff(x)
    w = np.zeros_like(x)
    w[:-1] += 0.5 * dx
    w[1:] += 0.5 * dx
    return w


def coarse_grain(profile: DensityProfile, spec: CoarseGrainSpec) -> DensityProfile:
    """Local average over ``|x - x'| <= W/2`` on the profile's own grid.

    The averaging matrix is ``K_ij = d_i M_ij d_j w_j`` with M the 0/1 box,
    w the trapezoid weights and d chosen (symmetric Sinkhorn balancing) so
    that every row of K sums to one.  Symmetry of M then also makes
    ``sum_i w_i K_ij = w_j``, so the trapezoid integral is preserved.  Away
    from the edges d is constant and K is the plain moving average.
    """
    x = profile.grid
    spacing = float(np.max(np.diff(x)))
    if not spec.window_width > spacing:
        raise ValueError(
            f"window width {spec.window_width:g} must exceed the grid spacing {spacing:g}"
        )
    half = 0.5 * spec.window_width
    lo = np.searchsorted(x, x - half, side="left")
    hi = np.searchsorted(x, x + half, side="right")

    def box(v):
        c = np.concatenate(([0.0], np.cumsum(v)))
        return c[hi] - c[lo]

    w = _trapezoid_weights(x)
    d = 1.0 / np.sqrt(box(w))
    for _ in range(SINKHORN_MAX_ITER):
        row = d * box(d * w)
        if np.max(np.abs(row - 1.0)) < SINKHORN_TOL:
            break
        d = d / np.sqrt(row)
    out = d * box(d * w * profile.values)
    return profile.replace_values(out)


def _domain(profile, domain):
    if domain is not None:
        a, b = domain
        return float(a), float(b)
    amp = profile.turning_point
    if amp is None:
        raise ValueError("domain required when the profile carries no EnergyMatch")
    return -DOMAIN_FRACTION * amp, DOMAIN_FRACTION * amp


def l1_distance(a: DensityProfile, b: DensityProfile, domain=None) -> float:
    """Trapezoid integral of |a - b| over ``domain`` (default 0.9 of the turning point)."""
    if a.grid.shape != b.grid.shape or not np.array_equal(a.grid, b.grid):
        raise ValueError("profiles must share the same grid")
    if a.space != b.space:
        raise ValueError("profiles live in different spaces")
    lo, hi = _domain(a, domain)
    if not lo < hi:
        raise ValueError("empty domain")
    mask = (a.grid >= lo) & (a.grid <= hi)
    if np.count_nonzero(mask) < 2:
        raise ValueError("domain holds fewer than two grid points")
    diff = np.abs(a.values[mask] - b.values[mask])
    return float(np.trapezoid(diff, a.grid[mask]))


def moment(profile: DensityProfile, order: int) -> float:
    """int v**order rho(v) dv.

    Classical profiles go through v = v0 sin(theta) and an equispaced rule
    over a full period (exact for trigonometric polynomials of the degree
    involved).  Other kinds use composite Simpson on the grid and warn when
    the grid holds less than ``1 - 1e-9`` of the probability.
    """
    if isinstance(order, bool) or int(order) != order or order < 0:
        raise ValueError("order must be a non-negative integer")
    order = int(order)
    if profile.kind == "classical":
        amp = profile.turning_point
        if amp is None:
            raise ValueError("classical profile needs its EnergyMatch")
        m = order + 64
        theta = 2.0 * math.pi * np.arange(m) / m
        return float(np.mean((amp * np.sin(theta)) ** order))
    x, rho = profile.grid, profile.values
    mass = simpson(rho, x=x)
    if abs(1.0 - mass) > TAIL_WARN:
        warnings.warn(f"grid holds probability {mass:.12g}; moment may be biased",
                      RuntimeWarning, stacklevel=2)
    return float(simpson(x**order * rho, x=x))


@dataclass(frozen=True)
class MomentSummary:
    n: int
    x2_quantum: float
    p2_quantum: float
    energy_quantum: float
    x2_classical: float
    p2_classical: float
    energy_classical: float


def energy_moments(params: OscillatorParams, level: QuantumLevel | int, points=None) -> MomentSummary:
    """Second moments and <H> = hbar w (<xi**2>_x + <xi**2>_p) / 2 for both densities."""
    match = energy_match(params, level)
    kw = {} if points is None else {"points": points}
    out = {}
    for kind in ("quantum", "classical"):
        mx = moment(density_profile(params, level, kind, "position",
                                    default_grid(params, match, "position", **kw)), 2)
        mp = moment(density_profile(params, level, kind, "momentum",
                                    default_grid(params, match, "momentum", **kw)), 2)
        xi2 = mx / params.length**2 + mp / params.momentum_scale**2
        out[kind] = (mx, mp, 0.5 * params.hbar * params.omega * xi2)
    return MomentSummary(match.n, *out["quantum"], *out["classical"])


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

COLUMNS = ("l1_x", "l1_p", "fourier_resid", "corr_mag")


@dataclass(frozen=True)
class ConvergenceReport:
    """One row per n; NaN marks a row whose sub-computation failed.

    ``fitted_exponents`` maps a column name to the slope of log(column)
    against log(2n + 1); empty when fewer than two usable rows exist.
    """

    n_values: np.ndarray
    l1_distances: np.ndarray
    l1_distances_momentum: np.ndarray
    fourier_residuals: np.ndarray
    correction_magnitudes: np.ndarray
    fitted_exponents: dict
    failures: tuple
    runtimes: np.ndarray = field(compare=False)

    def column(self, name: str) -> np.ndarray:
        return {
            "l1_x": self.l1_distances,
            "l1_p": self.l1_distances_momentum,
            "fourier_resid": self.fourier_residuals,
            "corr_mag": self.correction_magnitudes,
        }[name]

    def rows(self):
        for i, n in enumerate(self.n_values):
            yield {"n": int(n), **{c: float(self.column(c)[i]) for c in COLUMNS}}


def fit_power_law(n_values, values) -> Optional[float]:
    """Slope of log|values| against log(2n + 1); None below two finite points."""
    n = np.asarray(n_values, dtype=float)
    v = np.asarray(values, dtype=float)
    ok = np.isfinite(v) & (v > 0)
    if np.count_nonzero(ok) < 2:
        return None
    slope, _ = np.polyfit(np.log(2.0 * n[ok] + 1.0), np.log(v[ok]), 1)
    return float(slope)


def _threads(requested):
    if requested is None:
        env = os.environ.get("CORRLIMIT_THREADS", "0")
        try:
            requested = int(env)
        except ValueError:
            raise ValueError(f"CORRLIMIT_THREADS must be an integer, got {env!r}") from None
    if requested < 0:
        raise ValueError("thread count must be >= 0")
    return requested or (os.cpu_count() or 1)


def _l1_row(params, n, space, window, points):
    match = energy_match(params, n)
    grid = default_grid(params, match, space, points=points)
    q = density_profile(params, n, "quantum", space, grid)
    c = density_profile(params, n, "classical", space, grid)
    w = default_window(params, n, space) if window is None else window * (
        match.x0 if space == "position" else match.p0)
    return l1_distance(coarse_grain(q, CoarseGrainSpec(w)), c)


def _fourier_row(params, n, s_max):
    match = energy_match(params, n)
    s = np.linspace(0.0, s_max, 501)
    p = s * params.hbar / match.x0
    return float(np.max(np.abs(quantum_fourier_coeff(params, n, p) - bessel_j0(s))))


def _sweep_row(params, n, window, points, s_max, x_ratio, quad):
    t0 = time.perf_counter()
    vals, errs = [], []
    jobs = (
        lambda: _l1_row(params, n, "position", window, points),
        lambda: _l1_row(params, n, "momentum", window, points),
        lambda: _fourier_row(params, n, s_max),
        lambda: abs(relative_correction(params, n, x_ratio, quad)),
    )
    for name, job in zip(COLUMNS, jobs):
        try:
            vals.append(float(job()))
        except (ArithmeticError, ValueError, RuntimeError) as exc:
            vals.append(math.nan)
            errs.append(f"n={n} {name}: {exc}")
    return vals, errs, time.perf_counter() - t0


def convergence_sweep(params: OscillatorParams, n_list, window: Optional[float] = None,
                      points: int = 4096, s_max: float = 5.0, x_ratio: float = 0.3,
                      quad: QuadSpec = DEFAULT_QUAD, threads: Optional[int] = None
                      ) -> ConvergenceReport:
    """Tabulate the classical-limit diagnostics for each n in ``n_list``.

    Columns: coarse-grained L1 distance to the classical density in position
    and momentum space, max |f_QM - J0(s)| for s in [0, s_max], and the
    relative size of the first correction at ``x_ratio``.  ``window`` is a
    fraction of the turning point; the default follows :func:`default_window`.
    Rows run on up to ``threads`` workers (``CORRLIMIT_THREADS``, 0 = all
    cores) and come back in input order.
    """
    n_values = np.array([QuantumLevel(n).n for n in n_list], dtype=int)
    if n_values.size == 0:
        raise ValueError("n_list is empty")
    if np.any(np.diff(n_values) <= 0):
        raise ValueError("n_list must be strictly ascending")
    try:
        correction_integral_i1(x_ratio, quad)   # n-independent; warm the cache once
    except (ValueError, RuntimeError):
        pass
    workers = min(_threads(threads), n_values.size)

    def run(n):
        return _sweep_row(params, int(n), window, points, s_max, x_ratio, quad)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, n_values))
    else:
        results = [run(n) for n in n_values]
    table = np.array([r[0] for r in results], dtype=float).reshape(n_values.size, len(COLUMNS))
    failures = tuple(e for r in results for e in r[1])
    fits = {}
    for j, name in enumerate(COLUMNS):
        slope = fit_power_law(n_values, table[:, j])
        if slope is not None:
            fits[name] = slope
    return ConvergenceReport(
        n_values, table[:, 0].copy(), table[:, 1].copy(), table[:, 2].copy(),
        table[:, 3].copy(), fits, failures, np.array([r[2] for r in results]),
    )
