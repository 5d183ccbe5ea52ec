import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from corrlimit import OscillatorParams, energy_match
from corrlimit.asymptotics import (
    CorrectionSeries,
    SzegoArgs,
    _g_on_panels,
    corrected_density,
    corrected_density_momentum,
    corrected_profile,
    correction_integral_i1,
    correction_prefactor,
    correction_series,
    relative_correction,
    szego_iterate,
    szego_leading,
)
from corrlimit.densities import cpd_momentum, cpd_position
from corrlimit.quadrature import ConvergenceError, QuadSpec
from corrlimit.special import bessel_j0, scaled_laguerre
from oracles import g_closed, i1_closed

# brute-force nested-quadrature values (tests/oracles.py: i1_brute), frozen
I1_PINNED = {0.0: 1.273239544764331, 0.3: 2.0103010847720992,
             0.5: 4.791796814521122, 0.8: 89.14714462532672}


# --- Szego -------------------------------------------------------------------

@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), st.floats(1e-3, 1e3),
       st.integers(0, 10**6), st.floats(0, 1e3))
def test_argument_mapping(mass, omega, hbar, n, p):
    params = OscillatorParams(mass, omega, hbar)
    args = SzegoArgs.from_momentum(params, n, p)
    want = p * energy_match(params, n).x0 / hbar
    assert args.bessel_argument == pytest.approx(want, rel=1e-13, abs=1e-300)


def test_leading_examples(unit):
    assert szego_leading(SzegoArgs(10.5, 0.0)) == 1.0
    u = 2.404825557695773 / (2 * math.sqrt(100.5))
    assert abs(szego_leading(SzegoArgs(100.5, u))) < 1e-9
    args = SzegoArgs.from_momentum(unit, 12, 1.0)
    assert args.bessel_argument == pytest.approx(5.0, rel=1e-15)
    assert szego_leading(args) == bessel_j0(5.0)


def test_args_validation():
    with pytest.raises(ValueError):
        SzegoArgs(3.0, 0.1)
    with pytest.raises(ValueError):
        SzegoArgs(3.5, -0.1)


def test_iterate_at_origin():
    assert szego_iterate(SzegoArgs(7.5, 0.0)) == 1.0


def test_iterate_closer_than_leading():
    args = SzegoArgs(50.5, 0.5)
    exact = scaled_laguerre(50, 0.25)
    assert abs(szego_iterate(args) - exact) < abs(szego_leading(args) - exact)


def test_iterate_gain_n10():
    args = SzegoArgs(10.5, 1.0)
    exact = scaled_laguerre(10, 1.0)
    it = szego_iterate(args)
    assert math.isfinite(it)
    assert 2 * abs(it - exact) <= abs(szego_leading(args) - exact)


def test_iterate_domain():
    with pytest.raises(ValueError):
        szego_iterate(SzegoArgs(10.5, 3.5))
    with pytest.raises(ValueError):
        szego_iterate(SzegoArgs(10.5, 0.5), kernel="wkb")


def _max_residuals(n, kernel):
    u = np.linspace(0, 1, 41)
    exact = scaled_laguerre(n, u * u)
    lead = bessel_j0(2 * math.sqrt(n + 0.5) * u)
    it = np.array([szego_iterate(SzegoArgs(n + 0.5, x), kernel=kernel) for x in u])
    return np.max(np.abs(exact - lead)), np.max(np.abs(exact - it))


def test_leading_residual_decreases():
    res = [_max_residuals(n, "leading")[0] for n in (10, 25, 50, 100, 200)]
    assert all(b < a for a, b in zip(res, res[1:]))


@pytest.mark.parametrize("n", [10, 25, 50, 100, 200])
@pytest.mark.parametrize("kernel", ["exact", "leading"])
def test_one_iteration_reduces_residual(n, kernel):
    lead, it = _max_residuals(n, kernel)
    assert it < lead


# --- i1 ----------------------------------------------------------------------

def test_g_matches_closed_form():
    alpha, _, g = _g_on_panels(64, 40)
    want = g_closed(alpha)
    # Bessel errors (~1e-14) enter multiplied by b**3; rounding grows like alpha**2.5
    assert np.max(np.abs(g - want) / (1 + alpha**2.5)) < 1e-12


@pytest.mark.parametrize("r", [0.0, 0.2, 0.5, 0.7])
def test_i1_closed_form(r):
    est = correction_integral_i1(r)
    assert est.value == pytest.approx(float(i1_closed(r)), rel=1e-8)


@pytest.mark.parametrize("r,want", sorted(I1_PINNED.items()))
def test_i1_regression(r, want):
    assert correction_integral_i1(r).value == pytest.approx(want, rel=1e-7)


@given(st.floats(-0.8, 0.8))
def test_i1_even(r):
    assert correction_integral_i1(r).value == correction_integral_i1(-r).value


@given(st.floats(-0.8, 0.8), st.sampled_from([100.0, 200.0, 300.0]))
def test_i1_error_estimate_covers_closed_form(r, alpha_max):
    est = correction_integral_i1(r, QuadSpec(alpha_max=alpha_max))
    assert abs(est.value - float(i1_closed(r))) <= est.error


@given(st.floats(-0.75, 0.75), st.sampled_from([100.0, 200.0]))
def test_i1_stable_under_doubling(r, alpha_max):
    a = correction_integral_i1(r, QuadSpec(alpha_max=alpha_max))
    b = correction_integral_i1(r, QuadSpec(alpha_max=2 * alpha_max))
    assert abs(a.value - b.value) <= max(a.error, b.error)


def test_i1_reports_stall():
    with pytest.raises(ConvergenceError) as info:
        correction_integral_i1(0.97)
    assert info.value.operation == "correction_integral_i1"
    assert info.value.error > 0
    with pytest.raises(ConvergenceError):
        correction_integral_i1(0.0, QuadSpec(alpha_max=10.0))


@pytest.mark.parametrize("r", [1.0, -1.0, 1.5])
def test_i1_outside_region(r):
    with pytest.raises(ValueError):
        correction_integral_i1(r)


def test_wider_panels_agree():
    a = correction_integral_i1(0.4)
    b = correction_integral_i1(0.4, QuadSpec(panel_width=2 * math.pi, alpha_max=300.0))
    assert a.value == pytest.approx(b.value, rel=1e-7)


def test_quadspec_validation():
    for kw in (dict(alpha_max=0), dict(panel_width=3.0), dict(nodes=1), dict(rtol=0),
               dict(max_levels=0), dict(u_max=-1)):
        with pytest.raises(ValueError):
            QuadSpec(**kw)


# --- corrected densities -----------------------------------------------------

def test_kmax_zero_is_classical(unit):
    m = energy_match(unit, 30)
    x = np.linspace(-0.9, 0.9, 7) * m.x0
    assert np.array_equal(corrected_density(unit, 30, m, x, k_max=0), cpd_position(m, x))
    assert np.array_equal(corrected_density_momentum(unit, 30, m, x, k_max=0), cpd_momentum(m, x))


def test_prefactor_n12(unit):
    m = energy_match(unit, 12)
    x = 0.5 * m.x0
    term = corrected_density(unit, 12, m, x) - cpd_position(m, x)
    want = (1 / (2 * math.pi * 5)) * (math.pi / 32) * (1 / (25 * math.pi)) ** 2
    assert abs(term) == pytest.approx(want * abs(correction_integral_i1(0.5).value), rel=1e-12)
    assert correction_prefactor(m, unit) < 0


def test_relative_correction_scaling(unit):
    a = relative_correction(unit, 100, 0.3)
    b = relative_correction(unit, 200, 0.3)
    assert b / a == pytest.approx((201 / 401) ** 2, rel=0.1)


def test_absolute_correction_carries_extra_length(unit):
    # the density correction also has a 1/x0, so it falls as (2n+1)**-2.5
    terms = []
    for n in (100, 200):
        m = energy_match(unit, n)
        x = 0.3 * m.x0
        terms.append(corrected_density(unit, n, m, x) - cpd_position(m, x))
    assert terms[1] / terms[0] == pytest.approx((201 / 401) ** 2.5, rel=1e-8)


def test_relative_correction_closed_expression(unit):
    m = energy_match(unit, 40)
    r = 0.3
    got = relative_correction(unit, 40, r)
    want = -(math.pi / 64) * (1 / (81 * math.pi)) ** 2 * math.sqrt(1 - r * r) * float(i1_closed(r))
    assert got == pytest.approx(want, rel=1e-7)
    x = r * m.x0
    direct = (corrected_density(unit, 40, m, x) - cpd_position(m, x)) / cpd_position(m, x)
    assert got == pytest.approx(direct, rel=1e-12)


@given(st.integers(0, 500), st.floats(-0.8, 0.8), st.floats(0.2, 5))
def test_momentum_mirror_at_unit_mass_frequency(n, r, hbar):
    p = OscillatorParams(1.0, 1.0, hbar)
    m = energy_match(p, n)
    v = r * m.x0
    assert corrected_density_momentum(p, n, m, v) == corrected_density(p, n, m, v)


def test_momentum_dimensional_relation():
    p = OscillatorParams(mass=2.0, omega=3.0, hbar=0.5)
    m = energy_match(p, 100)
    pos = corrected_density(p, 100, m, 0.3 * m.x0)
    mom = corrected_density_momentum(p, 100, m, 0.3 * m.p0)
    assert mom == pytest.approx(pos * m.x0 / m.p0, rel=1e-12)


def test_corrected_density_domain(unit):
    m = energy_match(unit, 5)
    with pytest.raises(ValueError):
        corrected_density(unit, 5, m, m.x0)
    with pytest.raises(ValueError):
        corrected_density(unit, 5, m, 0.0, k_max=2)


def test_correction_series(unit):
    ratios = np.linspace(-0.7, 0.7, 8)
    s = correction_series(unit, 20, ratios, k_max=1)
    assert isinstance(s, CorrectionSeries)
    m = s.match
    ratio = s.prefactors[1] / s.prefactors[0]
    assert abs(ratio) == pytest.approx(math.pi / 32 * (1 / m.action) ** 2, rel=1e-15)
    want = m.x0 * corrected_density(unit, 20, m, ratios * m.x0)
    assert np.allclose(s.scaled_density(), want, rtol=1e-13)
    s0 = correction_series(unit, 20, ratios, k_max=0)
    assert np.allclose(s0.scaled_density(), m.x0 * cpd_position(m, ratios * m.x0), rtol=1e-14)


def test_corrected_profile(unit):
    prof = corrected_profile(unit, 25)
    assert prof.kind == "asymptotic_corrected"
    assert np.max(np.abs(prof.grid)) <= 0.8 * prof.match.x0
    base = cpd_position(prof.match, prof.grid)
    assert np.all(prof.values < base)   # i1 > 0 and the prefactor is negative
