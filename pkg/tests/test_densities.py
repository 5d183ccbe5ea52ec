import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from corrlimit import OscillatorParams, energy_match
from corrlimit.densities import (
    DensityProfile,
    cpd_momentum,
    cpd_position,
    default_grid,
    density_profile,
    qpd_momentum,
    qpd_position,
)
from corrlimit.special import oscillator_wavefunction
from oracles import qpd_mp


def test_ground_state_peak(unit):
    assert qpd_position(unit, 0, 0.0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)


def test_odd_state_node(unit):
    assert qpd_position(unit, 1, 0.0) == 0.0


def test_n100_centre_vs_mpmath(unit):
    assert qpd_position(unit, 100, 0.0) == pytest.approx(qpd_mp(100, 0.0), rel=1e-10)


@pytest.mark.parametrize("alpha_kw", [dict(mass=2.0, omega=0.5, hbar=0.3), dict(mass=1.0, omega=4.0)])
def test_position_density_scaling(alpha_kw):
    p = OscillatorParams(**alpha_kw)
    x = np.linspace(-3, 3, 13)
    want = [qpd_mp(6, v, alpha=p.alpha) for v in x]
    assert np.allclose(qpd_position(p, 6, x), want, rtol=1e-11, atol=1e-300)


def test_momentum_gaussian_width():
    p = OscillatorParams(mass=2.0, omega=1.0, hbar=1.0)
    assert qpd_momentum(p, 0, 0.0) == pytest.approx(math.sqrt(1 / (2 * math.pi)), rel=1e-14)


@pytest.mark.parametrize("n", [0, 5, 50])
def test_momentum_normalised(n):
    p = OscillatorParams(mass=1.7, omega=0.6, hbar=1.3)
    m = energy_match(p, n)
    total = quad(lambda v: qpd_momentum(p, n, v), -m.p0 - 12 * p.momentum_scale,
                 m.p0 + 12 * p.momentum_scale, limit=400, epsabs=1e-13)[0]
    assert total == pytest.approx(1.0, abs=1e-8)


@given(st.integers(0, 300), st.floats(-30, 30), st.floats(0.1, 5))
def test_symmetry_at_unit_mass_frequency(n, v, hbar):
    p = OscillatorParams(1.0, 1.0, hbar)
    assert qpd_momentum(p, n, v) == qpd_position(p, n, v)


@given(st.integers(0, 300), st.floats(0, 40))
def test_quantum_density_even(n, x):
    p = OscillatorParams()
    assert qpd_position(p, n, -x) == qpd_position(p, n, x)


@pytest.mark.parametrize("n", [0, 1, 4, 17, 50])
def test_interior_zero_count(n):
    half = math.sqrt(2 * n + 1) + 6
    xi = np.linspace(-half, half, 200001) + 1e-7   # offset keeps nodes off the origin
    psi = oscillator_wavefunction(n, xi)
    assert np.count_nonzero(np.signbit(psi[1:]) != np.signbit(psi[:-1])) == n


def test_cpd_examples(unit):
    m0 = energy_match(unit, 0)
    assert cpd_position(m0, 0.0) == pytest.approx(1 / math.pi, rel=1e-15)
    assert cpd_position(m0, 1.5) == 0.0
    assert cpd_momentum(m0, 0.0) == pytest.approx(1 / math.pi, rel=1e-15)
    m12 = energy_match(unit, 12)
    assert cpd_momentum(m12, 3.0) == pytest.approx(1 / (4 * math.pi), rel=1e-15)
    assert cpd_momentum(m12, 5.1) == 0.0


def test_cpd_singular_at_turning_point(unit):
    m = energy_match(unit, 0)
    with pytest.raises(ValueError):
        cpd_position(m, 1.0)
    with pytest.raises(ValueError):
        cpd_momentum(m, np.array([0.2, -1.0]))


@pytest.mark.parametrize("n", [0, 7, 80])
def test_cpd_integrates_to_one(unit, n):
    m = energy_match(unit, n)
    total = quad(lambda v: cpd_position(m, v), -m.x0, m.x0, limit=200)[0]
    assert total == pytest.approx(1.0, abs=1e-6)


def test_default_grid_layout(unit):
    m = energy_match(unit, 0)
    g = default_grid(unit, m)
    assert g.size == 4096 and np.all(np.diff(g) > 0)
    assert g[-1] >= m.x0 + 8 * unit.length
    assert not np.any(np.abs(g) == m.x0)
    big = energy_match(unit, 5000)
    assert default_grid(unit, big)[-1] == pytest.approx(1.2 * big.x0)


def test_default_grid_avoids_turning_point():
    # half-width 9 with 19 points puts nodes at +-1 = x0 for n = 0
    p = OscillatorParams()
    m = energy_match(p, 0)
    g = default_grid(p, m, points=19)
    assert not np.any(np.abs(g) == m.x0)
    prof = density_profile(p, 0, "classical", grid=g)
    assert np.all(np.isfinite(prof.values))


def test_classical_profile_zero_outside(unit):
    prof = density_profile(unit, 9, "classical")
    outside = np.abs(prof.grid) > prof.turning_point
    assert np.all(prof.values[outside] == 0.0)


def test_profile_validation(unit):
    with pytest.raises(ValueError):
        DensityProfile("position", "quantum", [0.0, 0.0, 1.0], [1, 1, 1], unit)
    with pytest.raises(ValueError):
        DensityProfile("position", "quantum", [0.0, 1.0], [1.0, -0.1], unit)
    with pytest.raises(ValueError):
        DensityProfile("position", "quantum", [0.0, 1.0], [1.0], unit)
    with pytest.raises(ValueError):
        DensityProfile("phase", "quantum", [0.0, 1.0], [1.0, 1.0], unit)
    # corrected densities may dip below zero
    DensityProfile("position", "asymptotic_corrected", [0.0, 1.0], [1.0, -0.1], unit)


def test_density_profile_kinds(unit):
    with pytest.raises(ValueError):
        density_profile(unit, 3, "asymptotic_corrected")
    prof = density_profile(unit, 3, "quantum", "momentum")
    assert prof.space == "momentum" and prof.turning_point == prof.match.p0
