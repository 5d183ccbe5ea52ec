"""Classical limit of the harmonic oscillator through Fourier coefficients.

Quantum densities ``|psi_n|**2``, their characteristic functions
``exp(-u**2/2) L_n(u**2)``, the Bessel asymptotics that turn them into the
classical arcsine law, and the hbar/S corrections on top of it.
"""

from .analysis import (
    CoarseGrainSpec,
    ConvergenceReport,
    coarse_grain,
    convergence_sweep,
    default_window,
    energy_moments,
    l1_distance,
    moment,
)
from .asymptotics import (
    CorrectionSeries,
    SzegoArgs,
    corrected_density,
    corrected_density_momentum,
    corrected_profile,
    correction_integral_i1,
    correction_series,
    relative_correction,
    szego_iterate,
    szego_leading,
)
from .densities import DensityProfile, cpd_momentum, cpd_position, density_profile, qpd_momentum, qpd_position
from .fourier import (
    FourierProfile,
    classical_fourier_coeff,
    fourier_profile,
    numeric_fourier_oracle,
    quantum_fourier_coeff,
)
from .oscillator import EnergyMatch, OscillatorParams, QuantumLevel, energy_match
from .quadrature import ConvergenceError, QuadSpec
from .special import (
    bessel_j0,
    bessel_y0,
    hermite_phys,
    laguerre,
    oscillator_wavefunction,
    scaled_laguerre,
)

__version__ = "0.1.0"
