# Fourier coefficients: Laguerre to Bessel.
#
# The characteristic function of |psi_n|**2 is exp(-u**2/2) L_n(u**2) with
# u = p / sqrt(2 m omega hbar).  At fixed s = p x0 / hbar it tends to J0(s),
# the characteristic function of the arcsine law.  The Volterra form with
# kernel J0(ku)Y0(kt) - J0(kt)Y0(ku) gives the first correction.

import numpy as np

from corrlimit import OscillatorParams, energy_match
from corrlimit.asymptotics import SzegoArgs, szego_iterate, szego_leading
from corrlimit.fourier import quantum_fourier_coeff
from corrlimit.special import bessel_j0, scaled_laguerre

params = OscillatorParams()

# %% |f_QM - J0(s)| at fixed s
print("   n      s=1        s=2        s=5")
for n in (10, 25, 50, 100, 200, 400):
    x0 = energy_match(params, n).x0
    row = [abs(quantum_fourier_coeff(params, n, s / x0) - bessel_j0(s)) for s in (1, 2, 5)]
    print(f"{n:4d}  " + "  ".join(f"{v:.3e}" for v in row))
# each doubling of n cuts the gap by about four: it is O(1/N**2)

# %% one Picard step with the J0 kernel
u = np.linspace(0, 1, 51)
print("\n   n   max|F - J0|   max|F - iterate|")
for n in (10, 50, 100):
    exact = scaled_laguerre(n, u * u)
    lead = np.array([szego_leading(SzegoArgs(n + 0.5, x)) for x in u])
    it = np.array([szego_iterate(SzegoArgs(n + 0.5, x), kernel="leading") for x in u])
    print(f"{n:4d}   {np.max(np.abs(exact - lead)):.3e}     {np.max(np.abs(exact - it)):.3e}")
