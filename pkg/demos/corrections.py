# The first hbar/S correction to the arcsine density.
#
# Transforming the first iterated term back to position space gives
#   rho(x) ~ 1/(pi sqrt(x0^2 - x^2)) + (1/(2 pi x0)) (-pi/32) (hbar/S)^2 i1(x/x0)
# with i1 a regularised oscillatory double integral.  It is evaluated here by
# per-period panels plus iterated averaging; a closed form
# (2/pi)(2 + 3r^2)/(1 - r^2)^3.5 is used below only as a cross-check.

import math

import numpy as np

from corrlimit import OscillatorParams, energy_match
from corrlimit.asymptotics import correction_integral_i1, relative_correction

params = OscillatorParams()

# %% i1 on a few ratios, with its error estimate
print("   r        i1(r)            error      closed form")
for r in (0.0, 0.2, 0.4, 0.6, 0.8):
    est = correction_integral_i1(r)
    closed = 2 / math.pi * (2 + 3 * r * r) / (1 - r * r) ** 3.5
    print(f"{r:4.1f}  {est.value:16.12f}  {est.error:9.1e}  {closed:16.12f}")

# %% relative size of the correction against the classical term
print("\n   n     correction / classical at x = 0.3 x0")
ns = np.array([25, 50, 100, 200, 400])
rel = np.array([relative_correction(params, n, 0.3) for n in ns])
for n, v in zip(ns, rel):
    print(f"{n:4d}   {v: .6e}")
slope = np.polyfit(np.log(2 * ns + 1), np.log(np.abs(rel)), 1)[0]
print(f"power law in (2n + 1): {slope:.4f}")      # -2, i.e. (hbar/S)^2

# the correction is negative in the bulk and grows towards the turning
# points, where i1 ~ (1 - r^2)^-3.5 outruns the (1 - r^2)^-0.5 of the
# classical term; the expansion is a bulk statement.
