# Quantum vs classical position densities of the oscillator.
#
# |psi_n|**2 oscillates wildly inside the classical region, so it never
# converges pointwise to the arcsine law.  A local average over a few
# oscillator lengths removes the fringes and the remainder shrinks with n.

import numpy as np

from corrlimit import OscillatorParams, energy_match
from corrlimit.analysis import CoarseGrainSpec, coarse_grain, default_window, l1_distance
from corrlimit.densities import density_profile

params = OscillatorParams()          # hbar = m = omega = 1

# %% raw densities near the centre for n = 40
n = 40
q = density_profile(params, n)                   # quantum
c = density_profile(params, n, "classical")      # arcsine, same grid
x0 = q.match.x0
print(f"n = {n}: turning point x0 = {x0:.4f}, both masses ~ {q.integral():.10f}")
centre = np.abs(q.grid) < 0.5
print("max |quantum - classical| for |x| < 0.5:",
      np.max(np.abs(q.values - c.values)[centre]))

# %% coarse-grain with the default window (pi oscillator lengths)
w = default_window(params, n)
cg = coarse_grain(q, CoarseGrainSpec(w))
print(f"window {w:.4f}; mass before/after: {q.integral():.14f} {cg.integral():.14f}")
print("max |coarse - classical| for |x| < 0.5:",
      np.max(np.abs(cg.values - c.values)[centre]))

# %% L1 distance on [-0.9 x0, 0.9 x0] as n grows
print("\n   n      L1 raw   L1 coarse")
for n in (10, 25, 50, 100, 200, 400):
    q = density_profile(params, n)
    c = density_profile(params, n, "classical")
    cg = coarse_grain(q, CoarseGrainSpec(default_window(params, n)))
    print(f"{n:4d}  {l1_distance(q, c):10.5f}  {l1_distance(cg, c):10.5f}")

# the raw distance stalls: the fringes keep their amplitude relative to the
# envelope.  Only the averaged density approaches the classical one.
