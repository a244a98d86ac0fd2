""" Concentration on spheres: exact values next to the closed-form bounds.

Prints, for a few dimensions, the concentration function of S^n (hemispheres
are extremal) against exp(-sqrt(n) r / 3) and exp(-(n-1) r^2 / 2), then the
measure outside an equatorial tube against the four-way projection bound.
"""
import math

import numpy as np

from conclab.sphere_exact import alpha_sphere_exact, cor41_bound, tube_complement_exact

radii = np.array([0.1, 0.25, 0.5, 1.0])

print("alpha_{S^n}(r)          exact       exp-bound   gauss-bound")
for n in (2, 10, 100, 1000):
    for r in radii:
        exact = alpha_sphere_exact(n, r)
        e1 = math.exp(-math.sqrt(n) * r / 3)
        e2 = math.exp(-(n - 1) * r * r / 2)
        print(f"  n={n:<5d} r={r:<5.2f}   {exact:10.3e}  {e1:10.3e}  {e2:10.3e}")

# the bound only bites once n/m is large; for small n it is clamped at 1
print("\nmu(S^n minus the r-tube around S^(n-m))")
for n, m in ((50, 1), (1000, 1), (10000, 3)):
    for r in (0.2, 0.5, 1.0):
        print(f"  n={n:<6d} m={m}  r={r:.1f}  exact={tube_complement_exact(n, m, r):10.3e}"
              f"  bound={cor41_bound(n, m, r).value:10.3e}")
