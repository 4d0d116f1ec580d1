"""Zeta evaluation: a few reference values, the first critical zero, and log zeta
continued from sigma = 4 towards the critical line."""

import math

import numpy as np

from nevanlinna_lab import zeta
from nevanlinna_lab.zeta import log_zeta_series, log_zeta_tracked, zeta_derivative

print("zeta(2)  =", zeta(2.0).real, " pi^2/6 =", math.pi**2 / 6)
print("zeta(4)  =", zeta(4.0).real, " pi^4/90 =", math.pi**4 / 90)
print("zeta'(2) =", zeta_derivative(2.0).real)

s = 0.5 + 14.134725141734694j
print("|zeta(1/2 + 14.1347i)| =", abs(zeta(s)))

# vectorised evaluation along the line sigma = 4
t = np.linspace(-50, 50, 5)
print("|zeta(4 + it)|:", np.round(np.abs(zeta(4 + 1j * t)), 6))

# the Dirichlet series and the continued branch agree where both make sense
for sigma in (4.0, 2.0, 1.5):
    s = sigma + 30j
    print(f"log zeta({s}): series {log_zeta_series(s):.12f}  tracked {log_zeta_tracked(s):.12f}")

# closer to the line only the continued branch is available
print("log zeta(0.6 + 30i) =", log_zeta_tracked(0.6 + 30j))
