"""Counting and locating zeros in a disk: a polynomial with a double root, sin,
and the 1-points of zeta near 4 + 100i."""

import numpy as np

from nevanlinna_lab import CensusConfig, census, resolve, winding_count
from nevanlinna_lab.nevanlinna import Disk, FunctionHandle

roots = np.array([0.2 + 0.1j, 0.2 + 0.1j, -0.5j, 0.6])
poly = FunctionHandle(lambda z: np.prod(z[:, None] - roots[None, :], axis=1), "poly")
print("winding count:", winding_count(poly, Disk(0, 1)))
for d in census(poly, Disk(0, 1)):
    print(f"  zero at {d.location:.12f}  multiplicity {d.multiplicity}")

print("zeros of sin in |z| < 10:")
for d in census(resolve("sin"), Disk(0, 10)):
    print(f"  {d.location.real:+.12f}")

# zeta(s) = 1 near s = 4 + 100i, searched in the disk of radius 3.48 about that point
ones = census(resolve("zeta-shift:100"), Disk(0, 3.48), CensusConfig(target=1.0))
for d in ones:
    print(f"zeta(s) = 1 at s = {d.location + 4 + 100j:.10f}")
