"""Scans behind the growth estimate: the envelope on sigma = 4, counts of
1-points, and the fitted constants of the final bound. Small grids keep the
runtime to a few seconds; the CLI runs the full ones."""

import numpy as np

from nevanlinna_lab import ScanGrid
from nevanlinna_lab.lab import lemma5_scan, lemma9_sweep, log_spaced, theorem_scan

rep = lemma5_scan(np.linspace(-200, 200, 4001))
print("envelope scan passed:", rep.passed)
for w in rep.witnesses:
    print(f"  {w.label:22s} {w.value:.6f} at t = {w.t:g}")

rep9, counts = lemma9_sweep([16.0, 100.0, 1000.0])
for c in counts:
    print(f"t = {c.t:7g}: {c.h} one-points, N = {c.N:.6f}")
print("fitted c4 =", rep9.constants["c4"])

grid = ScanGrid(tuple(log_spaced(16, 1e3, 16)), (0.54, 0.75, 1.0, 2.0, 4.0), 0.01)
thm = theorem_scan(grid)
print("theorem fit: c6 = %.4f, c8 = %.4f" % (thm.constants["c6"], thm.constants["c8"]))
w = thm.witnesses[0]
print(f"binding sample at sigma = {w.sigma}, t = {w.t:.3f}")
