"""Proximity, counting and characteristic functions, Jensen's formula, and the
two auxiliary inequalities, on a handful of registry functions."""

import math

from nevanlinna_lab import resolve
from nevanlinna_lab.nevanlinna import (
    borel_caratheodory_gap,
    characteristic_T,
    jensen_residual,
    lemma1_check,
    max_modulus_M,
)

exp = resolve("exp")
for r in (1.0, 2.0, 5.0):
    T = characteristic_T(exp, r)
    print(f"T(r={r}, exp) = {T.T:.12f}   r/pi = {r / math.pi:.12f}   log M(r) = {math.log(max_modulus_M(exp, r)):.6f}")

f = resolve("rational:zeros=0.3,0.4;poles=0.6;scale=1")
for rho in (0.5, 0.9, 2.0):
    print(f"Jensen residual for {f.label} at rho={rho}: {jensen_residual(f, f.declared_divisors, rho):.2e}")

rep = lemma1_check(resolve("exp-shift:2"), 1.0, 2.5)
print("Lemma 1 chain for exp(z) + 2:", rep)

g = resolve("zeta-shift:100")
bc = borel_caratheodory_gap(g, 0j, 1.5, 3.0, seed=1)
print("Borel-Caratheodory on zeta(z + 4 + 100i):", bc)
