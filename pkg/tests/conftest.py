import math

import numpy as np

from nevanlinna_lab.registry import rational_id, resolve


def random_points(rng, count, r_lo, r_hi):
    rad = rng.uniform(r_lo, r_hi, count)
    ang = rng.uniform(0, 2 * math.pi, count)
    return [complex(x) for x in rad * np.exp(1j * ang)]


def random_rational(rng, zero_radii, pole_radii, max_zeros=4, max_poles=3, scale_range=(0.3, 3.0)):
    """Handle for scale * prod(z - a) / prod(z - b) with moduli drawn from the given ranges."""
    nz = int(rng.integers(1, max_zeros + 1))
    npl = int(rng.integers(0, max_poles + 1))
    zeros = random_points(rng, nz, *zero_radii)
    poles = random_points(rng, npl, *pole_radii) if npl else []
    scale = float(rng.uniform(*scale_range)) * complex(np.exp(1j * rng.uniform(0, 2 * math.pi)))
    return resolve(rational_id(zeros, poles, scale))


# one PASS/FAIL line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
