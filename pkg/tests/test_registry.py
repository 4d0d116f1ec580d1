import cmath
import math

import numpy as np
import pytest

from nevanlinna_lab.errors import DomainError
from nevanlinna_lab.nevanlinna import POLE, ZERO
from nevanlinna_lab.registry import (
    BUILTIN_IDS,
    builtin_registry,
    is_analytic,
    parse_rational,
    rational_id,
    resolve,
    value_divisors,
)
from nevanlinna_lab.zeta import log_zeta_tracked, zeta


def test_every_builtin_resolves():
    handles = builtin_registry()
    assert len(handles) == len(BUILTIN_IDS)
    for fid, f in zip(BUILTIN_IDS, handles):
        assert f.label == fid
        z = np.array([0.1 + 0.2j, -0.3j])
        a, b = f(z), f(z)
        assert np.array_equal(a, b)


def test_rational_spec_roundtrip():
    zeros, poles, scale = parse_rational("zeros=0.5,-0.2+0.3j^2;poles=0.6;scale=2")
    assert zeros == [(0.5, 1), (-0.2 + 0.3j, 2)]
    assert poles == [(0.6, 1)]
    assert scale == 2
    fid = rational_id([(0.5, 1), (-0.2 + 0.3j, 2)], [0.6], 2)
    assert parse_rational(fid.partition(":")[2]) == (zeros, poles, scale)


def test_rational_values_and_divisors():
    f = resolve("rational:zeros=0.5+0.5j^2;poles=-0.7;scale=3")
    z = 0.1 - 0.4j
    assert f(z) == pytest.approx(3 * (z - (0.5 + 0.5j)) ** 2 / (z + 0.7))
    d = f.declared_divisors
    assert d.total(ZERO) == 2 and d.total(POLE) == 1
    assert not is_analytic(f)
    assert is_analytic(resolve("rational:zeros=1;poles=;scale=1"))


def test_zeta_family_values():
    z = 0.3 - 0.2j
    assert resolve("zeta-shift:20")(z) == zeta(z + 4 + 20j)
    assert resolve("zeta-minus-1-shift:20")(z) == zeta(z + 4 + 20j) - 1
    assert resolve("log-zeta-shift:20")(z) == pytest.approx(log_zeta_tracked(z + 4 + 20j), abs=1e-14)


def test_unknown_ids():
    for bad in ("cosh", "rational:zeros=1;bogus=2", "zeta-shift:0.5"):
        with pytest.raises(DomainError):
            resolve(bad)


def test_value_divisors_rational_closed_form():
    f = resolve("rational:zeros=0.3,0.4;poles=0.6;scale=1")
    ones = value_divisors(f, 2.0, 1.0)
    # (z - 0.3)(z - 0.4) = z - 0.6  ->  z^2 - 1.7 z + 0.72 = 0
    expected = np.roots([1, -1.7, 0.72])
    assert sorted(abs(e.location) for e in ones) == pytest.approx(sorted(abs(expected)))


def test_value_divisors_exp_by_census():
    ones = value_divisors(resolve("exp"), 7.0, 1.0)
    locs = sorted(e.location.imag for e in ones)
    assert locs == pytest.approx([-2 * math.pi, 0.0, 2 * math.pi], abs=1e-9)


def test_exp_shift_zeros_closed_form():
    zeros = value_divisors(resolve("exp-shift:2"), 4.0, 0.0)
    expected = [cmath.log(2) + 1j * math.pi, cmath.log(2) - 1j * math.pi]
    assert zeros.total() == 2
    for e in zeros:
        assert min(abs(e.location - x) for x in expected) < 1e-9
