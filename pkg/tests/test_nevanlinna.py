import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad as scipy_quad

from conftest import random_rational
from nevanlinna_lab.errors import DomainError, PreconditionViolated, QuadratureStalled
from nevanlinna_lab.nevanlinna import (
    POLE,
    ZERO,
    CharTriple,
    Disk,
    Divisor,
    DivisorList,
    FunctionHandle,
    borel_caratheodory_gap,
    characteristic_T,
    counting_n,
    integrated_N,
    jensen_residual,
    lemma1_check,
    log_plus,
    max_modulus_M,
    proximity_m,
    sft_gap,
)
from nevanlinna_lab.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_NODES,
    KRONROD_WEIGHTS,
    QuadratureSpec,
    cauchy_derivative,
    circle_log_mean,
)
from nevanlinna_lab.registry import resolve, value_divisors


def handle(fn, label="f", divisors=None, analytic=None):
    return FunctionHandle(fn, label, divisors, analytic)


ENTIRE = Disk(0, 1e300)


# -- quadrature rule -------------------------------------------------------------


def test_kronrod_rule_integrates_polynomials():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    for k in range(0, 23, 2):
        exact = 2.0 / (k + 1)
        assert np.sum(KRONROD_WEIGHTS * KRONROD_NODES**k) == pytest.approx(exact, abs=1e-14)


def test_circle_mean_smooth_matches_scipy():
    f = lambda z: np.exp(z) + 3  # noqa: E731
    res = circle_log_mean(f, 0.0, 2.0)
    oracle = scipy_quad(lambda p: math.log(abs(math.exp(2 * math.cos(p)) * complex(math.cos(2 * math.sin(p)),
                                                                                  math.sin(2 * math.sin(p))) + 3)),
                        0, 2 * math.pi, epsabs=1e-13, limit=200)[0] / (2 * math.pi)
    assert res.converged
    assert res.value == pytest.approx(oracle, abs=1e-11)


def test_circle_mean_zero_on_circle():
    # log|z - 1| has mean 0 on |z| = 1 even though the integrand hits -infinity at z = 1
    res = circle_log_mean(lambda z: z - 1.0, 0.0, 1.0)
    assert abs(res.value) < 1e-9
    assert res.singular_angles


def test_circle_mean_pole_on_circle():
    with np.errstate(divide="ignore", invalid="ignore"):
        res = circle_log_mean(lambda z: 1.0 / (z - 1.0), 0.0, 1.0)
    assert abs(res.value) < 1e-9


def test_quadrature_stalled_carries_estimate():
    spec = QuadratureSpec(initial_panels=16, max_depth=1, target_abs_err=1e-14)
    f = handle(lambda z: np.exp(40 * z**7) + 0.5)
    with pytest.raises(QuadratureStalled) as info:
        proximity_m(f, 1.0, spec)
    assert math.isfinite(info.value.estimate)
    assert proximity_m(f, 1.0, spec, strict=False) >= 0


def test_quadrature_spec_invariants():
    with pytest.raises(DomainError):
        QuadratureSpec(initial_panels=8)


def test_cauchy_derivative():
    assert abs(cauchy_derivative(np.exp, 0.3, 0.25) - math.exp(0.3)) < 1e-12
    assert abs(cauchy_derivative(np.sin, 1j, 0.5) - math.cosh(1.0)) < 1e-12


# -- log+, n, N -------------------------------------------------------------------


def test_log_plus():
    assert log_plus(math.e) == pytest.approx(1.0)
    assert log_plus(0.5) == 0.0
    assert log_plus(1.0) == 0.0
    assert log_plus(0.0) == 0.0
    with pytest.raises(DomainError):
        log_plus(-1.0)


def test_counting_n_examples():
    d = DivisorList.of(zeros=[1, -1])
    assert counting_n(d, 2) == 2
    assert counting_n(d, 0.5) == 0
    assert counting_n(DivisorList((Divisor(0, 3),)), 1) == 3
    # closed disk: boundary entries count
    assert counting_n(d, 1 - 1e-9) == 2


def test_integrated_N_examples():
    assert integrated_N(DivisorList.of(zeros=[1]), math.e) == pytest.approx(1.0)
    assert integrated_N(DivisorList(), 2.0) == 0.0
    assert integrated_N(DivisorList.of(zeros=[0.5, 0.25j]), 1.0) == pytest.approx(math.log(2) + math.log(4))
    assert integrated_N(DivisorList((Divisor(0, 2),)), math.e) == pytest.approx(2.0)


def test_integrated_N_matches_step_integral():
    d = DivisorList.of(zeros=[0.5, 0.25j, (-0.7, 2)], poles=[0.1])
    r = 1.3
    n_at = lambda t: counting_n(d, t)  # noqa: E731
    breaks = [0.25, 0.5, 0.7]
    oracle = sum(scipy_quad(lambda t: n_at(t) / t, a, b)[0] for a, b in zip([1e-12] + breaks, breaks + [r]))
    assert integrated_N(d, r) == pytest.approx(oracle, abs=1e-9)


def test_divisor_list_canonical_and_roundtrip():
    d = DivisorList.of(zeros=[0.9, 0.1j, (0.5, 2)], poles=[-0.3])
    assert [abs(e.location) for e in d] == sorted(abs(e.location) for e in d)
    assert DivisorList.from_list(d.to_list()) == d
    assert d.total(ZERO) == 4 and d.total(POLE) == 1
    with pytest.raises(DomainError):
        DivisorList((Divisor(0.5, 1), Divisor(0.5, 1, POLE)))
    with pytest.raises(DomainError):
        Divisor(0.5, 0)


def test_handle_rejects_pole_in_analytic_disk():
    with pytest.raises(DomainError):
        FunctionHandle(lambda z: 1 / z, "inv", DivisorList.of(poles=[0]), Disk(0, 1))


# -- m and T ---------------------------------------------------------------------


def test_proximity_exp_closed_form():
    assert proximity_m(resolve("exp"), 3.0) == pytest.approx(3 / math.pi, abs=1e-10)
    # brute force check of the closed form
    phi = np.linspace(0, 2 * math.pi, 200001)[:-1]
    assert np.mean(np.maximum(3 * np.cos(phi), 0)) == pytest.approx(3 / math.pi, abs=1e-9)


@pytest.mark.parametrize("c, expected", [(0.5, 0.0), (math.e**2, 2.0), (5.0, math.log(5.0)), (1.0, 0.0)])
def test_proximity_constant(c, expected):
    f = resolve(f"const:{c!r}")
    for r in (0.3, 1.0, 7.0):
        assert proximity_m(f, r) == pytest.approx(expected, abs=1e-12)


def test_characteristic_examples():
    c = characteristic_T(resolve("exp"), 3.0)
    assert c.N == 0 and c.T == pytest.approx(3 / math.pi, abs=1e-10)
    assert characteristic_T(resolve("const:5"), 1.0).T == pytest.approx(math.log(5))
    inv = resolve("rational:zeros=;poles=0;scale=1")
    c = characteristic_T(inv, math.e)
    assert c.n_count == 1 and c.N == pytest.approx(1.0)
    assert c.m == pytest.approx(0.0, abs=1e-12)
    assert c.T == pytest.approx(1.0)


def test_char_triple_sum_invariant():
    c = CharTriple(0.25, 1, 0.5, 2.0)
    assert c.T == 0.75
    with pytest.raises(DomainError):
        CharTriple(-0.1, 0, 0.0, 1.0)


def test_characteristic_needs_pole_information():
    f = FunctionHandle(lambda z: 1 / (z - 0.5), "anon")
    with pytest.raises(PreconditionViolated):
        characteristic_T(f, 1.0)


@pytest.mark.parametrize("fid", ["exp", "sin", "exp-shift:2", "rational:zeros=0.3,-0.4+0.2j;poles=;scale=1.5",
                                 "zeta-shift:20"])
def test_characteristic_monotone(fid):
    f = resolve(fid)
    radii = [0.5, 1.0, 2.0, 3.0]
    ts = [characteristic_T(f, r).T for r in radii]
    assert all(a <= b + 1e-9 for a, b in zip(ts, ts[1:]))


# -- M(r) --------------------------------------------------------------------------


def test_max_modulus_examples():
    assert max_modulus_M(resolve("exp"), 2.0) == pytest.approx(math.e**2, rel=1e-14)
    assert max_modulus_M(handle(lambda z: z), 3.0) == pytest.approx(3.0, rel=1e-14)
    assert max_modulus_M(handle(lambda z: z**2 + 1), 1.0) == pytest.approx(2.0, rel=1e-12)


def test_max_modulus_monotone_in_samples():
    f = handle(lambda z: np.exp(z**3) * (z - 0.3))
    values = [max_modulus_M(f, 1.7, n) for n in (16, 64, 256, 1024)]
    assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))
    dense = np.max(np.abs(f(1.7 * np.exp(2j * math.pi * np.arange(200000) / 200000))))
    assert values[-1] >= dense - 1e-9


# -- Jensen --------------------------------------------------------------------------


def test_jensen_examples():
    assert abs(jensen_residual(resolve("rational:zeros=0.5;poles=;scale=1"),
                               DivisorList.of(zeros=[0.5]), 1.0)) < 1e-12
    assert abs(jensen_residual(resolve("exp"), DivisorList(), 2.5)) < 1e-12
    f = resolve("rational:zeros=0.3,0.4;poles=0.6;scale=1")
    assert abs(jensen_residual(f, f.declared_divisors, 0.9)) < 1e-8


def test_jensen_divisor_on_circle():
    f = resolve("rational:zeros=0.5,1j;poles=;scale=1")
    assert abs(jensen_residual(f, f.declared_divisors, 1.0)) < 1e-8


def test_jensen_preconditions():
    with pytest.raises(PreconditionViolated):
        jensen_residual(resolve("sin"), DivisorList(), 1.0)
    with pytest.raises(PreconditionViolated):
        jensen_residual(resolve("rational:zeros=1;poles=0;scale=1"), DivisorList(), 2.0)


def test_jensen_random_rationals():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        rho = float(rng.uniform(0.5, 3.0))
        f = random_rational(rng, (0.1, 0.9 * rho), (0.1, 0.9 * rho))
        assert abs(jensen_residual(f, f.declared_divisors, rho)) < 1e-8


def test_jensen_with_census_divisors():
    f = resolve("sin").shifted(-0.5, "sin+0.5")
    divisors = value_divisors(f, 4.0, 0.0)
    assert abs(jensen_residual(f, divisors, 4.0)) < 1e-8


# -- Lemma 3 --------------------------------------------------------------------------


def test_sft_exp_plus_two():
    f = resolve("exp-shift:2")
    R = 2.0
    # zeros log 2 + i pi (2k + 1) all have modulus > 2; e^z + 2 = 1 at log 1 + i pi(2k+1), |.| >= pi
    rep = sft_gap(f, 1.0, R, DivisorList(), DivisorList(), DivisorList())
    assert rep.gap >= 2328 - rep.lhs > 0
    assert rep.terms["N_R_zeros"] == 0


def test_sft_two_plus_z_closed_form():
    f = resolve("rational:zeros=-2;poles=;scale=1")
    r, R = 1.0, 3.0
    rep = sft_gap(f, r, R, DivisorList.of(zeros=[-2]), DivisorList(), DivisorList.of(zeros=[-1]))
    # |2 + z| >= 1 on |z| = 1 and 2 + z has no zero inside, so m(1) = log|f(0)| = log 2
    phi = np.linspace(0, 2 * math.pi, 100001)[:-1]
    assert np.mean(np.log(np.abs(2 + np.exp(1j * phi)))) == pytest.approx(math.log(2), abs=1e-12)
    assert rep.lhs == pytest.approx(math.log(2), abs=1e-10)
    rhs = 2 * (math.log(3 / 2) + 0 + math.log(3)) + 4 * math.log(2) + 2 * 0.0 + 24 * math.log(3 / 2) + 2328
    assert rep.rhs == pytest.approx(rhs, abs=1e-9)
    assert rep.gap > 0


def test_sft_preconditions():
    for fid in ("sin", "const:5", "const:1"):
        with pytest.raises(PreconditionViolated):
            sft_gap(resolve(fid), 1.0, 2.0, DivisorList(), DivisorList(), DivisorList())
    with pytest.raises(DomainError):
        sft_gap(resolve("exp"), 2.0, 1.0, DivisorList(), DivisorList(), DivisorList())


# -- Lemma 1 ----------------------------------------------------------------------------


def test_lemma1_examples():
    rep = lemma1_check(resolve("exp"), 1.0, 2.0)
    assert rep.T_r == pytest.approx(1 / math.pi, abs=1e-10)
    assert rep.logM_r == pytest.approx(1.0, abs=1e-12)
    assert rep.bound == pytest.approx(6 / math.pi, abs=1e-9)
    assert rep.ok
    rep = lemma1_check(resolve("const:1"), 0.5, 1.0)
    assert rep.ok and rep.T_r == 0 and rep.logM_r == 0 and rep.bound == 0
    assert lemma1_check(resolve("rational:zeros=-3;poles=;scale=1"), 1.0, 2.0).ok


@settings(max_examples=25, deadline=None, derandomize=True)
@given(st.floats(0.05, 3.0), st.floats(1.05, 3.0))
def test_lemma1_property_exp_shift(r, factor):
    assert lemma1_check(resolve("exp-shift:2"), r, r * factor).ok


# -- Lemma 7 -------------------------------------------------------------------------------


def test_borel_caratheodory_examples():
    rep = borel_caratheodory_gap(resolve("const:5"), 0, 1.0, 2.0)
    assert rep.ok and rep.max_lhs == 0 and rep.rhs == 0
    rep = borel_caratheodory_gap(handle(lambda z: z, analytic=ENTIRE), 0, 1.0, 2.0)
    assert rep.max_lhs == pytest.approx(1.0, abs=1e-12)
    assert rep.A_R == pytest.approx(2.0, abs=1e-12)
    assert rep.rhs == pytest.approx(4.0, abs=1e-11)
    assert rep.ok


def test_borel_caratheodory_log_zeta():
    rep = borel_caratheodory_gap(resolve("log-zeta-shift:20"), 0, 3.48, 3.49, probes=128, samples=256)
    assert rep.ok


def test_borel_caratheodory_deterministic_by_seed():
    f = resolve("sin")
    assert borel_caratheodory_gap(f, 0.2j, 1, 2, seed=5) == borel_caratheodory_gap(f, 0.2j, 1, 2, seed=5)
