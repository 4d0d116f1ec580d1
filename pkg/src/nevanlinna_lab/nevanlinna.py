"""Value-distribution functionals m, n, N, T and numerical checks of the classical inequalities.

All circles here are centred at the origin, matching the conventions of
Nevanlinna theory; shift a function first (``f(z + a)``) to study another
centre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .errors import DomainError, PreconditionViolated, QuadratureStalled
from .quadrature import DEFAULT_QUAD, QuadratureSpec, cauchy_derivative, circle_log_mean

ZERO = "zero"
POLE = "pole"
BOUNDARY_TOL = 1e-8
RADIUS_NUDGE = 1e-6
ORIGIN_TOL = 1e-14
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise DomainError("disk radius must be a positive finite number")
        if not (math.isfinite(self.center.real) and math.isfinite(self.center.imag)):
            raise DomainError("disk center must be finite")

    def contains(self, z, slack: float = 0.0) -> bool:
        return abs(complex(z) - self.center) <= self.radius + slack


@dataclass(frozen=True)
class Divisor:
    location: complex
    multiplicity: int
    kind: str = ZERO

    def __post_init__(self):
        object.__setattr__(self, "location", complex(self.location))
        if self.multiplicity < 1:
            raise DomainError("multiplicity must be >= 1")
        if self.kind not in (ZERO, POLE):
            raise DomainError(f"kind must be {ZERO!r} or {POLE!r}")


def _canonical_key(d: Divisor):
    return (abs(d.location), math.atan2(d.location.imag, d.location.real), d.kind)


@dataclass(frozen=True)
class DivisorList:
    """Zeros and poles with multiplicity, kept sorted by modulus."""

    entries: tuple = ()

    def __post_init__(self):
        entries = tuple(sorted((e if isinstance(e, Divisor) else Divisor(*e) for e in self.entries),
                               key=_canonical_key))
        seen = set()
        for e in entries:
            if e.location in seen:
                raise DomainError(f"duplicate divisor location {e.location}")
            seen.add(e.location)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, zeros: Iterable = (), poles: Iterable = ()):
        """Build from plain locations; repeated locations add up to multiplicities."""
        counts: dict[tuple[complex, str], int] = {}
        for kind, locs in ((ZERO, zeros), (POLE, poles)):
            for loc in locs:
                if isinstance(loc, tuple):
                    loc, mult = loc
                else:
                    mult = 1
                key = (complex(loc), kind)
                counts[key] = counts.get(key, 0) + int(mult)
        return cls(tuple(Divisor(loc, m, kind) for (loc, kind), m in counts.items()))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def of_kind(self, kind: str) -> "DivisorList":
        return DivisorList(tuple(e for e in self.entries if e.kind == kind))

    def total(self, kind: str | None = None) -> int:
        return sum(e.multiplicity for e in self.entries if kind is None or e.kind == kind)

    def merged(self, other: "DivisorList") -> "DivisorList":
        return DivisorList(self.entries + other.entries)

    def to_list(self) -> list[dict]:
        return [
            {"re": e.location.real, "im": e.location.imag, "multiplicity": e.multiplicity, "kind": e.kind}
            for e in self.entries
        ]

    @classmethod
    def from_list(cls, items) -> "DivisorList":
        return cls(tuple(Divisor(complex(d["re"], d["im"]), int(d["multiplicity"]), d["kind"]) for d in items))


@dataclass(frozen=True)
class FunctionHandle:
    """A vectorised complex function with optional known divisor and analyticity disk.

    ``func`` receives a 1-d complex ndarray and returns values of the same
    shape. It must be deterministic.
    """

    func: Callable[[np.ndarray], np.ndarray]
    label: str = "f"
    declared_divisors: DivisorList | None = None
    analytic_in: Disk | None = None

    def __post_init__(self):
        if self.analytic_in is not None and self.declared_divisors is not None:
            for e in self.declared_divisors.of_kind(POLE):
                if self.analytic_in.contains(e.location):
                    raise DomainError(f"{self.label}: declared pole {e.location} inside analytic disk")

    def __call__(self, z):
        arr = np.asarray(z, dtype=complex)
        out = np.asarray(self.func(arr.ravel()), dtype=complex).reshape(arr.shape)
        return complex(out) if out.ndim == 0 else out

    def is_analytic_on(self, radius: float, center: complex = 0.0) -> bool:
        if self.analytic_in is None:
            return False
        return abs(complex(center) - self.analytic_in.center) + radius <= self.analytic_in.radius

    def shifted(self, target: complex, label: str | None = None) -> "FunctionHandle":
        """The handle for f - target (divisors are dropped: the zeros move)."""
        target = complex(target)
        return FunctionHandle(lambda z: self.func(z) - target, label or f"{self.label}-({target})",
                              None, self.analytic_in)


@dataclass(frozen=True)
class CharTriple:
    """m, n, N and T = m + N of one function at one radius."""

    m: float
    n_count: int
    N: float
    radius: float
    T: float = field(init=False)

    def __post_init__(self):
        if self.m < 0:
            raise DomainError("proximity function must be non-negative")
        object.__setattr__(self, "T", self.m + self.N)


# ---------------------------------------------------------------------------
# functionals


def log_plus(x: float) -> float:
    if x < 0:
        raise DomainError("log_plus needs x >= 0")
    return math.log(x) if x >= 1.0 else 0.0


def _circle_mean(f: FunctionHandle, r: float, quad: QuadratureSpec, positive_part: bool, strict: bool):
    res = circle_log_mean(f, 0.0, r, quad, positive_part=positive_part)
    if strict and not res.converged:
        raise QuadratureStalled(
            f"{f.label}: circle mean at r={r} stalled (error {res.error:.3g})", res.value, res.error
        )
    return res


def proximity_m(f: FunctionHandle, r: float, quad: QuadratureSpec = DEFAULT_QUAD, strict: bool = True) -> float:
    """m(r, f): mean of log+|f| over |z| = r."""
    if not r > 0:
        raise DomainError("radius must be positive")
    return max(0.0, _circle_mean(f, r, quad, True, strict).value)


def counting_n(divisors: DivisorList, r: float, kind: str = ZERO) -> int:
    """Multiplicity-weighted count of entries of ``kind`` in the closed disk |z| <= r."""
    return sum(e.multiplicity for e in divisors
               if e.kind == kind and abs(e.location) <= r + BOUNDARY_TOL)


def integrated_N(divisors: DivisorList, r: float, kind: str = ZERO) -> float:
    """N(r): sum over 0 < |a| <= r of mult * log(r/|a|), plus n(0) log r."""
    if not r > 0:
        raise DomainError("radius must be positive")
    total = 0.0
    for e in divisors:
        if e.kind != kind:
            continue
        a = abs(e.location)
        if a <= ORIGIN_TOL:
            total += e.multiplicity * math.log(r)
        elif a <= r + BOUNDARY_TOL:
            total += e.multiplicity * max(0.0, math.log(r / a))
    return total


def _quadrature_radius(r: float, divisors: DivisorList | None) -> float:
    """Move the contour off any divisor that sits on |z| = r."""
    if divisors is not None and any(abs(abs(e.location) - r) <= BOUNDARY_TOL for e in divisors):
        return r * (1.0 + RADIUS_NUDGE)
    return r


def _pole_divisors(f: FunctionHandle, r: float) -> DivisorList:
    if f.declared_divisors is not None:
        return f.declared_divisors.of_kind(POLE)
    if f.is_analytic_on(r):
        return DivisorList()
    raise PreconditionViolated(f"{f.label}: poles inside |z| <= {r} are neither declared nor excluded")


def characteristic_T(f: FunctionHandle, r: float, quad: QuadratureSpec = DEFAULT_QUAD) -> CharTriple:
    poles = _pole_divisors(f, r)
    m = proximity_m(f, _quadrature_radius(r, poles), quad)
    return CharTriple(m=m, n_count=counting_n(poles, r, POLE), N=integrated_N(poles, r, POLE), radius=r)


def _golden_max(g, brackets: np.ndarray, iterations: int = 60) -> float:
    """Maximise g over each [a, b] row of ``brackets`` by golden-section search."""
    a = brackets[:, 0].copy()
    b = brackets[:, 1].copy()
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(iterations):
        left = gc > gd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        nc = np.where(left, b - _GOLDEN * (b - a), d)
        nd = np.where(left, c, a + _GOLDEN * (b - a))
        new_points = np.where(left, nc, nd)
        gnew = g(new_points)
        gc, gd = np.where(left, gnew, gd), np.where(left, gc, gnew)
        c, d = nc, nd
    return float(max(gc.max(), gd.max()))


def _circle_max(values_at, samples: int, center: complex, radius: float) -> float:
    """Max of a real function of z over |z - center| = radius, sampled then golden-refined."""
    theta = 2 * math.pi * np.arange(samples) / samples

    def g(phi):
        return values_at(center + radius * np.exp(1j * phi))

    vals = g(theta)
    best = np.argsort(vals)[-3:]
    width = 2 * math.pi / samples
    brackets = np.stack([theta[best] - width, theta[best] + width], axis=1)
    return max(float(vals.max()), _golden_max(g, brackets))


def max_modulus_M(f: FunctionHandle, r: float, samples: int = 512) -> float:
    """M(r, f) = max |f| over |z| = r."""
    if samples < 3:
        raise DomainError("need at least 3 samples")
    return _circle_max(lambda z: np.abs(f(z)), samples, 0.0, r)


def _check_origin_value(f: FunctionHandle) -> complex:
    f0 = complex(f(np.array([0j]))[0])
    if not (math.isfinite(f0.real) and math.isfinite(f0.imag)):
        raise PreconditionViolated(f"{f.label}: f(0) is infinite or undefined")
    if abs(f0) < 1e-300:
        raise PreconditionViolated(f"{f.label}: f(0) = 0")
    return f0


def jensen_residual(f: FunctionHandle, divisors: DivisorList, rho: float,
                    quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """log|f(0)| minus the right-hand side of Jensen's formula at radius rho."""
    f0 = _check_origin_value(f)
    radius = _quadrature_radius(rho, divisors)
    mean = _circle_mean(f, radius, quad, False, True).value
    zeros = sum(e.multiplicity * math.log(radius / abs(e.location))
                for e in divisors if e.kind == ZERO and abs(e.location) < radius)
    poles = sum(e.multiplicity * math.log(radius / abs(e.location))
                for e in divisors if e.kind == POLE and abs(e.location) < radius)
    return math.log(abs(f0)) - (mean - zeros + poles)


@dataclass(frozen=True)
class SFTReport:
    lhs: float
    rhs: float
    gap: float
    terms: dict = field(default_factory=dict, compare=False)


def derivative_at_origin(f: FunctionHandle, divisors: DivisorList | None = None, scale: float = 1.0) -> complex:
    """f'(0) by a Cauchy integral on a circle that stays clear of listed poles."""
    radius = 0.05 * scale
    if divisors is not None:
        poles = [abs(e.location) for e in divisors if e.kind == POLE]
        if poles:
            radius = min(radius, 0.5 * min(poles))
    return cauchy_derivative(f, 0.0, radius, tol=1e-12)


def sft_gap(f: FunctionHandle, r: float, R: float, divisors_0: DivisorList, divisors_inf: DivisorList,
            divisors_1: DivisorList, quad: QuadratureSpec = DEFAULT_QUAD) -> SFTReport:
    """Second-main-theorem inequality with constants 2, 4, 2, 24, 2328.

    ``divisors_0``, ``divisors_inf`` and ``divisors_1`` are the zeros of f,
    f's poles, and the zeros of f - 1, each complete in |z| <= R.
    """
    if not 0 < r < R:
        raise DomainError("need 0 < r < R")
    f0 = _check_origin_value(f)
    if abs(f0 - 1.0) < 1e-12:
        raise PreconditionViolated(f"{f.label}: f(0) = 1")
    fp0 = derivative_at_origin(f, divisors_inf, scale=min(1.0, R))
    if abs(fp0) < 1e-12:
        raise PreconditionViolated(f"{f.label}: f'(0) = 0")

    poles = DivisorList(tuple(Divisor(e.location, e.multiplicity, POLE) for e in divisors_inf))
    m = proximity_m(f, _quadrature_radius(r, poles), quad)
    lhs = m + integrated_N(poles, r, POLE)
    terms = {
        "N_R_zeros": integrated_N(_as_kind(divisors_0, ZERO), R, ZERO),
        "N_R_poles": integrated_N(poles, R, POLE),
        "N_R_ones": integrated_N(_as_kind(divisors_1, ZERO), R, ZERO),
        "log_plus_f0": log_plus(abs(f0)),
        "log_plus_inv_Rfp0": log_plus(1.0 / (R * abs(fp0))),
        "log_R_over_R_minus_r": math.log(R / (R - r)),
    }
    rhs = (2 * (terms["N_R_zeros"] + terms["N_R_poles"] + terms["N_R_ones"])
           + 4 * terms["log_plus_f0"] + 2 * terms["log_plus_inv_Rfp0"]
           + 24 * terms["log_R_over_R_minus_r"] + 2328)
    return SFTReport(lhs=lhs, rhs=rhs, gap=rhs - lhs, terms=terms)


def _as_kind(divisors: DivisorList, kind: str) -> DivisorList:
    return DivisorList(tuple(Divisor(e.location, e.multiplicity, kind) for e in divisors))


@dataclass(frozen=True)
class Lemma1Report:
    T_r: float
    logM_r: float
    bound: float
    ok: bool


def lemma1_check(f: FunctionHandle, r: float, rho: float, quad: QuadratureSpec = DEFAULT_QUAD,
                 samples: int = 1024) -> Lemma1Report:
    """T(r) <= log+ M(r) <= (rho + r)/(rho - r) T(rho) for f analytic on |z| <= rho."""
    if not 0 < r < rho:
        raise DomainError("need 0 < r < rho")
    eps = 10 * quad.target_abs_err
    t_r = proximity_m(f, r, quad)
    log_m = log_plus(max_modulus_M(f, r, samples))
    bound = (rho + r) / (rho - r) * proximity_m(f, rho, quad)
    ok = (t_r <= log_m + eps) and (log_m <= bound + eps)
    return Lemma1Report(T_r=t_r, logM_r=log_m, bound=bound, ok=bool(ok))


@dataclass(frozen=True)
class BorelCaratheodoryReport:
    max_lhs: float
    rhs: float
    ok: bool
    A_R: float


def borel_caratheodory_gap(f: FunctionHandle, z0: complex, r: float, R: float, probes: int = 256,
                           seed: int = 0, samples: int = 512) -> BorelCaratheodoryReport:
    """|f(z) - f(z0)| <= 2r/(R - r) (A(R) - Re f(z0)) on |z - z0| <= r.

    A(R) is the maximum of Re f on the closed disk of radius R, taken from a
    golden-refined boundary scan plus random interior points. The left side
    is maximised over ``probes`` points: half on the circle of radius r (then
    golden-refined), half uniformly inside.
    """
    if not 0 < r < R:
        raise DomainError("need 0 < r < R")
    z0 = complex(z0)
    rng = np.random.default_rng(seed)
    f_z0 = complex(f(np.array([z0]))[0])

    def interior(radius, count):
        rad = radius * np.sqrt(rng.random(count))
        ang = 2 * math.pi * rng.random(count)
        return z0 + rad * np.exp(1j * ang)

    a_r = _circle_max(lambda z: f(z).real, samples, z0, R)
    a_r = max(a_r, float(np.max(f(interior(R, samples)).real)))

    on_circle = max(probes // 2, 3)
    lhs = _circle_max(lambda z: np.abs(f(z) - f_z0), on_circle, z0, r)
    lhs = max(lhs, float(np.max(np.abs(f(interior(r, max(probes - on_circle, 1))) - f_z0))))
    rhs = 2 * r / (R - r) * (a_r - f_z0.real)
    eps = 1e-9 * (1.0 + abs(rhs))
    return BorelCaratheodoryReport(max_lhs=lhs, rhs=rhs, ok=bool(lhs <= rhs + eps), A_R=a_r)
