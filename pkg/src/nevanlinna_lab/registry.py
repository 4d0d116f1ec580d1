"""Named function handles: ``exp``, ``sin``, ``const:<c>``, ``exp-shift:<c>``,
``rational:<spec>``, ``zeta-shift:<t>``, ``zeta-minus-1-shift:<t>`` and ``log-zeta-shift:<t>``.

A rational spec lists its divisor explicitly, e.g.
``rational:zeros=0.5,-0.2+0.3j^2;poles=0.6;scale=2`` (``^k`` is a multiplicity).
The zeta family is evaluated at ``z + 4 + i t``.
"""

from __future__ import annotations

import numpy as np

from .census import CensusConfig, census
from .errors import DomainError
from .nevanlinna import POLE, ZERO, Disk, Divisor, DivisorList, FunctionHandle
from .zeta import DEFAULT_BUDGET, WORKING_SIGMA_MIN, RegionD, log_zeta_tracked_many, zeta

EVERYWHERE = Disk(0.0, 1e300)
# f(z) = zeta(z + 4 + it) is evaluated on Re(z + 4) >= 0.4
ZETA_SHIFT_RADIUS = 4.0 - WORKING_SIGMA_MIN - 1e-9
# log zeta(z + 4 + it) is used on |z| <= 7/2 - delta, i.e. down to sigma = 1/2 + delta
LOG_ZETA_RADIUS = 3.495
LOG_ZETA_REGION = RegionD(delta=0.0025)


def _parse_roots(text: str) -> list[tuple[complex, int]]:
    out = []
    for item in filter(None, (x.strip() for x in text.split(","))):
        loc, _, mult = item.partition("^")
        out.append((complex(loc.replace(" ", "")), int(mult) if mult else 1))
    return out


def parse_rational(spec: str) -> tuple[list, list, complex]:
    zeros, poles, scale = [], [], 1.0 + 0j
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        key, _, value = part.partition("=")
        key = key.strip()
        if key == "zeros":
            zeros = _parse_roots(value)
        elif key == "poles":
            poles = _parse_roots(value)
        elif key == "scale":
            scale = complex(value.strip())
        else:
            raise DomainError(f"unknown rational field {key!r}")
    return zeros, poles, scale


def rational_id(zeros, poles=(), scale: complex = 1.0) -> str:
    """Registry id of scale * prod(z - a) / prod(z - b); items may be (location, multiplicity)."""

    def fmt(items):
        parts = []
        for item in items:
            loc, mult = item if isinstance(item, tuple) else (item, 1)
            parts.append(repr(complex(loc)).strip("()") + (f"^{mult}" if mult > 1 else ""))
        return ",".join(parts)

    return f"rational:zeros={fmt(zeros)};poles={fmt(poles)};scale={repr(complex(scale)).strip('()')}"


def _rational_handle(fid: str, spec: str) -> FunctionHandle:
    zeros, poles, scale = parse_rational(spec)
    za = np.array([a for a, m in zeros for _ in range(m)], dtype=complex)
    pa = np.array([b for b, m in poles for _ in range(m)], dtype=complex)

    def func(z):
        num = np.prod(z[:, None] - za[None, :], axis=1) if za.size else np.ones_like(z)
        den = np.prod(z[:, None] - pa[None, :], axis=1) if pa.size else np.ones_like(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return scale * num / den

    divisors = DivisorList(tuple(Divisor(a, m, ZERO) for a, m in zeros)
                           + tuple(Divisor(b, m, POLE) for b, m in poles))
    analytic = EVERYWHERE if not poles else None
    return FunctionHandle(func, fid, divisors, analytic)


def resolve(fid: str) -> FunctionHandle:
    """FunctionHandle for a registry id."""
    name, _, arg = fid.partition(":")
    if name == "exp":
        return FunctionHandle(np.exp, fid, DivisorList(), EVERYWHERE)
    if name == "sin":
        return FunctionHandle(np.sin, fid, None, EVERYWHERE)
    if name == "const":
        c = complex(arg)
        divisors = DivisorList() if c != 0 else None
        return FunctionHandle(lambda z: np.full(z.shape, c, dtype=complex), fid, divisors, EVERYWHERE)
    if name == "exp-shift":
        c = complex(arg)
        return FunctionHandle(lambda z: np.exp(z) + c, fid, None, EVERYWHERE)
    if name == "rational":
        return _rational_handle(fid, arg)
    if name in ("zeta-shift", "zeta-minus-1-shift", "log-zeta-shift"):
        t = float(arg)
        if abs(t) <= 1.0:
            raise DomainError("zeta-family handles need |t| > 1")
        base = 4.0 + 1j * t
        if name == "zeta-shift":
            return FunctionHandle(lambda z: zeta(z + base, DEFAULT_BUDGET), fid, None,
                                  Disk(0.0, ZETA_SHIFT_RADIUS))
        if name == "zeta-minus-1-shift":
            return FunctionHandle(lambda z: zeta(z + base, DEFAULT_BUDGET) - 1.0, fid, None,
                                  Disk(0.0, ZETA_SHIFT_RADIUS))
        return FunctionHandle(lambda z: log_zeta_tracked_many(z + base, LOG_ZETA_REGION), fid, None,
                              Disk(0.0, LOG_ZETA_RADIUS))
    raise DomainError(f"unknown function id {fid!r}")


BUILTIN_IDS = (
    "exp",
    "sin",
    "const:5",
    "exp-shift:2",
    "rational:zeros=0.3,-0.4+0.2j;poles=;scale=1.5",
    "rational:zeros=2,-1.5j;poles=;scale=0.8",
    "rational:zeros=0.3,0.4;poles=0.6;scale=1",
    "rational:zeros=0.5+0.5j^2;poles=-0.7;scale=3",
    "zeta-shift:20",
    "zeta-shift:100",
    "zeta-minus-1-shift:20",
    "log-zeta-shift:20",
    "log-zeta-shift:100",
)


def builtin_registry() -> list[FunctionHandle]:
    return [resolve(fid) for fid in BUILTIN_IDS]


def value_divisors(f: FunctionHandle, radius: float, value: complex,
                   cfg: CensusConfig | None = None) -> DivisorList:
    """Zeros of f - value in |z| <= radius.

    Rational handles are solved in closed form from their numerator and
    denominator; everything else goes through the disk census (which needs
    f analytic on the disk).
    """
    value = complex(value)
    if f.label.startswith("rational:"):
        zeros, poles, scale = parse_rational(f.label.partition(":")[2])
        num = scale * np.poly([a for a, m in zeros for _ in range(m)]) if zeros else np.array([scale])
        den = np.poly([b for b, m in poles for _ in range(m)]) if poles else np.array([1.0 + 0j])
        if value == 0:
            return DivisorList(tuple(Divisor(a, m, ZERO) for a, m in zeros if abs(a) <= radius))
        width = max(num.size, den.size)
        num = np.pad(num, (width - num.size, 0))
        den = np.pad(den, (width - den.size, 0))
        poly = np.trim_zeros(num - value * den, "f")
        roots = np.roots(poly) if poly.size > 1 else np.zeros(0)
        return DivisorList.of(zeros=[r for r in roots if abs(r) <= radius])
    if f.declared_divisors is not None and value == 0 and f.analytic_in is not None:
        return f.declared_divisors.of_kind(ZERO)
    if not f.is_analytic_on(radius):
        raise DomainError(f"{f.label}: census needs analyticity on |z| <= {radius}")
    cfg = cfg or CensusConfig()
    cfg = CensusConfig(cfg.boundary_samples_min, cfg.max_subdivision_depth, cfg.root_radius_tol, value,
                       cfg.max_boundary_samples)
    return census(f, Disk(0.0, radius), cfg)


def is_analytic(f: FunctionHandle) -> bool:
    return f.analytic_in is not None
