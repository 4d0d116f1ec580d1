"""Zero census in a disk: argument-principle winding counts and recursive isolation.

Winding numbers come from phase-unwrapped boundary samples. Inside a disk
with few zeros the power sums of the zeros are read off the same samples
(integrating the single-valued part of log f against powers of z), which
gives candidate roots that are then polished by damped Newton steps. Disks
where that fails are covered by four overlapping sub-disks.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryZero, DepthExceeded, DomainError, LabError, UnstableWinding
from .nevanlinna import ZERO, Disk, Divisor, DivisorList, FunctionHandle

log = logging.getLogger(__name__)

BOUNDARY_DISTANCE = 1e-9
MAX_NUDGES = 5
NUDGE = 1e-6
SNAP_TOL = 0.01
OVERLAP = 1.2
MOMENT_MAX_ROOTS = 6
NEWTON_STEPS = 10


@dataclass(frozen=True)
class CensusConfig:
    boundary_samples_min: int = 256
    max_subdivision_depth: int = 80
    root_radius_tol: float = 1e-10
    target: complex = 0j
    max_boundary_samples: int = 2**20

    def __post_init__(self):
        if self.root_radius_tol < 1e-10:
            raise DomainError("root_radius_tol must be >= 1e-10")
        if self.boundary_samples_min < 8 or self.max_subdivision_depth < 1:
            raise DomainError("boundary_samples_min >= 8 and max_subdivision_depth >= 1 required")


@dataclass
class Winding:
    """Winding of f - target around one circle, with the samples it was read from."""

    count: int
    raw: float
    radius: float
    nudges: int
    theta: np.ndarray
    values: np.ndarray
    center: complex


class _NearBoundary(Exception):
    pass


def _sample_circle(f, center, radius, cfg: CensusConfig):
    target = complex(cfg.target)
    n = cfg.boundary_samples_min
    theta = 2 * math.pi * np.arange(n) / n
    values = np.asarray(f(center + radius * np.exp(1j * theta)), dtype=complex) - target
    while True:
        if not np.all(np.isfinite(values)) or np.any(values == 0):
            raise _NearBoundary
        z = center + radius * np.exp(1j * theta)
        slope = (np.roll(values, -1) - np.roll(values, 1)) / (np.roll(z, -1) - np.roll(z, 1))
        # |f / f'| approximates the distance to the nearest zero
        with np.errstate(divide="ignore"):
            distance = np.abs(values) / np.abs(slope)
        if np.min(distance) < BOUNDARY_DISTANCE:
            raise _NearBoundary
        steps = np.angle(np.roll(values, -1) / values)
        if np.max(np.abs(steps)) < math.pi / 2:
            return theta, values, steps
        if 2 * n > cfg.max_boundary_samples:
            raise UnstableWinding(
                f"boundary of disk({center}, {radius}) unresolved with {n} samples"
            )
        mid_theta = theta + math.pi / n
        mid_values = np.asarray(f(center + radius * np.exp(1j * mid_theta)), dtype=complex) - target
        theta = np.stack([theta, mid_theta], axis=1).ravel()
        values = np.stack([values, mid_values], axis=1).ravel()
        n *= 2


def winding(f: FunctionHandle, disk: Disk, cfg: CensusConfig = CensusConfig()) -> Winding:
    """Winding details of f - cfg.target around ``disk``, nudging the radius off boundary zeros."""
    radius = disk.radius
    for nudge in range(MAX_NUDGES + 1):
        try:
            theta, values, steps = _sample_circle(f, disk.center, radius, cfg)
        except _NearBoundary:
            if nudge == MAX_NUDGES:
                break
            new_radius = radius * (1.0 + NUDGE)
            log.info("%s: zero near |z - %s| = %.12g, radius nudged to %.12g",
                     f.label, disk.center, radius, new_radius)
            radius = new_radius
            continue
        raw = float(np.sum(steps) / (2 * math.pi))
        count = int(round(raw))
        if abs(raw - count) >= SNAP_TOL:
            raise UnstableWinding(f"winding {raw} does not snap to an integer")
        return Winding(count, raw, radius, nudge, theta, values, disk.center)
    raise BoundaryZero(f"{f.label}: zero on the boundary of disk({disk.center}, {disk.radius}) "
                       f"after {MAX_NUDGES} nudges")


def winding_count(f: FunctionHandle, disk: Disk, cfg: CensusConfig = CensusConfig()) -> int:
    """Number of zeros of f - cfg.target inside ``disk`` counted with multiplicity."""
    return winding(f, disk, cfg).count


# ---------------------------------------------------------------------------
# root extraction


def _power_sums(w: Winding, k: int, count: int) -> np.ndarray:
    """sum over zeros of (a - center)^j, j = 1..count, from the boundary samples.

    With f = g (z - c)^k on the circle, log g is single valued and
    s_j = -j * mean(w^j log g) for w = z - c.
    """
    steps = np.angle(np.roll(w.values, -1) / w.values)
    arg = np.angle(w.values[0]) + np.concatenate([[0.0], np.cumsum(steps[:-1])])
    log_f = np.log(np.abs(w.values)) + 1j * arg
    wz = w.radius * np.exp(1j * w.theta)
    log_g = log_f - k * (math.log(w.radius) + 1j * w.theta)
    return np.array([-j * np.mean(wz**j * log_g) for j in range(1, count + 1)])


def _roots_from_power_sums(p: np.ndarray) -> np.ndarray:
    """Roots of the monic polynomial whose roots have power sums p (Newton's identities)."""
    k = p.size
    e = np.zeros(k + 1, dtype=complex)
    e[0] = 1.0
    for m in range(1, k + 1):
        acc = 0j
        for i in range(1, m + 1):
            acc += (-1) ** (i - 1) * e[m - i] * p[i - 1]
        e[m] = acc / m
    coeffs = np.array([(-1) ** m * e[m] for m in range(k + 1)])
    return np.roots(coeffs)


def _newton_polish(f, z: complex, target: complex, scale: float, mult: int = 1) -> tuple[complex, float]:
    """Damped Newton with a central-difference derivative; returns (root, last step size).

    ``mult`` > 1 uses the modified step mult * f / f', which keeps quadratic
    convergence at a root of that multiplicity.
    """
    h = 1e-7 * max(scale, 1e-3)
    last = math.inf
    fz = complex(f(np.array([z]))[0]) - target
    for _ in range(NEWTON_STEPS):
        pair = np.asarray(f(np.array([z + h, z - h])), dtype=complex)
        slope = (pair[0] - pair[1]) / (2 * h)
        if slope == 0 or not np.isfinite(slope):
            break
        step = mult * fz / slope
        damp = 1.0
        for _ in range(20):
            trial = z - damp * step
            f_trial = complex(f(np.array([trial]))[0]) - target
            if abs(f_trial) <= abs(fz) or damp < 1e-6:
                break
            damp *= 0.5
        last = abs(damp * step)
        z, fz = trial, f_trial
        if fz == 0 or last < 1e-15 * max(1.0, abs(z)):
            break
    return z, last


def _cluster(points: np.ndarray, tol: float) -> list[list[int]]:
    groups: list[list[int]] = []
    for i, p in enumerate(points):
        for g in groups:
            if abs(points[g[0]] - p) < tol:
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def _isolate_by_moments(f: FunctionHandle, w: Winding, cfg: CensusConfig) -> list[tuple[complex, int]] | None:
    """All zeros of a disk with few zeros, or None when the result cannot be trusted."""
    k = w.count
    rho = w.radius
    try:
        shifted = _roots_from_power_sums(_power_sums(w, k, k))
    except (FloatingPointError, np.linalg.LinAlgError):
        return None
    if not np.all(np.isfinite(shifted)):
        return None
    candidates = w.center + shifted
    target = complex(cfg.target)
    found = []
    for group in _cluster(candidates, 1e-4 * rho):
        loc = complex(np.mean(candidates[group]))
        mult = len(group)
        if mult == 1:
            loc, last = _newton_polish(f, loc, target, rho)
            if not last < 1e-9 * max(rho, 1.0):
                return None
        else:
            polished, _ = _newton_polish(f, loc, target, rho, mult)
            if abs(polished - loc) < 1e-4 * rho:
                loc = polished
            small = max(1e-3 * rho, 10 * cfg.root_radius_tol)
            try:
                check = winding(f, Disk(loc, small), cfg).count
            except LabError:
                return None
            if check != mult:
                return None
        if abs(loc - w.center) >= rho:
            return None
        found.append((loc, mult))
    if sum(m for _, m in found) != k:
        return None
    return found


def _children(disk: Disk) -> list[Disk]:
    offset = disk.radius / 2.0
    radius = OVERLAP * disk.radius / math.sqrt(2.0)
    return [Disk(disk.center + offset * complex(sx, sy), radius)
            for sx, sy in ((1, 1), (-1, 1), (-1, -1), (1, -1))]


def census(f: FunctionHandle, disk: Disk, cfg: CensusConfig = CensusConfig()) -> DivisorList:
    """Zeros of f - cfg.target inside ``disk`` with multiplicities.

    The sum of multiplicities equals ``winding_count`` of the whole disk;
    a mismatch raises ``UnstableWinding``.
    """
    top = winding(f, disk, cfg)
    found: list[tuple[complex, int]] = []
    merge = max(10 * cfg.root_radius_tol, 1e-9 * disk.radius)
    # a root of multiplicity m is only located to about eps^(1/m)
    merge_multiple = max(merge, 1e-6 * disk.radius)

    def known_inside(d: Disk, radius: float) -> int:
        return sum(m for loc, m in found if abs(loc - d.center) < radius)

    def add(loc: complex, mult: int):
        for other, m in found:
            if abs(other - loc) < (merge_multiple if max(m, mult) > 1 else merge):
                return
        found.append((loc, mult))

    def visit(d: Disk, w: Winding, depth: int):
        if w.count == 0 or known_inside(d, w.radius) == w.count:
            return
        if w.radius < cfg.root_radius_tol:
            add(d.center, w.count)
            return
        if w.count <= MOMENT_MAX_ROOTS:
            roots = _isolate_by_moments(f, w, cfg)
            if roots is not None:
                for loc, mult in roots:
                    add(loc, mult)
                return
        if depth >= cfg.max_subdivision_depth:
            raise DepthExceeded(f"{f.label}: disk({d.center}, {d.radius}) unresolved at depth {depth}", disk=d)
        for child in _children(Disk(d.center, w.radius)):
            visit(child, winding(f, child, cfg), depth + 1)

    visit(disk, top, 0)
    inside = [(loc, m) for loc, m in found if abs(loc - disk.center) < top.radius]
    total = sum(m for _, m in inside)
    if total != top.count:
        raise UnstableWinding(f"{f.label}: census found {total} zeros but the winding count is {top.count}")
    return DivisorList(tuple(Divisor(loc, m, ZERO) for loc, m in inside))
