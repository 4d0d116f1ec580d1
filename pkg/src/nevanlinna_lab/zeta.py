"""Riemann zeta, its derivative, the von Mangoldt function and branches of log zeta.

Everything here runs in double precision. ``zeta`` uses Euler-Maclaurin
summation on the strip ``Re s >= 0.4``; ``zeta_derivative`` differentiates
the same expansion term by term for ``Re s > 1.3`` and falls back to a
Cauchy integral elsewhere. ``log_zeta_tracked`` continues log zeta along
horizontal paths from the line ``Re s = 4``.

Complex points are plain Python/numpy ``complex`` values: ``s.real`` is
sigma and ``s.imag`` is t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli, factorial

from .errors import BudgetExceeded, DomainError, PoleAtOne, ZeroOnPath
from .quadrature import cauchy_derivative

__all__ = [
    "EvalBudget",
    "RegionD",
    "DEFAULT_BUDGET",
    "WORKING_SIGMA_MIN",
    "mangoldt",
    "primes_up_to",
    "zeta",
    "zeta_derivative",
    "zeta_and_derivative",
    "log_zeta_series",
    "log_zeta_tracked",
    "log_zeta_tracked_many",
    "region_d_contains",
]

WORKING_SIGMA_MIN = 0.4
POLE_EXCLUSION = 1e-9
ZERO_ON_PATH_THRESHOLD = 1e-10
LOG_SERIES_TOL = 1e-12
LOG_SERIES_SIGMA_MIN = 1.05
CAUCHY_RADIUS = 0.25
DERIVATIVE_SERIES_SIGMA = 1.3

_DIRECT_LOG_MAX_TERMS = 2**20
_EULER_PRODUCT_CUTOFF = 2**16
# pi(x) < 1.25506 x / log x for x > 1 (Rosser & Schoenfeld)
_PRIME_COUNT_CONST = 1.25506
_CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class EvalBudget:
    """Accuracy target and work limits for one zeta evaluation."""

    target_abs_err: float = 1e-12
    max_terms: int = 2**20
    bernoulli_order: int = 10

    def __post_init__(self):
        if not self.target_abs_err >= 1e-14:
            raise DomainError("target_abs_err must be >= 1e-14 (double precision floor)")
        if self.max_terms < 1 or self.bernoulli_order < 1:
            raise DomainError("max_terms and bernoulli_order must be positive")


DEFAULT_BUDGET = EvalBudget()


@dataclass(frozen=True)
class RegionD:
    """{sigma > 1/2, |t| > 1} union {sigma > 2, |t| <= 1}, with the working margin delta."""

    delta: float = 0.01

    def __post_init__(self):
        if not 0.0 < self.delta <= 0.01:
            raise DomainError("delta must satisfy 0 < delta <= 1/100")

    def contains(self, s) -> bool:
        return region_d_contains(s, self)


def region_d_contains(s, region: RegionD | None = None) -> bool:
    s = complex(s)
    sigma, t = s.real, s.imag
    if not (math.isfinite(sigma) and math.isfinite(t)):
        return False
    return (sigma > 0.5 and abs(t) > 1.0) or (sigma > 2.0 and abs(t) <= 1.0)


def _check_finite(s: np.ndarray):
    if not np.all(np.isfinite(s)):
        raise DomainError("complex point has non-finite components")


# ---------------------------------------------------------------------------
# von Mangoldt and primes


def mangoldt(n: int) -> float:
    """Lambda(n): log p when n = p**k for a prime p and k >= 1, otherwise 0."""
    n = int(n)
    if n < 1:
        raise DomainError("mangoldt is defined for n >= 1")
    if n == 1:
        return 0.0
    p = _smallest_prime_factor(n)
    m = n
    while m % p == 0:
        m //= p
    return math.log(p) if m == 1 else 0.0


def _smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


@lru_cache(maxsize=8)
def _prime_power_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Prime powers q <= n with their weights Lambda(q)/log(q) = 1/k, sorted by q."""
    qs, ws = [], []
    for p in primes_up_to(n).tolist():
        q, k = p, 1
        while q <= n:
            qs.append(q)
            ws.append(1.0 / k)
            q *= p
            k += 1
    order = np.argsort(qs, kind="stable")
    return np.log(np.asarray(qs, dtype=float)[order]), np.asarray(ws)[order]


# ---------------------------------------------------------------------------
# Euler-Maclaurin


@lru_cache(maxsize=4)
def _em_coefficients(order: int) -> np.ndarray:
    """B_{2k}/(2k)! for k = 1 .. order + 1 (the last one feeds the remainder)."""
    b = bernoulli(2 * order + 2)
    ks = np.arange(1, order + 2)
    return b[2 * ks] / factorial(2 * ks, exact=False)


def _terms_for(t: np.ndarray) -> np.ndarray:
    # N >= max(32, ceil(2|t|)), rounded up to a multiple of 32 so nearby points share a block
    n = np.maximum(32, np.ceil(2.0 * np.abs(t)))
    return (32 * np.ceil(n / 32.0)).astype(np.int64)


def _em_block(s: np.ndarray, n_terms: int, order: int, derivative: bool):
    """Euler-Maclaurin value, derivative and remainder estimate with a common N."""
    n = np.arange(1, n_terms, dtype=float)
    logn = np.log(n)
    head = np.empty(s.shape, dtype=complex)
    dhead = np.zeros(s.shape, dtype=complex)
    rows = max(1, _CHUNK_ELEMENTS // max(1, n_terms))
    for lo in range(0, s.size, rows):
        sc = s[lo : lo + rows]
        powers = np.exp(-np.outer(sc, logn))
        head[lo : lo + rows] = powers.sum(axis=1)
        if derivative:
            dhead[lo : lo + rows] = -(powers * logn).sum(axis=1)

    big_n = float(n_terms)
    log_n = math.log(big_n)
    n_pow = np.exp(-s * log_n)  # N^{-s}
    sm1 = s - 1.0
    value = head + big_n * n_pow / sm1 + 0.5 * n_pow
    dvalue = dhead - log_n * big_n * n_pow / sm1 - big_n * n_pow / sm1**2 - 0.5 * log_n * n_pow

    coeffs = _em_coefficients(order)
    poch = s.copy()
    dpoch = np.ones_like(s)
    power = n_pow / big_n  # N^{-s-1}
    for k in range(1, order + 1):
        c = coeffs[k - 1]
        value = value + c * poch * power
        if derivative:
            dvalue = dvalue + c * (dpoch - log_n * poch) * power
        for j in (2 * k - 1, 2 * k):
            dpoch = dpoch * (s + j) + poch
            poch = poch * (s + j)
        power = power / (big_n * big_n)
    first_omitted = np.abs(coeffs[order] * poch * power)
    remainder = first_omitted * np.abs(s + 2 * order + 1) / (s.real + 2 * order + 1)
    # the derivative remainder is bounded the same way up to a log N factor
    dremainder = remainder * (log_n + 1.0)
    return value, dvalue, remainder, dremainder


def _zeta_core(s: np.ndarray, budget: EvalBudget, derivative: bool):
    """Vectorised Euler-Maclaurin with per-point N, doubled until the budget is met."""
    s = np.asarray(s, dtype=complex).ravel()
    value = np.empty_like(s)
    dvalue = np.empty_like(s)
    terms = _terms_for(s.imag)
    todo = np.arange(s.size)
    while todo.size:
        retry = []
        for n_terms in np.unique(terms[todo]):
            idx = todo[terms[todo] == n_terms]
            if n_terms > budget.max_terms:
                raise BudgetExceeded(
                    f"zeta needs more than max_terms={budget.max_terms} terms at s={s[idx[0]]}"
                )
            v, dv, err, derr = _em_block(s[idx], int(n_terms), budget.bernoulli_order, derivative)
            value[idx] = v
            dvalue[idx] = dv
            bad = (err > budget.target_abs_err) | (derivative & (derr > budget.target_abs_err))
            if np.any(bad):
                terms[idx[bad]] = 2 * n_terms
                retry.append(idx[bad])
        todo = np.concatenate(retry) if retry else np.zeros(0, dtype=np.int64)
    return value, dvalue


def _validate_strip(s: np.ndarray):
    _check_finite(s)
    if np.any(np.abs(s - 1.0) < POLE_EXCLUSION):
        raise PoleAtOne("zeta has a pole at s = 1")
    if np.any(s.real < WORKING_SIGMA_MIN):
        raise DomainError(f"zeta is evaluated only on Re s >= {WORKING_SIGMA_MIN}")


def _shape_like(template, arr: np.ndarray):
    if np.ndim(template) == 0:
        return complex(arr[0])
    return arr.reshape(np.shape(template))


def zeta(s, budget: EvalBudget = DEFAULT_BUDGET):
    """zeta(s) for scalar or array ``s`` with Re s >= 0.4.

    The Euler-Maclaurin remainder estimate is kept below
    ``budget.target_abs_err``; rounding error is not part of that estimate
    and grows roughly like ``1e-16 * |t| * log|t|``.
    """
    arr = np.asarray(s, dtype=complex).ravel()
    _validate_strip(arr)
    value, _ = _zeta_core(arr, budget, derivative=False)
    return _shape_like(s, value)


def zeta_and_derivative(s, budget: EvalBudget = DEFAULT_BUDGET):
    """zeta and the term-wise derivative of its Euler-Maclaurin expansion.

    Cheap and accurate everywhere on the strip; used internally for step control.
    """
    arr = np.asarray(s, dtype=complex).ravel()
    _validate_strip(arr)
    value, dvalue = _zeta_core(arr, budget, derivative=True)
    return _shape_like(s, value), _shape_like(s, dvalue)


def zeta_derivative(s, budget: EvalBudget = DEFAULT_BUDGET):
    """zeta'(s).

    For Re s > 1.3 the differentiated series is summed directly (with the
    differentiated Euler-Maclaurin tail). Elsewhere the Cauchy integral on
    the circle |w - s| = 0.25 is used, which must keep clear of w = 1.
    """
    arr = np.asarray(s, dtype=complex).ravel()
    _validate_strip(arr)
    out = np.empty_like(arr)
    series = arr.real > DERIVATIVE_SERIES_SIGMA
    if np.any(series):
        _, out[series] = _zeta_core(arr[series], budget, derivative=True)
    for i in np.flatnonzero(~series):
        if abs(arr[i] - 1.0) <= CAUCHY_RADIUS + POLE_EXCLUSION:
            raise PoleAtOne("Cauchy circle for zeta' would enclose s = 1")
        out[i] = cauchy_derivative(
            lambda w: _zeta_core(w, budget, derivative=False)[0],
            arr[i],
            CAUCHY_RADIUS,
            tol=10 * budget.target_abs_err,
        )
    return _shape_like(s, out)


# ---------------------------------------------------------------------------
# log zeta


def _direct_log_terms(sigma: float) -> int | None:
    # tail of sum_{n>N} Lambda(n)/(n^s log n) is below sum_{n>N} n^-sigma <= N^(1-sigma)/(sigma-1)
    exponent = -math.log(LOG_SERIES_TOL * (sigma - 1.0)) / (sigma - 1.0)
    if exponent > math.log(_DIRECT_LOG_MAX_TERMS):
        return None
    n = math.ceil(math.exp(exponent))
    return 1 << max(10, (n - 1).bit_length())


def _euler_tail_bound(sigma: float, cutoff: int) -> float:
    """Upper bound on |log prod_{p > cutoff} (1 - p^-s)^-1|."""
    head = _PRIME_COUNT_CONST * sigma * cutoff ** (1.0 - sigma) / ((sigma - 1.0) * math.log(cutoff))
    return head / (1.0 - cutoff ** (-sigma))


def log_zeta_series(s, budget: EvalBudget = DEFAULT_BUDGET):
    """log zeta(s) = sum Lambda(n) / (n^s log n) on Re s >= 1.05.

    Where the plain partial sum can certify 1e-12 within 2**20 terms it is
    used as is. Closer to Re s = 1 the primes up to 2**16 are summed
    exactly and the remaining Euler factors are recovered from
    ``zeta(s) * prod_{p <= P} (1 - p^-s)``, whose logarithm is certified to
    lie on the principal branch by a prime-counting tail bound.
    """
    arr = np.asarray(s, dtype=complex).ravel()
    _check_finite(arr)
    if np.any(arr.real < LOG_SERIES_SIGMA_MIN):
        raise DomainError(f"log_zeta_series needs Re s >= {LOG_SERIES_SIGMA_MIN}")
    out = np.empty_like(arr)
    plan = [_direct_log_terms(x) for x in arr.real]
    direct_sizes = sorted({n for n in plan if n is not None})
    for n_terms in direct_sizes:
        idx = np.array([i for i, n in enumerate(plan) if n == n_terms])
        log_q, weight = _prime_power_table(n_terms)
        rows = max(1, _CHUNK_ELEMENTS // log_q.size)
        for lo in range(0, idx.size, rows):
            sub = idx[lo : lo + rows]
            out[sub] = (np.exp(-np.outer(arr[sub], log_q)) * weight).sum(axis=1)
    hybrid = np.array([i for i, n in enumerate(plan) if n is None], dtype=np.int64)
    if hybrid.size:
        out[hybrid] = _log_zeta_euler(arr[hybrid], budget)
    return _shape_like(s, out)


def _log_zeta_euler(s: np.ndarray, budget: EvalBudget) -> np.ndarray:
    cutoff = _EULER_PRODUCT_CUTOFF
    for sigma in s.real:
        if _euler_tail_bound(sigma, cutoff) >= math.pi / 2:
            raise DomainError(f"Euler product tail not certified at sigma={sigma}")
    log_p = np.log(primes_up_to(cutoff).astype(float))
    head = np.empty_like(s)
    rows = max(1, _CHUNK_ELEMENTS // log_p.size)
    for lo in range(0, s.size, rows):
        sc = s[lo : lo + rows]
        head[lo : lo + rows] = -np.log1p(-np.exp(-np.outer(sc, log_p))).sum(axis=1)
    z, _ = _zeta_core(s, budget, derivative=False)
    return head + np.log(z * np.exp(-head))


def log_zeta_tracked(
    s,
    region: RegionD = RegionD(),
    budget: EvalBudget = DEFAULT_BUDGET,
    max_step: float = 0.05,
) -> complex:
    """Branch of log zeta(s) continued horizontally from 4 + i Im(s).

    The anchor is ``log_zeta_series(4 + i t)``. Along the path the step is
    at most ``min(max_step, 0.5 |zeta| / (1 + |zeta'|))`` and the phase may
    not move by pi/2 or more between samples. Raises ``ZeroOnPath`` when
    |zeta| < 1e-10 at a sample.
    """
    return complex(log_zeta_tracked_many(np.array([complex(s)]), region, budget, max_step)[0])


def _check_tracked_domain(pts: np.ndarray, region: RegionD):
    _check_finite(pts)
    floor = 0.5 + 2.0 * region.delta
    for p in pts:
        if not region_d_contains(p, region):
            raise DomainError(f"{p} lies outside region D")
        if p.real < floor:
            raise DomainError(f"{p} lies left of sigma = 1/2 + 2 delta = {floor}")


def log_zeta_tracked_many(
    points,
    region: RegionD = RegionD(),
    budget: EvalBudget = DEFAULT_BUDGET,
    max_step: float = 0.05,
) -> np.ndarray:
    """Vectorised ``log_zeta_tracked``; points sharing an ordinate share one path."""
    pts = np.asarray(points, dtype=complex).ravel()
    _check_tracked_domain(pts, region)
    out = np.empty_like(pts)
    ts, inverse = np.unique(pts.imag, return_inverse=True)
    anchors = log_zeta_series(4.0 + 1j * ts, budget)

    paths = []
    for k, t in enumerate(ts):
        targets = pts.real[inverse == k]
        paths.append(_initial_nodes(targets, max_step))
    nodes_s = [p + 1j * t for p, t in zip(paths, ts)]
    flat = np.concatenate(nodes_s)
    zv, dv = _zeta_core(flat, budget, derivative=True)
    splits = np.cumsum([p.size for p in paths])[:-1]
    zvals = np.split(zv, splits)
    dvals = np.split(dv, splits)

    for _round in range(200):
        mids_per_path = [
            _refinement_points(ts[k], paths[k], zvals[k], dvals[k], max_step) for k in range(len(paths))
        ]
        if not any(m.size for m in mids_per_path):
            break
        flat_mid = np.concatenate([m + 1j * ts[k] for k, m in enumerate(mids_per_path)])
        zm, dm = _zeta_core(flat_mid, budget, derivative=True)
        lo = 0
        for k, m in enumerate(mids_per_path):
            if not m.size:
                continue
            hi = lo + m.size
            sig = np.concatenate([paths[k], m])
            order = np.argsort(sig, kind="stable")
            paths[k] = sig[order]
            zvals[k] = np.concatenate([zvals[k], zm[lo:hi]])[order]
            dvals[k] = np.concatenate([dvals[k], dm[lo:hi]])[order]
            lo = hi
    else:
        raise ZeroOnPath("continuation step control did not settle")

    for k, t in enumerate(ts):
        sig, zk = paths[k], zvals[k]
        small = np.abs(zk) < ZERO_ON_PATH_THRESHOLD
        if np.any(small):
            j = int(np.flatnonzero(small)[0])
            raise ZeroOnPath(
                f"|zeta| < {ZERO_ON_PATH_THRESHOLD} at s = {complex(sig[j], t)}",
                point=complex(sig[j], t),
                modulus=float(abs(zk[j])),
            )
        # nodes are ascending in sigma; the path from 4 to any node is a contiguous run
        cumulative = np.concatenate([[0.0], np.cumsum(np.angle(zk[1:] / zk[:-1]))])
        anchor = int(np.searchsorted(sig, 4.0))
        for i in np.flatnonzero(inverse == k):
            j = int(np.searchsorted(sig, pts[i].real))
            if j == anchor:
                out[i] = anchors[k]
            else:
                phase = cumulative[j] - cumulative[anchor]
                out[i] = complex(math.log(abs(zk[j])), anchors[k].imag + phase)
    return out


def _initial_nodes(targets: np.ndarray, max_step: float) -> np.ndarray:
    """Ascending nodes: 4, the targets, and a uniform grid from 4 out to the extreme targets."""
    pieces = [np.array([4.0]), targets]
    for end in (targets.min(), targets.max()):
        if end != 4.0:
            count = max(1, math.ceil(abs(end - 4.0) / max_step))
            pieces.append(np.linspace(4.0, end, count + 1))
    return np.unique(np.concatenate(pieces))


def _refinement_points(t, sig, zv, dv, max_step) -> np.ndarray:
    """Midpoints of intervals that break the step-size or phase-jump rule."""
    mods = np.abs(zv)
    if np.any(mods < ZERO_ON_PATH_THRESHOLD):
        return np.zeros(0)
    allowed = np.minimum(max_step, 0.5 * mods / (1.0 + np.abs(dv)))
    width = np.diff(sig)
    jump = np.abs(np.angle(zv[1:] / zv[:-1]))
    bad = (width > np.minimum(allowed[1:], allowed[:-1]) * (1 + 1e-12)) | (jump >= math.pi / 2)
    if np.any(bad & (width < 1e-12)):
        j = int(np.flatnonzero(bad & (width < 1e-12))[0])
        raise ZeroOnPath(f"continuation stalled near s = {complex(sig[j], t)}", point=complex(sig[j], t))
    return 0.5 * (sig[:-1][bad] + sig[1:][bad])
