"""Circle integrals: adaptive Gauss-Kronrod panels for log-averages and Cauchy derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, DomainError

TWO_PI = 2.0 * math.pi
SINGULAR_MODULUS = 1e-12
SINGULAR_HALF_WIDTH = 1e-6

# 15-point Kronrod nodes on [-1, 1] (non-negative half) and weights; the 7-point
# Gauss rule uses the odd-indexed nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

KRONROD_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_gauss_full = np.zeros(15)
_gauss_full[[1, 3, 5, 9, 11, 13]] = np.concatenate([_WG[:3], _WG[:3][::-1]])
_gauss_full[7] = _WG[3]
GAUSS_WEIGHTS = _gauss_full


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel count, refinement depth and absolute error target for circle averages."""

    initial_panels: int = 16
    max_depth: int = 40
    target_abs_err: float = 1e-10

    def __post_init__(self):
        if self.initial_panels < 16:
            raise DomainError("initial_panels must be >= 16")
        if self.max_depth < 1 or not self.target_abs_err > 0:
            raise DomainError("max_depth and target_abs_err must be positive")


DEFAULT_QUAD = QuadratureSpec()


@dataclass
class CircleIntegral:
    """Result of a normalised circle average (1/2pi) * integral over [0, 2pi)."""

    value: float
    error: float
    converged: bool
    evaluations: int
    singular_angles: list = field(default_factory=list)


def _singular_kind(modulus: float) -> int:
    if modulus < SINGULAR_MODULUS:
        return 1
    if modulus > 1.0 / SINGULAR_MODULUS:
        return -1
    return 0


def circle_log_mean(f, center, radius: float, quad: QuadratureSpec = DEFAULT_QUAD,
                    positive_part: bool = False) -> CircleIntegral:
    """(1/2pi) * integral of log|f| (or log+|f|) over the circle |z - center| = radius.

    ``f`` must accept a complex ndarray. Panels are refined by the
    Kronrod/Gauss difference. When a panel endpoint lands on a zero
    (|f| < 1e-12) or a pole (|f| > 1e12), a window of +-1e-6 rad around it
    is integrated with the local model log|c (phi - phi0)^(+-1)|.
    """
    center = complex(center)

    def angle_values(phi):
        return np.asarray(f(center + radius * np.exp(1j * phi)), dtype=complex)

    def integrand(vals):
        with np.errstate(divide="ignore"):
            g = np.log(np.abs(vals))
        return np.maximum(g, 0.0) if positive_part else g

    total = 0.0
    singular = []
    evaluations = 0

    edges = np.linspace(0.0, TWO_PI, quad.initial_panels + 1)
    edge_vals = angle_values(edges[:-1])
    evaluations += edge_vals.size
    cuts = []  # (phi0, kind)
    for phi, val in zip(edges[:-1], edge_vals):
        kind = _singular_kind(abs(val))
        if kind:
            cuts.append((phi, kind))

    panels = []
    for a, b in zip(edges[:-1], edges[1:]):
        panels.append([a, b, 0])

    def excise(phi0, kind):
        nonlocal total, evaluations
        eps = SINGULAR_HALF_WIDTH
        side = angle_values(np.array([phi0 - eps, phi0 + eps]))
        evaluations += 2
        # |f(phi0 +- eps)| ~ c * eps^kind
        log_c = float(np.mean(np.log(np.abs(side)))) - kind * math.log(eps)
        model = 2 * eps * (log_c + kind * (math.log(eps) - 1.0))
        if positive_part:
            model = max(model, 0.0) if kind == -1 else 0.0
        total += model / TWO_PI
        singular.append(float(phi0 % TWO_PI))

    def trim(panel_list, phi0):
        eps = SINGULAR_HALF_WIDTH
        out = []
        for a, b, d in panel_list:
            for shift in (-TWO_PI, 0.0, TWO_PI):
                p = phi0 + shift
                if a - eps < p < b + eps:
                    if a < p - eps:
                        out.append([a, p - eps, d])
                    if p + eps < b:
                        out.append([p + eps, b, d])
                    break
            else:
                out.append([a, b, d])
        return out

    for phi0, kind in cuts:
        excise(phi0, kind)
        panels = trim(panels, phi0)

    error = 0.0
    converged = True
    while panels:
        arr = np.array([p[:2] for p in panels])
        half = 0.5 * (arr[:, 1] - arr[:, 0])
        mid = 0.5 * (arr[:, 1] + arr[:, 0])
        nodes = mid[:, None] + half[:, None] * KRONROD_NODES[None, :]
        vals = angle_values(nodes.ravel()).reshape(nodes.shape)
        evaluations += vals.size
        g = integrand(vals)
        kron = half * (g * KRONROD_WEIGHTS).sum(axis=1) / TWO_PI
        gauss = half * (g * GAUSS_WEIGHTS).sum(axis=1) / TWO_PI
        err = np.abs(kron - gauss)
        err[~np.isfinite(kron)] = np.inf
        local_tol = quad.target_abs_err * (2 * half) / TWO_PI
        next_panels = []
        split_mids = []
        for i, (a, b, depth) in enumerate(panels):
            if err[i] <= local_tol[i]:
                total += kron[i]
                error += err[i]
            elif depth >= quad.max_depth:
                converged = False
                if np.isfinite(kron[i]):
                    total += kron[i]
                    error += err[i]
                else:
                    error = math.inf
            else:
                split_mids.append(0.5 * (a + b))
                next_panels.append([a, 0.5 * (a + b), depth + 1])
                next_panels.append([0.5 * (a + b), b, depth + 1])
        if split_mids:
            mid_vals = angle_values(np.array(split_mids))
            evaluations += mid_vals.size
            for phi, val in zip(split_mids, mid_vals):
                kind = _singular_kind(abs(val))
                if kind:
                    excise(phi, kind)
                    next_panels = trim(next_panels, phi)
        panels = next_panels

    converged = bool(converged and error <= quad.target_abs_err)
    return CircleIntegral(float(total), float(error), converged, evaluations, singular)


def cauchy_derivative(f, z0, radius: float, n0: int = 64, tol: float = 1e-11,
                      max_points: int = 1 << 14) -> complex:
    """f'(z0) from the trapezoid rule on the Cauchy integral over |w - z0| = radius.

    The point count doubles from ``n0`` until two successive estimates
    agree within ``tol`` (or within 1e-13 of the circle's value scale).
    """
    z0 = complex(z0)
    n = n0
    theta = TWO_PI * np.arange(n) / n
    vals = np.asarray(f(z0 + radius * np.exp(1j * theta)), dtype=complex)
    weights = np.exp(-1j * theta)
    estimate = np.mean(vals * weights) / radius
    while n < max_points:
        theta_new = TWO_PI * (2 * np.arange(n) + 1) / (2 * n)
        new_vals = np.asarray(f(z0 + radius * np.exp(1j * theta_new)), dtype=complex)
        all_vals = np.empty(2 * n, dtype=complex)
        all_vals[0::2] = vals
        all_vals[1::2] = new_vals
        n *= 2
        theta = TWO_PI * np.arange(n) / n
        vals = all_vals
        refined = np.mean(vals * np.exp(-1j * theta)) / radius
        scale = np.max(np.abs(vals)) / radius
        if abs(refined - estimate) <= max(tol, 1e-13 * scale):
            return complex(refined)
        estimate = refined
    raise BudgetExceeded(f"Cauchy derivative at {z0} did not stabilise with {max_points} points")
