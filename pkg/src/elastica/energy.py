"""The two terms of the energy ``int_Omega dist^p + lambda int kappa^2``.

Two quadratures are available for the distance integral:

``"normal"`` (default)
    Normal coordinates ``x = gamma(theta) - tau u(theta)``. Every interior
    point is reached once with ``0 <= tau <= tau_c(theta)``, where ``tau_c`` is
    the depth at which the inward normal meets the cut locus, and the area
    element is ``(rho - tau) dtau dtheta``. The inner integral is then exact:

        int_Omega dist^p = int ( rho tau_c^(p+1)/(p+1) - tau_c^(p+2)/(p+2) ) dtheta.

``"polar"``
    Rays from the centroid with Gauss-Legendre nodes in the radial variable
    and a uniform grid in the normal angle of the ray's boundary endpoint.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError, NonpositiveRadius, QuadratureUnderflow
from .geometry import (
    DEFAULT_GRID,
    TWO_PI,
    BoundaryCurve,
    ConvexShape,
    _golden_min,
    polyline_distance,
    support_distance,
    theta_grid,
)


@dataclass(frozen=True)
class QuadratureConfig:
    """Quadrature resolution.

    ``n_theta`` and ``n_radial`` drive the polar rule, ``n_normal`` and
    ``n_partner`` the normal-coordinate rule. ``mc_samples`` and ``seed``
    configure the Monte-Carlo oracle.
    """

    n_theta: int = 256
    n_radial: int = 64
    mc_samples: int = 10**6
    seed: int = 42
    method: str = "normal"
    n_normal: int = 4096
    n_partner: int = 1024

    def __post_init__(self):
        for name in ("n_theta", "n_radial", "mc_samples", "n_normal", "n_partner"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be positive")
        if self.method not in ("normal", "polar"):
            raise InputError(f"unknown quadrature method {self.method!r}")

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_QUADRATURE = QuadratureConfig()


@dataclass(frozen=True)
class EnergyBreakdown:
    p: float
    lam: float
    avg_distance_term: float
    elastica_term: float
    total: float
    config: QuadratureConfig = DEFAULT_QUADRATURE

    def to_dict(self) -> dict:
        return {"p": self.p, "lambda": self.lam, "avg": self.avg_distance_term,
                "elastica": self.elastica_term, "total": self.total,
                "config": self.config.to_dict()}


def _check_p(p: float) -> None:
    if not (p >= 1 and math.isfinite(p)):
        raise InputError(f"p must be a finite number >= 1, got {p}")


def _check_lambda(lam: float) -> None:
    if not (lam > 0 and math.isfinite(lam)):
        raise InputError(f"lambda must be a finite positive number, got {lam}")


# ---------------------------------------------------------------------------
# curvature term


def elastica_term(shape: ConvexShape, grid: int = DEFAULT_GRID) -> float:
    """``int kappa^2 ds``, which in normal-angle coordinates is ``int dtheta / rho``."""
    shape.validate(grid)
    rho = shape.radius_of_curvature(theta_grid(grid))
    return float(np.sum(1.0 / rho) * (TWO_PI / grid))


def elastica_gradient(shape: ConvexShape, grid: int = DEFAULT_GRID) -> np.ndarray:
    """Gradient of :func:`elastica_term` in ``[a0, a_1..a_K, b_1..b_K]`` order."""
    th = theta_grid(grid)
    rho = shape.radius_of_curvature(th)
    w = (TWO_PI / grid) / rho**2
    k = np.arange(1, shape.k_max + 1, dtype=float)
    kt = th[:, None] * k
    factor = (1.0 - k**2)
    ga = -(np.cos(kt).T @ w) * factor
    gb = -(np.sin(kt).T @ w) * factor
    return np.concatenate([[-np.sum(w)], ga, gb])


# ---------------------------------------------------------------------------
# distance term, normal coordinates

_DELTA_MIN = 2e-4
# sub-cells used on grid cells where the cut depth has a kink
_KINK_SUBCELLS = 16


def _partner_depth(shape: ConvexShape, theta, h, dh, delta):
    """Depth at which the normal from ``theta`` meets the half-plane of ``theta + delta``.

    ``h`` and ``dh`` are the support function and its derivative at ``theta``.
    """
    g = shape.support(theta + delta) - h * np.cos(delta) - dh * np.sin(delta)
    return g / (2.0 * np.sin(0.5 * delta) ** 2)


def _cut_search(shape, theta, h, dh, hp, delta, step, candidates):
    """Cut depth and partner offset for each ``theta`` from tabulated partner values ``hp``.

    The lowest ``candidates`` local minima over the offset grid ``delta`` are
    refined by golden-section search within one grid step.
    """
    vals = (hp - h[:, None] * np.cos(delta) - dh[:, None] * np.sin(delta)) / (2.0 * np.sin(0.5 * delta) ** 2)
    is_min = np.ones_like(vals, dtype=bool)
    is_min[:, 1:] &= vals[:, 1:] <= vals[:, :-1]
    is_min[:, :-1] &= vals[:, :-1] <= vals[:, 1:]
    masked = np.where(is_min, vals, np.inf)
    ncand = min(candidates, vals.shape[1])
    idx = np.argpartition(masked, ncand - 1, axis=1)[:, :ncand]
    best_i = np.argmin(vals, axis=1)
    best = vals[np.arange(len(theta)), best_i]
    arg = delta[best_i]
    for c in range(ncand):
        d0 = delta[idx[:, c]]
        lo = np.clip(d0 - step, _DELTA_MIN, TWO_PI - _DELTA_MIN)
        hi = np.clip(d0 + step, _DELTA_MIN, TWO_PI - _DELTA_MIN)
        x, v = _golden_min(lambda d: _partner_depth(shape, theta, h, dh, d), lo, hi, 30)
        better = v < best
        best = np.where(better, v, best)
        arg = np.where(better, x, arg)
    return best, arg


@lru_cache(maxsize=64)
def _cut_profile(shape: ConvexShape, n: int, m: int, candidates: int = 3):
    """Quadrature nodes, weights, radius of curvature and cut depth.

    Nodes start as a uniform grid of ``n`` normal angles. The cut depth has
    kinks where the nearest partner normal switches branch or where the cut
    depth meets the radius of curvature; grid cells containing one are
    integrated on a finer sub-grid so the rule stays smooth in the shape.
    """
    th = theta_grid(n)
    dth = TWO_PI / n
    rho = shape.radius_of_curvature(th)
    weights = np.full(n, dth)
    if shape.is_disk():
        # disk: every inward normal reaches the centre
        return th, weights, rho, rho.copy()
    h = shape.support(th)
    dh = shape.support(th, 1)
    stride = max(n // m, 1)
    offsets = np.arange(stride, n, stride)
    delta = offsets * dth
    step = stride * dth
    cut = np.empty(n)
    arg = np.empty(n)
    chunk = max(1, 2**22 // len(offsets))
    for start in range(0, n, chunk):
        j = np.arange(start, min(start + chunk, n))
        hp = h[(j[:, None] + offsets[None, :]) % n]
        cut[j], arg[j] = _cut_search(shape, th[j], h[j], dh[j], hp, delta, step, candidates)
    capped = cut >= rho
    tau = np.clip(np.minimum(cut, rho), 0.0, None)

    nxt = np.roll(np.arange(n), -1)
    kink = (capped != capped[nxt]) | (np.abs(arg[nxt] - arg) > 2.0 * step)
    cells = np.flatnonzero(kink)
    if len(cells) == 0:
        return th, weights, rho, tau
    sub = _KINK_SUBCELLS
    frac = np.arange(1, sub) / sub
    th_sub = (th[cells, None] + dth * frac[None, :]).ravel()
    h_sub = shape.support(th_sub)
    dh_sub = shape.support(th_sub, 1)
    # h(t + d) by angle addition: two small matrix products instead of a full table
    k = np.arange(1, shape.k_max + 1, dtype=float)
    a, b = np.asarray(shape.cos_coeffs), np.asarray(shape.sin_coeffs)
    ckd, skd = np.cos(np.outer(k, delta)), np.sin(np.outer(k, delta))
    kt = np.outer(th_sub, k)
    hp_sub = (shape.a0 + np.cos(kt) @ (a[:, None] * ckd + b[:, None] * skd)
              + np.sin(kt) @ (b[:, None] * ckd - a[:, None] * skd))
    cut_sub, _ = _cut_search(shape, th_sub, h_sub, dh_sub, hp_sub, delta, step, candidates)
    rho_sub = shape.radius_of_curvature(th_sub)
    tau_sub = np.clip(np.minimum(cut_sub, rho_sub), 0.0, None)
    # composite trapezoid on the sub-grid replaces the cell's two-point rule
    np.add.at(weights, cells, dth / (2 * sub) - dth / 2)
    np.add.at(weights, nxt[cells], dth / (2 * sub) - dth / 2)
    w_sub = np.full(len(th_sub), dth / sub)
    return (np.concatenate([th, th_sub]), np.concatenate([weights, w_sub]),
            np.concatenate([rho, rho_sub]), np.concatenate([tau, tau_sub]))


def _avg_normal(shape: ConvexShape, p: float, q: QuadratureConfig) -> float:
    _, w, rho, tau = _cut_profile(shape, q.n_normal, q.n_partner)
    f = rho * tau ** (p + 1) / (p + 1) - tau ** (p + 2) / (p + 2)
    return float(np.sum(w * f))


def _avg_normal_gradient(shape: ConvexShape, p: float, q: QuadratureConfig) -> np.ndarray:
    # d dist(x) / d c_k is the k-th basis function at the nearest normal angle
    th, w, rho, tau = _cut_profile(shape, q.n_normal, q.n_partner)
    w = w * (rho * tau**p - p * tau ** (p + 1) / (p + 1))
    k = np.arange(1, shape.k_max + 1, dtype=float)
    kt = th[:, None] * k
    return np.concatenate([[np.sum(w)], np.cos(kt).T @ w, np.sin(kt).T @ w])


# ---------------------------------------------------------------------------
# distance term, polar rays


@lru_cache(maxsize=64)
def _polar_field(shape: ConvexShape, n_theta: int, n_radial: int):
    """Quadrature points, weights, distances and nearest normal angles."""
    c = shape.centroid()
    th = theta_grid(n_theta)
    u = np.stack([np.cos(th), np.sin(th)], axis=-1)
    edge = shape.point(th) - c
    ray_w = (TWO_PI / n_theta) * (shape.support(th) - u @ c) * shape.radius_of_curvature(th)
    t, wt = np.polynomial.legendre.leggauss(n_radial)
    t = 0.5 * (t + 1.0)
    wt = 0.5 * wt
    pts = c + t[None, :, None] * edge[:, None, :]
    weights = ray_w[:, None] * (wt * t)[None, :]
    d, arg = support_distance(shape, pts.reshape(-1, 2))
    return weights.ravel(), np.maximum(d, 0.0), arg


def _avg_polar(shape: ConvexShape, p: float, q: QuadratureConfig) -> float:
    w, d, _ = _polar_field(shape, q.n_theta, q.n_radial)
    return float(np.sum(w * d**p))


def _avg_polar_gradient(shape: ConvexShape, p: float, q: QuadratureConfig) -> np.ndarray:
    w, d, arg = _polar_field(shape, q.n_theta, q.n_radial)
    wp = w * p * d ** (p - 1)
    k = np.arange(1, shape.k_max + 1, dtype=float)
    kt = arg[:, None] * k
    return np.concatenate([[np.sum(wp)], np.cos(kt).T @ wp, np.sin(kt).T @ wp])


# ---------------------------------------------------------------------------
# public API


def average_distance_term(shape: ConvexShape, p: float = 1.0,
                          q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """``int_Omega dist(x, boundary)^p dx``."""
    _check_p(p)
    if q.n_theta < 8:
        raise QuadratureUnderflow(f"n_theta must be at least 8, got {q.n_theta}")
    shape.validate()
    if q.method == "polar":
        return _avg_polar(shape, p, q)
    return _avg_normal(shape, p, q)


def average_distance_gradient(shape: ConvexShape, p: float = 1.0,
                              q: QuadratureConfig = DEFAULT_QUADRATURE) -> np.ndarray:
    _check_p(p)
    shape.validate()
    if q.method == "polar":
        return _avg_polar_gradient(shape, p, q)
    return _avg_normal_gradient(shape, p, q)


def total_energy(shape: ConvexShape, p: float = 1.0, lam: float = 1.0,
                 q: QuadratureConfig = DEFAULT_QUADRATURE) -> EnergyBreakdown:
    _check_lambda(lam)
    avg = average_distance_term(shape, p, q)
    ela = elastica_term(shape)
    return EnergyBreakdown(float(p), float(lam), avg, ela, avg + lam * ela, q)


def energy_gradient(shape: ConvexShape, p: float = 1.0, lam: float = 1.0,
                    q: QuadratureConfig = DEFAULT_QUADRATURE) -> np.ndarray:
    """Gradient of the total energy in ``[a0, a_1..a_K, b_1..b_K]`` order."""
    _check_lambda(lam)
    return average_distance_gradient(shape, p, q) + lam * elastica_gradient(shape)


def disk_energy(R: float, p: float = 1.0, lam: float = 1.0) -> float:
    """Closed-form energy of a disk of radius ``R``."""
    if not R > 0:
        raise NonpositiveRadius(f"radius must be positive, got {R}")
    return TWO_PI * R ** (p + 2) / ((p + 1) * (p + 2)) + TWO_PI * lam / R


def optimal_disk_radius(p: float = 1.0, lam: float = 1.0) -> float:
    """Minimiser of :func:`disk_energy` over the radius."""
    _check_p(p)
    _check_lambda(lam)
    return (lam * (p + 1)) ** (1.0 / (p + 3))


# ---------------------------------------------------------------------------
# oracles and polygon version


def monte_carlo_average_distance(shape: ConvexShape, p: float = 1.0,
                                 q: QuadratureConfig = DEFAULT_QUADRATURE,
                                 batch: int = 8192, grid: int = 1024) -> tuple[float, float]:
    """Rejection-sampling estimate and its standard error.

    Distances are the raw minimum of ``h(theta) - <x, u(theta)>`` over a
    uniform grid; the upward bias is at most ``max(rho) (pi/grid)^2 / 2``.
    """
    _check_p(p)
    rng = np.random.default_rng(q.seed)
    th = theta_grid(grid)
    h = shape.support(th)
    u = np.stack([np.cos(th), np.sin(th)])
    pts = shape.point(th)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    box = float(np.prod(hi - lo))
    total = 0
    acc = []
    while total < q.mc_samples:
        m = min(batch, q.mc_samples - total)
        x = lo + (hi - lo) * rng.random((m, 2))
        d = np.min(h[None, :] - x @ u, axis=1)
        acc.append(np.maximum(d, 0.0) ** p * (d > 0))
        total += m
    vals = np.concatenate(acc) * box
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(len(vals)))


def curve_average_distance(curve: BoundaryCurve, p: float = 1.0, n_radial: int = 24,
                           n_edge: int = 2) -> float:
    """Distance integral over the region bounded by a convex closed polyline.

    The polygon is fanned into triangles from its vertex centroid, each
    triangle integrated with a tensor Gauss-Legendre rule.
    """
    _check_p(p)
    verts = curve.vertices
    c = verts.mean(axis=0)
    a = verts - c
    b = np.roll(verts, -1, axis=0) - c
    jac = np.abs(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])
    t, wt = np.polynomial.legendre.leggauss(n_radial)
    t, wt = 0.5 * (t + 1.0), 0.5 * wt
    s, ws = np.polynomial.legendre.leggauss(n_edge)
    s, ws = 0.5 * (s + 1.0), 0.5 * ws
    edge_pts = a[:, None, :] + s[None, :, None] * (b - a)[:, None, :]
    pts = c + t[None, None, :, None] * edge_pts[:, :, None, :]
    w = jac[:, None, None] * ws[None, :, None] * (wt * t)[None, None, :]
    d = polyline_distance(pts.reshape(-1, 2), verts)
    return float(np.sum(w.ravel() * d**p))
