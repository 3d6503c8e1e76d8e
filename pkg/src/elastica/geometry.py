"""Convex planar domains, their boundary curves and the metrics between them.

A convex body is stored through its support function

    h(theta) = a0 + sum_k a_k cos(k theta) + b_k sin(k theta),

so that the body is the intersection of the half-planes
``<x, u(theta)> <= h(theta)`` with ``u(theta) = (cos theta, sin theta)``.
The radius of curvature of the boundary at the point with outer normal
``u(theta)`` is ``h + h''`` and the boundary point itself is
``h u + h' u_perp``.
"""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    ContainmentUnverified,
    ConvexityViolation,
    DegenerateShape,
    PointOutside,
    ShapeFormatError,
)
from .report import InequalityEntry, compare

TWO_PI = 2.0 * math.pi
DEFAULT_GRID = 4096
DEFAULT_K_MAX = 16
# strict-convexity floor, relative to a0
CONVEXITY_FLOOR = 1e-8


def theta_grid(n: int) -> np.ndarray:
    return np.arange(n) * (TWO_PI / n)


@dataclass(frozen=True)
class ConvexShape:
    """Truncated Fourier series of a support function.

    ``cos_coeffs[k-1]`` and ``sin_coeffs[k-1]`` weight ``cos(k theta)`` and
    ``sin(k theta)``. The first harmonic only translates the body; the
    Steiner point is ``(a_1, b_1)``.
    """

    a0: float
    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()

    def __post_init__(self):
        cos = tuple(float(c) for c in self.cos_coeffs)
        sin = tuple(float(c) for c in self.sin_coeffs)
        if len(cos) != len(sin):
            raise ShapeFormatError(
                f"cos and sin coefficient lists differ in length ({len(cos)} != {len(sin)})")
        a0 = float(self.a0)
        if not all(math.isfinite(c) for c in (a0, *cos, *sin)):
            raise ShapeFormatError("support coefficients must be finite")
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "cos_coeffs", cos)
        object.__setattr__(self, "sin_coeffs", sin)

    # -- construction -------------------------------------------------

    @classmethod
    def disk(cls, radius: float, center: Sequence[float] = (0.0, 0.0), k_max: int = 0) -> ConvexShape:
        cos = [0.0] * max(k_max, 1)
        sin = [0.0] * max(k_max, 1)
        cos[0], sin[0] = float(center[0]), float(center[1])
        return cls(radius, tuple(cos), tuple(sin))

    @classmethod
    def from_vector(cls, vec) -> ConvexShape:
        """Inverse of :meth:`to_vector`: ``[a0, a_1..a_K, b_1..b_K]``."""
        vec = np.asarray(vec, dtype=float)
        k = (vec.size - 1) // 2
        return cls(vec[0], tuple(vec[1:k + 1]), tuple(vec[k + 1:]))

    def to_vector(self) -> np.ndarray:
        return np.concatenate([[self.a0], self.cos_coeffs, self.sin_coeffs])

    @property
    def k_max(self) -> int:
        return len(self.cos_coeffs)

    def padded(self, k_max: int) -> ConvexShape:
        if k_max < self.k_max:
            raise ValueError("cannot pad to a lower truncation order")
        extra = (0.0,) * (k_max - self.k_max)
        return ConvexShape(self.a0, self.cos_coeffs + extra, self.sin_coeffs + extra)

    # -- evaluation ---------------------------------------------------

    def _harmonics(self, theta):
        theta = np.asarray(theta, dtype=float)
        k = np.arange(1, self.k_max + 1, dtype=float)
        if self.k_max <= 4:
            kt = theta[..., None] * k
            return k, np.cos(kt), np.sin(kt)
        # successive powers of exp(i theta)
        z = np.exp(1j * theta)[..., None] * np.ones(self.k_max)
        zk = np.cumprod(z, axis=-1)
        return k, zk.real, zk.imag

    def is_disk(self, rel_tol: float = 1e-14) -> bool:
        """True when no harmonic beyond the first exceeds ``rel_tol * a0``."""
        high = np.abs(np.concatenate([self.cos_coeffs[1:], self.sin_coeffs[1:]]))
        return bool(np.all(high <= rel_tol * abs(self.a0)))

    def support(self, theta, deriv: int = 0):
        """h, h' or h'' at ``theta``."""
        theta = np.asarray(theta, dtype=float)
        if self.k_max == 0:
            return np.full(theta.shape, self.a0 if deriv == 0 else 0.0)
        k, c, s = self._harmonics(theta)
        a = np.asarray(self.cos_coeffs)
        b = np.asarray(self.sin_coeffs)
        if deriv == 0:
            return self.a0 + c @ a + s @ b
        if deriv == 1:
            return (-s * k) @ a + (c * k) @ b
        if deriv == 2:
            return -(c * k**2) @ a - (s * k**2) @ b
        raise ValueError("deriv must be 0, 1 or 2")

    def radius_of_curvature(self, theta):
        """``h + h''``; the boundary curvature is its reciprocal."""
        theta = np.asarray(theta, dtype=float)
        if self.k_max == 0:
            return np.full(theta.shape, self.a0)
        k, c, s = self._harmonics(theta)
        w = 1.0 - k**2
        return self.a0 + c @ (w * np.asarray(self.cos_coeffs)) + s @ (w * np.asarray(self.sin_coeffs))

    def arclength(self, theta):
        """Boundary length from the point with normal angle 0 to ``theta``."""
        theta = np.asarray(theta, dtype=float)
        out = self.a0 * theta
        if self.k_max == 0:
            return out
        k, c, s = self._harmonics(theta)
        w = (1.0 - k**2) / k
        return out + s @ (w * np.asarray(self.cos_coeffs)) + (1.0 - c) @ (w * np.asarray(self.sin_coeffs))

    def theta_at_arclength(self, s):
        """Invert :meth:`arclength` by safeguarded Newton iteration."""
        s = np.asarray(s, dtype=float)
        length = self.perimeter_exact
        turns = np.floor(s / length)
        r = s - turns * length
        lo = np.zeros_like(r)
        hi = np.full_like(r, TWO_PI)
        theta = r / self.a0
        for _ in range(100):
            f = self.arclength(theta) - r
            lo = np.where(f < 0, theta, lo)
            hi = np.where(f > 0, theta, hi)
            nxt = theta - f / self.radius_of_curvature(theta)
            bad = ~np.isfinite(nxt) | (nxt <= lo) | (nxt >= hi)
            nxt = np.where(bad, 0.5 * (lo + hi), nxt)
            done = np.max(np.abs(nxt - theta), initial=0.0) <= 4e-16 * TWO_PI
            theta = nxt
            if done:
                break
        return theta + TWO_PI * turns

    def point(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        h = self.support(theta)
        dh = self.support(theta, 1)
        c, s = np.cos(theta), np.sin(theta)
        return np.stack([h * c - dh * s, h * s + dh * c], axis=-1)

    @staticmethod
    def tangent(theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return np.stack([-np.sin(theta), np.cos(theta)], axis=-1)

    # -- exact functionals ------------------------------------------------

    @property
    def perimeter_exact(self) -> float:
        return TWO_PI * self.a0

    @property
    def area_exact(self) -> float:
        k = np.arange(1, self.k_max + 1, dtype=float)
        sq = np.asarray(self.cos_coeffs) ** 2 + np.asarray(self.sin_coeffs) ** 2
        return math.pi * self.a0**2 + 0.5 * math.pi * float(np.sum((1.0 - k**2) * sq))

    @property
    def steiner_point(self) -> np.ndarray:
        if self.k_max == 0:
            return np.zeros(2)
        return np.array([self.cos_coeffs[0], self.sin_coeffs[0]])

    def centroid(self, grid: int = DEFAULT_GRID) -> np.ndarray:
        th = theta_grid(grid)
        u = np.stack([np.cos(th), np.sin(th)], axis=-1)
        h = self.support(th)
        rho = self.radius_of_curvature(th)
        pts = self.point(th)
        # fan of triangles from the origin: dA = h rho dtheta / 2
        area = 0.5 * np.sum(h * rho) * (TWO_PI / grid)
        moment = np.sum(pts * (h * rho)[:, None], axis=0) * (TWO_PI / grid) / 3.0
        del u
        return moment / area

    def width(self, theta):
        theta = np.asarray(theta, dtype=float)
        return self.support(theta) + self.support(theta + math.pi)

    def diameter_exact(self, grid: int = DEFAULT_GRID) -> float:
        """Maximal width, refined around the best grid direction."""
        th = theta_grid(grid)
        w = self.width(th)
        i = int(np.argmax(w))
        lo, hi = th[i] - TWO_PI / grid, th[i] + TWO_PI / grid
        best = _golden_max(lambda t: self.width(t), np.array([lo]), np.array([hi]), 60)
        return float(max(best[0], w[i]))

    def min_radius_of_curvature(self, grid: int = DEFAULT_GRID) -> float:
        return float(np.min(self.radius_of_curvature(theta_grid(grid))))

    # -- rigid motions and scaling -----------------------------------------

    def centered(self) -> ConvexShape:
        if self.k_max == 0:
            return self
        return ConvexShape(self.a0, (0.0,) + self.cos_coeffs[1:], (0.0,) + self.sin_coeffs[1:])

    def translated(self, v: Sequence[float]) -> ConvexShape:
        shape = self if self.k_max else self.padded(1)
        cos = list(shape.cos_coeffs)
        sin = list(shape.sin_coeffs)
        cos[0] += float(v[0])
        sin[0] += float(v[1])
        return ConvexShape(shape.a0, tuple(cos), tuple(sin))

    def scaled(self, factor: float) -> ConvexShape:
        f = float(factor)
        return ConvexShape(f * self.a0, tuple(f * c for c in self.cos_coeffs),
                           tuple(f * c for c in self.sin_coeffs))

    def rotated(self, angle: float) -> ConvexShape:
        """Rotate counterclockwise by ``angle`` about the origin."""
        k = np.arange(1, self.k_max + 1, dtype=float)
        a = np.asarray(self.cos_coeffs)
        b = np.asarray(self.sin_coeffs)
        c, s = np.cos(k * angle), np.sin(k * angle)
        return ConvexShape(self.a0, tuple(a * c - b * s), tuple(a * s + b * c))

    # -- validation ---------------------------------------------------------

    def validate(self, grid: int = DEFAULT_GRID) -> ConvexShape:
        """Raise unless the shape is a strictly convex body with positive size."""
        if not self.a0 > 0:
            raise DegenerateShape(f"mean support value must be positive, got {self.a0}")
        th = theta_grid(grid)
        h = self.centered().support(th)
        if np.min(h) <= 0:
            raise DegenerateShape(f"support function not positive after centering (min {np.min(h):.3g})")
        rho_min = float(np.min(self.radius_of_curvature(th)))
        floor = CONVEXITY_FLOOR * self.a0
        if rho_min < floor:
            raise ConvexityViolation(
                f"radius of curvature h+h'' drops to {rho_min:.6g} < {floor:.3g}")
        return self

    def is_valid(self, grid: int = DEFAULT_GRID) -> bool:
        try:
            self.validate(grid)
        except (ConvexityViolation, DegenerateShape):
            return False
        return True

    # -- serialisation ----------------------------------------------------------

    def to_json(self) -> dict:
        return {"a0": self.a0, "cos": list(self.cos_coeffs), "sin": list(self.sin_coeffs)}


@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """Closed, counterclockwise sampled boundary; the last sample repeats the first.

    When the curve was produced from a :class:`ConvexShape`, ``source`` keeps it
    so downstream code can evaluate the exact parametrisation.
    """

    points: np.ndarray
    cumulative_arclength: np.ndarray
    tangents: np.ndarray
    curvature_samples: np.ndarray
    total_length: float
    source: ConvexShape | None = field(default=None, repr=False)

    def __post_init__(self):
        for name in ("points", "cumulative_arclength", "tangents", "curvature_samples"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def vertices(self) -> np.ndarray:
        return self.points[:-1]

    @property
    def n(self) -> int:
        return len(self.points) - 1

    @classmethod
    def from_points(cls, points) -> BoundaryCurve:
        """Build a curve from a closed polygon, using discrete tangents and curvature."""
        pts = np.asarray(points, dtype=float)
        if np.allclose(pts[0], pts[-1]):
            pts = pts[:-1]
        if len(pts) < 3:
            raise ShapeFormatError("a closed curve needs at least three points")
        if _signed_area(pts) < 0:
            pts = pts[::-1]
        edges = np.roll(pts, -1, axis=0) - pts
        lens = np.linalg.norm(edges, axis=1)
        if np.any(lens <= 0):
            raise ShapeFormatError("repeated consecutive points in polyline")
        unit = edges / lens[:, None]
        prev_unit = np.roll(unit, 1, axis=0)
        tang = unit + prev_unit
        tang /= np.linalg.norm(tang, axis=1)[:, None]
        turn = np.arctan2(_cross(prev_unit, unit), np.sum(prev_unit * unit, axis=1))
        kappa = turn / (0.5 * (lens + np.roll(lens, 1)))
        cum = np.concatenate([[0.0], np.cumsum(lens)])
        close = lambda a: np.concatenate([a, a[:1]])
        return cls(close(pts), cum, close(tang), close(kappa), float(cum[-1]))

    def transformed(self, rotation, translation) -> BoundaryCurve:
        rot = np.asarray(rotation, dtype=float)
        b = np.asarray(translation, dtype=float)
        return BoundaryCurve(self.points @ rot.T + b, self.cumulative_arclength,
                             self.tangents @ rot.T, self.curvature_samples, self.total_length)

    def resampled(self, n: int) -> BoundaryCurve:
        """Uniform arc-length resampling of the polyline (linear interpolation)."""
        pts = self.points
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        s = np.linspace(0.0, cum[-1], n + 1)
        new = np.stack([np.interp(s, cum, pts[:, 0]), np.interp(s, cum, pts[:, 1])], axis=-1)
        return BoundaryCurve.from_points(new[:-1])


# ---------------------------------------------------------------------------
# shape -> curve


def boundary_from_shape(shape: ConvexShape, n: int = 1024) -> BoundaryCurve:
    """Sample the boundary at ``n`` points of uniform arc-length spacing."""
    if n < 16:
        raise ValueError("n must be at least 16")
    shape.validate()
    length = shape.perimeter_exact
    s = length * np.arange(n + 1) / n
    theta = shape.theta_at_arclength(s[:-1])
    pts = shape.point(theta)
    tang = shape.tangent(theta)
    kappa = 1.0 / shape.radius_of_curvature(theta)
    close = lambda a: np.concatenate([a, a[:1]])
    return BoundaryCurve(close(pts), s, close(tang), close(kappa), length, source=shape)


# ---------------------------------------------------------------------------
# curve functionals


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _signed_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def area(curve: BoundaryCurve) -> float:
    """Shoelace area of the sampled polygon."""
    return abs(_signed_area(curve.vertices))


def perimeter(curve: BoundaryCurve) -> float:
    return float(np.sum(np.linalg.norm(np.diff(curve.points, axis=0), axis=1)))


def edge_turning_angles(curve: BoundaryCurve) -> np.ndarray:
    edges = np.diff(curve.points, axis=0)
    nxt = np.roll(edges, -1, axis=0)
    return np.arctan2(_cross(edges, nxt), np.sum(edges * nxt, axis=1))


def total_turning(curve: BoundaryCurve) -> float:
    """Sum of signed exterior angles; 2*pi for a simple counterclockwise convex curve."""
    return float(np.sum(edge_turning_angles(curve)))


def is_convex(curve: BoundaryCurve, tol: float = 1e-12) -> bool:
    turning = edge_turning_angles(curve)
    return bool(np.all(turning >= -tol) and abs(np.sum(turning) - TWO_PI) < 1e-6)


def diameter_pair(curve: BoundaryCurve) -> tuple[float, int, int]:
    """Rotating calipers over the convex sample polygon.

    Returns the diameter and the first maximal vertex pair in scan order.
    """
    pts = curve.vertices
    n = len(pts)
    best, bi, bj = 0.0, 0, 0
    j = 1
    for i in range(n):
        ni = (i + 1) % n
        edge = pts[ni] - pts[i]
        # advance j while the next vertex is farther from edge i
        for _ in range(n):
            nj = (j + 1) % n
            if edge[0] * (pts[nj, 1] - pts[j, 1]) - edge[1] * (pts[nj, 0] - pts[j, 0]) > 0:
                j = nj
            else:
                break
        for a in (i, ni):
            d = math.hypot(pts[a, 0] - pts[j, 0], pts[a, 1] - pts[j, 1])
            if d > best:
                best, bi, bj = d, a, j
    return best, bi, bj


def diameter(curve: BoundaryCurve) -> float:
    return diameter_pair(curve)[0]


def diameter_bruteforce(points) -> float:
    pts = np.asarray(points, dtype=float)
    best = 0.0
    for start in range(0, len(pts), 512):
        block = pts[start:start + 512]
        d = np.linalg.norm(block[:, None, :] - pts[None, :, :], axis=-1)
        best = max(best, float(d.max()))
    return best


# ---------------------------------------------------------------------------
# distances


def _golden_min(f, lo, hi, iters: int):
    """Vectorised golden-section search; returns (argmin, min)."""
    g = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo.copy(), hi.copy()
    c = b - g * (b - a)
    d = a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc < fd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        # the surviving interior point is reused, one new evaluation per step
        x_new = np.where(left, b - g * (b - a), a + g * (b - a))
        f_new = f(x_new)
        c, d = np.where(left, x_new, d), np.where(left, c, x_new)
        fc, fd = np.where(left, f_new, fd), np.where(left, fc, f_new)
    x = np.where(fc < fd, c, d)
    return x, np.minimum(fc, fd)


def _golden_max(f, lo, hi, iters):
    _, v = _golden_min(lambda t: -f(t), lo, hi, iters)
    return -v


def support_distance(shape: ConvexShape, points, grid: int = DEFAULT_GRID,
                     candidates: int = 3, iters: int = 32, chunk: int = 2048):
    """``min_theta h(theta) - <x, u(theta)>`` for each point.

    The minimum is located on a uniform grid; the ``candidates`` lowest local
    grid minima are each refined by golden-section search. Returns the signed
    values (negative outside the body) and the minimising normal angles.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    th = theta_grid(grid)
    hg = shape.support(th)
    cg, sg = np.cos(th), np.sin(th)
    step = TWO_PI / grid
    k = np.arange(1, shape.k_max + 1, dtype=float)
    a = np.asarray(shape.cos_coeffs)
    b = np.asarray(shape.sin_coeffs)
    ncand = min(candidates, grid)
    dist = np.empty(len(pts))
    arg = np.empty(len(pts))
    for start in range(0, len(pts), chunk):
        x = pts[start:start + chunk, 0]
        y = pts[start:start + chunk, 1]
        vals = hg[None, :] - x[:, None] * cg[None, :] - y[:, None] * sg[None, :]
        is_min = (vals <= np.roll(vals, 1, axis=1)) & (vals <= np.roll(vals, -1, axis=1))
        masked = np.where(is_min, vals, np.inf)
        if ncand < grid:
            idx = np.argpartition(masked, ncand - 1, axis=1)[:, :ncand]
        else:
            idx = np.tile(np.arange(grid), (len(x), 1))
        best_v = np.full(len(x), np.inf)
        best_t = np.zeros(len(x))
        for j in range(idx.shape[1]):
            t0 = th[idx[:, j]]

            def f(t, x=x, y=y):
                kt = t[:, None] * k
                h = shape.a0 + np.cos(kt) @ a + np.sin(kt) @ b if shape.k_max else shape.a0
                return h - x * np.cos(t) - y * np.sin(t)

            tj, vj = _golden_min(f, t0 - step, t0 + step, iters)
            vj = np.minimum(vj, vals[np.arange(len(x)), idx[:, j]])
            tj = np.where(vj == vals[np.arange(len(x)), idx[:, j]], t0, tj)
            better = vj < best_v
            best_v = np.where(better, vj, best_v)
            best_t = np.where(better, tj, best_t)
        dist[start:start + chunk] = best_v
        arg[start:start + chunk] = np.mod(best_t, TWO_PI)
    return dist, arg


def distance_to_boundary(shape: ConvexShape, x, grid: int = DEFAULT_GRID):
    """Distance from interior point(s) ``x`` to the boundary of ``shape``."""
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    d, _ = support_distance(shape, pts, grid=grid)
    if np.any(d < -1e-9 * shape.a0):
        raise PointOutside(f"point lies outside the shape (signed distance {float(np.min(d)):.3g})")
    d = np.maximum(d, 0.0)
    return float(d[0]) if single else d


def _point_segment_distance(p, a, b):
    ab = b - a
    denom = np.sum(ab * ab, axis=-1)
    t = np.clip(np.sum((p - a) * ab, axis=-1) / np.where(denom > 0, denom, 1.0), 0.0, 1.0)
    proj = a + t[..., None] * ab
    return np.linalg.norm(p - proj, axis=-1)


def polyline_distance(points, vertices, k: int = 6, tree: cKDTree | None = None) -> np.ndarray:
    """Distance from each point to a closed polygon given by its vertices."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    verts = np.asarray(vertices, dtype=float)
    n = len(verts)
    k = min(k, n)
    tree = tree if tree is not None else cKDTree(verts)
    _, idx = tree.query(pts, k=k)
    idx = idx.reshape(len(pts), k)
    best = np.full(len(pts), np.inf)
    for j in range(k):
        i = idx[:, j]
        for lo, hi in (((i - 1) % n, i), (i, (i + 1) % n)):
            best = np.minimum(best, _point_segment_distance(pts, verts[lo], verts[hi]))
    return best


def polyline_distance_bruteforce(points, vertices, chunk: int = 64) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    a = np.asarray(vertices, dtype=float)
    b = np.roll(a, -1, axis=0)
    out = np.empty(len(pts))
    for start in range(0, len(pts), chunk):
        p = pts[start:start + chunk, None, :]
        out[start:start + chunk] = _point_segment_distance(p, a[None], b[None]).min(axis=1)
    return out


def directed_hausdorff(c1: BoundaryCurve, c2: BoundaryCurve) -> float:
    return float(np.max(polyline_distance(c1.vertices, c2.vertices)))


def hausdorff_distance(c1: BoundaryCurve, c2: BoundaryCurve) -> float:
    """Symmetric Hausdorff distance between the sampled curves (points to polylines)."""
    return max(directed_hausdorff(c1, c2), directed_hausdorff(c2, c1))


# ---------------------------------------------------------------------------
# area comparisons


def _radial_inside(curve: BoundaryCurve, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    verts = curve.vertices
    c = verts.mean(axis=0)
    phi = np.arctan2(verts[:, 1] - c[1], verts[:, 0] - c[0])
    r = np.hypot(verts[:, 0] - c[0], verts[:, 1] - c[1])
    order = np.argsort(phi)
    qphi = np.arctan2(y - c[1], x - c[0])
    qr = np.hypot(x - c[0], y - c[1])
    return qr <= np.interp(qphi, phi[order], r[order], period=TWO_PI)


def _as_curve(obj, n: int) -> BoundaryCurve:
    return obj if isinstance(obj, BoundaryCurve) else boundary_from_shape(obj, n)


def _grid_masks(objs, grid: int, n: int):
    curves = [_as_curve(o, n) for o in objs]
    allpts = np.concatenate([c.vertices for c in curves])
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    pad = 0.01 * float(np.max(hi - lo))
    lo, hi = lo - pad, hi + pad
    xs = lo[0] + (np.arange(grid) + 0.5) * (hi[0] - lo[0]) / grid
    ys = lo[1] + (np.arange(grid) + 0.5) * (hi[1] - lo[1]) / grid
    X, Y = np.meshgrid(xs, ys)
    cell = (hi[0] - lo[0]) * (hi[1] - lo[1]) / grid**2
    return [_radial_inside(c, X.ravel(), Y.ravel()) for c in curves], cell


def symmetric_difference_area(s1, s2, grid: int = 800, n: int = 2048) -> float:
    """Area of the symmetric difference by cell-centre counting on a grid."""
    (m1, m2), cell = _grid_masks([s1, s2], grid, n)
    return float(np.count_nonzero(m1 ^ m2)) * cell


def difference_area(s1, s2, grid: int = 800, n: int = 2048) -> float:
    """Area of ``s1`` minus ``s2`` by grid counting."""
    (m1, m2), cell = _grid_masks([s1, s2], grid, n)
    return float(np.count_nonzero(m1 & ~m2)) * cell


@dataclass(frozen=True)
class ShapeMetricReport:
    hausdorff: float
    symmetric_difference_area: float


def shape_metrics(s1: ConvexShape, s2: ConvexShape, n: int = 2048, grid: int = 800) -> ShapeMetricReport:
    c1, c2 = boundary_from_shape(s1, n), boundary_from_shape(s2, n)
    return ShapeMetricReport(hausdorff_distance(c1, c2), symmetric_difference_area(c1, c2, grid))


# ---------------------------------------------------------------------------
# appendix inequalities


def contains(outer: ConvexShape, inner: ConvexShape, grid: int = DEFAULT_GRID, tol: float = 1e-12) -> bool:
    """Support-function dominance ``h_inner <= h_outer`` on the grid."""
    th = theta_grid(grid)
    scale = max(abs(outer.a0), abs(inner.a0))
    return bool(np.all(inner.support(th) <= outer.support(th) + tol * scale))


def check_perimeter_monotonicity(inner: ConvexShape, outer: ConvexShape, n: int = 4096,
                                 grid: int = DEFAULT_GRID) -> InequalityEntry:
    if not contains(outer, inner, grid):
        raise ContainmentUnverified("inner support function exceeds the outer one somewhere")
    p_in = perimeter(boundary_from_shape(inner, n))
    p_out = perimeter(boundary_from_shape(outer, n))
    # chord sums undershoot by O((2 pi / n)^2); allow that much
    return compare("perimeter_monotonicity", p_in, p_out, "<=",
                   "convex A inside convex B implies H1(dA) <= H1(dB)",
                   rel_tol=1e-9 + (TWO_PI / n) ** 2)


def check_tubular_bound(s_eps, s, n: int = 2048, grid: int = 800) -> InequalityEntry:
    """Area of ``s_eps`` outside ``s`` against twice the boundary gap times the perimeter."""
    c_eps, c = _as_curve(s_eps, n), _as_curve(s, n)
    delta = hausdorff_distance(c_eps, c)
    lhs = difference_area(c_eps, c, grid)
    rhs = 2.0 * delta * perimeter(c_eps)
    return compare("tubular_neighbourhood", lhs, rhs, "<=",
                   "H2(A \\ B) <= 2 dH(dA, dB) H1(dA) for convex A, B",
                   rel_tol=1e-2, note=f"delta={delta:.6g}")


# ---------------------------------------------------------------------------
# random shapes and I/O


def random_convex_shape(rng: np.random.Generator, k_max: int = 8, roughness: float = 0.6,
                        scale: tuple[float, float] = (0.5, 2.0), min_rho_fraction: float = 0.3,
                        pad_to: int | None = None) -> ConvexShape:
    """Centered random shape whose radius of curvature stays above a fraction of a0."""
    a0 = rng.uniform(*scale)
    k = np.arange(2, k_max + 1, dtype=float)
    sd = roughness * a0 / ((k**2 - 1.0) * k)
    a = rng.normal(0.0, sd)
    b = rng.normal(0.0, sd)
    shape = ConvexShape(a0, (0.0, *a), (0.0, *b))
    rho_min = shape.min_radius_of_curvature()
    if rho_min < min_rho_fraction * a0:
        t = (1.0 - min_rho_fraction) * a0 / (a0 - rho_min)
        shape = ConvexShape(a0, (0.0, *(t * a)), (0.0, *(t * b)))
    if pad_to is not None and pad_to > shape.k_max:
        shape = shape.padded(pad_to)
    return shape


def _polyline_turning(pts: np.ndarray) -> np.ndarray:
    edges = np.roll(pts, -1, axis=0) - pts
    nxt = np.roll(edges, -1, axis=0)
    return np.arctan2(_cross(edges, nxt), np.sum(edges * nxt, axis=1))


def shape_from_polyline(points, k_max: int = DEFAULT_K_MAX, grid: int = DEFAULT_GRID) -> ConvexShape:
    """Smooth support-function model of a convex polygon.

    Nonconvex or self-intersecting input is rejected. A convex polygon has
    corners, so its support function is truncated with Fejer weights, which
    keeps the radius of curvature nonnegative instead of ringing below zero.
    """
    try:
        pts = np.asarray(points, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ShapeFormatError(f"polyline is not a list of [x, y] pairs: {exc}") from None
    if pts.ndim != 2 or pts.shape[1] != 2 or not np.all(np.isfinite(pts)):
        raise ShapeFormatError("polyline must be a list of finite [x, y] pairs")
    if len(pts) > 1 and np.allclose(pts[0], pts[-1]):
        pts = pts[:-1]
    if len(pts) < 3:
        raise ShapeFormatError("polyline needs at least three distinct points")
    if np.any(np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1) == 0):
        raise ShapeFormatError("polyline has repeated consecutive points")
    turn = _polyline_turning(pts)
    if np.sum(turn) < 0:
        pts = pts[::-1]
        turn = _polyline_turning(pts)
    scale = float(np.max(np.ptp(pts, axis=0)))
    if np.any(turn < -1e-12) or abs(np.sum(turn) - TWO_PI) > 1e-9:
        raise ConvexityViolation("polyline does not bound a convex region")
    if abs(_signed_area(pts)) <= 1e-12 * scale**2:
        raise DegenerateShape("polyline encloses no area")
    th = theta_grid(grid)
    h = np.max(pts @ np.stack([np.cos(th), np.sin(th)]), axis=0)
    coef = np.fft.rfft(h) / grid
    a0 = float(coef[0].real)
    k = np.arange(1, k_max + 1)
    fejer = np.where(k >= 2, 1.0 - k / (k_max + 1.0), 1.0)
    a = 2.0 * coef[1:k_max + 1].real * fejer
    b = -2.0 * coef[1:k_max + 1].imag * fejer
    return ConvexShape(a0, tuple(a), tuple(b)).validate()


def shape_from_json(data) -> ConvexShape:
    if not isinstance(data, dict):
        raise ShapeFormatError("shape JSON must be an object")
    if "polyline" in data:
        return shape_from_polyline(data["polyline"])
    try:
        a0 = data["a0"]
        cos = data.get("cos", [])
        sin = data.get("sin", [])
        if isinstance(a0, bool) or not isinstance(a0, (int, float)):
            raise TypeError("a0 must be a number")
        if not isinstance(cos, list) or not isinstance(sin, list):
            raise TypeError("cos and sin must be lists")
        if any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in cos + sin):
            raise TypeError("coefficients must be numbers")
    except (KeyError, TypeError) as exc:
        raise ShapeFormatError(f"malformed shape JSON: {exc}") from None
    return ConvexShape(a0, tuple(cos), tuple(sin))


def load_shape(path) -> ConvexShape:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ShapeFormatError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ShapeFormatError(f"{path}: invalid JSON ({exc})") from None
    return shape_from_json(data)


def save_shape(shape: ConvexShape, path) -> None:
    Path(path).write_text(json.dumps(shape.to_json(), indent=2) + "\n")
