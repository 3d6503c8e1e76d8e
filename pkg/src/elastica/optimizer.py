"""Descent over support-function coefficients, kept inside the convex class."""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize as scipy_minimize

from .energy import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    _check_lambda,
    _check_p,
    energy_gradient,
    optimal_disk_radius,
    total_energy,
)
from .errors import InputError, LineSearchFailed, ProjectionFailed
from .geometry import ConvexShape

METHODS = ("projected-gradient", "simplex-search")
TRACE_COLUMNS = ("iter", "energy", "avg_term", "elastica_term", "grad_norm", "min_curv_radius")


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("ELASTICA_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class OptimizerConfig:
    p: float = 1.0
    lam: float = 1.0
    k_max: int = 16
    max_iters: int = 200
    step_init: float = 0.1
    tol_grad: float = 1e-7
    tol_energy: float = 1e-12
    method: str = "projected-gradient"
    seed: int = 42
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE

    def __post_init__(self):
        _check_p(self.p)
        _check_lambda(self.lam)
        if self.method not in METHODS:
            raise InputError(f"method must be one of {METHODS}, got {self.method!r}")
        if not (self.tol_grad > 0 and self.tol_energy > 0 and self.step_init > 0):
            raise InputError("tolerances and step_init must be positive")
        if self.max_iters < 0 or self.k_max < 1:
            raise InputError("max_iters must be >= 0 and k_max >= 1")

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lambda"] = out.pop("lam")
        return out


@dataclass(frozen=True)
class TraceRow:
    iter: int
    energy: float
    avg_term: float
    elastica_term: float
    grad_norm: float
    min_curv_radius: float


@dataclass(frozen=True)
class OptimizationTrace:
    rows: list
    final_shape: ConvexShape
    converged: bool
    status: str = ""
    config: OptimizerConfig = field(default_factory=OptimizerConfig)

    @property
    def final_energy(self) -> float:
        return self.rows[-1].energy

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for r in self.rows:
            writer.writerow([r.iter] + [repr(float(getattr(r, c))) for c in TRACE_COLUMNS[1:]])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# gradient


def gradient(shape: ConvexShape, p: float = 1.0, lam: float = 1.0,
             q: QuadratureConfig = DEFAULT_QUADRATURE, method: str = "analytic",
             h: float = 1e-5) -> np.ndarray:
    """Energy gradient in ``[a0, a_1..a_K, b_1..b_K]`` order.

    ``method="fd"`` uses central differences of the total energy per
    coefficient, evaluated on ``ELASTICA_THREADS`` threads in fixed order.
    """
    if method == "analytic":
        return energy_gradient(shape, p, lam, q)
    if method != "fd":
        raise InputError(f"unknown gradient method {method!r}")
    x = shape.to_vector()

    def component(i):
        e = np.zeros_like(x)
        e[i] = h
        plus = total_energy(ConvexShape.from_vector(x + e), p, lam, q).total
        minus = total_energy(ConvexShape.from_vector(x - e), p, lam, q).total
        return (plus - minus) / (2 * h)

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        return np.array(list(pool.map(component, range(x.size))))


def directional_derivative_fd(shape: ConvexShape, direction, p: float = 1.0, lam: float = 1.0,
                              q: QuadratureConfig = DEFAULT_QUADRATURE, h: float = 1e-4) -> float:
    x = shape.to_vector()
    d = np.asarray(direction, dtype=float)
    plus = total_energy(ConvexShape.from_vector(x + h * d), p, lam, q).total
    minus = total_energy(ConvexShape.from_vector(x - h * d), p, lam, q).total
    return (plus - minus) / (2 * h)


# ---------------------------------------------------------------------------
# projection


def project_convex(raw, phi: float = 0.9, m_max: int = 200) -> ConvexShape:
    """Damp harmonic ``k >= 2`` by ``phi^(m (k-1))`` with the smallest feasible ``m``.

    Feasible input (radius of curvature at least the convexity floor) is
    returned unchanged.
    """
    shape = raw if isinstance(raw, ConvexShape) else ConvexShape.from_vector(raw)
    if not shape.a0 > 0:
        raise ProjectionFailed(f"mean support value must be positive, got {shape.a0}")
    k = np.arange(1, shape.k_max + 1, dtype=float)
    a = np.asarray(shape.cos_coeffs)
    b = np.asarray(shape.sin_coeffs)
    for m in range(m_max + 1):
        damp = phi ** (m * np.maximum(k - 1.0, 0.0))
        trial = ConvexShape(shape.a0, tuple(a * damp), tuple(b * damp))
        if trial.is_valid():
            return shape if m == 0 else trial
    raise ProjectionFailed(f"no feasible damping within {m_max} rounds")


# ---------------------------------------------------------------------------
# driver


def collapse_floor(lam: float) -> float:
    """Smallest diameter a trial step may reach: half of ``2 pi lam / (1 + pi lam)``."""
    return math.pi * lam / (1.0 + math.pi * lam)


def _reduced_index(k_max: int) -> np.ndarray:
    # a0, a_2..a_K, b_2..b_K; the first harmonic only translates
    return np.concatenate([[0], np.arange(2, k_max + 1), np.arange(k_max + 2, 2 * k_max + 1)])


def _preconditioner(k_max: int, a0: float, lam: float) -> np.ndarray:
    # inverse diagonal of the bending Hessian of a disk, which dominates high modes
    k = np.arange(2, k_max + 1, dtype=float)
    diag_k = 1.0 + lam * (k**2 - 1.0) ** 2 / a0**3
    return 1.0 / np.concatenate([[1.0], diag_k, diag_k])


def _row(it, shape, br, grad_norm):
    return TraceRow(it, br.total, br.avg_distance_term, br.elastica_term, float(grad_norm),
                    shape.min_radius_of_curvature())


def minimize(config: OptimizerConfig | None = None, initial: ConvexShape | None = None) -> OptimizationTrace:
    """Minimise the energy from ``initial`` (default: the best disk).

    Every accepted iterate is convex and no accepted step raises the energy.
    """
    if config is None:
        config = OptimizerConfig()
    if initial is None:
        initial = ConvexShape.disk(optimal_disk_radius(config.p, config.lam))
    k_max = max(config.k_max, initial.k_max)
    shape = initial.padded(k_max).validate()
    if config.method == "simplex-search":
        return _minimize_simplex(config, shape)
    p, lam, q = config.p, config.lam, config.quadrature
    idx = _reduced_index(k_max)
    br = total_energy(shape, p, lam, q)
    g = gradient(shape, p, lam, q)[idx]
    rows = [_row(0, shape, br, np.linalg.norm(g))]
    floor = collapse_floor(lam)
    step = config.step_init
    converged = False
    status = "max_iters reached"
    if config.max_iters == 0:
        status = "max_iters = 0: initial energy only"
    for it in range(1, config.max_iters + 1):
        if np.linalg.norm(g) < config.tol_grad:
            converged, status = True, "gradient below tolerance"
            break
        direction = -_preconditioner(k_max, shape.a0, lam) * g
        x = shape.to_vector()
        s = step
        accepted = None
        for _ in range(60):
            trial_vec = x.copy()
            trial_vec[idx] += s * direction
            try:
                trial = project_convex(trial_vec)
            except ProjectionFailed:
                s *= 0.5
                continue
            if trial.diameter_exact() < floor:
                s *= 0.5
                continue
            tb = total_energy(trial, p, lam, q)
            moved = trial.to_vector()[idx] - x[idx]
            if tb.total <= br.total + 1e-4 * float(g @ moved):
                accepted = (trial, tb)
                break
            s *= 0.5
        if accepted is None:
            status = str(LineSearchFailed(f"no acceptable step at iteration {it}"))
            break
        trial, tb = accepted
        drop = br.total - tb.total
        shape, br = trial, tb
        g = gradient(shape, p, lam, q)[idx]
        rows.append(_row(it, shape, br, np.linalg.norm(g)))
        step = 2.0 * s
        if drop < config.tol_energy * max(1.0, abs(br.total)):
            converged, status = True, "energy change below tolerance"
            break
    return OptimizationTrace(rows, shape, converged, status, config)


def _minimize_simplex(config: OptimizerConfig, shape: ConvexShape) -> OptimizationTrace:
    p, lam, q = config.p, config.lam, config.quadrature
    k_max = shape.k_max
    idx = _reduced_index(k_max)
    base = shape.to_vector()
    floor = collapse_floor(lam)
    cache = {}

    def decode(y):
        v = base.copy()
        v[idx] = y
        return project_convex(v)

    def objective(y):
        key = y.tobytes()
        if key not in cache:
            try:
                s = decode(y)
                cache[key] = np.inf if s.diameter_exact() < floor else total_energy(s, p, lam, q).total
            except ProjectionFailed:
                cache[key] = np.inf
        return cache[key]

    br = total_energy(shape, p, lam, q)
    rows = [_row(0, shape, br, np.linalg.norm(gradient(shape, p, lam, q)[idx]))]
    best = {"shape": shape, "br": br}

    def callback(y):
        s = decode(y)
        b = total_energy(s, p, lam, q)
        if b.total <= best["br"].total:
            best["shape"], best["br"] = s, b
            it = len(rows)
            rows.append(_row(it, s, b, np.linalg.norm(gradient(s, p, lam, q)[idx])))

    if config.max_iters == 0:
        return OptimizationTrace(rows, shape, False, "max_iters = 0: initial energy only", config)
    y0 = base[idx]
    simplex = [y0] + [y0 + np.eye(len(y0))[i] * (config.step_init * shape.a0 / max(1, (i % k_max) + 1) ** 2)
                      for i in range(len(y0))]
    res = scipy_minimize(objective, y0, method="Nelder-Mead", callback=callback,
                         options={"maxiter": config.max_iters, "initial_simplex": np.array(simplex),
                                  "fatol": config.tol_energy, "xatol": 1e-9})
    return OptimizationTrace(rows, best["shape"], bool(res.success), str(res.message), config)
