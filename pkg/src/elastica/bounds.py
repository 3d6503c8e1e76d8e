"""Explicit constants and the a-priori inequalities every admissible shape obeys."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .energy import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    _check_lambda,
    _check_p,
    total_energy,
)
from .geometry import (
    TWO_PI,
    BoundaryCurve,
    ConvexShape,
    boundary_from_shape,
    total_turning,
)
from .report import compare, format_table, skipped

# relative budget for entries that involve a quadrature value of the energy
QUADRATURE_BUDGET = 1e-4
BASE_REL_TOL = 1e-6


def constant_C1(p: float, lam: float) -> float:
    """Diameter ceiling ``(p+1)(p+2)(24/lam)^(p+1) (2(1+pi lam))^(p+2)``."""
    _check_p(p)
    _check_lambda(lam)
    return (p + 1) * (p + 2) * (24.0 / lam) ** (p + 1) * (2.0 * (1.0 + math.pi * lam)) ** (p + 2)


def constant_C2(p: float, lam: float) -> float:
    """Curvature-increase constant ``32 g^2 + 32 sqrt(2 pi C1) g^(5/2)`` with ``g = 1/lam + pi``."""
    g = 1.0 / lam + math.pi
    return 32.0 * g**2 + 32.0 * math.sqrt(2.0 * constant_C1(p, lam) * math.pi) * g**2.5


def constant_C(p: float, lam: float) -> float:
    """Lipschitz bound on the unit tangent of a minimiser's boundary."""
    c1 = constant_C1(p, lam)
    return math.sqrt(p / lam * (c1 + 1.0) ** (p - 1) * math.pi * c1**2 + 2.0 * constant_C2(p, lam))


def f_bound_rhs(eps: float, p: float, lam: float) -> float:
    """Ceiling on the distance-integral increase of the eps-competitor."""
    c1 = constant_C1(p, lam)
    return eps * p * (c1 + 1.0) ** (p - 1) * math.pi * c1**2 / 2.0 + (2.0 * eps) ** (p + 1) * math.pi * (c1 + 1.0)


def energy_ceiling(lam: float) -> float:
    """Energy level ``2(1+pi lam)`` below which the simplified corollaries apply."""
    return 2.0 * (1.0 + math.pi * lam)


@dataclass(frozen=True)
class BoundsReport:
    entries: list = field(default_factory=list)
    shape_id: str = ""
    p: float = 1.0
    lam: float = 1.0
    energy: float = float("nan")

    @property
    def all_satisfied(self) -> bool:
        return all(e.satisfied for e in self.entries)

    @property
    def failures(self) -> list:
        return [e for e in self.entries if not e.satisfied]

    def to_dict(self) -> dict:
        return {"shape_id": self.shape_id, "p": self.p, "lambda": self.lam, "energy": self.energy,
                "all_satisfied": self.all_satisfied, "entries": [e.to_dict() for e in self.entries]}

    def table(self) -> str:
        return format_table(self.entries)


def verify_bounds(shape: ConvexShape, p: float = 1.0, lam: float = 1.0,
                  q: QuadratureConfig = DEFAULT_QUADRATURE, shape_id: str = "",
                  n: int = 2048) -> BoundsReport:
    """Evaluate every a-priori inequality on ``shape``.

    These hold for every admissible shape, so a failing entry points at a
    numerical defect rather than at the shape.
    """
    breakdown = total_energy(shape, p, lam, q)
    E = breakdown.total
    curve = boundary_from_shape(shape, n)
    diam = shape.diameter_exact()
    area = shape.area_exact
    length = shape.perimeter_exact
    tol_e = BASE_REL_TOL + QUADRATURE_BUDGET

    entries = [
        compare("diameter_lower", diam, 4 * math.pi * lam / E, ">=",
                "diam >= 4 pi lambda / E", rel_tol=tol_e),
        compare("area_lower", area, math.pi * lam**2 / (2 * E**2), ">=",
                "area >= pi lambda^2 / (2 E^2)", rel_tol=tol_e),
        compare("diameter_upper", diam,
                (p + 1) * (p + 2) * (24 / lam) ** (p + 1) * E ** (p + 2), "<=",
                "diam <= (p+1)(p+2)(24/lambda)^(p+1) E^(p+2)", rel_tol=tol_e),
        compare("perimeter_vs_diameter", length, math.pi * diam, "<=",
                "H1(boundary) <= pi diam", rel_tol=BASE_REL_TOL),
        compare("total_turning", total_turning(curve), TWO_PI, "==",
                "boundary turns once: total turning 2 pi", abs_tol=1e-3),
        compare("elastica_floor", breakdown.elastica_term, 4 * math.pi**2 / length, ">=",
                "int kappa^2 >= 4 pi^2 / H1(boundary)", rel_tol=BASE_REL_TOL),
    ]
    ceiling = energy_ceiling(lam)
    corollaries = [
        ("diameter_lower_simplified", "diam >= 2 pi lambda / (1 + pi lambda)"),
        ("area_lower_simplified", "area >= pi lambda^2 / (8 (1 + pi lambda)^2)"),
        ("diameter_upper_simplified", "diam <= C1(p, lambda)"),
    ]
    if E <= ceiling:
        entries += [
            compare(corollaries[0][0], diam, 2 * math.pi * lam / (1 + math.pi * lam), ">=",
                    corollaries[0][1], rel_tol=tol_e),
            compare(corollaries[1][0], area, math.pi * lam**2 / (8 * (1 + math.pi * lam) ** 2), ">=",
                    corollaries[1][1], rel_tol=tol_e),
            compare(corollaries[2][0], diam, constant_C1(p, lam), "<=", corollaries[2][1], rel_tol=tol_e),
        ]
    else:
        reason = f"E = {E:.6g} exceeds 2(1 + pi lambda) = {ceiling:.6g}"
        entries += [skipped(name, cite, reason) for name, cite in corollaries]
    return BoundsReport(entries, shape_id, float(p), float(lam), E)


def lipschitz_tangent_estimate(curve: BoundaryCurve, pairs: int = 4000, seed: int = 0) -> float:
    """Largest observed ``|T(s) - T(t)| / |s - t|`` over the samples.

    Adjacent samples are always included; ``pairs`` random pairs add longer
    baselines. Arc-length gaps are measured around the closed curve.
    """
    tang = curve.tangents[:-1]
    s = curve.cumulative_arclength[:-1]
    length = curve.total_length
    n = len(tang)
    nxt = np.roll(np.arange(n), -1)
    ds = np.mod(s[nxt] - s, length)
    best = float(np.max(np.linalg.norm(tang[nxt] - tang, axis=1) / ds))
    if pairs:
        rng = np.random.default_rng(seed)
        i = rng.integers(0, n, pairs)
        j = rng.integers(0, n, pairs)
        keep = i != j
        i, j = i[keep], j[keep]
        gap = np.abs(s[i] - s[j])
        gap = np.minimum(gap, length - gap)
        best = max(best, float(np.max(np.linalg.norm(tang[i] - tang[j], axis=1) / gap, initial=0.0)))
    return best
