"""Penalized average-distance energy of convex planar domains."""

__version__ = "0.1.0"

from .bounds import (
    BoundsReport,
    constant_C,
    constant_C1,
    constant_C2,
    lipschitz_tangent_estimate,
    verify_bounds,
)
from .competitor import (
    ArcCurve,
    build_competitor,
    canonical_frame,
    verify_energy_inequalities,
)
from .energy import (
    EnergyBreakdown,
    QuadratureConfig,
    average_distance_term,
    disk_energy,
    elastica_term,
    optimal_disk_radius,
    total_energy,
)
from .geometry import (
    BoundaryCurve,
    ConvexShape,
    boundary_from_shape,
    load_shape,
    save_shape,
)
from .optimizer import OptimizationTrace, OptimizerConfig, minimize, project_convex

__all__ = [
    "ArcCurve", "BoundaryCurve", "BoundsReport", "ConvexShape", "EnergyBreakdown",
    "OptimizationTrace", "OptimizerConfig", "QuadratureConfig", "average_distance_term",
    "boundary_from_shape", "build_competitor", "canonical_frame", "constant_C", "constant_C1",
    "constant_C2", "disk_energy", "elastica_term", "lipschitz_tangent_estimate", "load_shape",
    "minimize", "optimal_disk_radius", "project_convex", "save_shape", "total_energy",
    "verify_bounds", "verify_energy_inequalities",
]
