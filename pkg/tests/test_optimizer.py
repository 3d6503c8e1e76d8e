import csv
import io
import math
from itertools import pairwise

import numpy as np
import pytest
from helpers import random_shapes, seeds, smooth_direction
from hypothesis import given, settings
from hypothesis import strategies as st

from elastica.bounds import verify_bounds
from elastica.energy import disk_energy, optimal_disk_radius, total_energy
from elastica.errors import InputError, ProjectionFailed
from elastica.geometry import ConvexShape
from elastica.optimizer import (
    TRACE_COLUMNS,
    OptimizerConfig,
    collapse_floor,
    directional_derivative_fd,
    gradient,
    minimize,
    project_convex,
    thread_count,
)

DISK_OPTIMUM = 7.044677334909498


class TestProjection:
    def test_feasible_unchanged(self):
        s = random_shapes(1, seed=3)[0]
        assert project_convex(s) is s

    def test_vector_input(self):
        s = project_convex(np.array([1.0, 0.0, 0.1, 0.0, 0.0]))
        assert s.a0 == 1.0 and s.cos_coeffs == (0.0, 0.1)

    def test_infeasible_is_damped(self):
        raw = ConvexShape(1.0, (0.0, 0.5, 0.0), (0.0, 0.0, 0.2))
        assert not raw.is_valid()
        s = project_convex(raw)
        assert s.is_valid()
        assert s.a0 == raw.a0
        # damping shrinks every mode k >= 2 by a common power of phi^(k-1)
        r2 = s.cos_coeffs[1] / raw.cos_coeffs[1]
        r3 = s.sin_coeffs[2] / raw.sin_coeffs[2]
        assert 0 < r2 < 1 and r3 == pytest.approx(r2**2)

    def test_first_harmonic_kept(self):
        raw = ConvexShape(1.0, (0.3, 0.6), (-0.2, 0.0))
        s = project_convex(raw)
        assert s.cos_coeffs[0] == 0.3 and s.sin_coeffs[0] == -0.2

    def test_nonpositive_mean(self):
        with pytest.raises(ProjectionFailed):
            project_convex(np.array([-1.0, 0.0, 0.0]))

    def test_round_limit(self):
        with pytest.raises(ProjectionFailed):
            project_convex(ConvexShape(1.0, (0.0, 5.0), (0.0, 0.0)), phi=0.999, m_max=2)

    @settings(max_examples=30, deadline=None)
    @given(seeds, st.floats(0.0, 2.0))
    def test_output_valid(self, seed, amplitude):
        rng = np.random.default_rng(seed)
        raw = np.concatenate([[1.0], rng.normal(0, amplitude / 4, 8)])
        assert project_convex(raw).is_valid()


class TestGradient:
    def test_fd_matches_analytic(self):
        s = ConvexShape(1.0, (0.0, 0.1, 0.02), (0.0, 0.0, 0.01))
        np.testing.assert_allclose(gradient(s, method="fd", h=1e-4), gradient(s), rtol=1e-5, atol=1e-6)

    def test_directional(self):
        rng = np.random.default_rng(5)
        for s in random_shapes(3, seed=5, k_max=8):
            d = smooth_direction(s.k_max, rng)
            an = float(gradient(s) @ d)
            assert directional_derivative_fd(s, d) == pytest.approx(an, rel=1e-3)

    def test_unknown_method(self):
        with pytest.raises(InputError):
            gradient(ConvexShape.disk(1.0), method="complex-step")

    def test_thread_count(self, monkeypatch):
        monkeypatch.setenv("ELASTICA_THREADS", "3")
        assert thread_count() == 3
        monkeypatch.setenv("ELASTICA_THREADS", "zero")
        assert thread_count() == 1
        monkeypatch.delenv("ELASTICA_THREADS")
        assert thread_count() == 1

    def test_threads_do_not_change_result(self, monkeypatch):
        s = ConvexShape(1.0, (0.0, 0.1), (0.0, 0.05))
        monkeypatch.setenv("ELASTICA_THREADS", "1")
        g1 = gradient(s, method="fd")
        monkeypatch.setenv("ELASTICA_THREADS", "4")
        np.testing.assert_array_equal(gradient(s, method="fd"), g1)


class TestConfig:
    def test_defaults(self):
        c = OptimizerConfig()
        assert (c.p, c.lam, c.k_max, c.max_iters, c.seed) == (1.0, 1.0, 16, 200, 42)
        assert "lambda" in c.to_dict()

    @pytest.mark.parametrize("kwargs", [
        {"p": 0.5}, {"lam": 0.0}, {"method": "newton"}, {"max_iters": -1},
        {"k_max": 0}, {"tol_grad": 0.0}, {"step_init": -1.0},
    ])
    def test_rejected(self, kwargs):
        with pytest.raises(InputError):
            OptimizerConfig(**kwargs)

    def test_collapse_floor(self):
        assert collapse_floor(1.0) == pytest.approx(math.pi / (1 + math.pi))


@pytest.fixture(scope="module")
def from_unit_disk():
    return minimize(OptimizerConfig(), ConvexShape.disk(1.0))


class TestMinimize:
    def test_reaches_disk_optimum(self, from_unit_disk):
        assert from_unit_disk.final_energy <= DISK_OPTIMUM + 1e-6
        assert from_unit_disk.converged

    def test_monotone_and_convex(self, from_unit_disk):
        e = [r.energy for r in from_unit_disk.rows]
        assert all(b <= a for a, b in pairwise(e))
        assert all(r.min_curv_radius > 0 for r in from_unit_disk.rows)
        assert [r.iter for r in from_unit_disk.rows] == list(range(len(e)))

    def test_csv(self, from_unit_disk):
        rows = list(csv.reader(io.StringIO(from_unit_disk.to_csv())))
        assert tuple(rows[0]) == TRACE_COLUMNS
        assert len(rows) == len(from_unit_disk.rows) + 1
        assert float(rows[-1][1]) == from_unit_disk.final_energy

    def test_default_start_is_stationary(self):
        tr = minimize(OptimizerConfig(k_max=4, max_iters=50))
        assert tr.rows[0].energy == pytest.approx(DISK_OPTIMUM, rel=1e-12)
        assert tr.final_energy == pytest.approx(DISK_OPTIMUM, rel=1e-9)
        assert abs(tr.final_shape.a0 - 2**0.25) <= 1e-3

    def test_perturbed_disk_descends(self):
        start = ConvexShape(1.0, (0.0, 0.0, 0.05), (0.0, 0.0, 0.0))
        tr = minimize(OptimizerConfig(k_max=6, max_iters=60), start)
        assert tr.final_energy < tr.rows[0].energy
        assert tr.final_energy <= DISK_OPTIMUM + 1e-4
        assert verify_bounds(tr.final_shape, 1, 1).all_satisfied

    def test_small_lambda_keeps_unit_disk(self):
        # at p = 1 the best disk radius is (2 lam)^(1/4), which is 1 at lambda = 1/2
        assert optimal_disk_radius(1, 0.5) == pytest.approx(1.0)
        tr = minimize(OptimizerConfig(lam=0.5, k_max=4), ConvexShape.disk(1.0))
        assert tr.final_energy == pytest.approx(disk_energy(1.0, 1, 0.5), rel=1e-9)
        assert tr.final_shape.a0 == pytest.approx(1.0, abs=1e-4)

    @pytest.mark.parametrize("lam", [0.25, 2.0])
    def test_lambda_sweep_respects_diameter_floor(self, lam):
        tr = minimize(OptimizerConfig(lam=lam, k_max=4, max_iters=50), ConvexShape.disk(1.0))
        d = tr.final_shape.diameter_exact()
        assert d >= collapse_floor(lam)
        e = {x.name: x for x in verify_bounds(tr.final_shape, 1, lam).entries}
        assert e["diameter_lower"].satisfied
        assert tr.final_energy <= disk_energy(optimal_disk_radius(1, lam), 1, lam) + 1e-6

    def test_zero_iterations(self):
        start = ConvexShape(1.2, (0.0, 0.05), (0.0, 0.0))
        tr = minimize(OptimizerConfig(max_iters=0, k_max=4), start)
        assert len(tr.rows) == 1 and not tr.converged
        assert tr.final_energy == pytest.approx(total_energy(start, 1, 1).total)

    def test_simplex_method(self):
        cfg = OptimizerConfig(method="simplex-search", k_max=3, max_iters=80)
        tr = minimize(cfg, ConvexShape.disk(1.0))
        e = [r.energy for r in tr.rows]
        assert all(b <= a for a, b in pairwise(e))
        assert tr.final_energy < disk_energy(1.0, 1, 1)
        assert tr.final_shape.is_valid()
