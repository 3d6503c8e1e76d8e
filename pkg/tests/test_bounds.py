import math

import mpmath as mp
import pytest
from helpers import ELLIPSE_LIKE, shapes
from hypothesis import given, settings

from elastica.bounds import (
    constant_C,
    constant_C1,
    constant_C2,
    energy_ceiling,
    f_bound_rhs,
    lipschitz_tangent_estimate,
    verify_bounds,
)
from elastica.errors import InputError
from elastica.geometry import ConvexShape, boundary_from_shape
from elastica.report import compare, format_table, skipped

# 30-digit evaluations, frozen as regression anchors
ANCHORS = {
    (1, 1): (1964110.266160237, 3924660.0315368752, 3481295.9322150028),
    (2, 1): (780916286.32027498, 78246271.683544228, 54701174961050.987),
    (1, 10): (9417573.9501191852, 4657328.6693911656, 5278542.8093329989),
    (1, 2): (2670347.6732874905, 3317475.9604699921, 3346785.4817213971),
    (2, 0.5): (927460929.96871681, 146431462.25891288, 100126346090569.08),
}


def _mp_constants(p, lam):
    mp.mp.dps = 30
    p, lam = mp.mpf(p), mp.mpf(lam)
    c1 = (p + 1) * (p + 2) * (24 / lam) ** (p + 1) * (2 * (1 + mp.pi * lam)) ** (p + 2)
    g = 1 / lam + mp.pi
    c2 = 32 * g**2 + 32 * mp.sqrt(2 * c1 * mp.pi) * g ** mp.mpf(2.5)
    c = mp.sqrt(p / lam * (c1 + 1) ** (p - 1) * mp.pi * c1**2 + 2 * c2)
    return c1, c2, c


class TestConstants:
    @pytest.mark.parametrize("args", sorted(ANCHORS))
    def test_anchors(self, args):
        c1, c2, c = ANCHORS[args]
        assert constant_C1(*args) == pytest.approx(c1, rel=1e-13)
        assert constant_C2(*args) == pytest.approx(c2, rel=1e-13)
        assert constant_C(*args) == pytest.approx(c, rel=1e-13)

    @pytest.mark.parametrize("args", sorted(ANCHORS))
    def test_against_high_precision(self, args):
        c1, c2, c = _mp_constants(*args)
        assert constant_C1(*args) == pytest.approx(float(c1), rel=1e-13)
        assert constant_C2(*args) == pytest.approx(float(c2), rel=1e-13)
        assert constant_C(*args) == pytest.approx(float(c), rel=1e-13)

    def test_c1_closed_form(self):
        assert constant_C1(1, 1) == pytest.approx(6 * 576 * (2 + 2 * math.pi) ** 3, rel=1e-15)
        assert constant_C1(2, 1) == pytest.approx(12 * 24**3 * (2 + 2 * math.pi) ** 4, rel=1e-15)

    def test_monotone_in_lambda(self):
        assert constant_C1(1, 2) > constant_C1(1, 1)

    def test_c2_floor(self):
        for p, lam in [(1, 1), (2, 0.5), (1, 10)]:
            assert constant_C2(p, lam) >= 32 * (1 / lam + math.pi) ** 2

    def test_c_leading_order(self):
        assert constant_C(1, 1) == pytest.approx(math.sqrt(math.pi) * constant_C1(1, 1), rel=1e-3)

    @pytest.mark.parametrize("p", [1, 2])
    @pytest.mark.parametrize("lam", [0.5, 1, 2])
    def test_positive_finite(self, p, lam):
        for f in (constant_C1, constant_C2, constant_C):
            v = f(p, lam)
            assert math.isfinite(v) and v > 0

    def test_bad_arguments(self):
        with pytest.raises(InputError):
            constant_C1(0.5, 1)
        with pytest.raises(InputError):
            constant_C1(1, -1)

    def test_f_bound(self):
        c1 = constant_C1(1, 1)
        assert f_bound_rhs(0.01, 1, 1) == pytest.approx(0.01 * math.pi * c1**2 / 2 + 0.02**2 * math.pi * (c1 + 1))
        assert energy_ceiling(1) == pytest.approx(2 + 2 * math.pi)


class TestVerifyBounds:
    def test_unit_disk(self):
        r = verify_bounds(ConvexShape.disk(1.0), 1, 1)
        assert r.all_satisfied and not r.failures
        e = {x.name: x for x in r.entries}
        assert e["diameter_lower"].lhs == pytest.approx(2.0)
        assert e["diameter_lower"].rhs == pytest.approx(4 * math.pi / (math.pi / 3 + 2 * math.pi))
        assert e["area_lower"].rhs == pytest.approx(math.pi / (2 * (math.pi / 3 + 2 * math.pi) ** 2))
        assert e["diameter_upper"].rhs / e["diameter_upper"].lhs > 1e5
        assert not e["diameter_upper_simplified"].skipped

    def test_every_entry_cited(self):
        r = verify_bounds(ELLIPSE_LIKE, 2, 0.5)
        assert all(e.citation for e in r.entries)
        d = r.to_dict()
        assert d["all_satisfied"] and len(d["entries"]) == len(r.entries)

    def test_corollaries_skipped_above_ceiling(self):
        r = verify_bounds(ConvexShape.disk(5.0), 1, 1)
        skipped_names = [e.name for e in r.entries if e.skipped]
        assert len(skipped_names) == 3
        assert r.all_satisfied
        assert "SKIP" in r.table()

    def test_table(self):
        t = verify_bounds(ConvexShape.disk(1.0), 1, 1).table().splitlines()
        assert len(t) == 10
        assert all("PASS" in line for line in t[1:])

    @settings(max_examples=15, deadline=None)
    @given(shapes)
    def test_random_shapes_pass(self, s):
        assert verify_bounds(s, 1, 1).all_satisfied


class TestLipschitz:
    @pytest.mark.parametrize("radius", [1.0, 0.5])
    def test_circle(self, radius):
        est = lipschitz_tangent_estimate(boundary_from_shape(ConvexShape.disk(radius), 2048))
        assert est == pytest.approx(1 / radius, rel=2e-2)

    def test_ellipse_like(self):
        est = lipschitz_tangent_estimate(boundary_from_shape(ELLIPSE_LIKE, 2048))
        assert est == pytest.approx(1 / 0.7, rel=2e-2)

    @settings(max_examples=15, deadline=None)
    @given(shapes)
    def test_matches_max_curvature(self, s):
        c = boundary_from_shape(s, 2048)
        assert lipschitz_tangent_estimate(c) == pytest.approx(c.curvature_samples.max(), rel=2e-2)


class TestReport:
    def test_compare_relations(self):
        assert compare("a", 1.0, 2.0, "<=", "c").satisfied
        assert not compare("a", 3.0, 2.0, "<=", "c").satisfied
        assert compare("a", 2.0 + 1e-7, 2.0, "<=", "c", rel_tol=1e-6).satisfied
        assert compare("a", 1.0, 1.0 + 1e-4, "==", "c", abs_tol=1e-3).satisfied
        assert not compare("a", 1.0, 2.0, ">=", "c").satisfied

    def test_unknown_relation(self):
        with pytest.raises(ValueError):
            compare("a", 1.0, 2.0, "<", "c")

    def test_skipped_counts_as_satisfied(self):
        e = skipped("x", "c", "why")
        assert e.satisfied and e.skipped
        assert "SKIP" in format_table([e])
