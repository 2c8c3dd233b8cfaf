import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from frenet_rn.errors import QuadratureError
from frenet_rn.quadrature import (QuadratureResult, integrate_1d, integrate_region, integrate_sphere,
                                  sphere_area, sphere_nodes)
from frenet_rn.tube.sections import Disk, ImplicitSection, ParabolicRegion, Polygon


class TestOneDimensional:
    def test_square(self):
        assert integrate_1d(lambda x: x * x, 0, 1).value == pytest.approx(1 / 3, abs=1e-12)

    def test_disk_family_inner_integral(self):
        res = integrate_1d(lambda t: math.sqrt(2) * (1 + math.sin(t) / 2) ** 2, 0, 2 * math.pi)
        # 2 pi + pi/4 inside, so 9 sqrt2 pi / 4; pi times this is the volume of the disk family tube
        assert res.value == pytest.approx(9 * math.sqrt(2) * math.pi / 4, abs=1e-10)

    def test_helix_length(self):
        assert integrate_1d(lambda t: math.sqrt(2), 0, 2 * math.pi).value == pytest.approx(2 * math.pi * math.sqrt(2),
                                                                                          abs=1e-13)

    def test_vectorized_matches_scalar(self):
        f = lambda x: np.exp(np.sin(3 * x))
        a = integrate_1d(f, -1, 2)
        b = integrate_1d(f, -1, 2, vectorized=True)
        assert a.value == b.value and a.evaluations == b.evaluations

    def test_sqrt_endpoint(self):
        # the local criterion tol * width limits how hard an endpoint singularity can be pushed
        assert integrate_1d(math.sqrt, 0, 1, tol=1e-5).value == pytest.approx(2 / 3, abs=1e-5)

    def test_empty_interval(self):
        res = integrate_1d(math.exp, 1.0, 1.0)
        assert res.value == 0.0 and res.evaluations > 0

    def test_result_fields(self):
        res = integrate_1d(math.cos, 0, 1)
        assert isinstance(res, QuadratureResult)
        assert res.error_estimate >= 0 and res.evaluations > 0
        assert float(res) == res.value

    def test_depth_exceeded(self):
        with pytest.raises(QuadratureError):
            integrate_1d(lambda x: 1.0 / x if x else 0.0, 0.0, 1.0, tol=1e-12)

    @pytest.mark.parametrize("a, b, tol", [(1, 0, 1e-8), (0, 1, 0.0), (0, 1, -1e-3)])
    def test_bad_arguments(self, a, b, tol):
        with pytest.raises(ValueError):
            integrate_1d(math.cos, a, b, tol)

    def test_deterministic(self):
        f = lambda x: math.sin(x) ** 2 / (1 + x * x)
        assert integrate_1d(f, 0, 10).value == integrate_1d(f, 0, 10).value


class TestRegion:
    def test_disk_area_grid(self):
        assert integrate_region(Disk(2.0), lambda x: np.ones(len(x))).value == pytest.approx(4 * math.pi, abs=1e-4)

    def test_parabolic_grid(self):
        res = integrate_region(ParabolicRegion(), lambda x: np.ones(len(x)), tol=1e-9)
        assert res.value == pytest.approx(13 / 3, abs=1e-6)

    def test_disk_first_moment(self):
        assert integrate_region(Disk(1.0), lambda x: x[:, 0]).value == pytest.approx(0.0, abs=1e-10)

    @pytest.mark.parametrize("section, area", [
        (Disk(2.0), 4 * math.pi),
        (ParabolicRegion(), 13 / 3),
        (Polygon([[0, 0], [2, 0], [0, 1]]), 1.0),
        (Polygon([[0, 0], [2, 0], [2, 2], [1, 0.5], [0, 2]]), 2.5),
    ])
    def test_adaptive(self, section, area):
        res = integrate_region(section, lambda x: np.ones(len(x)), method="adaptive", tol=1e-11)
        assert res.value == pytest.approx(area, abs=1e-10)

    def test_adaptive_second_moment(self):
        # int over the disk of radius 2 of x^2 = pi R^4 / 4
        res = integrate_region(Disk(2.0), lambda x: x[:, 0] ** 2, method="adaptive", tol=1e-11)
        assert res.value == pytest.approx(4 * math.pi, abs=1e-10)

    def test_implicit_grid(self):
        sec = ImplicitSection(lambda x: x[..., 0] ** 2 / 4 + x[..., 1] ** 2 - 1, [-2, -1], [2, 1])
        assert integrate_region(sec, lambda x: np.ones(len(x)), tol=1e-6).value == pytest.approx(2 * math.pi, rel=1e-4)

    def test_three_dimensional_ball(self):
        res = integrate_region(Disk(1.0, dim=3), lambda x: np.ones(len(x)), tol=1e-5)
        assert res.value == pytest.approx(4 * math.pi / 3, rel=1e-3)

    def test_monte_carlo(self):
        res = integrate_region(Disk(1.0), lambda x: np.ones(len(x)), method="monte_carlo", samples=100_000)
        assert abs(res.value - math.pi) < 4 * res.error_estimate

    def test_monte_carlo_no_hits(self):
        sec = ImplicitSection(lambda x: np.ones(len(x)), [0, 0], [1, 1])
        with pytest.raises(QuadratureError):
            integrate_region(sec, lambda x: np.ones(len(x)), method="monte_carlo", samples=100)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            integrate_region(Disk(1.0), lambda x: x[:, 0], method="simpson")

    def test_adaptive_needs_fibers(self):
        sec = ImplicitSection(lambda x: x[..., 0], [0, 0], [1, 1])
        with pytest.raises(ValueError):
            integrate_region(sec, lambda x: x[:, 0], method="adaptive")

    def test_deterministic(self):
        f = lambda x: np.exp(x[:, 0]) * x[:, 1] ** 2
        for method in ("grid", "monte_carlo", "adaptive"):
            a = integrate_region(ParabolicRegion(), f, method=method, samples=5000)
            b = integrate_region(ParabolicRegion(), f, method=method, samples=5000)
            assert a.value == b.value


class TestSphere:
    def test_circle_length(self):
        assert integrate_sphere(1, lambda u: np.ones(len(u))).value == pytest.approx(2 * math.pi, abs=1e-14)

    def test_sphere_area(self):
        assert integrate_sphere(2, lambda u: np.ones(len(u))).value == pytest.approx(4 * math.pi, abs=1e-10)

    def test_barycenter_zero(self):
        for i in range(3):
            assert integrate_sphere(2, lambda u, i=i: u[:, i]).value == pytest.approx(0.0, abs=1e-10)

    def test_second_moment(self):
        assert integrate_sphere(2, lambda u: u[:, 0] ** 2).value == pytest.approx(4 * math.pi / 3, abs=1e-12)

    @pytest.mark.parametrize("f, exact", [
        (lambda th: np.cos(th), 0.0),
        (lambda th: np.sin(3 * th) ** 2, math.pi),
        (lambda th: np.exp(np.cos(th)), 2 * math.pi * 1.2660658777520084),  # 2 pi I_0(1)
        (lambda th: 1 / (2 + np.sin(th)), 2 * math.pi / math.sqrt(3)),
        (lambda th: np.cos(th) ** 8, 2 * math.pi * 35 / 128),
    ])
    def test_periodic_trapezoid_spectral(self, f, exact):
        res = integrate_sphere(1, lambda u: f(np.arctan2(u[:, 1], u[:, 0])), nodes=256)
        assert abs(res.value - exact) <= 1e-10

    @pytest.mark.parametrize("m", [1, 2, 3, 5])
    def test_monte_carlo_barycenter(self, m):
        for i in range(m + 1):
            res = integrate_sphere(m, lambda u, i=i: u[:, i], rule="monte_carlo", samples=20_000)
            assert abs(res.value) <= 4 * max(res.error_estimate, 1e-300)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 6])
    def test_sphere_area_formula(self, m):
        res = integrate_sphere(m, lambda u: np.ones(len(u)), rule="monte_carlo", samples=1000)
        assert res.value == pytest.approx(sphere_area(m), rel=1e-14)

    def test_nodes_are_unit(self):
        for m in (1, 2):
            pts, w = sphere_nodes(m, 64)
            np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-15)
            assert math.fsum(w) == pytest.approx(sphere_area(m), rel=1e-13)

    def test_product_rule_dimension(self):
        with pytest.raises(ValueError):
            integrate_sphere(3, lambda u: np.ones(len(u)))

    def test_deterministic(self):
        f = lambda u: np.exp(u[:, 0]) + u[:, 1] ** 2
        a = integrate_sphere(3, f, rule="monte_carlo", samples=4000)
        b = integrate_sphere(3, f, rule="monte_carlo", samples=4000)
        assert a.value == b.value and a.error_estimate == b.error_estimate


class TestMonteCarloErrorBars:
    """The reported error is one standard error; a 3-sigma interval should cover the truth."""

    def test_region(self):
        hits = 0
        for seed in range(100):
            res = integrate_region(Disk(1.0), lambda x: x[:, 0] ** 2 + 1, method="monte_carlo", samples=2000, seed=seed)
            hits += abs(res.value - 5 * math.pi / 4) <= 3 * res.error_estimate
        assert hits >= 95

    def test_sphere(self):
        hits = 0
        for seed in range(100):
            res = integrate_sphere(3, lambda u: u[:, 0] ** 2 + u[:, 1] ** 4, rule="monte_carlo", samples=2000, seed=seed)
            exact = sphere_area(3) * (1 / 4 + 1 / 8)  # E[u1^2] = 1/4, E[u1^4] = 3/(4*6) on S^3
            hits += abs(res.value - exact) <= 3 * res.error_estimate
        assert hits >= 95


@given(st.floats(-3, 3), st.floats(0.01, 4), st.integers(0, 6))
def test_polynomials_exact(a, w, deg):
    b = a + w
    exact = (b ** (deg + 1) - a ** (deg + 1)) / (deg + 1)
    assert integrate_1d(lambda x: x ** deg, a, b).value == pytest.approx(exact, rel=1e-12, abs=1e-12)
