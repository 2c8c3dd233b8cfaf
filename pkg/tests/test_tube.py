import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from frenet_rn.curve import CurveSpec, make_jet
from frenet_rn.errors import TubeRegularityError
from frenet_rn.frenet import extended_apparatus
from frenet_rn.tube import (Disk, DiskFamily, ImplicitSection, ParabolicRegion, Polygon, TubeSpec, barycenter,
                            check_regularity, disk_tube_volume, pappus_volume, regularity_radius, section_volume,
                            sphere_tube_area, sphere_tube_gauss_map, sphere_tube_pappus, sphere_tube_point,
                            sphere_volume, tube_jacobian, tube_map, tube_volume, tube_volume_closed_form,
                            unit_ball_volume)

SQ2 = math.sqrt(2)
PI = math.pi
HELIX = make_jet(CurveSpec.helix())
TORUS_AXIS = make_jet(CurveSpec.embedded(CurveSpec.circle(3.0), 3))
LINE = make_jet(CurveSpec.polynomial([[0, 1], [0], [0]]))
FULL = (0.0, 2 * PI)


class TestSections:
    @pytest.mark.parametrize("n, vol", [(1, 2.0), (2, PI), (3, 4 * PI / 3), (4, PI ** 2 / 2), (5, 8 * PI ** 2 / 15)])
    def test_unit_ball(self, n, vol):
        assert unit_ball_volume(n) == pytest.approx(vol, rel=1e-14)

    def test_unit_ball_recursion_by_quadrature(self):
        from scipy.integrate import quad
        for n in range(2, 8):
            a = (n - 1) / 2  # (1 - x^2)^a as an algebraic endpoint weight
            slice_ = quad(lambda x: 1.0, -1, 1, weight="alg", wvar=(a, a), epsabs=1e-14)[0]
            assert unit_ball_volume(n) == pytest.approx(unit_ball_volume(n - 1) * slice_, rel=1e-10)

    @pytest.mark.parametrize("m, R, vol", [(1, 2.0, 4 * PI), (2, 1.0, 4 * PI), (3, 1.0, 2 * PI ** 2)])
    def test_sphere_volume(self, m, R, vol):
        assert sphere_volume(m, R) == pytest.approx(vol, rel=1e-14)
        assert sphere_volume(m, R) == (m + 1) * R ** m * unit_ball_volume(m + 1)

    def test_disk(self):
        d = Disk(2.0, center=[1.0, -1.0])
        assert section_volume(d) == pytest.approx(4 * PI)
        np.testing.assert_array_equal(barycenter(d), [1.0, -1.0])

    def test_parabolic(self):
        s = ParabolicRegion()
        assert section_volume(s) == pytest.approx(13 / 3, abs=1e-15)
        np.testing.assert_array_equal(barycenter(s), [0.0, 0.0])
        # generic path agrees with the closed forms
        from frenet_rn.tube.sections import CrossSection
        assert CrossSection.volume(s) == pytest.approx(13 / 3, abs=1e-6)
        np.testing.assert_allclose(CrossSection.barycenter(s), [0, 0], atol=1e-8)

    def test_unit_square(self):
        sq = Polygon([[0, 0], [1, 0], [1, 1], [0, 1]])
        assert section_volume(sq) == 1.0
        np.testing.assert_allclose(barycenter(sq), [0.5, 0.5])

    def test_polygon_orientation_and_centroid(self):
        tri = Polygon([[0, 0], [0, 3], [3, 0]])
        assert section_volume(tri) == pytest.approx(4.5)
        np.testing.assert_allclose(barycenter(tri), [1, 1])

    def test_implicit(self):
        ell = ImplicitSection(lambda x: x[..., 0] ** 2 / 4 + x[..., 1] ** 2 - 1, [-2, -1], [2, 1])
        assert section_volume(ell) == pytest.approx(2 * PI, rel=1e-4)
        np.testing.assert_allclose(barycenter(ell), [0, 0], atol=1e-8)

    def test_boundaries_have_outward_normals(self):
        for sec in (Disk(1.5), ParabolicRegion(), Polygon([[0, 0], [2, 0], [1, 1]])):
            pts, nrm = sec.boundary(400)
            c = barycenter(sec)
            assert np.mean(np.einsum("ij,ij->i", pts - c, nrm) > 0) > 0.95
            np.testing.assert_allclose(np.linalg.norm(nrm, axis=1), 1.0)

    def test_contains_within_bbox(self, rng):
        for sec in (Disk(1.5, center=[1, 2]), ParabolicRegion(), Polygon([[0, 0], [2, 0], [1, 1]])):
            lo, hi = sec.bbox
            pts = lo - 1 + (hi - lo + 2) * rng.random((2000, 2))
            inside = sec.contains(pts)
            assert np.all(np.all((pts[inside] >= lo) & (pts[inside] <= hi), axis=1))

    @pytest.mark.parametrize("bad", [lambda: Disk(0.0), lambda: ParabolicRegion(half_width=-1),
                                     lambda: Polygon([[0, 0], [1, 1], [2, 2]]), lambda: unit_ball_volume(0),
                                     lambda: sphere_volume(0, 1.0)])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            bad()


class TestTubeMap:
    def test_attachment_maps_to_axis(self):
        spec = TubeSpec(HELIX, FULL, ParabolicRegion(), attach=(0.5, 0.2))
        for t in (0.0, 1.3, 4.0):
            np.testing.assert_allclose(tube_map(spec, [0.5, 0.2], t), HELIX.point(t), atol=1e-15)

    def test_torus(self):
        spec = TubeSpec(TORUS_AXIS, FULL, Disk(1.0), reflect_first=True)
        rng = np.random.default_rng(1)
        for _ in range(20):
            x1, x2, t = rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7), rng.uniform(0, 2 * PI)
            np.testing.assert_allclose(tube_map(spec, [x1, x2], t),
                                       [(3 + x1) * math.cos(t), (x1 + 3) * math.sin(t), x2], atol=1e-14)
            assert tube_jacobian(spec, [x1, x2], t) == pytest.approx(3 + x1, rel=1e-14)

    def test_torus_plus_normal(self):
        spec = TubeSpec(TORUS_AXIS, FULL, Disk(1.0))
        np.testing.assert_allclose(tube_map(spec, [0.5, 0.25], 1.0),
                                   [2.5 * math.cos(1.0), 2.5 * math.sin(1.0), 0.25], atol=1e-14)

    def test_helix_reflected(self):
        spec = TubeSpec(HELIX, FULL, Disk(2.0), reflect_first=True)
        for x, y, t in [(0.3, -1.2, 0.0), (-1.0, 0.5, 2.0), (1.5, 1.1, -3.0)]:
            expected = [(x + 1) * math.cos(t) + y * math.sin(t) / SQ2,
                        (x + 1) * math.sin(t) - y * math.cos(t) / SQ2, t + y / SQ2]
            np.testing.assert_allclose(tube_map(spec, [x, y], t), expected, atol=1e-14)

    def test_batched(self):
        spec = TubeSpec(HELIX, FULL, Disk(2.0))
        pts = np.array([[0.1, 0.2], [0.3, -0.4], [1.0, 1.0]])
        out = tube_map(spec, pts, 0.7)
        for p, o in zip(pts, out):
            np.testing.assert_allclose(tube_map(spec, p, 0.7), o)

    def test_jacobian_on_axis_line(self):
        spec = TubeSpec(HELIX, FULL, Disk(2.0), attach=(0.25, 0.0))
        assert tube_jacobian(spec, [0.25, 1.3], 2.0) == pytest.approx(SQ2, abs=1e-15)

    def test_jacobian_against_finite_differences(self):
        spec = TubeSpec(HELIX, FULL, ParabolicRegion(), attach=(0.5, 0.0))
        x, t, h = np.array([0.3, -0.6]), 1.1, 1e-6
        cols = []
        for i in range(2):
            e = np.zeros(2)
            e[i] = h
            cols.append((tube_map(spec, x + e, t) - tube_map(spec, x - e, t)) / (2 * h))
        cols.append((tube_map(spec, x, t + h) - tube_map(spec, x, t - h)) / (2 * h))
        assert abs(np.linalg.det(np.array(cols))) == pytest.approx(tube_jacobian(spec, x, t), rel=1e-7)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            TubeSpec(make_jet(CurveSpec.circle(3.0)), FULL, Disk(1.0))
        with pytest.raises(ValueError):
            TubeSpec(HELIX, FULL, Disk(1.0), attach=(0, 0, 0))
        with pytest.raises(ValueError):
            TubeSpec(HELIX, (1.0, 0.0), Disk(1.0))


@given(st.floats(-PI, PI), st.floats(0, 2 * PI), st.floats(0, 0.999))
def test_jacobian_positive_when_regular(theta, t, frac):
    spec = TubeSpec(HELIX, FULL, Disk(2.0))
    x = 2 * frac * np.array([math.cos(theta), math.sin(theta)])
    assert tube_jacobian(spec, x, t) > 0


class TestRegularity:
    def test_helix(self):
        assert regularity_radius(HELIX, FULL) == pytest.approx(2.0, rel=1e-12)

    def test_circle(self):
        assert regularity_radius(make_jet(CurveSpec.circle(3.0)), FULL) == pytest.approx(3.0, rel=1e-12)

    def test_twisted_cubic_dense_oracle(self):
        jet = make_jet(CurveSpec.polynomial([[0, 1], [0, 0, 1], [0, 0, 0, 1]]))
        t = np.linspace(-1, 1, 200001)
        d1 = np.stack([np.ones_like(t), 2 * t, 3 * t ** 2], axis=1)
        d2 = np.stack([np.zeros_like(t), 2 + 0 * t, 6 * t], axis=1)
        dense = np.max(np.linalg.norm(np.cross(d1, d2), axis=1) / np.linalg.norm(d1, axis=1) ** 3)
        assert regularity_radius(jet, (-1, 1)) == pytest.approx(1 / dense, rel=1e-9)
        # kappa_1 peaks at t=0 with value 2
        assert regularity_radius(jet, (-1, 1)) == pytest.approx(0.5, rel=1e-12)

    def test_off_grid_peak(self):
        jet = make_jet(CurveSpec.polynomial([[0, 1], [0.3 ** 2, -0.6, 1]]))  # parabola, vertex at t=0.3
        assert regularity_radius(jet, (-1, 1), samples=16) == pytest.approx(0.5, rel=1e-12)

    def test_straight_line(self):
        assert regularity_radius(LINE, (0, 1)) == math.inf

    def test_violation_names_t_and_extent(self):
        with pytest.raises(TubeRegularityError) as info:
            tube_volume(TubeSpec(HELIX, FULL, Disk(2.5)))
        assert info.value.extent == pytest.approx(2.5) and info.value.kappa1 == pytest.approx(0.5)
        assert 0 <= info.value.t <= 2 * PI

    def test_boundary_equality_allowed(self):
        assert check_regularity(TubeSpec(HELIX, FULL, Disk(2.0))) == pytest.approx(1.0)

    def test_attachment_shifts_margin(self):
        # the far side of the parabolic region is 1 from the attachment (-1/2): within 1/kappa = 2 after
        # shifting by 1, fails when shifted by 1.5
        assert check_regularity(TubeSpec(HELIX, FULL, ParabolicRegion(), attach=(-1.0, 0.0))) == pytest.approx(1.0)
        with pytest.raises(TubeRegularityError):
            check_regularity(TubeSpec(HELIX, FULL, ParabolicRegion(), attach=(-1.5, 0.0)))
        # the reflected map uses the other side
        check_regularity(TubeSpec(HELIX, FULL, ParabolicRegion(), attach=(1.0, 0.0), reflect_first=True))


class TestVolumes:
    def test_torus(self):
        spec = TubeSpec(TORUS_AXIS, FULL, Disk(1.0))
        exact = 2 * PI ** 2 * 3
        assert tube_volume(spec) == pytest.approx(exact, rel=1e-10)
        assert tube_volume_closed_form(spec) == pytest.approx(exact, rel=1e-13)
        assert pappus_volume(Disk(1.0), TORUS_AXIS, FULL) == pytest.approx(exact, rel=1e-13)

    def test_gamma1(self):
        exact = 8 * SQ2 * PI ** 2
        assert pappus_volume(Disk(2.0), HELIX, FULL) == pytest.approx(exact, rel=1e-13)
        assert tube_volume(TubeSpec(HELIX, FULL, Disk(2.0))) == pytest.approx(exact, rel=1e-10)

    def test_gamma2(self):
        exact = 26 * SQ2 * PI / 3
        assert pappus_volume(ParabolicRegion(), HELIX, FULL) == pytest.approx(exact, rel=1e-13)
        assert tube_volume(TubeSpec(HELIX, FULL, ParabolicRegion())) == pytest.approx(exact, rel=1e-10)

    def test_gamma3(self):
        exact = 65 * PI * SQ2 / 6
        spec = TubeSpec(HELIX, FULL, ParabolicRegion(), attach=(0.5, 0.0))
        assert tube_volume(spec) == pytest.approx(exact, rel=1e-10)
        assert tube_volume_closed_form(spec) == pytest.approx(exact, rel=1e-13)

    def test_gamma4(self):
        fam = DiskFamily(lambda t: 1 + math.sin(t) / 2, dradius=lambda t: math.cos(t) / 2)
        exact = 9 * PI ** 2 / (2 * SQ2)
        assert tube_volume(TubeSpec(HELIX, FULL, fam)) == pytest.approx(exact, rel=1e-9)
        res = disk_tube_volume(lambda t: 1 + math.sin(t) / 2, HELIX, FULL)
        assert res.value == pytest.approx(exact, rel=1e-12)
        assert not res.exceeds_regularity_radius and res.max_radius == pytest.approx(1.5, rel=1e-4)

    def test_pappus_equals_general_at_barycenter(self):
        tri = Polygon([[0, 0], [1.2, 0], [0, 0.9]])
        c = barycenter(tri)
        spec = TubeSpec(HELIX, (0.0, 3.0), tri, attach=tuple(c))
        assert tube_volume(spec) == pytest.approx(pappus_volume(tri, HELIX, (0.0, 3.0)), rel=1e-9)

    @pytest.mark.parametrize("p2", [-2.0, 0.7, 5.0])
    def test_orthogonal_attachment_irrelevant(self, p2):
        base = tube_volume(TubeSpec(HELIX, FULL, ParabolicRegion(), attach=(0.5, 0.0)))
        assert tube_volume(TubeSpec(HELIX, FULL, ParabolicRegion(), attach=(0.5, p2))) == pytest.approx(base, abs=1e-9)

    def test_orthogonal_attachment_r4(self):
        jet = make_jet(CurveSpec.constant_curvature([2, 1], [1, 1]))
        ball = Disk(0.2, dim=3)
        vols = [tube_volume(TubeSpec(jet, (0, 1), ball, attach=(0.05, p2, p3)), tol=1e-10) for p2, p3 in
                [(0, 0), (0.1, 0), (0, -0.3)]]
        assert max(vols) - min(vols) <= 1e-9

    def test_zero_length(self):
        assert pappus_volume(Disk(1.0), HELIX, (1.0, 1.0)) == 0.0

    def test_disk_tube_constant_radius(self):
        res = disk_tube_volume(0.75, HELIX, (0.0, 3.0))
        assert res.value == pytest.approx(PI * 0.75 ** 2 * 3 * SQ2, rel=1e-13)
        assert float(res) == res.value

    def test_disk_tube_revolution(self):
        res = disk_tube_volume(lambda t: 1 + t, LINE, (0.0, 1.0))
        assert res.value == pytest.approx(7 * PI / 3, rel=1e-13)
        assert res.regularity_radius == math.inf and not res.exceeds_regularity_radius

    def test_disk_tube_flag(self):
        assert disk_tube_volume(2.5, HELIX, FULL).exceeds_regularity_radius

    def test_higher_dimension_ball_tube(self):
        # a ball section around the R^4 model curve of constant curvatures: Pappus again
        jet = make_jet(CurveSpec.constant_curvature([2, 1], [1, 1]))
        spec = TubeSpec(jet, (0.0, 1.0), Disk(0.3, dim=3))
        exact = 4 / 3 * PI * 0.3 ** 3 * math.sqrt(5)
        assert tube_volume(spec, tol=1e-10) == pytest.approx(exact, rel=1e-6)


class TestSphereTubes:
    def test_torus_area(self):
        exact = 4 * PI ** 2 * 3
        assert sphere_tube_area(TORUS_AXIS, FULL, 1.0) == pytest.approx(exact, rel=1e-10)
        assert sphere_tube_pappus(TORUS_AXIS, FULL, 1.0) == pytest.approx(exact, rel=1e-13)

    def test_helix_area(self):
        exact = 2 * SQ2 * PI ** 2
        assert sphere_tube_area(HELIX, FULL, 0.5) == pytest.approx(exact, rel=1e-10)
        assert sphere_tube_pappus(HELIX, FULL, 0.5) == pytest.approx(exact, rel=1e-13)

    def test_zero_length(self):
        assert sphere_tube_pappus(HELIX, (2.0, 2.0), 0.5) == 0.0

    def test_revolution_frustum(self):
        # cone frustum with radii 1, 2 and height 1: pi (1 + 2) sqrt 2
        area = sphere_tube_area(LINE, (0.0, 1.0), lambda t: 1 + t, dradius=lambda t: 1.0)
        assert area == pytest.approx(3 * PI * SQ2, rel=1e-12)
        fd = sphere_tube_area(LINE, (0.0, 1.0), lambda t: 1 + t)
        assert fd == pytest.approx(3 * PI * SQ2, rel=1e-9)

    def test_revolution_general(self):
        from frenet_rn.quadrature import integrate_1d
        R = lambda t: 1 + 0.3 * math.sin(t)
        dR = lambda t: 0.3 * math.cos(t)
        oracle = 2 * PI * integrate_1d(lambda t: R(t) * math.sqrt(1 + dR(t) ** 2), 0, 2, tol=1e-13).value
        assert sphere_tube_area(LINE, (0.0, 2.0), R, dradius=dR) == pytest.approx(oracle, rel=1e-11)

    def test_three_sphere_tube_r4(self):
        jet = make_jet(CurveSpec.constant_curvature([2, 1], [1, 1]))
        area = sphere_tube_area(jet, (0.0, 1.0), 0.25)
        assert area == pytest.approx(sphere_tube_pappus(jet, (0.0, 1.0), 0.25), rel=1e-10)

    def test_four_sphere_tube_r5_monte_carlo(self):
        jet = make_jet(CurveSpec.constant_curvature([2, 1], [1, 1], 1.0))
        area = sphere_tube_area(jet, (0.0, 0.5), 0.2, tol=1e-6)
        # the odd part in phi_1 cancels in antithetic pairs; only the R'-free even part remains
        assert area == pytest.approx(sphere_tube_pappus(jet, (0.0, 0.5), 0.2), rel=1e-6)

    def test_regularity(self):
        with pytest.raises(TubeRegularityError):
            sphere_tube_area(HELIX, FULL, 2.0)

    def test_gauss_map_revolution(self):
        app = extended_apparatus(LINE.eval(0.3, 3))
        u = np.array([math.cos(0.4), math.sin(0.4)])
        dR = 0.7
        nrm = sphere_tube_gauss_map(app, u, 1.3, dR)
        expected = (u @ app.frame[1:] - dR * app.frame[0]) / math.sqrt(1 + dR ** 2)
        np.testing.assert_allclose(nrm, expected, atol=1e-15)
        radial = sphere_tube_gauss_map(app, u, 1.3, 0.0)
        np.testing.assert_allclose(radial, u @ app.frame[1:], atol=1e-15)

    @pytest.mark.parametrize("theta, t", [(0.0, 0.0), (1.0, 0.5), (2.5, 3.0), (-2.0, 5.0)])
    def test_gauss_map_tangency(self, theta, t):
        R = lambda t: 0.5 + 0.2 * math.sin(t)
        dR = lambda t: 0.2 * math.cos(t)

        def H(theta, t):
            app = extended_apparatus(HELIX.eval(t, 3))
            return sphere_tube_point(app, HELIX.point(t), [math.cos(theta), math.sin(theta)], R(t))

        h = 1e-6
        d_theta = (H(theta + h, t) - H(theta - h, t)) / (2 * h)
        d_t = (H(theta, t + h) - H(theta, t - h)) / (2 * h)
        app = extended_apparatus(HELIX.eval(t, 3))
        nrm = sphere_tube_gauss_map(app, [math.cos(theta), math.sin(theta)], R(t), dR(t))
        assert np.linalg.norm(nrm) == pytest.approx(1.0)
        assert abs(np.dot(nrm, d_theta)) / np.linalg.norm(d_theta) < 1e-6
        assert abs(np.dot(nrm, d_t)) / np.linalg.norm(d_t) < 1e-6
        assert np.dot(nrm, H(theta, t) - HELIX.point(t)) > 0

    def test_gauss_map_regularity(self):
        app = extended_apparatus(HELIX.eval(0.0, 3))
        with pytest.raises(TubeRegularityError):
            sphere_tube_gauss_map(app, [1.0, 0.0], 2.5, 0.0)
