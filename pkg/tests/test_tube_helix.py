import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from frenet_rn.curve import CurveSpec, make_jet
from frenet_rn.tube import Disk, ParabolicRegion, TubeSpec
from frenet_rn.tube.helix import (HelixOverlap, boundary_root, helix_collision_witness, helix_overlap_g,
                                  helix_tube)
from frenet_rn.tube.mesh import SampleGrid, TriangleMesh, tube_mesh
from frenet_rn.tube.scan import injectivity_scan, is_closed

SQ2 = math.sqrt(2)
PI = math.pi
TORUS_AXIS = make_jet(CurveSpec.embedded(CurveSpec.circle(3.0), 3))


def g_star(x, y, t):
    """Reflected helix tube map written out in components."""
    return np.array([(x + 1) * math.cos(t) + y * math.sin(t) / SQ2,
                     (x + 1) * math.sin(t) - y * math.cos(t) / SQ2,
                     t + y / SQ2])


class TestOverlap:
    def test_g_at_zero(self):
        for r, T in [(0.5, 1.0), (1.5, -0.3), (2.9, 0.0)]:
            assert helix_overlap_g(HelixOverlap(r, T), 0.0) == 0.0

    @given(st.floats(0.01, 1.0), st.floats(-PI, PI))
    def test_small_ellipses_never_return(self, r, T):
        s = np.linspace(1e-3, PI, 2000)
        g = helix_overlap_g(HelixOverlap(r, T), s)
        assert np.all(g > 0) and np.all(np.diff(g) > 0)

    def test_boundary_form_root(self):
        ov = HelixOverlap(1.5, PI)
        s0 = boundary_root(1.5)
        assert 0 < s0 < PI
        assert helix_overlap_g(ov, s0) == pytest.approx(0.0, abs=1e-11)
        assert s0 - 1.5 * math.sin(s0) == pytest.approx(0.0, abs=1e-12)

    def test_root_needs_r_above_one(self):
        with pytest.raises(ValueError):
            boundary_root(1.0)

    def test_negative_s(self):
        with pytest.raises(ValueError):
            helix_overlap_g(HelixOverlap(1.0, 0.0), -0.1)

    @pytest.mark.parametrize("r, T", [(0.0, 0.0), (3.0, 0.0), (1.0, 4.0)])
    def test_invalid(self, r, T):
        with pytest.raises(ValueError):
            HelixOverlap(r, T)

    def test_T_I(self):
        assert HelixOverlap(0.8, 0.0).T_I == PI
        for r in (1.2, 1.5, 2.0, 2.7):
            ov = HelixOverlap(r, HelixOverlap(r, 0.0).T_I)
            assert np.linalg.norm(ov.point) == pytest.approx(2.0, rel=1e-12)
            assert ov.in_disk
            assert not HelixOverlap(r, min(ov.T + 1e-3, PI)).in_disk or ov.T + 1e-3 > PI

    @given(st.floats(0.0, 1.9), st.floats(-PI, PI))
    def test_angle_round_trip(self, rho, phi):
        x, y = rho * math.cos(phi), rho * math.sin(phi)
        if math.hypot(x + 1, y / SQ2) < 1e-3:
            return
        ov = HelixOverlap.from_point(x, y)
        np.testing.assert_allclose(ov.point, [x, y], atol=1e-12)
        assert math.cos(ov.T) == pytest.approx((x + 1) / ov.r)
        assert math.sin(ov.T) == pytest.approx(y / (ov.r * SQ2), abs=1e-12)


class TestWitness:
    @pytest.mark.parametrize("R", [2.0001, 2.5, 3.0, 4.0])
    def test_collision(self, R):
        w = helix_collision_witness(R)
        (x1, t1), (x2, t2) = w.P1, w.P2
        assert w.residual <= 1e-9
        assert np.linalg.norm(x1) < R and np.linalg.norm(x2) < R
        assert t2 - t1 == pytest.approx(w.s0) and w.s0 > 0
        # independent route: the component formula
        assert np.max(np.abs(g_star(*x1, t1) - g_star(*x2, t2))) <= 1e-9
        np.testing.assert_allclose(g_star(*x1, t1), [-R / 2, 0, 0], atol=1e-12)

    def test_radius_three(self):
        w = helix_collision_witness(3.0)
        assert np.linalg.norm(w.P1[0]) == pytest.approx(2.5)

    def test_shifted_t(self):
        w = helix_collision_witness(2.5, t=1.7)
        r = 1.25
        np.testing.assert_allclose(w.image, [-r * math.cos(1.7), -r * math.sin(1.7), 1.7], atol=1e-12)
        np.testing.assert_allclose(g_star(*w.P2[0], w.P2[1]), w.image, atol=1e-9)

    def test_second_point_on_ellipse(self):
        w = helix_collision_witness(2.5)
        x, y = w.P2[0]
        assert (x + 1) ** 2 + y ** 2 / 2 == pytest.approx(1.25 ** 2)

    def test_transposed_first_point_does_not_collide(self):
        # (0, -1 - r) lands elsewhere; the colliding point is (-1 - r, 0)
        r = 1.25
        s0 = boundary_root(r)
        assert np.linalg.norm(g_star(0.0, -1 - r, 0.0) - g_star(-1 - r * math.cos(s0), SQ2 * s0, s0)) > 0.5

    @pytest.mark.parametrize("R", [2.0, 1.0])
    def test_no_witness_up_to_two(self, R):
        with pytest.raises(ValueError):
            helix_collision_witness(R)


class TestScan:
    def test_radius_two_clean(self):
        report = injectivity_scan(helix_tube(2.0), resolution=64)
        assert report.clean and not report.pairs and report.samples > 64 ** 3 / 2

    def test_radius_two_and_a_half_collides(self):
        report = injectivity_scan(helix_tube(2.5), resolution=64)
        assert not report.clean and report.pairs
        step = 5.0 / 63
        for (pa, pb, dist) in report.pairs:
            assert dist <= report.spatial_threshold
            # the radius-2 tube is injective, so one of the two points sits outside that disk
            assert max(np.linalg.norm(pa[:2]), np.linalg.norm(pb[:2])) > 2.0 - 2 * step

    def test_torus_clean(self):
        spec = TubeSpec(TORUS_AXIS, (0.0, 2 * PI), Disk(1.0))
        assert is_closed(spec)
        assert injectivity_scan(spec, resolution=48).clean

    def test_open_axis_not_closed(self):
        assert not is_closed(helix_tube(1.0))


class TestMesh:
    def torus(self, res):
        return tube_mesh(TubeSpec(TORUS_AXIS, (0.0, 2 * PI), Disk(1.0)), res)

    def test_torus_closed(self):
        mesh = self.torus((64, 64))
        assert isinstance(mesh, TriangleMesh)
        assert mesh.euler_characteristic() == 0 and mesh.boundary_loops() == 0
        assert not mesh.warnings

    def test_torus_area(self):
        assert self.torus((128, 128)).area() == pytest.approx(4 * PI ** 2 * 3, rel=5e-3)

    def test_torus_outward(self):
        mesh = self.torus((32, 32))
        centroids = mesh.vertices[mesh.faces].mean(axis=1)
        ring = centroids.copy()
        ring[:, 2] = 0
        ring = 3 * ring / np.linalg.norm(ring, axis=1, keepdims=True)
        assert np.all(np.einsum("ij,ij->i", mesh.face_normals(), centroids - ring) > 0)

    def test_helix_open(self):
        mesh = tube_mesh(helix_tube(1.0), (32, 48))
        assert mesh.euler_characteristic() == 0 and mesh.boundary_loops() == 2

    def test_reflected_and_polygon_sections_outward(self):
        for spec in (helix_tube(1.0, reflected=True), TubeSpec(make_jet(CurveSpec.helix()), (0, 3), ParabolicRegion())):
            mesh = tube_mesh(spec, (40, 40))
            axis = np.array([spec.curve.point(t) for t in np.linspace(0, spec.interval[1], 40)])
            v = mesh.vertices[mesh.faces].mean(axis=1)
            nearest = axis[np.argmin(np.linalg.norm(v[:, None] - axis[None], axis=2), axis=1)]
            assert np.mean(np.einsum("ij,ij->i", mesh.face_normals(), v - nearest) > 0) > 0.95

    def test_regularity_warning(self):
        mesh = tube_mesh(helix_tube(2.5), (16, 16))
        assert mesh.warnings and "regularity" in mesh.warnings[0]

    def test_obj(self):
        mesh = self.torus((8, 6))
        lines = mesh.to_obj().splitlines()
        assert sum(l.startswith("v ") for l in lines) == 48
        assert sum(l.startswith("f ") for l in lines) == 96
        face = [l for l in lines if l.startswith("f ")][0].split()[1:]
        assert min(int(i) for i in face) >= 1

    def test_higher_dimension_sample_grid(self):
        jet = make_jet(CurveSpec.constant_curvature([2, 1], [1, 1]))
        grid = tube_mesh(TubeSpec(jet, (0.0, 1.0), Disk(0.2, dim=3)), (8, 5))
        assert isinstance(grid, SampleGrid)
        assert grid.header() == ["u1", "u2", "t", "y1", "y2", "y3", "y4"]
        assert grid.rows().shape == (8 * 8 * 5, 7)
        assert "dimension 3" in grid.warnings[0]
        for row in grid.rows()[::37]:
            assert np.linalg.norm(row[3:] - jet.point(row[2])) == pytest.approx(0.2)
