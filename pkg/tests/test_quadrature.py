"""Sphere rules, graded boundary rules, and seeded sampling."""
import numpy as np
import pytest

from fracgeo.bodies import wulff_shape
from fracgeo.quadrature import (
    RandomSource,
    _graded_cells,
    boundary_rule,
    sample_interior,
    sample_sphere,
    sphere_rule,
)

SQUARE_NORMALS = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], float)


class TestSphereRule:
    def test_2d_moments(self):
        rule = sphere_rule(2, 64)
        assert rule.integrate(np.ones(rule.size)) == pytest.approx(2 * np.pi)
        # midpoint rule integrates u_x^2 exactly on the circle
        assert rule.integrate(rule.nodes[:, 0] ** 2) == pytest.approx(np.pi)

    def test_2d_antipodal(self):
        rule = sphere_rule(2, 64)
        np.testing.assert_allclose(rule.weights @ rule.nodes, 0.0, atol=1e-13)

    def test_2d_odd_resolution_rounded(self):
        assert sphere_rule(2, 65).size % 2 == 0

    def test_3d_moments(self):
        rule = sphere_rule(3, 4096)
        assert rule.weights.sum() == pytest.approx(4 * np.pi)
        assert rule.integrate(rule.nodes[:, 2] ** 2) == pytest.approx(
            4 * np.pi / 3, rel=1e-5)
        np.testing.assert_allclose(rule.weights @ rule.nodes, 0.0, atol=1e-10)

    def test_unit_nodes(self):
        for dim in (2, 3):
            rule = sphere_rule(dim, 128)
            np.testing.assert_allclose(np.linalg.norm(rule.nodes, axis=1), 1.0)

    def test_invalid(self):
        with pytest.raises(ValueError):
            sphere_rule(4, 10)
        with pytest.raises(ValueError):
            sphere_rule(2, 1)


class TestGradedCells:
    def test_telescoping(self):
        mids, widths = _graded_cells(17)
        assert widths.sum() == pytest.approx(1.0)
        assert np.all(widths > 0)
        assert np.all((mids > 0) & (mids < 1))
        assert np.all(np.diff(mids) > 0)

    def test_clusters_toward_ends(self):
        _, widths = _graded_cells(32)
        assert widths[0] < widths[16] / 10


class TestBoundaryRule:
    def test_square_weights_sum_to_edge_lengths(self):
        K = wulff_shape(SQUARE_NORMALS, np.ones(4))
        bq = boundary_rule(K, 16)
        for i in range(4):
            sel = bq.facet_index == i
            assert bq.weights[sel].sum() == pytest.approx(2.0)
            # points lie on the facet plane
            np.testing.assert_allclose(bq.points[sel] @ K.normals[i], 1.0,
                                       atol=1e-9)
            np.testing.assert_allclose(
                bq.normals[sel], np.tile(K.normals[i], (sel.sum(), 1)))

    def test_cube_weights_sum_to_facet_areas(self):
        K = wulff_shape(np.vstack([np.eye(3), -np.eye(3)]), np.ones(6))
        bq = boundary_rule(K, 64)
        for i in range(6):
            sel = bq.facet_index == i
            assert bq.weights[sel].sum() == pytest.approx(4.0)
            np.testing.assert_allclose(bq.points[sel] @ K.normals[i], 1.0,
                                       atol=1e-9)

    def test_points_strictly_inside_facets(self):
        K = wulff_shape(SQUARE_NORMALS, np.ones(4))
        bq = boundary_rule(K, 8)
        slack = K.support_values[None, :] - bq.points @ K.normals.T
        # every point is interior to its facet: only one active constraint
        assert np.sum(np.isclose(slack, 0.0, atol=1e-12), axis=1).max() == 1

    def test_inactive_facet_skipped(self):
        normals = np.vstack([SQUARE_NORMALS, [np.sqrt(0.5), np.sqrt(0.5)]])
        K = wulff_shape(normals, np.array([1, 1, 1, 1, 5.0]))
        bq = boundary_rule(K, 8)
        assert not np.any(bq.facet_index == 4)


class TestSampling:
    def test_random_source_reproducible(self):
        a = RandomSource(99).generator().random(8)
        b = RandomSource(99).generator().random(8)
        np.testing.assert_array_equal(a, b)
        c = RandomSource(99, 1).generator().random(8)
        assert not np.array_equal(a, c)
        d = RandomSource(99).split(1).generator().random(8)
        np.testing.assert_array_equal(c, d)

    def test_sample_sphere(self):
        pts = sample_sphere(3, 5000, RandomSource(0).generator())
        np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0)
        assert np.abs(pts.mean(axis=0)).max() < 0.05

    def test_sample_interior(self):
        K = wulff_shape(SQUARE_NORMALS, np.ones(4))
        pts = sample_interior(K, 20_000, RandomSource(1))
        assert np.all(pts @ K.normals.T <= 1.0 + 1e-9)
        assert np.abs(pts.mean(axis=0)).max() < 0.02
        pts2, rate = sample_interior(K, 1000, RandomSource(1), return_rate=True)
        assert 0.9 < rate <= 1.0
