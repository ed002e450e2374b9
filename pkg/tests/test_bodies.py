"""Polytope construction, queries, gauges, and smooth ellipsoids."""
import itertools
import json

import numpy as np
import pytest

from fracgeo.bodies import (
    GaugeBody,
    PerturbationField,
    PolytopeBody,
    SmoothBody,
    anisotropic_perimeter,
    body_from_dict,
    body_from_json,
    gauge_from_dict,
    gauge_norm,
    gauge_rho,
    moment_body,
    moment_body_support,
    radial,
    radial_many,
    support,
    volume,
    wulff_shape,
    xray,
    xray_many,
)
from fracgeo.errors import EmptyBodyError, PointOutsideError, UnboundedError
from fracgeo.quadrature import sphere_rule

SQUARE_NORMALS = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], float)


def brute_force_vertices_2d(normals, h):
    """Oracle: intersect facet lines pairwise, keep feasible points."""
    pts = []
    for i, j in itertools.combinations(range(len(normals)), 2):
        A = np.array([normals[i], normals[j]])
        if abs(np.linalg.det(A)) < 1e-12:
            continue
        x = np.linalg.solve(A, [h[i], h[j]])
        if np.all(normals @ x <= h + 1e-9):
            pts.append(x)
    return np.unique(np.round(pts, 9), axis=0)


@pytest.fixture
def square():
    return wulff_shape(SQUARE_NORMALS, np.ones(4))


@pytest.fixture
def cube():
    return wulff_shape(np.vstack([np.eye(3), -np.eye(3)]), np.ones(6))


class TestWulffShape:
    def test_square_vertices(self, square):
        expected = brute_force_vertices_2d(SQUARE_NORMALS, np.ones(4))
        got = np.unique(np.round(square.vertices, 9), axis=0)
        np.testing.assert_allclose(got, expected, atol=1e-9)

    def test_square_facets(self, square):
        np.testing.assert_allclose(square.facet_areas, 2.0)
        assert volume(square) == pytest.approx(4.0)

    def test_cube(self, cube):
        assert volume(cube) == pytest.approx(8.0)
        np.testing.assert_allclose(cube.facet_areas, 4.0)
        assert len(cube.vertices) == 8

    def test_inactive_facet_gets_zero_area(self):
        # a fifth half-space far outside the square never touches the body
        normals = np.vstack([SQUARE_NORMALS,
                             [np.sqrt(0.5), np.sqrt(0.5)]])
        K = wulff_shape(normals, np.array([1, 1, 1, 1, 5.0]))
        assert K.facet_areas[4] == 0.0
        assert volume(K) == pytest.approx(4.0)

    def test_irregular_matches_brute_force(self):
        gen = np.random.Generator(np.random.PCG64(42))
        for _ in range(5):
            ang = np.sort(gen.uniform(0, 2 * np.pi, 7))
            normals = np.column_stack([np.cos(ang), np.sin(ang)])
            h = 1.0 + gen.random(7)
            K = wulff_shape(normals, h)
            expected = brute_force_vertices_2d(normals, h)
            got = np.unique(np.round(K.vertices, 9), axis=0)
            np.testing.assert_allclose(got, expected, atol=1e-8)

    def test_unbounded_raises(self):
        normals = np.array([[1, 0], [0, 1], [np.sqrt(0.5), np.sqrt(0.5)]])
        with pytest.raises(UnboundedError):
            wulff_shape(normals, np.ones(3))

    def test_empty_raises(self):
        with pytest.raises((EmptyBodyError, UnboundedError)):
            wulff_shape(SQUARE_NORMALS, np.array([1.0, 1.0, -2.0, 1.0]))


class TestQueries:
    def test_support_vertex_oracle(self, square):
        gen = np.random.Generator(np.random.PCG64(1))
        for _ in range(20):
            v = gen.standard_normal(2)
            v /= np.linalg.norm(v)
            assert support(square, v) == pytest.approx(
                float(np.max(square.vertices @ v)))

    def test_radial_square_diagonal(self, square):
        u = np.array([1.0, 1.0]) / np.sqrt(2.0)
        assert radial(square, [0, 0], u) == pytest.approx(np.sqrt(2.0))

    def test_radial_bisection_oracle(self, square):
        gen = np.random.Generator(np.random.PCG64(2))
        for _ in range(10):
            ang = gen.uniform(0, 2 * np.pi)
            u = np.array([np.cos(ang), np.sin(ang)])
            z = gen.uniform(-0.5, 0.5, 2)
            lo, hi = 0.0, 10.0
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if square.contains(z + mid * u):
                    lo = mid
                else:
                    hi = mid
            assert radial(square, z, u) == pytest.approx(lo, abs=1e-7)

    def test_radial_outside_raises(self, square):
        with pytest.raises(PointOutsideError):
            radial(square, [2.0, 0.0], [1.0, 0.0])

    def test_radial_many_matches_scalar(self, square):
        U = sphere_rule(2, 16).nodes
        z = np.array([0.2, -0.3])
        many = radial_many(square, z, U)
        for u, r in zip(U, many):
            assert radial(square, z, u) == pytest.approx(r)

    def test_xray(self, square):
        assert xray(square, [0.0, 0.5], [1, 0]) == pytest.approx(2.0)
        u = np.array([1.0, 1.0]) / np.sqrt(2.0)
        assert xray(square, [0.0, 0.0], u) == pytest.approx(2.0 * np.sqrt(2.0))
        # line missing the body
        assert xray(square, [0.0, 3.0], [1, 0]) == pytest.approx(0.0)

    def test_xray_many(self, cube):
        Y = np.array([[0.0, 0.0, 0.0], [0.5, 0.5, 0.0], [3.0, 0.0, 0.0]])
        np.testing.assert_allclose(xray_many(cube, Y, np.array([0, 0, 1.0])),
                                   [2.0, 2.0, 0.0], atol=1e-12)

    def test_volume_monte_carlo_oracle(self):
        gen = np.random.Generator(np.random.PCG64(3))
        ang = np.sort(gen.uniform(0, 2 * np.pi, 6))
        K = wulff_shape(np.column_stack([np.cos(ang), np.sin(ang)]),
                        1.0 + 0.3 * gen.random(6))
        lo = K.vertices.min(axis=0)
        hi = K.vertices.max(axis=0)
        pts = lo + gen.random((200_000, 2)) * (hi - lo)
        inside = np.all(pts @ K.normals.T <= K.support_values + 1e-12, axis=1)
        est = inside.mean() * np.prod(hi - lo)
        assert volume(K) == pytest.approx(est, rel=0.02)

    def test_translate_scale(self, square):
        K = square.translate([0.5, -0.25]).scale(2.0)
        assert volume(K) == pytest.approx(16.0)
        assert K.contains([2.9, 0.0])
        np.testing.assert_allclose(K.facet_areas, 4.0)


class TestGauge:
    def test_ball(self):
        L = GaugeBody.ball(2)
        U = sphere_rule(2, 32).nodes
        np.testing.assert_allclose(L.rho(U), 1.0)
        assert gauge_norm(L, [3.0, 4.0]) == pytest.approx(5.0)

    def test_ellipsoid(self):
        L = GaugeBody.ellipsoid([2.0, 1.0])
        u = np.array([1.0, 0.0])
        assert gauge_rho(L, u) == pytest.approx(2.0)
        assert L.support([0.0, 1.0]) == pytest.approx(1.0)
        assert L.support([1.0, 0.0]) == pytest.approx(2.0)
        # rho(u) = (sum u_i^2 / a_i^2)^{-1/2}
        v = np.array([1.0, 1.0]) / np.sqrt(2.0)
        assert gauge_rho(L, v) == pytest.approx((0.5 / 4 + 0.5) ** -0.5)

    def test_polytope_gauge(self):
        L = GaugeBody.cube(2)
        assert gauge_rho(L, np.array([1.0, 0.0])) == pytest.approx(1.0)
        assert gauge_rho(L, np.array([1.0, 1.0]) / np.sqrt(2)) == pytest.approx(
            np.sqrt(2.0))
        assert gauge_norm(L, [0.5, 0.25]) == pytest.approx(0.5)

    def test_volumes(self):
        rule = sphere_rule(3, 4096)
        assert GaugeBody.ball(3).volume(rule) == pytest.approx(4 * np.pi / 3)
        assert GaugeBody.ellipsoid([2.0, 1.0, 1.0]).volume(rule) == pytest.approx(
            8 * np.pi / 3)
        assert GaugeBody.cube(2).volume(sphere_rule(2, 4096)) == pytest.approx(
            4.0, rel=1e-4)


class TestMomentBody:
    def test_ball_2d_doubles(self):
        rule = sphere_rule(2, 1024)
        h = moment_body_support(GaugeBody.ball(2), [1.0, 0.0], rule)
        assert h == pytest.approx(2.0, rel=1e-4)

    def test_ball_3d_is_pi(self):
        rule = sphere_rule(3, 4096)
        h = moment_body_support(GaugeBody.ball(3), [0.0, 0.0, 1.0], rule)
        assert h == pytest.approx(np.pi, rel=1e-3)

    def test_anisotropic_perimeter(self):
        K = wulff_shape(SQUARE_NORMALS, np.ones(4))
        assert anisotropic_perimeter(K, GaugeBody.ball(2)) == pytest.approx(8.0)
        ZL = moment_body(GaugeBody.ball(2), sphere_rule(2, 1024))
        assert anisotropic_perimeter(K, ZL) == pytest.approx(16.0, rel=1e-4)


class TestSmoothBody:
    def test_support_and_boundary(self):
        E = SmoothBody([2.0, 1.0])
        assert E.support([1.0, 0.0]) == pytest.approx(2.0)
        z = E.boundary_point(np.array([0.0, 1.0]))
        np.testing.assert_allclose(z, [0.0, 1.0], atol=1e-12)
        assert float(z @ E._Q @ z) == pytest.approx(1.0)

    def test_normal_and_curvature(self):
        E = SmoothBody([2.0, 1.0])
        z = np.array([2.0, 0.0])
        np.testing.assert_allclose(E.normal(z), [1.0, 0.0], atol=1e-12)
        assert E.gauss_curvature(z) == pytest.approx(2.0)   # a / b^2
        assert E.normal_curvature(z, np.array([0.0, 1.0])) == pytest.approx(2.0)

    def test_principal_curvatures_pole(self):
        E = SmoothBody([2.0, 1.0, 0.5])
        z = np.array([0.0, 0.0, 0.5])
        kappas, _ = E.principal_curvatures(z)
        np.testing.assert_allclose(sorted(kappas), [0.5 / 4.0, 0.5], rtol=1e-10)

    def test_chord(self):
        E = SmoothBody.ball(2)
        u = np.array([-1.0, 0.0])
        assert E.chord(np.array([1.0, 0.0]), u) == pytest.approx(2.0)
        ang = 0.7
        u = np.array([-np.cos(ang), np.sin(ang)])
        assert E.chord(np.array([1.0, 0.0]), u) == pytest.approx(2 * np.cos(ang))

    def test_volume(self):
        assert SmoothBody([2.0, 1.0, 0.5]).volume() == pytest.approx(
            4 * np.pi / 3 * 1.0)


class TestJson:
    def test_body_roundtrip(self, tmp_path):
        doc = {"dim": 2, "normals": SQUARE_NORMALS.tolist(),
               "support": [1, 1, 1, 1]}
        K = body_from_dict(doc)
        assert volume(K) == pytest.approx(4.0)
        p = tmp_path / "body.json"
        p.write_text(json.dumps(doc))
        K2 = body_from_json(p)
        np.testing.assert_allclose(K2.support_values, K.support_values)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            body_from_dict({"dim": 3, "normals": SQUARE_NORMALS.tolist(),
                            "support": [1, 1, 1, 1]})

    def test_gauge_kinds(self):
        assert gauge_from_dict({"kind": "ball"}, dim=2).dim == 2
        L = gauge_from_dict({"kind": "ellipsoid", "axes": [2.0, 1.0]})
        assert L.support([1.0, 0.0]) == pytest.approx(2.0)
        with pytest.raises(ValueError):
            gauge_from_dict({"kind": "banana"}, dim=2)


def test_perturbation_field():
    f = PerturbationField(np.array([1.0, 2.0]))
    assert len(f) == 2
