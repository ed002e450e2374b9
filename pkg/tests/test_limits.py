"""Endpoint limits of the area measure and curvature identities on ellipsoids."""
import numpy as np
import pytest
from scipy.integrate import quad

from fracgeo.bodies import GaugeBody, SmoothBody, wulff_shape
from fracgeo.errors import NotTangentError
from fracgeo.limits import (
    lemma_conv_check,
    lemma_xzlem_check,
    limit_s0_check,
    mixed_area_density_check,
    normal_curvature,
)
from fracgeo.measures import _hemisphere_integral_smooth
from fracgeo.quadrature import boundary_rule, sphere_rule

SQUARE_NORMALS = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], float)


@pytest.fixture(scope="module")
def result():
    K = wulff_shape(SQUARE_NORMALS, np.ones(4))
    return limit_s0_check(K, GaugeBody.ball(2), [0.3, 0.1, 0.03, 0.01],
                          boundary_rule(K, 64), sphere_rule(2, 512))


class TestLimitS0:
    def test_final_ratio_near_one(self, result):
        assert result["rows"][-1]["max_dev"] <= 0.02

    def test_deviation_decreasing(self, result):
        devs = [r["max_dev"] for r in result["rows"]]
        assert all(devs[i + 1] < devs[i] for i in range(len(devs) - 1))

    def test_printed_target_off_by_dimension(self, result):
        # against (|L|/2) a_i the ratios converge to n, not 1
        final = result["rows"][-1]
        np.testing.assert_allclose(final["ratio_printed"], 2.0, rtol=0.02)


class TestNormalCurvature:
    def test_ball(self):
        assert normal_curvature(SmoothBody.ball(3, 2.0), [0, 0, 1],
                                [1, 0, 0]) == pytest.approx(0.5)

    def test_ellipse_axis_endpoint(self):
        assert normal_curvature(SmoothBody([2.0, 1.0]), [1, 0],
                                [0, 1]) == pytest.approx(2.0)

    def test_symmetry(self):
        E = SmoothBody([2.0, 1.0, 0.7])
        v = np.array([0.0, 1.0, 0.0])
        th = np.array([1.0, 0.0, 0.0])
        assert normal_curvature(E, v, th) == pytest.approx(
            normal_curvature(E, v, -th))

    def test_not_tangent(self):
        with pytest.raises(NotTangentError):
            normal_curvature(SmoothBody.ball(2), [1, 0], [1, 0])


class TestHemisphereIntegral:
    """The singularity-absorbing quadrature against 1-D adaptive oracles."""

    @pytest.mark.parametrize("s", [0.3, 0.7, 0.99])
    def test_ball_2d(self, s):
        got = _hemisphere_integral_smooth(SmoothBody.ball(2), GaugeBody.ball(2),
                                          np.array([1.0, 0.0]), s)
        ref = 2.0 ** (1 - s) * quad(lambda a: np.cos(a) ** (-s), 0, np.pi / 2)[0]
        assert got == pytest.approx(ref, rel=1e-8)

    @pytest.mark.parametrize("s", [0.5, 0.99])
    def test_ball_3d(self, s):
        got = _hemisphere_integral_smooth(SmoothBody.ball(3), GaugeBody.ball(3),
                                          np.array([0.0, 0.0, 1.0]), s)
        ref = 2 * np.pi * 2.0 ** (-s) * quad(
            lambda a: np.cos(a) ** (-s) * np.sin(a), 0, np.pi / 2)[0]
        assert got == pytest.approx(ref, rel=1e-8)


class TestLemmaConv:
    def test_ball_2d(self):
        res = lemma_conv_check(SmoothBody.ball(2), GaugeBody.ball(2), [1, 0],
                               [0.9, 0.95, 0.99])
        assert res["rhs"] == pytest.approx(1.0)
        assert res["rows"][-1]["ratio"] == pytest.approx(1.0, abs=0.03)

    def test_ball_3d(self):
        res = lemma_conv_check(SmoothBody.ball(3), GaugeBody.ball(3), [0, 0, 1],
                               [0.99], circle_res=256)
        assert res["rhs"] == pytest.approx(np.pi)
        assert res["rows"][-1]["ratio"] == pytest.approx(1.0, abs=0.03)

    def test_ellipse(self):
        res = lemma_conv_check(SmoothBody([2.0, 1.0]), GaugeBody.ball(2), [1, 0],
                               [0.995])
        assert res["rhs"] == pytest.approx(2.0)   # kappa at the long-axis tip
        assert res["rows"][-1]["ratio"] == pytest.approx(1.0, abs=0.03)

    def test_printed_rhs_off_by_half(self):
        res = lemma_conv_check(SmoothBody.ball(2), GaugeBody.ball(2), [1, 0],
                               [0.99])
        assert res["rows"][-1]["ratio_printed"] == pytest.approx(0.5, abs=0.02)


class TestLemmaXzlem:
    def test_ball(self):
        assert lemma_xzlem_check(SmoothBody.ball(3, 1.5), [0, 1, 0],
                                 [0, 0, 1]) < 1e-12

    def test_ellipsoid_equator(self):
        assert lemma_xzlem_check(SmoothBody([2.0, 1.0, 0.7]), [1, 0, 0],
                                 [0, 0, 1]) < 1e-8

    def test_skew_direction(self):
        v = np.array([0.3, -0.5, 0.8])
        v /= np.linalg.norm(v)
        u = np.cross(v, [1.0, 0.0, 0.0])
        u /= np.linalg.norm(u)
        E = SmoothBody([2.0, 1.0, 0.7])
        assert lemma_xzlem_check(E, v, u) < 1e-8
        assert lemma_xzlem_check(E, v, -u) < 1e-8

    def test_not_tangent(self):
        with pytest.raises(NotTangentError):
            lemma_xzlem_check(SmoothBody.ball(3), [0, 0, 1], [0, 0, 1])


class TestMixedAreaDensity:
    def test_ball_3d(self):
        res = mixed_area_density_check(SmoothBody.ball(3), GaugeBody.ball(3),
                                       [0, 0, 1], [0.99], circle_res=256)
        assert res["rows"][-1]["ratio"] == pytest.approx(1.0, abs=0.03)
        assert res["rows"][-1]["ratio_printed"] == pytest.approx(0.5, abs=0.02)

    def test_ellipsoid(self):
        res = mixed_area_density_check(SmoothBody([2.0, 1.0, 1.0]),
                                       GaugeBody.ball(3), [1, 0, 0], [0.99],
                                       circle_res=256)
        assert res["rows"][-1]["ratio"] == pytest.approx(1.0, abs=0.05)

    def test_gauge_scaling(self):
        # the left side carries rho_L^{n+s}, the right side rho_L^{n+1}: scaling
        # L by 2 multiplies the ratio by exactly 2^{s-1} (invariance as s -> 1)
        E = SmoothBody.ball(3)
        v = [0.0, 0.0, 1.0]
        s = 0.9
        r1 = mixed_area_density_check(E, GaugeBody.ball(3), v, [s])
        r2 = mixed_area_density_check(E, GaugeBody.ellipsoid([2.0, 2.0, 2.0]),
                                      v, [s])
        assert r2["rows"][0]["lhs"] == pytest.approx(
            2.0 ** (3 + s) * r1["rows"][0]["lhs"], rel=1e-10)
        assert r2["rows"][0]["ratio"] == pytest.approx(
            2.0 ** (s - 1.0) * r1["rows"][0]["ratio"], rel=1e-10)
