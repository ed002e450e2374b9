"""Endpoint behavior of the fractional area measure: s -> 0 on polytopes,
s -> 1 pointwise curvature integrals on ellipsoids, and the
projection-curvature identity.

Each check reports the measured ratio against two candidate constants: the one
printed alongside the statement being tested, and the one forced by internal
consistency (homogeneity plus the support-integral identity). The measured
ratios decide; both are always reported.
"""
from __future__ import annotations

import numpy as np

from .bodies import GaugeBody, PolytopeBody, SmoothBody
from .errors import NotTangentError
from .measures import _hemisphere_integral_smooth, area_measure
from .quadrature import BoundaryQuadrature, QuadratureRule


def limit_s0_check(K: PolytopeBody, L: GaugeBody, s_list, bq: BoundaryQuadrature,
                   rule: QuadratureRule) -> dict:
    """Per-facet ratios of s*A_i to candidate s->0 targets.

    The printed target is (|L|/2) a_i; matching s*P_s -> n|K||L| through the
    support-integral identity forces (n|L|/2) a_i instead, and the measured
    ratios converge to n, not 1, against the printed target.
    """
    n = K.dim
    vol_L = L.volume(rule)
    active = K.facet_areas > 0
    a = K.facet_areas[active]
    rows = []
    for s in s_list:
        m = area_measure(K, L, s, bq, rule)
        atoms = m.weights[active]
        ratio_printed = s * atoms / ((vol_L / 2.0) * a)
        ratio = s * atoms / ((n * vol_L / 2.0) * a)
        rows.append({
            "s": float(s),
            "ratio_printed": ratio_printed,
            "ratio": ratio,
            "max_dev_printed": float(np.abs(ratio_printed - 1.0).max()),
            "max_dev": float(np.abs(ratio - 1.0).max()),
        })
    return {"rows": rows, "vol_L": vol_L}


def normal_curvature(E: SmoothBody, v, theta) -> float:
    """Normal curvature of the ellipsoid at z = grad h(v) in tangent direction theta."""
    v = np.asarray(v, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if abs(float(theta @ v)) > 1e-10:
        raise NotTangentError("direction is not tangent at the given normal")
    z = E.boundary_point(v)
    return E.normal_curvature(z, theta)


def _equator_rhs(E: SmoothBody, L: GaugeBody, v: np.ndarray,
                 circle_res: int = 256) -> float:
    """int_{S^{n-1} cap v_perp} rho_L(theta)^{n+1} kappa(z, theta) dH^{n-2}(theta)
    at z = grad h(v). For n = 2 the equator is two antipodal tangent directions
    with counting measure."""
    n = E.dim
    z = E.boundary_point(v)
    if n == 2:
        t = np.array([-v[1], v[0]])
        val = 0.0
        for th in (t, -t):
            val += float(L.rho(th[None, :])[0]) ** (n + 1) * E.normal_curvature(z, th)
        return val
    ref = np.eye(3)[np.argmin(np.abs(v))]
    t1 = np.cross(v, ref)
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(v, t1)
    ang = (np.arange(circle_res) + 0.5) * 2.0 * np.pi / circle_res
    thetas = np.cos(ang)[:, None] * t1[None, :] + np.sin(ang)[:, None] * t2[None, :]
    rho = L.rho(thetas) ** (n + 1)
    kap = np.array([E.normal_curvature(z, th) for th in thetas])
    return float(np.sum(rho * kap)) * 2.0 * np.pi / circle_res


def lemma_conv_check(E: SmoothBody, L: GaugeBody, v, s_list,
                     n_alpha: int = 96, circle_res: int = 256) -> dict:
    """s -> 1 pointwise limit at z = grad h(v):
    LHS(s) = (1-s) int_{S_z^+} rho_L^{n+s} X_E(z,u)^{-s} du against the
    curvature integral over the equator S^{n-1} cap v_perp.

    The printed right-hand side is the bare equator integral; the local graph
    expansion in its own proof produces half of it, and the measured ratios
    converge to 1/2 against the printed value. Both ratios are reported.
    """
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    z = E.boundary_point(v)
    rhs_printed = _equator_rhs(E, L, v, circle_res)
    rhs = 0.5 * rhs_printed
    rows = []
    for s in s_list:
        lhs = (1.0 - s) * _hemisphere_integral_smooth(E, L, z, s, n_alpha, circle_res)
        rows.append({"s": float(s), "lhs": lhs,
                     "ratio_printed": lhs / rhs_printed, "ratio": lhs / rhs})
    return {"rows": rows, "rhs_printed": rhs_printed, "rhs": rhs}


def lemma_xzlem_check(E: SmoothBody, v, u) -> float:
    """Relative error in the projection-curvature identity
    kappa_{E|u_perp}(z|u_perp) = kappa_E(z) / kappa_E(z, u) at z = grad h(v).

    The projected body is again an ellipse (support function restriction);
    both sides are analytic.
    """
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    if abs(float(u @ v)) > 1e-10:
        raise NotTangentError("projection direction is not tangent at the given normal")
    if E.dim != 3:
        raise ValueError("projection identity needs a 3-dimensional body")
    z = E.boundary_point(v)
    # basis of u_perp; shadow of {x.Qx <= 1} is {y.Q'y <= 1} with
    # Q' = (B Q^{-1} B^T)^{-1} in these coordinates
    ref = np.eye(3)[np.argmin(np.abs(u))]
    b1 = np.cross(u, ref)
    b1 /= np.linalg.norm(b1)
    b2 = np.cross(u, b1)
    B = np.vstack([b1, b2])
    Qp = np.linalg.inv(B @ np.linalg.inv(E._Q) @ B.T)
    p = B @ z                       # z projects onto the silhouette since v ⟂ u
    g = Qp @ p
    t = np.array([-g[1], g[0]])
    t /= np.linalg.norm(t)
    lhs = 2.0 * float(t @ Qp @ t) / (2.0 * np.linalg.norm(g))
    rhs = E.gauss_curvature(z) / E.normal_curvature(z, u)
    return abs(lhs - rhs) / abs(rhs)


def mixed_area_density_check(E: SmoothBody, L: GaugeBody, v, s_list,
                             n_alpha: int = 96, circle_res: int = 256) -> dict:
    """Pointwise density of (1-s) A_s at z = grad h(v):
    (1-s)(n/s) Vtilde_{n+s}(E, L, z) against the equator curvature integral.

    Ratios against the bare equator integral converge to 1/2; against half of
    it, to 1. Both are reported.
    """
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    z = E.boundary_point(v)
    rhs_printed = _equator_rhs(E, L, v, circle_res)
    rhs = 0.5 * rhs_printed
    rows = []
    for s in s_list:
        I = _hemisphere_integral_smooth(E, L, z, s, n_alpha, circle_res)
        lhs = (1.0 - s) * I / s       # (1-s) * (n/s) * (I/n)
        rows.append({"s": float(s), "lhs": lhs,
                     "ratio_printed": lhs / rhs_printed, "ratio": lhs / rhs})
    return {"rows": rows, "rhs_printed": rhs_printed, "rhs": rhs}
