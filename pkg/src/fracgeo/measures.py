"""Dual mixed volumes, the fractional area measure, and its structural identities.

For polytopes the fractional area measure is purely atomic on facet normals:
the inverse Gauss image of any Borel set avoiding the facet normals is
H^{n-1}-null. Atoms are index-aligned with the body's normal fan; inactive
facets carry weight zero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import GaugeBody, PerturbationField, PolytopeBody, SmoothBody, wulff_shape
from .errors import PointNotOnBoundaryError, WulffDegenerateError
from .fracperim import ps_xray
from .quadrature import BoundaryQuadrature, QuadratureRule


@dataclass(frozen=True)
class AtomicSphericalMeasure:
    """Finite list of (unit vector, nonnegative weight) atoms."""

    normals: np.ndarray  # (m, dim)
    weights: np.ndarray  # (m,)

    def __post_init__(self):
        if np.any(np.asarray(self.weights) < 0):
            raise ValueError("atom weights must be nonnegative")

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))


def centroid(m: AtomicSphericalMeasure) -> np.ndarray:
    """First moment sum_i w_i v_i; zero for every fractional area measure."""
    return np.asarray(m.weights) @ np.asarray(m.normals)


def second_moment(m: AtomicSphericalMeasure) -> np.ndarray:
    return (m.normals * m.weights[:, None]).T @ m.normals


@dataclass(frozen=True)
class DualMixedVolumeValue:
    value: float
    z: np.ndarray
    s: float


def _rho_tol(K: PolytopeBody) -> float:
    """Scale-relative cutoff below which a radial value is roundoff, not a chord.

    Slacks carry absolute error ~ |h| * eps, and near-tangent directions divide
    it by a small number; an absolute cutoff lets such ghosts through on large
    bodies and rho^{-s} amplifies them enormously.
    """
    return 1e-9 * max(1.0, float(np.abs(K.support_values).max()))


def _rho_boundary_many(K: PolytopeBody, Z: np.ndarray, U: np.ndarray) -> np.ndarray:
    """rho_{K,z}(u) for all (z, u) pairs; (Z, U) -> (nz, nu). Negative slacks clamped."""
    d = U @ K.normals.T                                   # (nu, F)
    e = np.maximum(K.support_values[None, :] - Z @ K.normals.T, 0.0)  # (nz, F)
    pos = d > 1e-14
    with np.errstate(divide="ignore", invalid="ignore"):
        t = e[:, None, :] / np.where(pos, d, np.inf)[None, :, :]
    t = np.where(pos[None, :, :], t, np.inf)
    return t.min(axis=2)


def _hemisphere_integral_smooth(E: SmoothBody, L: GaugeBody, z: np.ndarray, s: float,
                                n_alpha: int = 96, circle_res: int = 128) -> float:
    """int_{S_z^+} rho_L(u)^{n+s} X_E(z,u)^{-s} du for a boundary point z.

    The chord of an ellipsoid from a boundary point factors as
    X = 2|Qz| cos(alpha) / (u.Qu) with alpha the angle from the inward normal,
    so the tangential cos^{-s} singularity is absorbed exactly by the
    substitution m = cos(alpha), m = xi^{1/(1-s)}; the remaining integrand is
    smooth and Gauss-Legendre converges fast even for s close to 1.
    """
    n = E.dim
    nu = E.normal(z)
    Q = E._Q
    qnorm = float(np.linalg.norm(Q @ z))
    # tangent frame
    if n == 2:
        taus = np.array([[-nu[1], nu[0]], [nu[1], -nu[0]]])
        th_w = np.ones(2)
    else:
        ref = np.eye(3)[np.argmin(np.abs(nu))]
        t1 = np.cross(nu, ref)
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(nu, t1)
        ang = (np.arange(circle_res) + 0.5) * 2.0 * np.pi / circle_res
        taus = np.cos(ang)[:, None] * t1[None, :] + np.sin(ang)[:, None] * t2[None, :]
        th_w = np.full(circle_res, 2.0 * np.pi / circle_res)

    def integrand_of(alpha: np.ndarray) -> np.ndarray:
        """(n_theta, n_alpha) values of rho_L^{n+s} A^s [sin^{n-2} alpha], i.e. the
        integrand with the (2 qnorm)^{-s} cos^{-s} factor stripped."""
        ca, sa = np.cos(alpha), np.sin(alpha)
        U = (-ca[None, :, None] * nu[None, None, :]
             + sa[None, :, None] * taus[:, None, :])        # (nt, na, n)
        flat = U.reshape(-1, n)
        rho = L.rho(flat).reshape(U.shape[:2])
        A = np.einsum("tai,ij,taj->ta", U, Q, U)
        vals = rho ** (n + s) * A ** s
        if n == 3:
            vals = vals * sa[None, :]
        return vals

    # Gauss-Legendre nodes on [0, 1]
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_alpha)
    gl_x = 0.5 * (gl_x + 1.0)
    gl_w = 0.5 * gl_w

    total = 0.0
    # smooth part: alpha in [0, pi/4]
    a1 = gl_x * (np.pi / 4.0)
    w1 = gl_w * (np.pi / 4.0)
    v1 = integrand_of(a1) * np.cos(a1)[None, :] ** (-s)
    total += float(th_w @ (v1 @ w1))
    # singular part: m = cos(alpha) in (0, sqrt(2)/2], m = xi^{1/(1-s)}
    m0 = np.sqrt(0.5)
    xi0 = m0 ** (1.0 - s)
    xi = gl_x * xi0
    wx = gl_w * xi0
    m = xi ** (1.0 / (1.0 - s))
    alpha = np.arccos(m)
    # dm-form integrand: m^{-s} * [base / sqrt(1 - m^2)]; substitution kills m^{-s}
    v2 = integrand_of(alpha) / np.sqrt(1.0 - m ** 2)[None, :]
    total += float(th_w @ (v2 @ wx)) / (1.0 - s)
    return total * (2.0 * qnorm) ** (-s)


def dual_mixed_volume(K, L: GaugeBody, z, s: float, rule: QuadratureRule,
                      n_alpha: int = 96, circle_res: int = 128) -> DualMixedVolumeValue:
    """(n+s)-th dual mixed volume
    (1/n) int_{S_z^+} rho_{K,z}(u)^{-s} rho_L(u)^{n+s} du.

    Accepts a polytope (sphere-rule quadrature; nodes with rho = 0 lie outside
    S_z^+ and contribute nothing) or a smooth ellipsoid (singularity-absorbing
    quadrature for boundary z). z may also be interior, in which case S_z^+ is
    the whole sphere.
    """
    z = np.asarray(z, dtype=float)
    n = K.dim
    if isinstance(K, SmoothBody):
        r2 = float(z @ K._Q @ z)
        if r2 > 1.0 + 1e-9:
            raise PointNotOnBoundaryError("z lies outside the body")
        if r2 < 1.0 - 1e-9:
            rho = K.chord_many(z, rule.nodes)  # full chord, then split below
            # interior point: rho_{K,z}(u) is the forward root of the quadratic
            A = np.einsum("ij,jk,ik->i", rule.nodes, K._Q, rule.nodes)
            B = 2.0 * (rule.nodes @ (K._Q @ z))
            C = r2 - 1.0
            fwd = (-B + np.sqrt(B ** 2 - 4.0 * A * C)) / (2.0 * A)
            rhoL = L.rho(rule.nodes)
            val = float(np.dot(rule.weights, fwd ** (-s) * rhoL ** (n + s))) / n
            return DualMixedVolumeValue(val, z, s)
        val = _hemisphere_integral_smooth(K, L, z, s, n_alpha, circle_res) / n
        return DualMixedVolumeValue(val, z, s)

    scale = max(1.0, float(np.abs(K.support_values).max()))
    slack = K.support_values - K.normals @ z
    if np.min(slack) < -1e-9 * scale:
        raise PointNotOnBoundaryError("z lies outside the body")
    rho = _rho_boundary_many(K, z[None, :], rule.nodes)[0]
    rhoL = L.rho(rule.nodes)
    mask = rho > _rho_tol(K)
    val = float(np.dot(rule.weights[mask], rho[mask] ** (-s) * rhoL[mask] ** (n + s))) / n
    return DualMixedVolumeValue(val, z, s)


def dual_mixed_volume_profile(K: PolytopeBody, L: GaugeBody, s: float,
                              bq: BoundaryQuadrature, rule: QuadratureRule) -> np.ndarray:
    """Vectorized V~_{n+s}(K, L, z_j) for every boundary sample."""
    n = K.dim
    rhoL_pow = L.rho(rule.nodes) ** (n + s)
    out = np.empty(len(bq.points))
    block = max(1, int(4e6 // (rule.size * K.num_facets + 1)))
    for a in range(0, len(bq.points), block):
        b = min(a + block, len(bq.points))
        rho = _rho_boundary_many(K, bq.points[a:b], rule.nodes)  # (bz, nu)
        tol = _rho_tol(K)
        vals = np.where(rho > tol, rho, 1.0) ** (-s) * (rho > tol)
        out[a:b] = (vals * rhoL_pow[None, :]) @ rule.weights / n
    return out


def area_measure(K: PolytopeBody, L: GaugeBody, s: float, bq: BoundaryQuadrature,
                 rule: QuadratureRule) -> AtomicSphericalMeasure:
    """Fractional area measure of a polytope as atoms on its facet normals:
    A_i = (n/s) * sum over facet-i samples of a_j V~_{n+s}(K, L, z_j)."""
    n = K.dim
    vt = dual_mixed_volume_profile(K, L, s, bq, rule)
    atoms = np.zeros(K.num_facets)
    np.add.at(atoms, bq.facet_index, bq.weights * vt)
    atoms *= n / s
    return AtomicSphericalMeasure(K.normals, atoms)


def identity_asint_check(K: PolytopeBody, L: GaugeBody, s: float,
                         bq: BoundaryQuadrature, rule: QuadratureRule,
                         proj_res: int = 512) -> float:
    """Relative discrepancy between P_s and (2/(n-s)) sum_i h_i A_i."""
    n = K.dim
    p = ps_xray(K, L, s, rule, proj_res).value
    m = area_measure(K, L, s, bq, rule)
    rhs = (2.0 / (n - s)) * float(np.dot(K.support_values, m.weights))
    return abs(p - rhs) / p


def lemma_id_check(K: PolytopeBody, L: GaugeBody, s: float, f: PerturbationField,
                   bq: BoundaryQuadrature, rule: QuadratureRule) -> float:
    """Relative discrepancy of the boundary/sphere swap identity:
    2n int f(nu) V~ dH  vs  int rho_L^{n+s} int X^{-s} f(nu) dH du."""
    n = K.dim
    fz = f.values[bq.facet_index]
    vt = dual_mixed_volume_profile(K, L, s, bq, rule)
    lhs = 2.0 * n * float(np.dot(bq.weights, fz * vt))

    rhoL_pow = L.rho(rule.nodes) ** (n + s)
    # X(z, u) = rho_{K,z}(u) + rho_{K,z}(-u)
    rho_f = _rho_boundary_many(K, bq.points, rule.nodes)
    rho_b = _rho_boundary_many(K, bq.points, -rule.nodes)
    X = rho_f + rho_b
    tol = _rho_tol(K)
    Xs = np.where(X > tol, X, 1.0) ** (-s) * (X > tol)
    inner = (bq.weights * fz) @ Xs          # (nu,)
    rhs = float(np.dot(rule.weights, rhoL_pow * inner))
    denom = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / denom


def variational_check(K: PolytopeBody, L: GaugeBody, s: float, f: PerturbationField,
                      t_list, rule: QuadratureRule, bq: BoundaryQuadrature,
                      proj_res: int = 512) -> dict:
    """Central finite differences of t -> P_s([h + t f], L) against the
    first-variation value 2 sum_i f_i A_i.

    The factor is 2, not the 2n printed alongside the variational theorem:
    2 sum h_i A_i = (n-s) P_s is forced by homogeneity, and the finite
    differences confirm it.
    """
    m = area_measure(K, L, s, bq, rule)
    reference = 2.0 * float(np.dot(f.values, m.weights))
    rows = []
    for t in t_list:
        try:
            kp = wulff_shape(K.normals, K.support_values + t * f.values)
            km = wulff_shape(K.normals, K.support_values - t * f.values)
        except Exception as exc:
            raise WulffDegenerateError(f"t={t} collapses the body") from exc
        pp = ps_xray(kp, L, s, rule, proj_res).value
        pm = ps_xray(km, L, s, rule, proj_res).value
        fd = (pp - pm) / (2.0 * t)
        rows.append({"t": float(t), "fd": fd, "reference": reference,
                     "abs_err": abs(fd - reference)})
    return {"rows": rows, "reference": reference}
