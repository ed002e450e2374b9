"""Routes to the anisotropic fractional s-perimeter and its endpoint limits.

Three independent computation routes are provided:

* ``ps_xray``       deterministic sphere quadrature + projection grids,
* ``ps_montecarlo`` Monte-Carlo over (interior point, direction) pairs,
* ``ps_linesample`` Monte-Carlo over random lines (unit-ball gauge only).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bodies import (
    GaugeBody,
    PolytopeBody,
    anisotropic_perimeter,
    moment_body,
    volume,
    xray_many,
)
from .errors import InvalidSError
from .quadrature import QuadratureRule, RandomSource, sample_interior, sample_sphere


@dataclass(frozen=True)
class PerimeterEstimate:
    value: float
    route: str
    stderr: float = 0.0
    cost: int = 0

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("perimeter estimate must be positive")
        if self.stderr < 0:
            raise ValueError("stderr must be nonnegative")


def _check_s(s: float) -> None:
    if not (0.0 < s < 1.0):
        raise InvalidSError("s must lie in (0, 1)")


def _perp_basis(u: np.ndarray) -> np.ndarray:
    """Orthonormal basis of u^perp as rows, (dim-1, dim)."""
    dim = len(u)
    if dim == 2:
        return np.array([[-u[1], u[0]]])
    ref = np.eye(3)[np.argmin(np.abs(u))]
    t1 = np.cross(u, ref)
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(u, t1)
    return np.array([t1, t2])


def ps_xray(K: PolytopeBody, L: GaugeBody, s: float, rule: QuadratureRule,
            proj_res: int = 256) -> PerimeterEstimate:
    """Deterministic P_s(K, L) via
    (1/(s(1-s))) int_{S^{n-1}} rho_L(u)^{n+s} int_{u^perp} X_K(y,u)^{1-s} dy du.

    The inner integral uses a midpoint grid (proj_res cells per axis) on the
    bounding box of the projection K|u^perp.
    """
    _check_s(s)
    n = K.dim
    rho = L.rho(rule.nodes) ** (n + s)
    total = 0.0
    cost = 0
    V = K.vertices
    for k in range(rule.size):
        u = rule.nodes[k]
        B = _perp_basis(u)          # (n-1, n)
        proj = V @ B.T              # (V, n-1)
        lo = proj.min(axis=0)
        hi = proj.max(axis=0)
        if n == 2:
            t = lo[0] + (np.arange(proj_res) + 0.5) * (hi[0] - lo[0]) / proj_res
            Y = t[:, None] * B          # points in u^perp
            cell = (hi[0] - lo[0]) / proj_res
        else:
            t0 = lo[0] + (np.arange(proj_res) + 0.5) * (hi[0] - lo[0]) / proj_res
            t1 = lo[1] + (np.arange(proj_res) + 0.5) * (hi[1] - lo[1]) / proj_res
            T0, T1 = np.meshgrid(t0, t1, indexing="ij")
            Y = T0.reshape(-1, 1) * B[0][None, :] + T1.reshape(-1, 1) * B[1][None, :]
            cell = (hi[0] - lo[0]) * (hi[1] - lo[1]) / proj_res ** 2
        X = xray_many(K, Y, u)
        inner = np.sum(X ** (1.0 - s)) * cell
        total += rule.weights[k] * rho[k] * inner
        cost += len(Y)
    return PerimeterEstimate(total / (s * (1.0 - s)), "xray", 0.0, cost)


def ps_montecarlo(K: PolytopeBody, L: GaugeBody, s: float, n_samples: int,
                  rng: RandomSource) -> PerimeterEstimate:
    """Monte-Carlo P_s(K, L) via
    (1/s) int_{S^{n-1}} rho_L(u)^{n+s} int_K rho_{K,y}(u)^{-s} dy du.

    Each sample pairs u with -u for the same interior point y, which tames the
    heavy tail of rho^{-s} near the boundary. Interior points with rho below
    1e-12 (probability-zero under uniform sampling) are clamped away.
    """
    _check_s(s)
    n = K.dim
    sphere_area = 2.0 * np.pi if n == 2 else 4.0 * np.pi
    vol = volume(K)
    Y = sample_interior(K, n_samples, rng.split(rng.stream))
    U = sample_sphere(n, n_samples, rng.split(rng.stream + 1).generator())
    rho_pow = L.rho(U) ** (n + s)   # rho_L even, so the u/-u pair shares it
    vals = np.empty(n_samples)
    chunk = 200_000
    for a in range(0, n_samples, chunk):
        b = min(a + chunk, n_samples)
        Yc, Uc = Y[a:b], U[a:b]
        d = Uc @ K.normals.T                       # (m, F)
        e = K.support_values[None, :] - Yc @ K.normals.T
        e = np.maximum(e, 1e-12)
        with np.errstate(divide="ignore"):
            t_pos = np.where(d > 1e-14, e / np.where(d > 1e-14, d, 1.0), np.inf)
            t_neg = np.where(-d > 1e-14, e / np.where(-d > 1e-14, -d, 1.0), np.inf)
        r_fwd = np.maximum(t_pos.min(axis=1), 1e-12)
        r_bwd = np.maximum(t_neg.min(axis=1), 1e-12)
        vals[a:b] = 0.5 * (r_fwd ** (-s) + r_bwd ** (-s))
    vals *= rho_pow
    factor = sphere_area * vol / s
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / np.sqrt(n_samples))
    return PerimeterEstimate(factor * mean, "montecarlo", factor * stderr, n_samples)


def ps_linesample(K: PolytopeBody, s: float, n_samples: int,
                  rng: RandomSource) -> PerimeterEstimate:
    """Monte-Carlo P_s(K, B^n) by random lines:
    (1/(s(1-s))) int_{S^{n-1}} int_{u^perp} X_K(y,u)^{1-s} dy du,
    with y uniform in a fixed box in u^perp covering every projection of K.
    Lines that miss K contribute zero and stay in the average.
    """
    _check_s(s)
    n = K.dim
    sphere_area = 2.0 * np.pi if n == 2 else 4.0 * np.pi
    c = K.vertices.mean(axis=0)
    R = float(np.linalg.norm(K.vertices - c, axis=1).max())
    box_measure = (2.0 * R) ** (n - 1)
    gen = rng.generator()
    U = sample_sphere(n, n_samples, gen)
    T = (gen.random((n_samples, n - 1)) - 0.5) * 2.0 * R
    vals = np.empty(n_samples)
    chunk = 100_000
    for a in range(0, n_samples, chunk):
        b = min(a + chunk, n_samples)
        Uc = U[a:b]
        Tc = T[a:b]
        # base point of each line: projection of c onto u^perp plus box offset
        base = c[None, :] - (Uc @ c)[:, None] * Uc
        if n == 2:
            B1 = np.column_stack([-Uc[:, 1], Uc[:, 0]])
            Yc = base + Tc[:, 0:1] * B1
        else:
            ref = np.eye(3)[np.argmin(np.abs(Uc), axis=1)]
            B1 = np.cross(Uc, ref)
            B1 /= np.linalg.norm(B1, axis=1, keepdims=True)
            B2 = np.cross(Uc, B1)
            Yc = base + Tc[:, 0:1] * B1 + Tc[:, 1:2] * B2
        d = Uc @ K.normals.T
        e = K.support_values[None, :] - Yc @ K.normals.T
        tmax = np.full(b - a, np.inf)
        tmin = np.full(b - a, -np.inf)
        miss = np.zeros(b - a, dtype=bool)
        pos = d > 1e-14
        neg = d < -1e-14
        par = ~pos & ~neg
        ratio = np.where(pos, e / np.where(pos, d, 1.0), np.inf)
        tmax = ratio.min(axis=1)
        ratio = np.where(neg, e / np.where(neg, d, 1.0), -np.inf)
        tmin = ratio.max(axis=1)
        miss = ((e < 0.0) & par).any(axis=1)
        X = np.maximum(tmax - tmin, 0.0)
        X[miss] = 0.0
        vals[a:b] = X ** (1.0 - s)
    factor = sphere_area * box_measure / (s * (1.0 - s))
    mean = float(vals.mean())
    stderr = float(vals.std(ddof=1) / np.sqrt(n_samples))
    return PerimeterEstimate(factor * mean, "linesample", factor * stderr, n_samples)


def ludwig_limits(K: PolytopeBody, L: GaugeBody, s_list, rule: QuadratureRule,
                  proj_res: int = 512) -> dict:
    """Endpoint diagnostics: s*P_s against n|K||L| and (1-s)*P_s against P(K, ZL)."""
    n = K.dim
    vol_L = L.volume(rule)
    target0 = n * volume(K) * vol_L
    target1 = anisotropic_perimeter(K, moment_body(L, rule))
    rows = []
    for s in s_list:
        p = ps_xray(K, L, s, rule, proj_res).value
        rows.append({"s": float(s), "s_ps": s * p, "one_minus_s_ps": (1.0 - s) * p})
    return {"rows": rows, "target_s0": target0, "target_s1": target1}
