"""Minkowski problem for the fractional area measure, and the isoperimetric search.

Both solvers minimize a scale-invariant objective over support vectors on a
fixed normal fan by backtracking gradient descent, recentering each iterate to
kill the translation degeneracy.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .bodies import GaugeBody, PolytopeBody, volume, wulff_shape
from .errors import (
    EmptyBodyError,
    InvalidTargetError,
    StalledError,
    UnboundedError,
    WulffDegenerateError,
)
from .measures import AtomicSphericalMeasure, area_measure, dual_mixed_volume
from .quadrature import QuadratureRule, boundary_rule, sphere_rule


@dataclass(frozen=True)
class MinkowskiProblem:
    target: AtomicSphericalMeasure
    gauge: GaugeBody
    s: float
    fan: np.ndarray = None  # defaults to the target's support

    def __post_init__(self):
        if self.fan is None:
            object.__setattr__(self, "fan", np.array(self.target.normals, dtype=float))


@dataclass
class SolveReport:
    solution: PolytopeBody
    scale: float
    residual: float
    iterations: int
    objective_trace: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)


@dataclass
class IsoperimetricReport:
    optimizer: PolytopeBody
    gamma_estimate: float
    vtilde_spread: float
    ratio_spread: float
    iterations: int
    objective_trace: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)


def validate_target(mu: AtomicSphericalMeasure, tol_centroid: float = 1e-8,
                    tol_eig: float = 1e-6) -> dict:
    """Solvability diagnostics: vanishing centroid and full-rank second moment
    (the quantitative form of "not concentrated in any subsphere")."""
    mass = mu.mass
    cen = float(np.linalg.norm(mu.weights @ mu.normals))
    mom = (mu.normals * mu.weights[:, None]).T @ mu.normals
    lam_min = float(np.linalg.eigvalsh(mom)[0])
    ok = mass > 0 and cen <= tol_centroid * mass and lam_min >= tol_eig * mass
    return {"mass": mass, "centroid_norm": cen, "lambda_min": lam_min, "pass": ok}


def project_centroid(mu: AtomicSphericalMeasure) -> AtomicSphericalMeasure:
    """Smallest weight correction that zeroes the centroid exactly.

    Quadrature noise leaves numerically-produced targets with a tiny nonzero
    centroid that the solvability gate would reject; the least-squares
    correction delta = -V (V^T V)^{-1} centroid removes it without touching
    anything else at first order.
    """
    V = np.asarray(mu.normals, dtype=float)
    w = np.asarray(mu.weights, dtype=float)
    cen = V.T @ w
    delta = -V @ np.linalg.solve(V.T @ V, cen)
    return AtomicSphericalMeasure(V, w + delta)


def measure_from_dict(doc: dict) -> AtomicSphericalMeasure:
    atoms = doc["atoms"]
    V = np.array([a["v"] for a in atoms], dtype=float)
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    w = np.array([a["w"] for a in atoms], dtype=float)
    return AtomicSphericalMeasure(V, w)


def measure_from_json(path) -> AtomicSphericalMeasure:
    with open(path) as fh:
        return measure_from_dict(json.load(fh))


def _recenter(K: PolytopeBody, h: np.ndarray, fan: np.ndarray) -> np.ndarray:
    """Translate so the area-weighted boundary proxy sum a_i h_i v_i vanishes."""
    a = K.facet_areas
    A = (fan * a[:, None]).T @ fan
    b = fan.T @ (a * h)
    try:
        x0 = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        return h
    return h - fan @ x0


def _descend(h0: np.ndarray, fan: np.ndarray, value_grad, max_iter: int = 500,
             rel_tol: float = 1e-8, patience: int = 10, max_backtracks: int = 40):
    """Backtracking gradient descent with recentering; value_grad(h) returns
    (objective, gradient, body). Steps that collapse the Wulff shape count as
    failed backtracks."""
    h = h0.copy()
    val, grad, K = value_grad(h)
    trace = [val]
    step = 0.1 * float(np.mean(np.abs(h))) / max(float(np.linalg.norm(grad)), 1e-300)
    stall = 0
    it = 0
    for it in range(1, max_iter + 1):
        accepted = False
        st = step
        for _ in range(max_backtracks):
            h_try = h - st * grad
            try:
                val_try, grad_try, K_try = value_grad(h_try)
            except (EmptyBodyError, UnboundedError, WulffDegenerateError):
                st *= 0.5
                continue
            if val_try < val - 1e-4 * st * float(grad @ grad):
                accepted = True
                break
            st *= 0.5
        if not accepted:
            # backtracking shrank the predicted decrease below the tolerance:
            # we are at a (numerical) stationary point, not stuck
            if st * float(grad @ grad) <= rel_tol * max(abs(val), 1e-300):
                break
            raise StalledError("no descent step within the backtracking budget")
        rel_dec = (val - val_try) / max(abs(val), 1e-300)
        h, val, grad, K = h_try, val_try, grad_try, K_try
        h = _recenter(K, h, fan)
        val, grad, K = value_grad(h)
        trace.append(val)
        step = 2.0 * st
        stall = stall + 1 if rel_dec < rel_tol else 0
        if stall >= patience:
            break
    return h, K, trace, it


def solve_minkowski(p: MinkowskiProblem, per_facet: int = 64, sphere_res: int = 512,
                    max_iter: int = 500, rel_tol: float = 1e-8) -> SolveReport:
    """Recover K with fractional area measure equal to the target.

    Minimizes G(h) = (sum mu_i h_i) * P_s([h], L)^{-1/(n-s)} on the fan, with
    P_s evaluated through the support-integral identity and gradient entries
    mu_i and 2 A_i; then rescales the normalized minimizer by
    c = (2 M* / (n-s))^{1/(n-1-s)} where M* is the objective value at P_s = 1.
    The exponent follows the degree-(n-1-s) homogeneity of the atoms, and the
    residual against the printed universal constant (2n/(n-s))^{1/(n-s)} is
    also reported for comparison.
    """
    diag = validate_target(p.target)
    if not diag["pass"]:
        raise InvalidTargetError(
            f"target fails solvability: centroid {diag['centroid_norm']:.3e}, "
            f"lambda_min {diag['lambda_min']:.3e}, mass {diag['mass']:.3e}")
    fan = np.asarray(p.fan, dtype=float)
    n = fan.shape[1]
    s = p.s
    mu = np.zeros(len(fan))
    # align target atoms with the fan
    for v, w in zip(p.target.normals, p.target.weights):
        i = int(np.argmax(fan @ v))
        if fan[i] @ v < 1.0 - 1e-9:
            raise InvalidTargetError("target atom outside the normal fan")
        mu[i] += w
    rule = sphere_rule(n, sphere_res)
    expo = 1.0 / (n - s)

    def value_grad(h):
        K = wulff_shape(fan, h)
        m = area_measure(K, p.gauge, s, boundary_rule(K, per_facet), rule)
        A = m.weights
        P = (2.0 / (n - s)) * float(h @ A)
        if P <= 0:
            raise WulffDegenerateError("nonpositive perimeter")
        M = float(mu @ h)
        G = M * P ** (-expo)
        grad = P ** (-expo) * (mu - (M * expo / P) * 2.0 * A)
        return G, grad, K

    h0 = np.ones(len(fan)) * (p.target.mass / len(fan)) ** (1.0 / max(n - 1 - s, 1e-9))
    h, K, trace, iters = _descend(h0, fan, value_grad, max_iter, rel_tol)

    # normalize to P_s = 1, then scale to match the target mass exactly
    m = area_measure(K, p.gauge, s, boundary_rule(K, per_facet), rule)
    P = (2.0 / (n - s)) * float(h @ m.weights)
    h_star = h / P ** (1.0 / (n - s))
    m_star = float(mu @ h_star)
    c = (2.0 * m_star / (n - s)) ** (1.0 / (n - 1.0 - s))
    c_printed = (2.0 * n / (n - s)) ** (1.0 / (n - s))

    def residual_at(cc):
        Kc = wulff_shape(fan, cc * h_star)
        mc = area_measure(Kc, p.gauge, s, boundary_rule(Kc, per_facet), rule)
        sup = mu > 0
        return Kc, float(np.max(np.abs(mc.weights[sup] - mu[sup]) / mu[sup]))

    Kc, residual = residual_at(c)
    _, residual_printed = residual_at(c_printed)
    return SolveReport(
        solution=Kc, scale=c, residual=residual, iterations=iters,
        objective_trace=trace,
        diagnostics={"target": diag, "scale_printed": c_printed,
                     "residual_printed_scale": residual_printed,
                     "normalized_objective": m_star})


def isoperimetric_search(L: GaugeBody, s: float, fan: np.ndarray,
                         per_facet: int = 64, sphere_res: int = 512,
                         max_iter: int = 500, rel_tol: float = 1e-8) -> IsoperimetricReport:
    """Minimize the isoperimetric ratio psi(h) = P_s([h], L) / V([h])^{(n-s)/n}.

    Gradient entries 2 A_i - ((n-s) P / (n V)) a_i over the common factor
    V^{-(n-s)/n}. Reports the gamma estimate, the spread of A_i / a_i over
    active facets, and the spread of the dual mixed volume over facet
    centroids (the stationarity diagnostic: both are constant at an optimizer).
    """
    fan = np.asarray(fan, dtype=float)
    n = fan.shape[1]
    rule = sphere_rule(n, sphere_res)
    q = (n - s) / n

    def value_grad(h):
        K = wulff_shape(fan, h)
        V = volume(K)
        m = area_measure(K, L, s, boundary_rule(K, per_facet), rule)
        A = m.weights
        P = (2.0 / (n - s)) * float(h @ A)
        psi = P / V ** q
        grad = (2.0 * A - (q * P / V) * K.facet_areas) / V ** q
        return psi, grad, K

    h0 = np.ones(len(fan))
    h, K, trace, iters = _descend(h0, fan, value_grad, max_iter, rel_tol)
    m = area_measure(K, L, s, boundary_rule(K, per_facet), rule)
    P = (2.0 / (n - s)) * float(h @ m.weights)
    gamma = P / volume(K) ** q
    active = K.facet_areas > 1e-12 * np.max(K.facet_areas)
    ratios = m.weights[active] / K.facet_areas[active]
    ratio_spread = float((ratios.max() - ratios.min()) / ratios.mean())
    vts = np.array([
        dual_mixed_volume(K, L, f.centroid, s, rule).value
        for f in K.facets if f.area > 0])
    vt_spread = float((vts.max() - vts.min()) / vts.mean())
    h_active = h[active]
    h_spread = float((h_active.max() - h_active.min()) / h_active.mean())
    return IsoperimetricReport(
        optimizer=K, gamma_estimate=gamma, vtilde_spread=vt_spread,
        ratio_spread=ratio_spread, iterations=iters, objective_trace=trace,
        diagnostics={"h_spread": h_spread, "perimeter": P, "volume": volume(K)})
