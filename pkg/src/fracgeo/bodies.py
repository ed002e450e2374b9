"""Convex bodies and gauges: Wulff shapes, support/radial/X-ray functions, volumes.

The polytope representation is a fixed normal fan with support values; facet
data (vertices, areas) are derived eagerly at construction time and bodies are
immutable afterwards, so all downstream quadrature loops read plain arrays.
Inactive facets are retained with zero area to keep measure vectors
index-aligned with the input fan.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .errors import (
    EmptyBodyError,
    PointOutsideError,
    UnboundedError,
)

_UNIT_TOL = 1e-12
_MEMBER_TOL = 1e-9


@dataclass(frozen=True)
class Facet:
    normal_index: int
    area: float
    vertices: np.ndarray  # ordered loop, (k, dim); empty for inactive facets
    centroid: np.ndarray
    diameter: float


class PolytopeBody:
    """Bounded intersection of half-spaces {x . v_i <= h_i} with derived facet data."""

    def __init__(self, normals: np.ndarray, support_values: np.ndarray,
                 vertices: np.ndarray, facets: list[Facet]):
        self.normals = normals
        self.support_values = support_values
        self.vertices = vertices
        self.facets = facets
        self.dim = normals.shape[1]
        self.facet_areas = np.array([f.area for f in facets])
        self.origin_interior = bool(np.all(support_values > 0))
        self._volume = None

    @property
    def num_facets(self) -> int:
        return len(self.facets)

    def contains(self, x, tol: float = _MEMBER_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        scale = max(1.0, float(np.abs(self.support_values).max()))
        return bool(np.all(self.normals @ x <= self.support_values + tol * scale))

    def translate(self, x0) -> "PolytopeBody":
        x0 = np.asarray(x0, dtype=float)
        facets = [
            Facet(f.normal_index, f.area,
                  f.vertices + x0 if len(f.vertices) else f.vertices,
                  f.centroid + x0, f.diameter)
            for f in self.facets
        ]
        return PolytopeBody(self.normals, self.support_values + self.normals @ x0,
                            self.vertices + x0, facets)

    def scale(self, lam: float) -> "PolytopeBody":
        if lam <= 0:
            raise ValueError("scale factor must be positive")
        facets = [
            Facet(f.normal_index, f.area * lam ** (self.dim - 1),
                  f.vertices * lam, f.centroid * lam, f.diameter * lam)
            for f in self.facets
        ]
        return PolytopeBody(self.normals, self.support_values * lam,
                            self.vertices * lam, facets)


def _check_normals(normals: np.ndarray) -> None:
    lens = np.linalg.norm(normals, axis=1)
    if np.any(np.abs(lens - 1.0) > 1e-10):
        raise ValueError("normals must be unit vectors")


def _positively_spans(normals: np.ndarray) -> bool:
    m, n = normals.shape
    if np.linalg.matrix_rank(normals) < n:
        return False
    # 0 in the interior of conv{v_i}: max eps s.t. sum(l v) = 0, sum(l) = 1, l >= eps
    c = np.zeros(m + 1)
    c[-1] = -1.0
    A_eq = np.zeros((n + 1, m + 1))
    A_eq[:n, :m] = normals.T
    A_eq[n, :m] = 1.0
    b_eq = np.zeros(n + 1)
    b_eq[n] = 1.0
    A_ub = np.zeros((m, m + 1))
    A_ub[:, :m] = -np.eye(m)
    A_ub[:, -1] = 1.0
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(None, None)] * m + [(None, None)], method="highs")
    return bool(res.success and -res.fun > 1e-12)


def _chebyshev_center(normals: np.ndarray, h: np.ndarray) -> tuple[np.ndarray, float]:
    m, n = normals.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([normals, np.ones((m, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=h, bounds=[(None, None)] * (n + 1), method="highs")
    if not res.success:
        raise EmptyBodyError("no interior point found")
    return res.x[:n], float(res.x[n])


def _order_polygon(verts: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Order coplanar 3-D points counterclockwise around the facet normal."""
    c = verts.mean(axis=0)
    ref = np.eye(3)[np.argmin(np.abs(normal))]
    t1 = np.cross(normal, ref)
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(normal, t1)
    rel = verts - c
    ang = np.arctan2(rel @ t2, rel @ t1)
    return verts[np.argsort(ang)]


def _polygon_area(verts: np.ndarray, normal: np.ndarray) -> float:
    c = verts.mean(axis=0)
    total = np.zeros(3)
    for k in range(len(verts)):
        total += np.cross(verts[k] - c, verts[(k + 1) % len(verts)] - c)
    return float(0.5 * abs(np.dot(total, normal)))


def wulff_shape(normals, support_values) -> PolytopeBody:
    """Build the Wulff shape [h] = {x : x . v_i <= h_i} with full facet data.

    Vertex enumeration goes through polarity about an interior point plus a
    convex hull of the dual point cloud; facets that end up inactive are kept
    with zero area.
    """
    normals = np.asarray(normals, dtype=float)
    support_values = np.asarray(support_values, dtype=float)
    m, n = normals.shape
    if n not in (2, 3):
        raise ValueError("only dimensions 2 and 3 are supported")
    if m < n + 1:
        raise UnboundedError("need at least dim+1 normals")
    _check_normals(normals)
    if not _positively_spans(normals):
        raise UnboundedError("normals do not positively span R^n")
    center, r = _chebyshev_center(normals, support_values)
    if r <= 1e-12:
        raise EmptyBodyError("half-space intersection has empty interior")

    h_shift = support_values - normals @ center  # all >= r > 0
    dual_pts = normals / h_shift[:, None]
    hull = ConvexHull(dual_pts)
    eqs = hull.equations  # rows [a, b] with a.y + b <= 0, |a| = 1
    offsets = -eqs[:, -1]
    if np.any(offsets <= 1e-12):
        raise UnboundedError("dual hull does not contain the origin")
    verts = eqs[:, :-1] / offsets[:, None] + center[None, :]

    # hull facets of the dual are triangulated in 3-D: deduplicate vertices
    scale = max(1.0, np.abs(verts).max())
    rounded = np.round(verts / (scale * 1e-9))
    _, keep = np.unique(rounded, axis=0, return_index=True)
    verts = verts[np.sort(keep)]

    facets: list[Facet] = []
    slack = support_values[None, :] - verts @ normals.T  # (V, m), >= ~0
    tol = 1e-8 * scale
    for i in range(m):
        on = verts[slack[:, i] < tol]
        area = 0.0
        loop = np.empty((0, n))
        centroid = np.zeros(n)
        diam = 0.0
        if n == 2 and len(on) >= 2:
            d = np.linalg.norm(on[:, None, :] - on[None, :, :], axis=-1)
            j, k = np.unravel_index(np.argmax(d), d.shape)
            loop = np.array([on[j], on[k]])
            area = float(d[j, k])
            centroid = loop.mean(axis=0)
            diam = area
        elif n == 3 and len(on) >= 3:
            loop = _order_polygon(on, normals[i])
            area = _polygon_area(loop, normals[i])
            centroid = loop.mean(axis=0)
            d = np.linalg.norm(loop[:, None, :] - loop[None, :, :], axis=-1)
            diam = float(d.max())
            if area < 1e-12 * scale ** 2:
                area, loop = 0.0, np.empty((0, n))
        facets.append(Facet(i, area, loop, centroid, diam))

    body = PolytopeBody(normals, support_values, verts, facets)
    return body


def support(K: PolytopeBody, v) -> float:
    """h_K(v) = max over vertices of x . v."""
    v = np.asarray(v, dtype=float)
    return float(np.max(K.vertices @ v))


def radial(K: PolytopeBody, z, u) -> float:
    """rho_{K,z}(u): distance from z in K to the boundary along direction u."""
    z = np.asarray(z, dtype=float)
    u = np.asarray(u, dtype=float)
    if not K.contains(z):
        raise PointOutsideError("z is not in K")
    return float(radial_many(K, z, u[None, :])[0])


def radial_many(K: PolytopeBody, z, U: np.ndarray) -> np.ndarray:
    """Vectorized rho_{K,z} over rows of U; no membership check."""
    z = np.asarray(z, dtype=float)
    d = U @ K.normals.T                       # (m_dirs, m_facets)
    e = K.support_values - K.normals @ z      # (m_facets,), >= ~0
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(d > 1e-14, np.maximum(e[None, :], 0.0) / np.where(d > 1e-14, d, 1.0), np.inf)
    return t.min(axis=1)


def xray(K: PolytopeBody, y, u) -> float:
    """X_K(y, u) = length of K intersected with the line y + R u."""
    y = np.asarray(y, dtype=float)
    u = np.asarray(u, dtype=float)
    return float(xray_many(K, y[None, :], u)[0])


def xray_many(K: PolytopeBody, Y: np.ndarray, u) -> np.ndarray:
    """Vectorized X-ray over rows of Y for a fixed direction u."""
    u = np.asarray(u, dtype=float)
    d = K.normals @ u                     # (m,)
    e = K.support_values[None, :] - Y @ K.normals.T  # (N, m)
    tmax = np.full(len(Y), np.inf)
    tmin = np.full(len(Y), -np.inf)
    miss = np.zeros(len(Y), dtype=bool)
    pos = d > 1e-14
    neg = d < -1e-14
    par = ~pos & ~neg
    if pos.any():
        tmax = (e[:, pos] / d[pos][None, :]).min(axis=1)
    if neg.any():
        tmin = (e[:, neg] / d[neg][None, :]).max(axis=1)
    if par.any():
        miss = (e[:, par] < 0.0).any(axis=1)
    out = np.maximum(tmax - tmin, 0.0)
    out[miss] = 0.0
    return out


def volume(K: PolytopeBody) -> float:
    """Exact polytope volume (shoelace in 2-D, facet-cone tetrahedra in 3-D)."""
    if K._volume is not None:
        return K._volume
    if K.dim == 2:
        # order vertices by angle around the centroid, then shoelace
        c = K.vertices.mean(axis=0)
        rel = K.vertices - c
        order = np.argsort(np.arctan2(rel[:, 1], rel[:, 0]))
        P = K.vertices[order]
        x, y = P[:, 0], P[:, 1]
        vol = 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
    else:
        c = K.vertices.mean(axis=0)
        vol = 0.0
        for f in K.facets:
            if f.area <= 0.0:
                continue
            V = f.vertices
            fc = V.mean(axis=0)
            for k in range(len(V)):
                a, b = V[k] - c, V[(k + 1) % len(V)] - c
                vol += abs(np.dot(np.cross(a, b), fc - c)) / 6.0
    K._volume = float(vol)
    return K._volume


class GaugeBody:
    """Origin-symmetric gauge L: radial function rho_L and norm ||.||_L.

    Kinds: "ball" (unit ball), "ellipsoid" (axis-aligned, given semi-axes),
    "polytope" (origin-symmetric polytope with the origin interior), and
    "sampled" (support values tabulated on a quadrature rule, interpreted as
    the Wulff shape of the table).
    """

    def __init__(self, dim: int, kind: str, axes=None, polytope: PolytopeBody | None = None,
                 table_nodes: np.ndarray | None = None, table_values: np.ndarray | None = None):
        self.dim = dim
        self.kind = kind
        if kind == "ellipsoid":
            self.axes = np.asarray(axes, dtype=float)
            if len(self.axes) != dim or np.any(self.axes <= 0):
                raise ValueError("ellipsoid needs dim positive semi-axes")
        elif kind == "polytope":
            if polytope is None or not polytope.origin_interior:
                raise ValueError("polytope gauge needs the origin interior")
            self.polytope = polytope
        elif kind == "sampled":
            self.table_nodes = np.asarray(table_nodes, dtype=float)
            self.table_values = np.asarray(table_values, dtype=float)
            if np.any(self.table_values <= 0):
                raise ValueError("sampled gauge needs positive support values")
        elif kind != "ball":
            raise ValueError(f"unknown gauge kind {kind!r}")

    @classmethod
    def ball(cls, dim: int) -> "GaugeBody":
        return cls(dim, "ball")

    @classmethod
    def ellipsoid(cls, axes) -> "GaugeBody":
        axes = np.asarray(axes, dtype=float)
        return cls(len(axes), "ellipsoid", axes=axes)

    @classmethod
    def from_polytope(cls, K: PolytopeBody) -> "GaugeBody":
        return cls(K.dim, "polytope", polytope=K)

    @classmethod
    def cube(cls, dim: int, half_width: float = 1.0) -> "GaugeBody":
        normals = np.vstack([np.eye(dim), -np.eye(dim)])
        return cls.from_polytope(wulff_shape(normals, np.full(2 * dim, half_width)))

    def rho(self, U: np.ndarray) -> np.ndarray:
        """Radial function at unit vectors (rows of U)."""
        U = np.atleast_2d(np.asarray(U, dtype=float))
        if self.kind == "ball":
            return np.ones(len(U))
        if self.kind == "ellipsoid":
            return 1.0 / np.sqrt((U ** 2 / self.axes[None, :] ** 2).sum(axis=1))
        if self.kind == "polytope":
            return radial_many(self.polytope, np.zeros(self.dim), U)
        # sampled: radial function of the Wulff shape of the table
        d = U @ self.table_nodes.T
        with np.errstate(divide="ignore"):
            t = np.where(d > 1e-14, self.table_values[None, :] / np.where(d > 1e-14, d, 1.0), np.inf)
        return t.min(axis=1)

    def norm(self, x) -> float:
        """Minkowski functional ||x||_L = |x| / rho_L(x/|x|)."""
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        if r == 0.0:
            return 0.0
        return r / float(self.rho(x[None, :] / r)[0])

    def support(self, v) -> float:
        """h_L(v); for sampled gauges the support of the tabulated Wulff shape."""
        v = np.asarray(v, dtype=float)
        if self.kind == "ball":
            return 1.0
        if self.kind == "ellipsoid":
            return float(np.sqrt(np.sum(self.axes ** 2 * v ** 2)))
        if self.kind == "polytope":
            return support(self.polytope, v)
        raise NotImplementedError("support of a sampled gauge is not tabulated at arbitrary v")

    def volume(self, rule=None) -> float:
        if self.kind == "ball":
            return _ball_volume(self.dim)
        if self.kind == "ellipsoid":
            return _ball_volume(self.dim) * float(np.prod(self.axes))
        if self.kind == "polytope":
            return volume(self.polytope)
        if rule is None:
            raise ValueError("sampled gauge volume needs a sphere rule")
        return float(np.dot(rule.weights, self.rho(rule.nodes) ** self.dim)) / self.dim


def _ball_volume(dim: int) -> float:
    return {1: 2.0, 2: np.pi, 3: 4.0 * np.pi / 3.0}[dim]


def gauge_rho(L: GaugeBody, u) -> float:
    u = np.asarray(u, dtype=float)
    return float(L.rho(u[None, :])[0])


def gauge_norm(L: GaugeBody, x) -> float:
    return L.norm(x)


def moment_body_support(L: GaugeBody, v, rule) -> float:
    """Support of the moment body ZL at v via the radial reduction
    (1/2) * integral over S^{n-1} of rho_L(u)^{n+1} |v.u| du."""
    v = np.asarray(v, dtype=float)
    rho = L.rho(rule.nodes)
    return float(0.5 * np.dot(rule.weights, rho ** (L.dim + 1) * np.abs(rule.nodes @ v)))


def moment_body(L: GaugeBody, rule):
    """Support evaluator v -> h_{ZL}(v), for use as the gauge of the classical
    anisotropic perimeter."""
    def h(v):
        return moment_body_support(L, v, rule)
    return h


def anisotropic_perimeter(K: PolytopeBody, M) -> float:
    """First-order anisotropic perimeter sum_i a_i h_M(v_i).

    M may be a GaugeBody or any callable v -> h_M(v).
    """
    h = M.support if isinstance(M, GaugeBody) else M
    total = 0.0
    for i, f in enumerate(K.facets):
        if f.area > 0.0:
            total += f.area * float(h(K.normals[i]))
    return total


class SmoothBody:
    """Axis-aligned ellipsoid with analytic support, curvatures and chords."""

    def __init__(self, axes):
        self.axes = np.asarray(axes, dtype=float)
        self.dim = len(self.axes)
        if self.dim not in (2, 3) or np.any(self.axes <= 0):
            raise ValueError("need 2 or 3 positive semi-axes")
        self._Q = np.diag(1.0 / self.axes ** 2)

    @classmethod
    def ball(cls, dim: int, radius: float = 1.0) -> "SmoothBody":
        return cls(np.full(dim, radius))

    def support(self, v) -> float:
        v = np.asarray(v, dtype=float)
        return float(np.sqrt(np.sum(self.axes ** 2 * v ** 2)))

    def boundary_point(self, v) -> np.ndarray:
        """z(v) = grad h(v): the boundary point with outer normal v."""
        v = np.asarray(v, dtype=float)
        return self.axes ** 2 * v / self.support(v)

    def normal(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        g = self._Q @ z
        return g / np.linalg.norm(g)

    def gauss_curvature(self, z) -> float:
        z = np.asarray(z, dtype=float)
        s = np.sum(z ** 2 / self.axes ** 4)
        return float(s ** (-(self.dim + 1) / 2.0) / np.prod(self.axes ** 2))

    def normal_curvature(self, z, u) -> float:
        """Normal curvature at boundary point z in tangent direction u."""
        z = np.asarray(z, dtype=float)
        u = np.asarray(u, dtype=float)
        grad = 2.0 * self._Q @ z
        num = 2.0 * float(u @ self._Q @ u)
        return num / float(np.linalg.norm(grad) * np.dot(u, u))

    def principal_curvatures(self, z) -> tuple[np.ndarray, np.ndarray]:
        """Principal curvatures and directions at boundary point z."""
        z = np.asarray(z, dtype=float)
        nrm = self.normal(z)
        # orthonormal tangent basis
        basis = []
        for e in np.eye(self.dim):
            t = e - np.dot(e, nrm) * nrm
            for b in basis:
                t = t - np.dot(t, b) * b
            ln = np.linalg.norm(t)
            if ln > 1e-8:
                basis.append(t / ln)
            if len(basis) == self.dim - 1:
                break
        B = np.array(basis)  # (dim-1, dim)
        grad_norm = np.linalg.norm(2.0 * self._Q @ z)
        S = 2.0 * B @ self._Q @ B.T / grad_norm
        vals, vecs = np.linalg.eigh(S)
        dirs = vecs.T @ B
        return vals, dirs

    def chord(self, z, u) -> float:
        """Length of the intersection of the line z + R u with the ellipsoid."""
        z = np.asarray(z, dtype=float)
        u = np.asarray(u, dtype=float)
        A = float(u @ self._Q @ u)
        Bc = 2.0 * float(z @ self._Q @ u)
        C = float(z @ self._Q @ z) - 1.0
        disc = Bc * Bc - 4.0 * A * C
        if disc <= 0.0:
            return 0.0
        return float(np.sqrt(disc) / A)

    def chord_many(self, z, U: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        A = np.einsum("ij,jk,ik->i", U, self._Q, U)
        Bc = 2.0 * (U @ (self._Q @ z))
        C = float(z @ self._Q @ z) - 1.0
        disc = Bc ** 2 - 4.0 * A * C
        out = np.zeros(len(U))
        ok = disc > 0.0
        out[ok] = np.sqrt(disc[ok]) / A[ok]
        return out

    def volume(self) -> float:
        return _ball_volume(self.dim) * float(np.prod(self.axes))


@dataclass(frozen=True)
class PerturbationField:
    """A continuous perturbation f on S^{n-1} sampled at a polytope's normals."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(v)):
            raise ValueError("perturbation values must be finite")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.values)


# ---------------------------------------------------------------------------
# JSON schemas (documented in the README)

def body_from_dict(doc: dict) -> PolytopeBody:
    normals = np.asarray(doc["normals"], dtype=float)
    support_values = np.asarray(doc["support"], dtype=float)
    if "dim" in doc and int(doc["dim"]) != normals.shape[1]:
        raise ValueError("dim does not match normals")
    return wulff_shape(normals, support_values)


def gauge_from_dict(doc: dict, dim: int | None = None) -> GaugeBody:
    kind = doc["kind"]
    if kind == "ball":
        if dim is None and "dim" not in doc:
            raise ValueError("ball gauge needs a dim")
        return GaugeBody.ball(int(doc.get("dim", dim)))
    if kind == "ellipsoid":
        return GaugeBody.ellipsoid(doc["axes"])
    if kind == "polytope":
        return GaugeBody.from_polytope(body_from_dict(doc))
    raise ValueError(f"unknown gauge kind {kind!r}")


def body_from_json(path) -> PolytopeBody:
    with open(path) as fh:
        return body_from_dict(json.load(fh))


def gauge_from_json(path, dim: int | None = None) -> GaugeBody:
    with open(path) as fh:
        return gauge_from_dict(json.load(fh), dim=dim)
