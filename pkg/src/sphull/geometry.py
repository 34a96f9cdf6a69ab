"""Geometric kernel: 3D convex hulls of spherical point sets and their metric functionals.

All polytopes here are convex hulls of points on (or mapped from) the unit
sphere.  The hull of three points is represented as a double-covered triangle
(two facets with opposite orientations), which keeps the facet-count formulas
F = 2n-4, E = 3n-6 valid down to n = 3.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull as _QhullConvexHull
from scipy.spatial import QhullError


class GeometryError(ValueError):
    pass


class DegenerateInput(GeometryError):
    """Fewer than 3 points, or points without a 2D/3D hull."""


class NonManifoldEdge(GeometryError):
    """An edge of the facet complex is not incident to exactly 2 facets."""


class DegenerateCap(GeometryError):
    """Facet plane passes through the sphere center."""


def _cross3(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Row-wise cross product of (m, 3) arrays, avoiding np.cross overhead."""
    w = np.empty_like(u)
    w[:, 0] = u[:, 1] * v[:, 2] - u[:, 2] * v[:, 1]
    w[:, 1] = u[:, 2] * v[:, 0] - u[:, 0] * v[:, 2]
    w[:, 2] = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    return w


@dataclass(frozen=True)
class ConvexPolytope3:
    """Boundary complex of a convex hull: vertex coordinates and oriented
    triangular facets (outward normals); edges are derived on demand."""

    vertices: np.ndarray   # (n, 3) float
    facets: np.ndarray     # (F, 3) int, outward-oriented triples

    @cached_property
    def edges(self) -> np.ndarray:
        """(E, 2) deduplicated vertex-index pairs, each row sorted."""
        return _edges_from_facets(self.facets)

    @property
    def vertex_count(self) -> int:
        return len(np.unique(self.facets))

    @property
    def facet_count(self) -> int:
        return len(self.facets)

    @property
    def edge_count(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class PolytopeMetrics:
    """Every metric the experiments record for one polytope."""

    width: float
    area: float
    volume: float
    edge_length: float
    facet_count: int
    edge_count: int
    vertex_count: int
    acute_facets: int


@dataclass(frozen=True)
class FacetCapData:
    """Circumcap geometry of one facet of a sphere-inscribed hull.

    The facet plane cuts the sphere into a small cap (on the side away from
    the center) and a big cap.  ``is_small_facet`` is true when the small cap
    is the empty one, i.e. the hull lies on the origin side of the plane.
    """

    r: float                   # Euclidean circumradius of the facet triangle
    h: float                   # distance of the facet plane from the origin
    small_cap_fraction: float  # (1 - h) / 2, area fraction of the small cap
    is_small_facet: bool
    is_acute: bool


def _edges_from_facets(facets: np.ndarray) -> np.ndarray:
    e = np.concatenate([facets[:, [0, 1]], facets[:, [1, 2]], facets[:, [0, 2]]])
    e.sort(axis=1)
    return np.unique(e, axis=0)


def convex_hull(points: np.ndarray) -> ConvexPolytope3:
    """Convex hull of n >= 3 points on a common sphere.

    Returns the double-covered triangle for n = 3.  Facets are oriented so
    that their normals point away from the vertex centroid.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise DegenerateInput("points must have shape (n, 3)")
    n = len(pts)
    if n < 3:
        raise DegenerateInput(f"need at least 3 points, got {n}")
    if not np.isfinite(pts).all():
        raise DegenerateInput("points must be finite")

    if n == 3:
        a, b, c = pts
        if np.linalg.norm(np.cross(b - a, c - a)) <= 1e-14:
            raise DegenerateInput("collinear points have no 2D hull")
        return ConvexPolytope3(pts, np.array([[0, 1, 2], [0, 2, 1]]))

    try:
        hull = _QhullConvexHull(pts)
    except QhullError as exc:
        raise DegenerateInput(f"qhull failed: {exc}") from exc

    facets = hull.simplices.copy()
    centroid = pts.mean(axis=0)
    v = pts[facets]
    normals = _cross3(v[:, 1] - v[:, 0], v[:, 2] - v[:, 0])
    inward = np.einsum("ij,ij->i", normals, v.mean(axis=1) - centroid) < 0.0
    facets[inward] = facets[inward][:, [0, 2, 1]]
    return ConvexPolytope3(pts, facets)


def _facet_vertices(p: ConvexPolytope3):
    v = p.vertices[p.facets]
    return v[:, 0], v[:, 1], v[:, 2]


def _outward_normals(p: ConvexPolytope3) -> np.ndarray:
    a, b, c = _facet_vertices(p)
    n = _cross3(b - a, c - a)
    return n / np.linalg.norm(n, axis=1, keepdims=True)


def volume(p: ConvexPolytope3) -> float:
    """Sum of signed tetrahedron volumes from the vertex centroid.

    Zero for the double-covered triangle: its two facets cancel.
    """
    centroid = p.vertices.mean(axis=0)
    a, b, c = _facet_vertices(p)
    signed = np.einsum("ij,ij->i", a - centroid,
                       _cross3(b - centroid, c - centroid)) / 6.0
    return max(float(signed.sum()), 0.0)


def surface_area(p: ConvexPolytope3) -> float:
    """Facet-area sum; the double cover counts both sides of a flat triangle."""
    a, b, c = _facet_vertices(p)
    return float(0.5 * np.linalg.norm(_cross3(b - a, c - a), axis=1).sum())


def total_edge_length(p: ConvexPolytope3) -> float:
    d = p.vertices[p.edges[:, 0]] - p.vertices[p.edges[:, 1]]
    return float(np.linalg.norm(d, axis=1).sum())


def _edge_facet_pairs(p: ConvexPolytope3):
    """For each deduplicated edge, the indices of its two incident facets.

    Returns (edge_vertex_pairs (E,2), facet_pair_indices (E,2)).
    """
    f = p.facets
    e = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [0, 2]]])
    e.sort(axis=1)
    owner = np.tile(np.arange(len(f)), 3)
    order = np.lexsort((e[:, 1], e[:, 0]))
    e, owner = e[order], owner[order]
    if len(e) % 2 or not (e[0::2] == e[1::2]).all():
        raise NonManifoldEdge("edge incident to != 2 facets")
    return e[0::2], np.column_stack([owner[0::2], owner[1::2]])


def mean_width(p: ConvexPolytope3) -> float:
    """Mean width via edge lengths and exterior normal angles:
    W = (1/4pi) * sum over edges of length * angle between facet normals.

    For the double-covered triangle the normals are opposite on every edge,
    so the angle is pi and W = perimeter / 4.
    """
    edges, pairs = _edge_facet_pairs(p)
    normals = _outward_normals(p)
    n1, n2 = normals[pairs[:, 0]], normals[pairs[:, 1]]
    theta = np.arctan2(np.linalg.norm(_cross3(n1, n2), axis=1),
                       np.einsum("ij,ij->i", n1, n2))
    lengths = np.linalg.norm(p.vertices[edges[:, 0]] - p.vertices[edges[:, 1]],
                             axis=1)
    return float((lengths * theta).sum() / (4.0 * np.pi))


def projection_width(p: ConvexPolytope3, direction: np.ndarray) -> float:
    """Length of the orthogonal projection onto a unit direction."""
    d = np.asarray(direction, dtype=float)
    dots = p.vertices @ d
    return float(dots.max() - dots.min())


def triangle_is_acute(a, b, c) -> bool:
    """All three angles strictly below pi/2; right angles count as non-acute."""
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    return bool(np.dot(b - a, c - a) > 0.0
                and np.dot(a - b, c - b) > 0.0
                and np.dot(a - c, b - c) > 0.0)


def _acute_mask(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return ((np.einsum("ij,ij->i", b - a, c - a) > 0.0)
            & (np.einsum("ij,ij->i", a - b, c - b) > 0.0)
            & (np.einsum("ij,ij->i", a - c, b - c) > 0.0))


def facet_cap_data(p: ConvexPolytope3, facet_index: int) -> FacetCapData:
    """Circumcap classification of one facet; vertices must lie on the unit
    sphere to within 1e-9."""
    tri = p.vertices[p.facets[facet_index]]
    if np.abs(np.linalg.norm(tri, axis=1) - 1.0).max() > 1e-9:
        raise GeometryError("facet vertices not on the unit sphere")
    a, b, c = tri
    normal = np.cross(b - a, c - a)
    normal /= np.linalg.norm(normal)
    d = float(normal @ a)  # signed distance along the outward normal
    if abs(d) < 1e-12:
        raise DegenerateCap("facet plane passes through the sphere center")
    h = abs(d)
    ab, bc, ca = (np.linalg.norm(b - a), np.linalg.norm(c - b),
                  np.linalg.norm(a - c))
    area = 0.5 * np.linalg.norm(np.cross(b - a, c - a))
    r = float(ab * bc * ca / (4.0 * area))
    return FacetCapData(
        r=r,
        h=h,
        small_cap_fraction=(1.0 - h) / 2.0,
        is_small_facet=d > 0.0,
        is_acute=triangle_is_acute(a, b, c),
    )


def measure(p: ConvexPolytope3) -> PolytopeMetrics:
    """All metrics of one polytope in a single vectorized pass."""
    a, b, c = _facet_vertices(p)
    cross = _cross3(b - a, c - a)
    cross_norm = np.linalg.norm(cross, axis=1)
    area = float(0.5 * cross_norm.sum())

    centroid = p.vertices.mean(axis=0)
    signed = np.einsum("ij,ij->i", a - centroid,
                       _cross3(b - centroid, c - centroid)) / 6.0
    vol = max(float(signed.sum()), 0.0)

    edges, pairs = _edge_facet_pairs(p)
    lengths = np.linalg.norm(p.vertices[edges[:, 0]] - p.vertices[edges[:, 1]],
                             axis=1)
    normals = cross / cross_norm[:, None]
    n1, n2 = normals[pairs[:, 0]], normals[pairs[:, 1]]
    theta = np.arctan2(np.linalg.norm(_cross3(n1, n2), axis=1),
                       np.einsum("ij,ij->i", n1, n2))
    width = float((lengths * theta).sum() / (4.0 * np.pi))

    return PolytopeMetrics(
        width=width,
        area=area,
        volume=vol,
        edge_length=float(lengths.sum()),
        facet_count=p.facet_count,
        edge_count=len(edges),
        vertex_count=p.vertex_count,
        acute_facets=int(_acute_mask(a, b, c).sum()),
    )


def normalized_volume_chain(m: PolytopeMetrics) -> tuple[float, float, float]:
    """Normalized (width, area, volume); decreasing for every inscribed polytope."""
    return (m.width / 2.0, m.area / (4.0 * np.pi),
            m.volume / (4.0 * np.pi / 3.0))


def brute_force_facets(points: np.ndarray, tol: float = 1e-12) -> set[frozenset]:
    """Facet set by testing all C(n,3) planes for one-sidedness; n <= 12 oracle.

    For n = 3 the single triangle is reported once (the double cover shares
    its vertex triple).
    """
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n > 12:
        raise ValueError("brute force is O(n^4); capped at n = 12")
    triples = np.array(list(itertools.combinations(range(n), 3)))
    a, b, c = pts[triples[:, 0]], pts[triples[:, 1]], pts[triples[:, 2]]
    normals = _cross3(b - a, c - a)
    dists = np.einsum("tj,pj->tp", normals, pts) - \
        np.einsum("tj,tj->t", normals, a)[:, None]
    scale = np.linalg.norm(normals, axis=1)[:, None]
    above = dists > tol * scale
    below = dists < -tol * scale
    is_facet = ~above.any(axis=1) | ~below.any(axis=1)
    return {frozenset(t) for t in triples[is_facet]}
