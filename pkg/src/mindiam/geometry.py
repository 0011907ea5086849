"""Planar and low-dimensional geometric primitives.

Points are plain tuples of floats. Convex regions in the plane are
:class:`ConvexPolygon` instances whose vertices are stored counter-clockwise
with collinear vertices removed; a single vertex (a point) and two vertices
(a segment) are valid degenerate regions.

Side and membership tests use the absolute tolerance ``TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import HoleTopology, PolygonError, PreconditionError

TOL = 1e-9
AREA_TOL = 1e-12
MAX_VERTICES = 64

Point = tuple[float, ...]
Point2 = tuple[float, float]


def as_point(p: Iterable[float]) -> Point:
    pt = tuple(float(x) for x in p)
    if not pt:
        raise PreconditionError("a point needs at least one coordinate")
    if not all(math.isfinite(x) for x in pt):
        raise PreconditionError(f"non-finite coordinate in {pt}")
    return pt


def dist(p: Sequence[float], q: Sequence[float], metric: str = "L2") -> float:
    if len(p) != len(q):
        raise PreconditionError(f"dimension mismatch: {len(p)} vs {len(q)}")
    if metric == "L2":
        return math.dist(p, q)
    if metric == "L1":
        return math.fsum(abs(a - b) for a, b in zip(p, q))
    raise PreconditionError(f"unknown metric {metric!r}")


@dataclass(frozen=True)
class DiameterResult:
    value: float
    witness: tuple[int, int]


def diameter(points: Sequence[Sequence[float]], metric: str = "L2") -> DiameterResult:
    """Exact diameter by scanning all pairs.

    Ties keep the lexicographically smallest index pair; a singleton has
    diameter 0 with witness ``(0, 0)``.
    """
    if len(points) == 0:
        raise PreconditionError("diameter of an empty point set")
    best, witness = 0.0, (0, 0)
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            d = dist(points[i], points[j], metric)
            if d > best:
                best, witness = d, (i, j)
    return DiameterResult(best, witness)


@dataclass(frozen=True)
class BoundingBox:
    min_corner: Point
    max_corner: Point

    @property
    def extent(self) -> Point:
        return tuple(b - a for a, b in zip(self.min_corner, self.max_corner))


def bounding_box(points: Sequence[Sequence[float]]) -> BoundingBox:
    if len(points) == 0:
        raise PreconditionError("bounding box of an empty point set")
    dims = len(points[0])
    lo = tuple(min(float(p[k]) for p in points) for k in range(dims))
    hi = tuple(max(float(p[k]) for p in points) for k in range(dims))
    return BoundingBox(lo, hi)


# ---------------------------------------------------------------------------
# small 2-D vector helpers


def _sub(p, q) -> Point2:
    return (p[0] - q[0], p[1] - q[1])


def _cross(u, v) -> float:
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v) -> float:
    return u[0] * v[0] + u[1] * v[1]


def _norm(u) -> float:
    return math.hypot(u[0], u[1])


def _unit(u) -> Point2:
    n = _norm(u)
    return (u[0] / n, u[1] / n)


def _point_segment_distance(p, a, b) -> tuple[float, Point2]:
    ab = _sub(b, a)
    L2 = _dot(ab, ab)
    if L2 == 0.0:
        return math.dist(p, a), (a[0], a[1])
    t = min(1.0, max(0.0, _dot(_sub(p, a), ab) / L2))
    c = (a[0] + t * ab[0], a[1] + t * ab[1])
    return math.dist(p, c), c


# ---------------------------------------------------------------------------
# convex polygons


def _collapse(verts: list[Point2]) -> list[Point2]:
    """Drop vertices lying within TOL of the segment joining their neighbours."""
    changed = True
    while changed and len(verts) >= 3:
        changed = False
        for i in range(len(verts)):
            u, v, w = verts[i - 1], verts[i], verts[(i + 1) % len(verts)]
            uw = _sub(w, u)
            span = _norm(uw)
            if span == 0.0:
                continue
            off = abs(_cross(uw, _sub(v, u))) / span
            if off <= TOL and _dot(_sub(v, u), uw) > 0 and _dot(_sub(w, v), uw) > 0:
                del verts[i]
                changed = True
                break
    return verts


def _validate(raw) -> tuple[Point2, ...]:
    verts: list[Point2] = []
    for v in raw:
        v = tuple(float(x) for x in v)
        if len(v) != 2:
            raise PolygonError("NotPlanar", f"polygon vertex {v} is not 2-D")
        if not all(math.isfinite(x) for x in v):
            raise PolygonError("NonFinite", f"non-finite vertex {v}")
        verts.append(v)
    if not verts:
        raise PolygonError("EmptyRegion", "polygon has no vertices")
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            if math.dist(verts[i], verts[j]) <= AREA_TOL:
                raise PolygonError("DuplicateVertex", f"duplicate vertex {verts[i]}")
    if len(verts) >= 3:
        # all vertices on one line: keep the two extremes
        i0, j0 = max(
            ((i, j) for i in range(len(verts)) for j in range(i + 1, len(verts))),
            key=lambda ij: math.dist(verts[ij[0]], verts[ij[1]]),
        )
        axis = _sub(verts[j0], verts[i0])
        span = _norm(axis)
        if all(abs(_cross(axis, _sub(v, verts[i0]))) / span <= TOL for v in verts):
            verts = [verts[i0], verts[j0]]
    verts = _collapse(verts)
    if len(verts) >= 3:
        area2 = sum(_cross(verts[i - 1], verts[i]) for i in range(len(verts)))
        if area2 < 0:
            raise PolygonError("NotCCW", "polygon vertices are in clockwise order")
        turning = 0.0
        for i in range(len(verts)):
            e0 = _sub(verts[i], verts[i - 1])
            e1 = _sub(verts[(i + 1) % len(verts)], verts[i])
            if _cross(e0, e1) / (_norm(e0) * _norm(e1)) < -TOL:
                raise PolygonError("NotConvex", f"reflex vertex at {verts[i]}")
            turning += math.atan2(_cross(e0, e1), _dot(e0, e1))
        if abs(turning - 2 * math.pi) > 1e-6:
            raise PolygonError("NotConvex", "polygon boundary is self-intersecting")
    if len(verts) > MAX_VERTICES:
        raise PolygonError("TooManyVertices", f"{len(verts)} vertices exceed cap {MAX_VERTICES}")
    return tuple(verts)


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex region given by CCW vertices (1 = point, 2 = segment)."""

    vertices: tuple[Point2, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", _validate(self.vertices))

    @classmethod
    def from_points(cls, points: Iterable[Sequence[float]]) -> ConvexPolygon | None:
        """Convex hull of ``points``; near-duplicates (within TOL) are merged."""
        pts: list[Point2] = []
        for p in sorted((float(p[0]), float(p[1])) for p in points):
            if all(math.dist(p, q) > TOL for q in pts):
                pts.append(p)
        if not pts:
            return None
        if len(pts) <= 2:
            return cls(tuple(pts))
        lower: list[Point2] = []
        for p in pts:
            while len(lower) >= 2 and _cross(_sub(lower[-1], lower[-2]), _sub(p, lower[-2])) <= 0:
                lower.pop()
            lower.append(p)
        upper: list[Point2] = []
        for p in reversed(pts):
            while len(upper) >= 2 and _cross(_sub(upper[-1], upper[-2]), _sub(p, upper[-2])) <= 0:
                upper.pop()
            upper.append(p)
        return cls(tuple(lower[:-1] + upper[:-1]))

    @classmethod
    def box(cls, x0: float, y0: float, x1: float, y1: float) -> ConvexPolygon:
        return cls(((x0, y0), (x1, y0), (x1, y1), (x0, y1)))

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def is_point(self) -> bool:
        return len(self.vertices) == 1

    @property
    def is_segment(self) -> bool:
        return len(self.vertices) == 2

    @property
    def area(self) -> float:
        v = self.vertices
        if len(v) < 3:
            return 0.0
        return 0.5 * sum(_cross(v[i - 1], v[i]) for i in range(len(v)))

    @property
    def center(self) -> Point2:
        """Vertex average; always a point of the region."""
        k = len(self.vertices)
        return (
            sum(v[0] for v in self.vertices) / k,
            sum(v[1] for v in self.vertices) / k,
        )

    def bbox(self) -> BoundingBox:
        return bounding_box(self.vertices)

    def edges(self) -> list[tuple[Point2, Point2]]:
        v = self.vertices
        if len(v) == 1:
            return [(v[0], v[0])]
        if len(v) == 2:
            return [(v[0], v[1])]
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def halfplanes(self) -> list[tuple[Point2, float]]:
        """Rows ``(a, b)`` with ``a . x <= b`` describing the region.

        One row per edge for a polygon; a point is pinned by four axis rows,
        a segment by two rows for its supporting line and two end caps.
        """
        v = self.vertices
        if len(v) == 1:
            x, y = v[0]
            return [((1.0, 0.0), x), ((-1.0, 0.0), -x), ((0.0, 1.0), y), ((0.0, -1.0), -y)]
        if len(v) == 2:
            p, q = v
            t = _sub(q, p)
            n = (t[1], -t[0])
            return [
                (t, _dot(t, q)),
                ((-t[0], -t[1]), -_dot(t, p)),
                (n, _dot(n, p)),
                ((-n[0], -n[1]), -_dot(n, p)),
            ]
        rows = []
        for p, q in self.edges():
            e = _sub(q, p)
            a = (e[1], -e[0])
            rows.append((a, _dot(a, p)))
        return rows

    def contains(self, p: Sequence[float], tol: float = TOL) -> bool:
        v = self.vertices
        if len(v) <= 2:
            return _point_segment_distance(p, v[0], v[-1])[0] <= tol
        for a, b in self.edges():
            e = _sub(b, a)
            if _cross(e, _sub(p, a)) / _norm(e) < -tol:
                return False
        return True

    def translate(self, shift: Sequence[float]) -> ConvexPolygon:
        return ConvexPolygon(tuple((x + shift[0], y + shift[1]) for x, y in self.vertices))

    def scale(self, s: float) -> ConvexPolygon:
        return ConvexPolygon(tuple((x * s, y * s) for x, y in self.vertices))


def contains(poly: ConvexPolygon, p: Sequence[float], tol: float = TOL) -> bool:
    return poly.contains(p, tol)


def _clip_halfplane(pts: list[Point2], a, b: float) -> list[Point2]:
    """Keep the part of the closed vertex loop ``pts`` with ``a . x <= b``."""
    na = _norm(a)
    a, b = (a[0] / na, a[1] / na), b / na
    out: list[Point2] = []
    k = len(pts)
    for i in range(k):
        P, Q = pts[i], pts[(i + 1) % k]
        fp, fq = _dot(a, P) - b, _dot(a, Q) - b
        if fp <= TOL:
            out.append(P)
        if (fp <= TOL) != (fq <= TOL) and fp != fq:
            t = min(1.0, max(0.0, fp / (fp - fq)))
            out.append((P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])))
    return out


def _clip_rows(pts: list[Point2], rows) -> list[Point2]:
    for a, b in rows:
        if not pts:
            break
        pts = _clip_halfplane(pts, a, b)
    return pts


def clip_convex(A: ConvexPolygon, B: ConvexPolygon) -> ConvexPolygon | None:
    """A intersected with B, or None when they do not meet."""
    pts = _clip_rows(list(A.vertices), B.halfplanes())
    return ConvexPolygon.from_points(pts) if pts else None


def clip_halfplane(A: ConvexPolygon, a, b: float) -> ConvexPolygon | None:
    pts = _clip_halfplane(list(A.vertices), a, b)
    return ConvexPolygon.from_points(pts) if pts else None


def _strictly_inside(B: ConvexPolygon, A: ConvexPolygon) -> bool:
    if len(A) < 3:
        return False
    for p, q in A.edges():
        e = _sub(q, p)
        for v in B.vertices:
            if _cross(e, _sub(v, p)) / _norm(e) <= TOL:
                return False
    return True


def subtract_and_triangulate(A: ConvexPolygon, B: ConvexPolygon) -> list[ConvexPolygon]:
    """Convex, interior-disjoint pieces whose union is the closure of A minus B.

    Piece k is the part of A outside B's k-th edge and inside all earlier
    edges, so there are at most ``len(B)`` pieces. Raises HoleTopology when
    B sits strictly inside A.
    """
    if B.area <= AREA_TOL or clip_convex(A, B) is None:
        return [A]
    if _strictly_inside(B, A):
        raise HoleTopology("subtrahend lies strictly inside the region")
    full = A.area > AREA_TOL
    pieces = []
    rest = list(A.vertices)
    for a, b in B.halfplanes():
        outside = _clip_halfplane(rest, (-a[0], -a[1]), -b)
        if outside:
            piece = ConvexPolygon.from_points(outside)
            if piece is not None and (piece.area > AREA_TOL or not full):
                pieces.append(piece)
        rest = _clip_halfplane(rest, a, b)
        if not rest:
            break
    return pieces


def closest_points(A: ConvexPolygon, B: ConvexPolygon) -> tuple[float, Point2, Point2]:
    """Distance between A and B with a witness pair (0 when they meet)."""
    inter = clip_convex(A, B)
    if inter is not None:
        c = inter.center
        return 0.0, c, c
    best = (math.inf, A.vertices[0], B.vertices[0])
    for v in A.vertices:
        for p, q in B.edges():
            d, c = _point_segment_distance(v, p, q)
            if d < best[0]:
                best = (d, v, c)
    for v in B.vertices:
        for p, q in A.edges():
            d, c = _point_segment_distance(v, p, q)
            if d < best[0]:
                best = (d, c, v)
    return best


@dataclass(frozen=True)
class OrientedLine:
    """Line through ``point`` along the unit vector ``direction``."""

    point: Point2
    direction: Point2

    def __post_init__(self):
        if abs(_norm(self.direction) - 1.0) > 1e-12:
            raise PreconditionError("line direction must be a unit vector")

    def side(self, p: Sequence[float]) -> float:
        """Signed distance; positive on the left of the direction."""
        return _cross(self.direction, _sub(p, self.point))


class TangentGeometry(NamedTuple):
    lines: tuple[OrientedLine, OrientedLine]
    apex: Point2
    spread: float  # angular width of B - A seen from the origin


def tangent_geometry(A: ConvexPolygon, B: ConvexPolygon) -> TangentGeometry | None:
    """Inner common tangents of two disjoint convex regions.

    Both lines are oriented with A on their left and B on their right. The
    directions are the extreme angular directions of the difference set
    B - A, so ``spread`` is the angle of the double wedge holding A and B.
    When B - A is a single direction (A and B on one line) both lines are
    that line and the apex is the midpoint of the closest pair.
    """
    gap, ca, cb = closest_points(A, B)
    if gap <= TOL:
        return None
    ref = _unit(_sub(B.center, A.center))
    lo = hi = None
    for a in A.vertices:
        for b in B.vertices:
            m = _sub(b, a)
            ang = math.atan2(_cross(ref, m), _dot(ref, m))
            if hi is None or ang > hi[0]:
                hi = (ang, a, m)
            if lo is None or ang < lo[0]:
                lo = (ang, a, m)
    spread = hi[0] - lo[0]
    t1 = _unit(hi[2])
    t2 = _unit(lo[2])
    t2 = (-t2[0], -t2[1])
    denom = _cross(t1, t2)
    if spread < 1e-9 or denom == 0.0:
        apex = ((ca[0] + cb[0]) / 2, (ca[1] + cb[1]) / 2)
        spread = 0.0
        line1 = OrientedLine(apex, ref)
        line2 = OrientedLine(apex, (-ref[0], -ref[1]))
    else:
        p1, p2 = hi[1], lo[1]
        s = _cross(_sub(p2, p1), t2) / denom
        apex = (p1[0] + s * t1[0], p1[1] + s * t1[1])
        line1 = OrientedLine(apex, t1)
        line2 = OrientedLine(apex, t2)
    return TangentGeometry((line1, line2), apex, spread)


def inner_tangents(A: ConvexPolygon, B: ConvexPolygon) -> tuple[OrientedLine, OrientedLine] | None:
    tg = tangent_geometry(A, B)
    return None if tg is None else tg.lines


def _edge_arrays(poly: ConvexPolygon):
    V = np.asarray(poly.vertices, dtype=float)
    if len(V) <= 2:
        return V[:1], V[-1:]
    return V, np.roll(V, -1, axis=0)


def contains_many(poly: ConvexPolygon, pts: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Vectorized :meth:`ConvexPolygon.contains` over an (k, 2) array."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    if len(poly) <= 2:
        return distances_to(poly, pts) <= tol
    P, Q = _edge_arrays(poly)
    E = Q - P
    rel = pts[:, None, :] - P[None, :, :]
    side = (E[None, :, 0] * rel[..., 1] - E[None, :, 1] * rel[..., 0]) / np.hypot(E[:, 0], E[:, 1])
    return np.all(side >= -tol, axis=1)


def distances_to(poly: ConvexPolygon, pts: np.ndarray) -> np.ndarray:
    """Euclidean distance from each row of ``pts`` to the region (0 inside)."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    P, Q = _edge_arrays(poly)
    best = np.full(len(pts), np.inf)
    for p, q in zip(P, Q):
        e = q - p
        ee = float(e @ e)
        t = np.zeros(len(pts)) if ee == 0.0 else np.clip((pts - p) @ e / ee, 0.0, 1.0)
        best = np.minimum(best, np.hypot(*(pts - p - t[:, None] * e).T))
    if len(poly) > 2:
        best[contains_many(poly, pts, 0.0)] = 0.0
    return best
