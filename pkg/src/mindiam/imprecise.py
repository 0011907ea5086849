"""Minimum-diameter selection for planar convex regions.

The (1 + eps) route needs a pair of regions separated by a wedge. The
separating lines and the rectilinear bound ``R`` confine every good
selection to a square around the wedge apex; the square is sampled on a
grid, each region contributes its grid points as one color class, and the
colored point set is handed to :mod:`mindiam.mindcs`.

Instances in which every pair of regions meets either share a common point
(diameter 0) or contain a triple with empty intersection, which
:func:`decompose` splits into instances that have either a disjoint pair
or a pair meeting in a single point where their boundaries cross. The
latter still sit in opposite vertical wedges and are certified by
:func:`contact_separability`.

Separation angle convention: ``alpha = pi - spread`` where ``spread`` is
the opening of the double wedge bounded by the inner tangents that holds
the two regions. ``alpha`` is the angle between the two extreme
separating directions, so a larger value means a cleaner separation and
two points give ``alpha = pi``.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import HoleTopology, NotSeparable, PreconditionError, RegionOutsideFocus
from .geometry import (
    TOL,
    ConvexPolygon,
    OrientedLine,
    Point,
    Point2,
    clip_convex,
    clip_halfplane,
    contains_many,
    distances_to,
    subtract_and_triangulate,
    tangent_geometry,
)
from .instances import ImpreciseInstance, IndecisiveInstance, Selection, selection_from
from .lp import LinearProgram, LpStatus, region_constraints, simplex_solve, sqrt_d_approx
from .mindcs import MAX_CELLS, ApproxResult, min_diameter_apx

log = logging.getLogger(__name__)

PIPELINE_CONSTANT = 2 * math.sqrt(2) + math.sqrt(2)
MAX_DEPTH = 2


@dataclass(frozen=True)
class SeparabilityCert:
    """Region ``pair[0]`` lies left of both lines, ``pair[1]`` right of both."""

    pair: tuple[int, int]
    lines: tuple[OrientedLine, OrientedLine]
    alpha: float
    apex: Point2

    @property
    def bisector(self) -> Point2:
        """Unit direction from the first region's wedge into the second's."""
        t1, t2 = self.lines[0].direction, self.lines[1].direction
        u = (t1[0] - t2[0], t1[1] - t2[1])
        n = math.hypot(*u)
        return (u[0] / n, u[1] / n)

    def separates(self, A: ConvexPolygon, B: ConvexPolygon, tol: float = TOL) -> bool:
        return all(
            line.side(a) >= -tol and line.side(b) <= tol
            for line in self.lines
            for a in A.vertices
            for b in B.vertices
        )


def max_separability(A: ConvexPolygon, B: ConvexPolygon, pair: tuple[int, int] = (0, 1)) -> Optional[SeparabilityCert]:
    tg = tangent_geometry(A, B)
    if tg is None:
        return None
    alpha = min(math.pi, max(0.0, math.pi - tg.spread))
    return SeparabilityCert(pair, tg.lines, alpha, tg.apex)


def _best_pair(instance: ImpreciseInstance, certify) -> Optional[SeparabilityCert]:
    regions = instance.polygons()
    best = None
    for i, j in itertools.combinations(range(len(regions)), 2):
        cert = certify(regions[i], regions[j], (i, j))
        if cert is not None and (best is None or cert.alpha > best.alpha):
            best = cert
    return best


def max_separability_set(instance: ImpreciseInstance) -> Optional[SeparabilityCert]:
    """Best certificate over all region pairs; ties keep the first pair."""
    return _best_pair(instance, max_separability)


def contact_separability(A: ConvexPolygon, B: ConvexPolygon, pair: tuple[int, int] = (0, 1)) -> Optional[SeparabilityCert]:
    """Wedge certificate for two regions that meet in exactly one point.

    The apex is the contact point and the lines follow the extreme
    directions of the difference set B - A, which has the origin on its
    boundary. Returns None unless the regions meet in a single point and
    lie in opposite wedges of positive angle.
    """
    meet = clip_convex(A, B)
    if meet is None or not meet.is_point:
        return None
    x = meet.vertices[0]
    ref = (B.center[0] - A.center[0], B.center[1] - A.center[1])
    if math.hypot(*ref) <= TOL:
        return None
    lo = hi = None
    for a in (*A.vertices, x):
        for b in (*B.vertices, x):
            m = (b[0] - a[0], b[1] - a[1])
            if math.hypot(*m) <= TOL:
                continue
            ang = math.atan2(ref[0] * m[1] - ref[1] * m[0], ref[0] * m[0] + ref[1] * m[1])
            if hi is None or ang > hi[0]:
                hi = (ang, m)
            if lo is None or ang < lo[0]:
                lo = (ang, m)
    if hi is None:
        return None
    spread = hi[0] - lo[0]
    if spread >= math.pi - 1e-9:
        return None
    n1, n2 = math.hypot(*hi[1]), math.hypot(*lo[1])
    t1 = (hi[1][0] / n1, hi[1][1] / n1)
    t2 = (-lo[1][0] / n2, -lo[1][1] / n2)
    cert = SeparabilityCert(pair, (OrientedLine(x, t1), OrientedLine(x, t2)), math.pi - spread, x)
    return cert if cert.separates(A, B, 1e-7) else None


def contact_separability_set(instance: ImpreciseInstance) -> Optional[SeparabilityCert]:
    return _best_pair(instance, contact_separability)


@dataclass(frozen=True)
class FocusRect:
    center: Point2
    axes: tuple[Point2, Point2]
    half_extents: tuple[float, float]

    def local(self, pts: np.ndarray) -> np.ndarray:
        """Coordinates of world points along the two axes, relative to the center."""
        rel = np.asarray(pts, dtype=float).reshape(-1, 2) - np.asarray(self.center)
        return rel @ np.asarray(self.axes).T

    def world(self, loc: np.ndarray) -> np.ndarray:
        return np.asarray(self.center) + np.asarray(loc) @ np.asarray(self.axes)

    def contains(self, p, tol: float = TOL) -> bool:
        loc = self.local(np.asarray(p))[0]
        return bool(np.all(np.abs(loc) <= np.asarray(self.half_extents) + tol))

    def polygon(self) -> ConvexPolygon:
        hx, hy = self.half_extents
        corners = self.world(np.array([[-hx, -hy], [hx, -hy], [hx, hy], [-hx, hy]]))
        return ConvexPolygon(tuple(map(tuple, corners.tolist())))


def focus_rectangle(cert: SeparabilityCert, R_bound: float) -> FocusRect:
    """Square around the wedge apex holding every selection of diameter <= R_bound."""
    if cert.alpha <= 0:
        raise PreconditionError("separation angle must be positive")
    if R_bound <= 0:
        raise PreconditionError("R_bound must be positive")
    u = cert.bisector
    v = (-u[1], u[0])
    h = 2.0 * R_bound / math.sin(cert.alpha / 2.0)
    return FocusRect(cert.apex, (u, v), (h, h))


@dataclass(frozen=True)
class Discretization:
    colored: IndecisiveInstance
    node_step: float
    nodes_per_axis: int
    node_points: tuple[int, ...]
    completion_points: tuple[int, ...]


def discretize(
    instance: ImpreciseInstance,
    rect: FocusRect,
    cell: float,
    *,
    reach: float | None = None,
) -> Discretization:
    """Colored grid samples of every region inside ``rect``.

    Nodes sit on a grid aligned with the rectangle; the step is ``cell``
    shrunk so that a whole number of cells spans the rectangle. A grid cell
    that meets a region without any of its corner nodes in the region
    contributes the vertex average of the overlap instead. With ``reach``
    set, samples farther than ``reach`` from some other region are dropped.
    """
    if cell <= 0:
        raise PreconditionError("cell size must be positive")
    regions = instance.polygons()
    hx, hy = rect.half_extents
    N = max(1, math.ceil(2 * max(hx, hy) / cell))
    sx, sy = 2 * hx / N, 2 * hy / N
    classes, n_nodes, n_fill = [], [], []
    for i, reg in enumerate(regions):
        loc = rect.local(np.asarray(reg.vertices))
        lo, hi = loc.min(axis=0), loc.max(axis=0)
        a0, a1 = (int(np.clip(math.floor((lo[0] + hx) / sx), 0, N)), int(np.clip(math.ceil((hi[0] + hx) / sx), 0, N)))
        b0, b1 = (int(np.clip(math.floor((lo[1] + hy) / sy), 0, N)), int(np.clip(math.ceil((hi[1] + hy) / sy), 0, N)))
        ia, ib = np.meshgrid(np.arange(a0, a1 + 1), np.arange(b0, b1 + 1), indexing="ij")
        local = np.stack([-hx + ia.ravel() * sx, -hy + ib.ravel() * sy], axis=1)
        world = rect.world(local)
        inside = contains_many(reg, world).reshape(ia.shape)
        pts = [world[inside.ravel()]]

        corner = inside[:-1, :-1] | inside[1:, :-1] | inside[:-1, 1:] | inside[1:, 1:]
        fill = []
        da, db = np.nonzero(~corner)
        centers = rect.world(np.stack([-hx + (a0 + da + 0.5) * sx, -hy + (b0 + db + 0.5) * sy], axis=1))
        near = distances_to(reg, centers) <= 0.5 * math.hypot(sx, sy) + TOL
        for da, db in zip(da[near], db[near]):
            ca, cb = a0 + int(da), b0 + int(db)
            box = rect.world(np.array([
                [-hx + ca * sx, -hy + cb * sy],
                [-hx + (ca + 1) * sx, -hy + cb * sy],
                [-hx + (ca + 1) * sx, -hy + (cb + 1) * sy],
                [-hx + ca * sx, -hy + (cb + 1) * sy],
            ]))
            piece = clip_convex(reg, ConvexPolygon(tuple(map(tuple, box.tolist()))))
            if piece is not None:
                fill.append(piece.center)
        if fill:
            pts.append(np.asarray(fill))
        pts = np.concatenate(pts)
        if len(pts) == 0:
            raise RegionOutsideFocus(f"region {i} does not meet the focus rectangle")
        n_node = int(inside.sum())
        if reach is not None:
            keep = np.ones(len(pts), bool)
            for j, other in enumerate(regions):
                if j != i:
                    keep &= distances_to(other, pts) <= reach
            n_node = int(keep[:n_node].sum())
            pts = pts[keep]
            if len(pts) == 0:
                raise RegionOutsideFocus(f"region {i} has no sample within reach of the others")
        classes.append(tuple(map(tuple, pts.tolist())))
        n_nodes.append(n_node)
        n_fill.append(len(pts) - n_node)
    return Discretization(IndecisiveInstance(tuple(classes)), sx, N + 1, tuple(n_nodes), tuple(n_fill))


@dataclass(frozen=True)
class PipelineReport:
    R_bound: float
    cert: SeparabilityCert
    rect: FocusRect
    cell: float
    colored_points: int
    mindcs: ApproxResult
    selection: Selection
    value: float


def min_diam_eps(
    instance: ImpreciseInstance,
    eps: float,
    *,
    max_cells: int = MAX_CELLS,
    cert: SeparabilityCert | None = None,
) -> PipelineReport:
    """(1 + c eps)-approximate minimum diameter for a separable planar instance.

    ``cert`` overrides the best disjoint-pair certificate, e.g. with one
    from :func:`contact_separability`.

    Samples farther than ``R + sqrt(2) * cell`` from another region cannot
    be the grid image of a point of an optimal selection and are dropped
    before the colored search.
    """
    if not (0.0 < eps <= 1.0):
        raise PreconditionError(f"eps must lie in (0, 1], got {eps}")
    regions = instance.polygons()
    if cert is None:
        cert = max_separability_set(instance)
    if cert is None:
        raise NotSeparable("no pair of regions is disjoint; decompose the instance first")
    R = sqrt_d_approx(instance).ell
    rect = focus_rectangle(cert, R)
    cell = eps * R
    disc = discretize(instance, rect, cell, reach=R + math.sqrt(2) * cell + 1e-9 * max(1.0, R))
    res = min_diameter_apx(disc.colored, eps, max_cells=max_cells)
    sel = res.selection
    for i, (reg, p) in enumerate(zip(regions, sel.points)):
        if not reg.contains(p, 1e-7):
            raise PreconditionError(f"selected point {i} left its region")
    return PipelineReport(R, cert, rect, cell, disc.colored.n, res, sel, sel.diameter)


def common_point(instance: ImpreciseInstance) -> Optional[Point]:
    """A point shared by every region, found by a feasibility program."""
    rows = [row for r in instance.regions for row in region_constraints(r)]
    A = np.array([a for a, _ in rows], dtype=float)
    b = np.array([b for _, b in rows], dtype=float)
    sol = simplex_solve(LinearProgram(np.zeros(instance.d), A, b))
    if sol.status is not LpStatus.OPTIMAL:
        return None
    return tuple(float(x) for x in sol.x)


def empty_triple(instance: ImpreciseInstance) -> Optional[tuple[int, int, int]]:
    regions = instance.polygons()
    for a, b, c in itertools.combinations(range(len(regions)), 3):
        ab = clip_convex(regions[a], regions[b])
        if ab is None or clip_convex(ab, regions[c]) is None:
            return (a, b, c)
    return None


def _difference(A: ConvexPolygon, B: ConvexPolygon) -> list[ConvexPolygon]:
    try:
        return subtract_and_triangulate(A, B)
    except HoleTopology:
        # cut the container along a horizontal chord through the hole first
        cy = B.center[1]
        halves = [clip_halfplane(A, (0.0, 1.0), cy), clip_halfplane(A, (0.0, -1.0), -cy)]
        return [p for h in halves if h is not None for p in subtract_and_triangulate(h, B)]


@dataclass(frozen=True)
class Decomposition:
    """Sub-instances covering an instance whose regions meet pairwise.

    ``instances[0]`` puts ``A & B`` in both slots of the triple's first two
    regions; the rest pair every convex piece of ``A - B`` with every piece
    of ``B - A``. Region order is preserved so selections map back directly.
    """

    triple: tuple[int, int, int]
    instances: tuple[ImpreciseInstance, ...]
    pieces: tuple[int, int]


def decompose(instance: ImpreciseInstance) -> Decomposition:
    regions = list(instance.polygons())
    for i, j in itertools.combinations(range(len(regions)), 2):
        if clip_convex(regions[i], regions[j]) is None:
            raise PreconditionError(f"regions {i} and {j} are disjoint; the instance is separable")
    if common_point(instance) is not None:
        raise PreconditionError("all regions share a point; nothing to decompose")
    triple = empty_triple(instance)
    if triple is None:
        raise PreconditionError("no triple with empty intersection was found")
    a, b, _ = triple
    A, B = regions[a], regions[b]

    def with_ab(pa: ConvexPolygon, pb: ConvexPolygon) -> ImpreciseInstance:
        regs = list(regions)
        regs[a], regs[b] = pa, pb
        return ImpreciseInstance(tuple(regs))

    ab = clip_convex(A, B)
    out = [with_ab(ab, ab)]
    left, right = _difference(A, B), _difference(B, A)
    out += [with_ab(pa, pb) for pa in left for pb in right]
    return Decomposition(triple, tuple(out), (len(left), len(right)))


@dataclass(frozen=True)
class SolveResult:
    value: float
    selection: Selection
    method: str
    warnings: tuple[str, ...] = field(default=())


def solve(
    instance: ImpreciseInstance,
    eps: float,
    *,
    depth: int = 0,
    oracle_resolution: float = 0.02,
    allow_oracle: bool = True,
) -> SolveResult:
    """Dispatch: common point, separable pipeline (disjoint or touching pair), or decomposition.

    Past ``MAX_DEPTH`` nested decompositions the sampling oracle answers,
    unless ``allow_oracle`` is False; then such sub-instances are skipped
    and NotSeparable is raised only if nothing else was solved.
    """
    if instance.n == 1:
        return SolveResult(0.0, selection_from([instance.regions[0].vertices[0]]), "single")
    cp = common_point(instance)
    if cp is not None:
        return SolveResult(0.0, selection_from([cp] * instance.n), "common-point")
    if max_separability_set(instance) is not None:
        rep = min_diam_eps(instance, eps)
        return SolveResult(rep.value, rep.selection, "pipeline")
    touch = contact_separability_set(instance)
    if touch is not None:
        rep = min_diam_eps(instance, eps, cert=touch)
        return SolveResult(rep.value, rep.selection, "pipeline-contact")
    if depth >= MAX_DEPTH:
        if not allow_oracle:
            raise NotSeparable(f"decomposition depth {depth} reached")
        from .oracle import sampling_oracle

        msg = f"decomposition depth {depth} reached; using the sampling oracle"
        log.warning(msg)
        orc = sampling_oracle(instance, oracle_resolution)
        return SolveResult(orc.value, orc.selection, "oracle", (msg,))
    dec = decompose(instance)
    best = None
    notes: list[str] = []
    for sub in dec.instances:
        try:
            res = solve(
                sub, eps, depth=depth + 1, oracle_resolution=oracle_resolution, allow_oracle=allow_oracle
            )
        except NotSeparable:
            continue
        notes.extend(res.warnings)
        if best is None or res.value < best.value:
            best = res
    if best is None:
        raise NotSeparable("no sub-instance could be solved without the oracle")
    return SolveResult(best.value, best.selection, "decompose/" + best.method, tuple(notes))
