"""Sampling oracle: exact minimum diameter over gridded samples of each region.

Each region is sampled on a grid anchored at the instance's bounding-box
corner, together with its vertices and one point for every grid cell the
region meets without owning a corner node. Every point of a region then
has a sample within one cell diagonal, so the oracle value lies in
``[D_min, D_min + 2 sqrt(2) r]``.

The minimum over the product of the sample sets is found by branch and
bound over one kd-tree per region: the lower bound of a tuple of tree
nodes is the largest pairwise gap between their boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OracleTooLarge, PreconditionError
from .geometry import ConvexPolygon, clip_convex, contains_many, distances_to
from .instances import ImpreciseInstance, Selection, selection_from

MAX_SAMPLES = 400_000
MAX_COARSEN = 8.0


def region_samples(poly: ConvexPolygon, origin: np.ndarray, step: float) -> np.ndarray:
    V = np.asarray(poly.vertices, dtype=float)
    lo = np.floor((V.min(axis=0) - origin) / step).astype(int)
    hi = np.ceil((V.max(axis=0) - origin) / step).astype(int)
    ia, ib = np.meshgrid(np.arange(lo[0], hi[0] + 1), np.arange(lo[1], hi[1] + 1), indexing="ij")
    nodes = origin + np.stack([ia.ravel(), ib.ravel()], axis=1) * step
    inside = contains_many(poly, nodes).reshape(ia.shape)
    out = [V, nodes[inside.ravel()]]
    owned = inside[:-1, :-1] | inside[1:, :-1] | inside[:-1, 1:] | inside[1:, 1:]
    ca, cb = np.nonzero(~owned)
    corners = origin + np.stack([lo[0] + ca, lo[1] + cb], axis=1) * step
    near = distances_to(poly, corners + step / 2) <= step * math.sqrt(0.5) + 1e-12
    extra = []
    for x, y in corners[near]:
        box = ConvexPolygon.box(x, y, x + step, y + step)
        piece = clip_convex(poly, box)
        if piece is not None:
            extra.append(piece.center)
    if extra:
        out.append(np.asarray(extra))
    return np.concatenate(out)


def sample_count(poly: ConvexPolygon, step: float) -> float:
    w, h = poly.bbox().extent
    return (w / step + 2) * (h / step + 2)


class _Node:
    """kd-tree node; boxes are tight around the node's points."""

    __slots__ = ("lo", "hi", "idx", "kids")

    def __init__(self, pts: np.ndarray, idx: np.ndarray, leaf: int):
        p = pts[idx]
        self.lo, self.hi, self.idx = p.min(axis=0), p.max(axis=0), idx
        self.kids = None
        if len(idx) > leaf:
            axis = int(np.argmax(self.hi - self.lo))
            order = idx[np.argsort(p[:, axis], kind="stable")]
            half = len(order) // 2
            self.kids = (_Node(pts, order[:half], leaf), _Node(pts, order[half:], leaf))

    @classmethod
    def single(cls, pts: np.ndarray, k: int) -> _Node:
        return cls(pts, np.array([k]), 1)

    @property
    def size(self) -> float:
        return float(math.hypot(*(self.hi - self.lo)))


def _box_gap(a: _Node, b: _Node) -> float:
    g = np.maximum(0.0, np.maximum(b.lo - a.hi, a.lo - b.hi))
    return float(math.hypot(g[0], g[1]))


def _box_reach(a: _Node, b: _Node) -> float:
    g = np.maximum(b.hi - a.lo, a.hi - b.lo)
    return float(math.hypot(g[0], g[1]))


@dataclass(frozen=True)
class OracleResult:
    value: float
    selection: Selection
    resolution: float
    samples: tuple[int, ...]


def _product_minimum(samples: list[np.ndarray], regions) -> tuple[float, tuple[int, ...]]:
    n = len(samples)
    # starting bound: per region, the sample nearest the mean of the region
    # centers, then a few rounds of moving one point at a time
    target = np.mean([s.mean(axis=0) for s in samples], axis=0)
    start = [int(np.argmin(np.hypot(*(s - target).T))) for s in samples]
    for _ in range(3):
        for i in range(n):
            others = np.array([samples[j][start[j]] for j in range(n) if j != i])
            far = np.max(np.hypot(*(samples[i][:, None, :] - others[None]).transpose(2, 0, 1)), axis=1)
            start[i] = int(np.argmin(far))
    pick = np.array([samples[i][start[i]] for i in range(n)])
    ub = float(max(np.hypot(*(pick[i] - pick[j])) for i in range(n) for j in range(i + 1, n)))

    # a sample farther than ub from another region is never needed
    kept_idx = []
    for i in range(n):
        keep = np.ones(len(samples[i]), bool)
        for j in range(n):
            if j != i:
                keep &= distances_to(regions[j], samples[i]) <= ub + 1e-9
        kept_idx.append(np.flatnonzero(keep))
    pts = [samples[i][kept_idx[i]] for i in range(n)]

    leaf = max(1, int(round(4096 ** (1.0 / n))))
    roots = [_Node(p, np.arange(len(p)), leaf) for p in pts]
    best = [ub, tuple(start)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    slack = 1e-12

    def bound(nodes) -> float:
        return max(_box_gap(nodes[i], nodes[j]) for i, j in pairs)

    def leaves(nodes) -> None:
        groups = [nd.idx for nd in nodes]
        diam = np.zeros([len(g) for g in groups])
        for i, j in pairs:
            a, b = pts[i][groups[i]], pts[j][groups[j]]
            dij = np.hypot(a[:, None, 0] - b[None, :, 0], a[:, None, 1] - b[None, :, 1])
            shape = [1] * n
            shape[i], shape[j] = len(a), len(b)
            np.maximum(diam, dij.reshape(shape), out=diam)
        k = int(np.argmin(diam))
        if diam.flat[k] < best[0]:
            best[0] = float(diam.flat[k])
            sub = np.unravel_index(k, diam.shape)
            best[1] = tuple(int(kept_idx[i][groups[i][sub[i]]]) for i in range(n))

    def rec(nodes, lb) -> None:
        if lb >= best[0] - slack:
            return
        nodes = list(nodes)
        # a node that cannot raise the diameter above lb is fixed to one point
        for i in range(n):
            if len(nodes[i].idx) > 1 and all(
                _box_reach(nodes[i], nodes[j]) <= lb for j in range(n) if j != i
            ):
                nodes[i] = _Node.single(pts[i], int(nodes[i].idx[0]))
        split = [i for i in range(n) if nodes[i].kids is not None]
        if not split:
            leaves(nodes)
            return
        i = max(split, key=lambda t: nodes[t].size)
        kids = []
        for child in nodes[i].kids:
            nxt = list(nodes)
            nxt[i] = child
            kids.append((bound(nxt), nxt))
        kids.sort(key=lambda t: t[0])
        for lb_child, nxt in kids:
            rec(nxt, lb_child)

    rec(roots, bound(roots))
    return best[0], best[1]


def sampling_oracle(
    instance: ImpreciseInstance,
    resolution: float,
    *,
    max_samples: int = MAX_SAMPLES,
) -> OracleResult:
    """Exact minimum diameter over the sampled selections.

    If some region would need more than ``max_samples`` samples the
    resolution is coarsened by factors of 1.5 and the effective value is
    reported; beyond ``MAX_COARSEN`` times the request, OracleTooLarge.
    """
    if resolution <= 0:
        raise PreconditionError("resolution must be positive")
    regions = instance.polygons()
    step = resolution
    while max(sample_count(r, step) for r in regions) > max_samples:
        step *= 1.5
        if step > MAX_COARSEN * resolution:
            raise OracleTooLarge("regions too large for the requested resolution")
    allv = np.concatenate([np.asarray(r.vertices) for r in regions])
    origin = allv.min(axis=0)
    samples = [region_samples(r, origin, step) for r in regions]
    if len(regions) == 1:
        return OracleResult(0.0, selection_from(samples[0][:1]), step, (len(samples[0]),))
    value, choice = _product_minimum(samples, regions)
    sel = selection_from(samples[i][c] for i, c in enumerate(choice))
    return OracleResult(sel.diameter, sel, step, tuple(len(s) for s in samples))
