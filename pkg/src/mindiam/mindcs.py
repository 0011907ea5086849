"""Minimum-diameter color selection over finite colored candidate sets.

For every pair of candidates ``p, q`` only points inside the lens
``B(p, |pq|) & B(q, |pq|)`` can belong to a selection whose diameter is
realized by ``p, q``. Inside a lens the points are snapped to a grid of
cell side ``eps * |pq|`` and every legal set of cells (one covering all
colors) is a candidate; the best one over all lenses is returned.

Two quantities are tracked per legal cell set:

* the representative diameter, using one fixed point per cell, which is
  the classic grid estimate of the optimum, and
* the cover diameter, the largest distance between any two points of the
  chosen cells, which bounds every selection drawn from those cells.

The selection reported is drawn from cover-optimal cell sets, which
guarantees ``D_min <= value <= (1 + 2 sqrt(d) eps) D_min``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import GridTooFine, OracleTooLarge, PreconditionError
from .geometry import Point, bounding_box, diameter, dist
from .instances import IndecisiveInstance, Selection, selection_from

LENS_TOL = 1e-9
MAX_CELLS = 24
BRUTE_FORCE_CAP = 10**6

CellMask = frozenset  # of cell index tuples


def in_lens(p: Sequence[float], q: Sequence[float], x: Sequence[float]) -> bool:
    r = dist(p, q)
    return dist(x, p) <= r + LENS_TOL and dist(x, q) <= r + LENS_TOL


def is_c_legal(points: Iterable[tuple[Point, int]], colors: int) -> bool:
    seen = {c for _, c in points}
    return colors > 0 and all(c in seen for c in range(colors))


def _check_eps(eps: float) -> None:
    if not (0.0 < eps <= 1.0):
        raise PreconditionError(f"eps must lie in (0, 1], got {eps}")


@dataclass(frozen=True)
class BruteForceResult:
    value: float
    selection: Selection
    choice: tuple[int, ...]


def brute_force(instance: IndecisiveInstance, cap: int = BRUTE_FORCE_CAP) -> BruteForceResult:
    """Exact optimum by enumerating every color selection.

    Ties keep the lexicographically first choice vector.
    """
    sizes = [len(c) for c in instance.classes]
    if math.prod(sizes) > cap:
        raise OracleTooLarge(f"{math.prod(sizes)} selections exceed the cap {cap}")
    pts, _ = instance.flat()
    offsets = np.cumsum([0] + sizes[:-1])
    D = _distance_matrix(pts).tolist()
    m = instance.m
    best, best_choice = math.inf, None
    for choice in itertools.product(*(range(s) for s in sizes)):
        idx = [o + c for o, c in zip(offsets, choice)]
        cur = 0.0
        for a in range(m):
            row = D[idx[a]]
            for b in range(a + 1, m):
                if row[idx[b]] > cur:
                    cur = row[idx[b]]
            if cur >= best:
                break
        if cur < best:
            best, best_choice = cur, choice
    sel = selection_from(instance.classes[i][c] for i, c in enumerate(best_choice))
    return BruteForceResult(sel.diameter, sel, tuple(best_choice))


@dataclass(frozen=True)
class Grid:
    """Uniform grid anchored at ``origin``; indices are clamped into ``extent``."""

    origin: Point
    cell_size: float
    extent: tuple[int, ...]

    @classmethod
    def over(cls, points: np.ndarray, cell_size: float) -> Grid:
        box = bounding_box(points.tolist())
        extent = tuple(max(1, math.ceil(w / cell_size)) for w in box.extent)
        return cls(box.min_corner, cell_size, extent)

    def cells(self, points: np.ndarray) -> np.ndarray:
        idx = np.floor((points - np.asarray(self.origin)) / self.cell_size).astype(int)
        return np.clip(idx, 0, np.asarray(self.extent) - 1)

    def cell_of(self, p: Sequence[float]) -> tuple[int, ...]:
        return tuple(int(v) for v in self.cells(np.asarray([p], dtype=float))[0])


def _distance_matrix(pts: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def _min_cover(bits: list[int], cost: list[list[float]], m: int) -> tuple[float, tuple[int, ...]]:
    """Cheapest color-covering cell set under ``max(cost[a][b])`` over chosen cells.

    Branches on the lowest uncovered color, so every inclusion-minimal cover
    is reached; the objective never decreases when cells are added, so the
    minimum over minimal covers is the global minimum.
    """
    full = (1 << m) - 1
    by_color = [[c for c, b in enumerate(bits) if b >> col & 1] for col in range(m)]
    best: list = [math.inf, ()]
    chosen: list[int] = []

    def rec(covered: int, cur: float) -> None:
        if covered == full:
            if cur < best[0]:
                best[0], best[1] = cur, tuple(chosen)
            return
        col = (~covered & (covered + 1)).bit_length() - 1
        for c in by_color[col]:
            row = cost[c]
            nc = max(cur, row[c])
            for x in chosen:
                if row[x] > nc:
                    nc = row[x]
            if nc >= best[0]:
                continue
            chosen.append(c)
            rec(covered | bits[c], nc)
            chosen.pop()

    rec(0, 0.0)
    return best[0], best[1]


def _min_cover_full(bits: list[int], cost: list[list[float]], m: int) -> tuple[float, tuple[int, ...]]:
    """Reference: scan all 2^K cell subsets."""
    full = (1 << m) - 1
    best, arg = math.inf, ()
    K = len(bits)
    for mask in range(1, 1 << K):
        cells = [c for c in range(K) if mask >> c & 1]
        covered = 0
        for c in cells:
            covered |= bits[c]
        if covered != full:
            continue
        val = max(cost[a][b] for a in cells for b in cells)
        if val < best:
            best, arg = val, tuple(cells)
    return best, arg


@dataclass(frozen=True)
class PairApprox:
    """Grid search inside one lens.

    ``value`` is the representative diameter of the best legal cell set
    ``mask``; ``selection`` is the better of the selections drawn from the
    representative-optimal and cover-optimal cell sets, with true diameter
    ``selection_diameter <= cover_bound``.
    """

    value: float
    mask: CellMask
    selection: Selection
    selection_index: tuple[int, ...]
    selection_diameter: float
    cover_bound: float
    cover_mask: CellMask
    grid: Grid


def _lens_search(
    pts: np.ndarray,
    cols: np.ndarray,
    gidx: np.ndarray,
    D: np.ndarray,
    m: int,
    delta: float,
    eps: float,
    max_cells: int,
    full: bool = False,
) -> Optional[PairApprox]:
    if not np.all(np.bincount(cols, minlength=m)[:m] > 0):
        return None
    grid = Grid.over(pts, eps * delta)
    cell_idx = grid.cells(pts)
    cells, inv = np.unique(cell_idx, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    K = len(cells)
    if K > max_cells:
        raise GridTooFine(f"{K} non-empty cells exceed the cap {max_cells}; use a larger eps")

    bits = [0] * K
    for c, col in zip(inv.tolist(), cols.tolist()):
        bits[c] |= 1 << col
    order = np.lexsort((gidx, inv))
    starts = np.searchsorted(inv[order], np.arange(K))
    reps = order[starts]
    rep_cost = D[np.ix_(reps, reps)]
    Ds = D[np.ix_(order, order)]
    cover_cost = np.maximum.reduceat(np.maximum.reduceat(Ds, starts, axis=0), starts, axis=1)

    search = _min_cover_full if full else _min_cover
    rep_val, rep_cells = search(bits, rep_cost.tolist(), m)
    cov_val, cov_cells = search(bits, cover_cost.tolist(), m)

    best_sel = None
    for chosen in (cov_cells, rep_cells):
        in_mask = np.isin(inv, chosen)
        pick = []
        for col in range(m):
            cand = np.flatnonzero(in_mask & (cols == col))
            pick.append(int(cand[np.argmin(gidx[cand])]))
        sub = D[np.ix_(pick, pick)]
        val = float(sub.max())
        if best_sel is None or val < best_sel[0]:
            best_sel = (val, pick)

    def as_mask(chosen) -> CellMask:
        return frozenset(tuple(int(v) for v in cells[c]) for c in chosen)

    val, pick = best_sel
    return PairApprox(
        value=float(rep_val),
        mask=as_mask(rep_cells),
        selection=selection_from(pts[pick]),
        selection_index=tuple(int(gidx[i]) for i in pick),
        selection_diameter=val,
        cover_bound=float(cov_val),
        cover_mask=as_mask(cov_cells),
        grid=grid,
    )


def diameter_apx(
    points: Sequence[tuple[Sequence[float], int]],
    p: Sequence[float],
    q: Sequence[float],
    eps: float,
    colors: int | None = None,
    *,
    max_cells: int = MAX_CELLS,
    full_enumeration: bool = False,
) -> Optional[PairApprox]:
    """Grid approximation of the best color selection among ``points``.

    ``points`` are the colored candidates lying in the lens of ``p, q``;
    the grid covers their bounding box with cells of side ``eps * |pq|``.
    Returns None when the points do not carry every color.
    """
    _check_eps(eps)
    delta = dist(p, q)
    if delta <= 0.0:
        raise PreconditionError("lens endpoints must be distinct")
    if not points:
        return None
    pts = np.array([pt for pt, _ in points], dtype=float)
    cols = np.array([c for _, c in points], dtype=int)
    m = int(cols.max()) + 1 if colors is None else colors
    return _lens_search(
        pts, cols, np.arange(len(pts)), _distance_matrix(pts), m, delta, eps, max_cells, full_enumeration
    )


@dataclass(frozen=True)
class ApproxResult:
    """Outcome of :func:`min_diameter_apx`.

    ``value`` is the true diameter of ``selection``; ``rep_value`` is the
    smallest representative diameter met during the search. ``pair`` holds
    the flat candidate indices of the winning lens endpoints (None for the
    trivial cases) and ``choice`` the candidate index chosen in each class.
    """

    value: float
    selection: Selection
    witness: tuple[int, int]
    epsilon: float
    rep_value: float
    pair: Optional[tuple[int, int]]
    delta: float
    mask: CellMask
    choice: tuple[int, ...]
    lenses_evaluated: int


def min_diameter_apx(
    instance: IndecisiveInstance,
    eps: float,
    *,
    strict: bool = False,
    max_cells: int = MAX_CELLS,
    all_pairs: bool = False,
) -> ApproxResult:
    """Approximate minimum-diameter color selection.

    Lenses are visited by increasing ``|pq|``. Unless ``all_pairs`` is set,
    the scan stops once ``|pq|`` exceeds the best selection diameter found,
    which cannot skip the lens of an optimal selection. ``strict`` divides
    eps by ``2 sqrt(d)`` so the guarantee becomes ``1 + eps``.
    """
    _check_eps(eps)
    eps_used = eps / (2.0 * math.sqrt(instance.d)) if strict else eps
    pts, cols = instance.flat()
    m = instance.m
    offsets = np.cumsum([0] + [len(c) for c in instance.classes])

    def finish(pick, *, rep_value, pair, delta, mask, lenses) -> ApproxResult:
        pick = list(pick)
        sel = selection_from(pts[pick])
        dres = diameter(sel.points)
        choice = tuple(int(g - offsets[cols[g]]) for g in pick)
        return ApproxResult(dres.value, sel, dres.witness, eps_used, rep_value, pair, delta, mask, choice, lenses)

    # a location carrying every color gives a zero-diameter selection
    by_loc: dict[tuple, dict[int, int]] = {}
    for g, (p, c) in enumerate(zip(map(tuple, pts.tolist()), cols.tolist())):
        by_loc.setdefault(p, {}).setdefault(c, g)
    for loc, seen in by_loc.items():
        if len(seen) == m:
            pick = [seen[c] for c in range(m)]
            return finish(pick, rep_value=0.0, pair=None, delta=0.0, mask=frozenset(), lenses=0)

    D = _distance_matrix(pts)
    iu, ju = np.triu_indices(len(pts), k=1)
    dv = D[iu, ju]
    keep = dv > 0
    iu, ju, dv = iu[keep], ju[keep], dv[keep]
    order = np.lexsort((ju, iu, dv))

    best = None
    rep_best = math.inf
    lenses = 0
    for t in order.tolist():
        i, j, delta = int(iu[t]), int(ju[t]), float(dv[t])
        if best is not None and not all_pairs and delta > best[0] + LENS_TOL:
            break
        members = np.flatnonzero((D[i] <= delta + LENS_TOL) & (D[j] <= delta + LENS_TOL))
        sub_cols = cols[members]
        if np.unique(sub_cols).size < m:
            continue
        lenses += 1
        res = _lens_search(
            pts[members], sub_cols, members, D[np.ix_(members, members)], m, delta, eps_used, max_cells
        )
        rep_best = min(rep_best, res.value)
        if best is None or res.selection_diameter < best[0]:
            best = (res.selection_diameter, res.selection_index, (i, j), delta, res.cover_mask)
    if best is None:
        raise PreconditionError("no lens carries every color")
    _, pick, pair, delta, mask = best
    return finish(pick, rep_value=rep_best, pair=pair, delta=delta, mask=mask, lenses=lenses)
