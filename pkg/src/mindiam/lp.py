"""Rectilinear-diameter linear program and the dense simplex that solves it.

The LP selects one point per region while minimizing the largest pairwise
L1 distance ``ell``. Absolute differences are linearized with one auxiliary
variable per pair and axis, ``d[i,j,k] >= |s[i,k] - s[j,k]|``. Since L1 is
within a factor sqrt(d) of L2, the optimal ``ell`` brackets the minimum
Euclidean diameter: ``D_min <= ell <= sqrt(d) * D_min``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import IO, Optional, Sequence

import numpy as np

from .errors import IterationLimit, PreconditionError
from .geometry import ConvexPolygon
from .instances import ImpreciseInstance, Region, Selection, selection_from

PIVOT_TOL = 1e-9
OPT_TOL = 1e-9
FEAS_TOL = 1e-7
MAX_ITER = 100_000

Bound = tuple[Optional[float], Optional[float]]


class LpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """minimize ``c . x`` subject to ``A x <= b`` and per-variable bounds.

    A bound entry of None means unbounded on that side; the default is a
    free variable.
    """

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    bounds: tuple[Bound, ...] = ()

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        A = np.asarray(self.A, dtype=float)
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.size == 0:
            A = A.reshape(len(b), len(c))
        if A.ndim != 2 or A.shape != (len(b), len(c)):
            raise PreconditionError(f"constraint matrix shape {A.shape} does not match c{c.shape}, b{b.shape}")
        bounds = tuple(self.bounds) or ((None, None),) * len(c)
        if len(bounds) != len(c):
            raise PreconditionError(f"{len(bounds)} bounds for {len(c)} variables")
        for arr in (c, A, b):
            if not np.all(np.isfinite(arr)):
                raise PreconditionError("LP coefficients must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "bounds", tuple((lo, hi) for lo, hi in bounds))

    @property
    def n_vars(self) -> int:
        return len(self.c)

    @property
    def n_rows(self) -> int:
        return len(self.b)

    def with_rows(self, A_extra, b_extra, c: np.ndarray | None = None) -> LinearProgram:
        return LinearProgram(
            self.c if c is None else c,
            np.vstack([self.A, np.atleast_2d(A_extra)]),
            np.concatenate([self.b, np.atleast_1d(b_extra)]),
            self.bounds,
        )

    def is_feasible(self, x: np.ndarray, tol: float = FEAS_TOL) -> bool:
        if np.any(self.A @ x > self.b + tol):
            return False
        for xi, (lo, hi) in zip(x, self.bounds):
            if (lo is not None and xi < lo - tol) or (hi is not None and xi > hi + tol):
                return False
        return True


@dataclass(frozen=True)
class LpSolution:
    status: LpStatus
    x: Optional[np.ndarray]
    objective_value: float
    iterations: int


class _Tableau:
    """Dense simplex tableau with Bland's entering/leaving rule."""

    def __init__(self, T: np.ndarray, basis: list[int], max_iter: int):
        self.T = T
        self.basis = basis
        self.iterations = 0
        self.max_iter = max_iter

    def pivot(self, r: int, col: int, cost: np.ndarray) -> None:
        T = self.T
        row = T[r] / T[r, col]
        T -= np.outer(T[:, col], row)
        T[r] = row
        cost -= cost[col] * row
        self.basis[r] = col
        self.iterations += 1
        if self.iterations > self.max_iter:
            raise IterationLimit(f"simplex exceeded {self.max_iter} pivots")

    def run(self, cost: np.ndarray, allowed: int) -> bool:
        """Pivot until optimal; False when the objective is unbounded below.

        ``cost`` holds reduced costs with the negated objective value in its
        last entry. Only the first ``allowed`` columns may enter.
        """
        T = self.T
        while True:
            entering = np.flatnonzero(cost[:allowed] < -OPT_TOL)
            if entering.size == 0:
                return True
            col = int(entering[0])
            column = T[:, col]
            rows = np.flatnonzero(column > PIVOT_TOL)
            if rows.size == 0:
                return False
            ratios = T[rows, -1] / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = int(min(ties, key=lambda i: self.basis[i]))
            self.pivot(r, col, cost)


def _standard_form(lp: LinearProgram):
    """Rewrite ``x = x0 + M y`` with ``y >= 0`` and return the rows in ``y``."""
    n = lp.n_vars
    x0 = np.zeros(n)
    cols: list[np.ndarray] = []
    extra_rows: list[tuple[int, float]] = []
    for j, (lo, hi) in enumerate(lp.bounds):
        unit = np.zeros(n)
        unit[j] = 1.0
        if lo is not None:
            x0[j] = lo
            cols.append(unit)
            if hi is not None:
                extra_rows.append((len(cols) - 1, hi - lo))
        elif hi is not None:
            x0[j] = hi
            cols.append(-unit)
        else:
            cols.append(unit)
            cols.append(-unit)
    M = np.array(cols).T if cols else np.zeros((n, 0))
    A = lp.A @ M
    b = lp.b - lp.A @ x0
    if extra_rows:
        E = np.zeros((len(extra_rows), M.shape[1]))
        for r, (col, ub) in enumerate(extra_rows):
            E[r, col] = 1.0
        A = np.vstack([A, E])
        b = np.concatenate([b, [ub for _, ub in extra_rows]])
    return x0, M, A, b


def simplex_solve(lp: LinearProgram, max_iter: int = MAX_ITER) -> LpSolution:
    """Two-phase dense simplex with Bland's anti-cycling rule."""
    x0, M, A, b = _standard_form(lp)
    m, N = A.shape
    c = lp.c @ M

    neg = b < 0
    n_art = int(neg.sum())
    width = N + m + n_art
    T = np.zeros((m, width + 1))
    T[:, :N] = A
    T[:, N:N + m] = np.eye(m)
    T[:, -1] = b
    T[neg, :N + m] *= -1.0
    T[neg, -1] *= -1.0
    basis = []
    art = N + m
    for i in range(m):
        if neg[i]:
            T[i, art] = 1.0
            basis.append(art)
            art += 1
        else:
            basis.append(N + i)
    tab = _Tableau(T, basis, max_iter)

    if n_art:
        cost = np.zeros(width + 1)
        cost[N + m:width] = 1.0
        for i in np.flatnonzero(neg):
            cost -= T[i]
        tab.run(cost, width)
        if -cost[-1] > FEAS_TOL:
            return LpSolution(LpStatus.INFEASIBLE, None, math.nan, tab.iterations)
        # drive zero-level artificials out of the basis, dropping redundant rows
        keep = []
        for r in range(m):
            if tab.basis[r] >= N + m:
                cand = np.flatnonzero(np.abs(tab.T[r, :N + m]) > PIVOT_TOL)
                if cand.size == 0:
                    continue
                tab.pivot(r, int(cand[0]), cost)
            keep.append(r)
        tab.T = np.delete(tab.T[keep], np.s_[N + m:width], axis=1)
        tab.basis = [tab.basis[r] for r in keep]

    T = tab.T
    full_c = np.zeros(T.shape[1])
    full_c[:N] = c
    cost = full_c.copy()
    for i, j in enumerate(tab.basis):
        if full_c[j] != 0.0:
            cost -= full_c[j] * T[i]
    if not tab.run(cost, N + m):
        return LpSolution(LpStatus.UNBOUNDED, None, -math.inf, tab.iterations)
    y = np.zeros(T.shape[1] - 1)
    for i, j in enumerate(tab.basis):
        y[j] = T[i, -1]
    x = x0 + M @ y[:N]
    return LpSolution(LpStatus.OPTIMAL, x, float(lp.c @ x), tab.iterations)


# ---------------------------------------------------------------------------
# rectilinear-diameter program


def region_constraints(region: Region) -> list[tuple[tuple[float, ...], float]]:
    """Rows ``(a, b)`` with ``a . x <= b`` whose intersection is the region."""
    return [(tuple(a), float(b)) for a, b in region.halfplanes()]


def region_bounds(region: Region) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned bounding box; solved by LP for half-space regions."""
    if isinstance(region, ConvexPolygon):
        v = np.array(region.vertices)
        return v.min(axis=0), v.max(axis=0)
    rows = region_constraints(region)
    A = np.array([a for a, _ in rows])
    b = np.array([b for _, b in rows])
    lo, hi = np.zeros(region.d), np.zeros(region.d)
    for k in range(region.d):
        for sign, out in ((1.0, lo), (-1.0, hi)):
            c = np.zeros(region.d)
            c[k] = sign
            sol = simplex_solve(LinearProgram(c, A, b))
            if sol.status is not LpStatus.OPTIMAL:
                raise PreconditionError(f"half-space region is {sol.status.value.lower()}")
            out[k] = sol.x[k]
    return lo, hi


@dataclass(frozen=True)
class Lp3Layout:
    """Column map: ``s[i,k]`` first, then ``d[p,k]`` per pair ``p = (i<j)``, then ``ell``.

    ``shift`` is subtracted from every coordinate so that the location
    variables can be kept nonnegative.
    """

    n: int
    d: int
    shift: tuple[float, ...]
    pairs: tuple[tuple[int, int], ...] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(itertools.combinations(range(self.n), 2)))

    def s(self, i: int, k: int) -> int:
        return i * self.d + k

    def dvar(self, pair: int, k: int) -> int:
        return self.n * self.d + pair * self.d + k

    @property
    def ell(self) -> int:
        return self.n * self.d + len(self.pairs) * self.d

    @property
    def n_vars(self) -> int:
        return self.ell + 1

    def names(self) -> list[str]:
        out = [f"s[{i},{k}]" for i in range(self.n) for k in range(self.d)]
        out += [f"d[{i},{j},{k}]" for i, j in self.pairs for k in range(self.d)]
        return out + ["ell"]


def build_lp3(instance: ImpreciseInstance) -> tuple[LinearProgram, Lp3Layout]:
    """Pair rows, region rows, then the two absolute-value rows per pair and axis.

    The objective minimizes ``ell`` alone; :func:`sqrt_d_approx` then
    tightens the difference variables in a second solve.
    """
    n, d = instance.n, instance.d
    if n < 2:
        raise PreconditionError("the rectilinear program needs at least two regions")
    shift = np.min([region_bounds(r)[0] for r in instance.regions], axis=0)
    lay = Lp3Layout(n, d, tuple(float(x) for x in shift))
    rows: list[np.ndarray] = []
    rhs: list[float] = []

    for p, _ in enumerate(lay.pairs):
        row = np.zeros(lay.n_vars)
        for k in range(d):
            row[lay.dvar(p, k)] = 1.0
        row[lay.ell] = -1.0
        rows.append(row)
        rhs.append(0.0)
    for i, region in enumerate(instance.regions):
        for a, b in region_constraints(region):
            row = np.zeros(lay.n_vars)
            for k in range(d):
                row[lay.s(i, k)] = a[k]
            rows.append(row)
            rhs.append(b - float(np.dot(a, shift)))
    for p, (i, j) in enumerate(lay.pairs):
        for k in range(d):
            for sign in (1.0, -1.0):
                row = np.zeros(lay.n_vars)
                row[lay.s(i, k)] = sign
                row[lay.s(j, k)] = -sign
                row[lay.dvar(p, k)] = -1.0
                rows.append(row)
                rhs.append(0.0)

    c = np.zeros(lay.n_vars)
    c[lay.ell] = 1.0
    bounds = ((0.0, None),) * lay.n_vars
    return LinearProgram(c, np.array(rows), np.array(rhs), bounds), lay


@dataclass(frozen=True)
class SqrtDResult:
    ell: float
    selection: Selection
    iterations: int = 0


def _feasible_point(region: Region) -> tuple[float, ...]:
    if isinstance(region, ConvexPolygon):
        return region.vertices[0]
    rows = region_constraints(region)
    sol = simplex_solve(
        LinearProgram(np.zeros(region.d), np.array([a for a, _ in rows]), np.array([b for _, b in rows]))
    )
    if sol.status is not LpStatus.OPTIMAL:
        raise PreconditionError("half-space region is empty")
    return tuple(float(x) for x in sol.x)


def sqrt_d_approx(instance: ImpreciseInstance) -> SqrtDResult:
    """Minimum rectilinear diameter selection.

    First solve minimizes ``ell``; the second fixes ``ell`` at that optimum
    and minimizes the sum of the difference variables so every one of them
    equals its absolute difference.
    """
    if instance.n == 1:
        return SqrtDResult(0.0, selection_from([_feasible_point(instance.regions[0])]))
    lp, lay = build_lp3(instance)
    first = simplex_solve(lp)
    if first.status is not LpStatus.OPTIMAL:
        raise PreconditionError(f"rectilinear program is {first.status.value.lower()}")
    ell = first.x[lay.ell]
    fix = np.zeros(lay.n_vars)
    fix[lay.ell] = 1.0
    c2 = np.zeros(lay.n_vars)
    c2[lay.n * lay.d:lay.ell] = 1.0
    second = simplex_solve(lp.with_rows(fix, ell + 1e-9 * max(1.0, ell), c=c2))
    x = second.x if second.status is LpStatus.OPTIMAL else first.x
    pts = [
        [x[lay.s(i, k)] + lay.shift[k] for k in range(lay.d)]
        for i in range(lay.n)
    ]
    return SqrtDResult(float(ell), selection_from(pts), first.iterations + second.iterations)


def dump_lp(lp: LinearProgram, out: IO[str], names: Sequence[str] | None = None) -> None:
    """Plain-text dump: ``#`` comment lines, then one ``c1 c2 ... <= b`` line per row."""
    fmt = "{:.12g}".format
    if names:
        out.write("# vars " + " ".join(names) + "\n")
    out.write("# minimize " + " ".join(fmt(v) for v in lp.c) + "\n")
    for j, (lo, hi) in enumerate(lp.bounds):
        out.write(f"# bound {j} {'-inf' if lo is None else fmt(lo)} {'inf' if hi is None else fmt(hi)}\n")
    for row, rhs in zip(lp.A, lp.b):
        out.write(" ".join(fmt(v) for v in row) + " <= " + fmt(rhs) + "\n")


def read_lp_rows(text: str) -> tuple[np.ndarray, np.ndarray]:
    """Parse the row lines of a :func:`dump_lp` file back into ``(A, b)``."""
    A, b = [], []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        lhs, rhs = line.split("<=")
        A.append([float(v) for v in lhs.split()])
        b.append(float(rhs))
    return np.array(A), np.array(b)
