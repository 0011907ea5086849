"""Instance and selection containers shared by the solvers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import PreconditionError
from .geometry import TOL, ConvexPolygon, Point, as_point, diameter


@dataclass(frozen=True)
class IndecisiveInstance:
    """Colored candidate sets; ``classes[i]`` holds the candidates of color i."""

    classes: tuple[tuple[Point, ...], ...]

    def __post_init__(self):
        classes = tuple(tuple(as_point(p) for p in cls) for cls in self.classes)
        if not classes:
            raise PreconditionError("an indecisive instance needs at least one color class")
        for i, cls in enumerate(classes):
            if not cls:
                raise PreconditionError(f"color class {i} is empty")
        d = len(classes[0][0])
        if any(len(p) != d for cls in classes for p in cls):
            raise PreconditionError("all points must share one dimension")
        object.__setattr__(self, "classes", classes)

    @property
    def d(self) -> int:
        return len(self.classes[0][0])

    @property
    def m(self) -> int:
        return len(self.classes)

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.classes)

    def flat(self) -> tuple[np.ndarray, np.ndarray]:
        """All points as an (n, d) array with their color indices, class by class."""
        pts = np.array([p for cls in self.classes for p in cls], dtype=float)
        colors = np.array([i for i, cls in enumerate(self.classes) for _ in cls], dtype=int)
        return pts, colors

    def transform(self, scale: float = 1.0, shift: Sequence[float] | None = None) -> IndecisiveInstance:
        shift = (0.0,) * self.d if shift is None else tuple(shift)
        return IndecisiveInstance(
            tuple(tuple(tuple(scale * x + t for x, t in zip(p, shift)) for p in cls) for cls in self.classes)
        )


@dataclass(frozen=True)
class HalfSpaceRegion:
    """Bounded convex region ``{x : a . x <= b for every row}`` in any dimension."""

    rows: tuple[tuple[tuple[float, ...], float], ...]

    def __post_init__(self):
        rows = tuple((tuple(float(x) for x in a), float(b)) for a, b in self.rows)
        if not rows:
            raise PreconditionError("a half-space region needs at least one row")
        d = len(rows[0][0])
        for a, b in rows:
            if len(a) != d:
                raise PreconditionError("half-space rows have inconsistent dimension")
            if not all(math.isfinite(x) for x in a) or not math.isfinite(b):
                raise PreconditionError("non-finite half-space coefficient")
            if not any(a):
                raise PreconditionError("half-space row with zero normal")
        object.__setattr__(self, "rows", rows)

    @property
    def d(self) -> int:
        return len(self.rows[0][0])

    def __len__(self) -> int:
        return len(self.rows)

    def halfplanes(self):
        return list(self.rows)

    def contains(self, p: Sequence[float], tol: float = TOL) -> bool:
        for a, b in self.rows:
            if (np.dot(a, p) - b) / np.linalg.norm(a) > tol:
                return False
        return True

    def translate(self, shift: Sequence[float]) -> HalfSpaceRegion:
        return HalfSpaceRegion(tuple((a, b + float(np.dot(a, shift))) for a, b in self.rows))

    def scale(self, s: float) -> HalfSpaceRegion:
        return HalfSpaceRegion(tuple((a, b * s) for a, b in self.rows))


Region = Union[ConvexPolygon, HalfSpaceRegion]


def region_dimension(region: Region) -> int:
    return 2 if isinstance(region, ConvexPolygon) else region.d


@dataclass(frozen=True)
class ImpreciseInstance:
    """One convex region per imprecise point."""

    regions: tuple[Region, ...]

    def __post_init__(self):
        regions = tuple(self.regions)
        if not regions:
            raise PreconditionError("an imprecise instance needs at least one region")
        dims = {region_dimension(r) for r in regions}
        if len(dims) != 1:
            raise PreconditionError("all regions must share one dimension")
        object.__setattr__(self, "regions", regions)

    @property
    def d(self) -> int:
        return region_dimension(self.regions[0])

    @property
    def n(self) -> int:
        return len(self.regions)

    @property
    def planar(self) -> bool:
        return all(isinstance(r, ConvexPolygon) for r in self.regions)

    def polygons(self) -> tuple[ConvexPolygon, ...]:
        if not self.planar:
            raise PreconditionError("operation needs planar polygon regions")
        return self.regions  # type: ignore[return-value]

    def transform(self, scale: float = 1.0, shift: Sequence[float] | None = None) -> ImpreciseInstance:
        shift = (0.0,) * self.d if shift is None else tuple(shift)
        return ImpreciseInstance(tuple(r.scale(scale).translate(shift) for r in self.regions))


@dataclass(frozen=True)
class Selection:
    """One chosen point per color class or region, in order."""

    points: tuple[Point, ...]

    @property
    def diameter(self) -> float:
        return diameter(self.points).value

    def __len__(self) -> int:
        return len(self.points)

    def feasible_for(self, instance: ImpreciseInstance, tol: float = TOL) -> bool:
        return len(self.points) == instance.n and all(
            r.contains(p, tol) for r, p in zip(instance.regions, self.points)
        )

    def valid_for(self, instance: IndecisiveInstance) -> bool:
        return len(self.points) == instance.m and all(
            p in cls for p, cls in zip(self.points, instance.classes)
        )


def selection_from(points) -> Selection:
    return Selection(tuple(tuple(float(x) for x in p) for p in points))

