"""Random desk-scale instances for tests, benchmarks and the ``gen`` command."""

from __future__ import annotations

import math

import numpy as np

from .geometry import ConvexPolygon, clip_convex
from .instances import ImpreciseInstance, IndecisiveInstance

BOX = 10.0


def indecisive(rng: np.random.Generator, m: int, max_class: int = 4, *, decimals: int | None = 3) -> IndecisiveInstance:
    """``m`` classes of 1..max_class points in [0, 10]^2.

    ``decimals=None`` draws multiples of 1/64 so scaling by powers of two
    and integer shifts are exact.
    """
    classes = []
    for _ in range(m):
        k = int(rng.integers(1, max_class + 1))
        if decimals is None:
            pts = rng.integers(0, int(BOX * 64) + 1, size=(k, 2)) / 64.0
        else:
            pts = np.round(rng.uniform(0, BOX, size=(k, 2)), decimals)
        classes.append([tuple(p) for p in pts.tolist()])
    return IndecisiveInstance(tuple(map(tuple, classes)))


def polygon(rng: np.random.Generator, center, radius: float, max_vertices: int = 6) -> ConvexPolygon:
    """Convex polygon with 3..max_vertices vertices on a jittered ellipse."""
    k = int(rng.integers(3, max_vertices + 1))
    ang = np.sort(rng.uniform(0, 2 * math.pi, k))
    aspect = rng.uniform(0.4, 1.0)
    tilt = rng.uniform(0, math.pi)
    local = np.stack([np.cos(ang), aspect * np.sin(ang)], axis=1) * radius
    rot = np.array([[math.cos(tilt), -math.sin(tilt)], [math.sin(tilt), math.cos(tilt)]])
    pts = np.round(np.asarray(center) + local @ rot.T, 6)
    poly = ConvexPolygon.from_points(pts.tolist())
    if poly is None or len(poly) < 3 or poly.area < 1e-3 * radius * radius:
        return polygon(rng, center, radius, max_vertices)
    return poly


def imprecise(
    rng: np.random.Generator,
    n: int,
    *,
    spread: float = BOX,
    radius: tuple[float, float] = (0.3, 1.5),
    max_vertices: int = 6,
) -> ImpreciseInstance:
    regions = []
    for _ in range(n):
        c = rng.uniform(0, spread, 2)
        regions.append(polygon(rng, c, rng.uniform(*radius), max_vertices))
    return ImpreciseInstance(tuple(regions))


def separable(rng: np.random.Generator, n: int, **kw) -> ImpreciseInstance:
    """Random instance with at least one disjoint pair of regions."""
    while True:
        inst = imprecise(rng, n, **kw)
        regs = inst.regions
        if any(clip_convex(regs[i], regs[j]) is None for i in range(n) for j in range(i + 1, n)):
            return inst


def _strip(p, q, width: float, extend: float) -> ConvexPolygon:
    p, q = np.asarray(p, float), np.asarray(q, float)
    t = (q - p) / np.linalg.norm(q - p)
    nrm = np.array([-t[1], t[0]])
    a, b = p - extend * t, q + extend * t
    corners = [a - width * nrm, b - width * nrm, b + width * nrm, a + width * nrm]
    return ConvexPolygon(tuple(tuple(np.round(c, 9).tolist()) for c in corners))


def triple_overlap(rng: np.random.Generator) -> ImpreciseInstance:
    """Three strips along the sides of a triangle.

    Neighbouring strips overlap near the shared corner, no point lies in
    all three.
    """
    while True:
        c = rng.uniform(3, 7, 2)
        r = rng.uniform(2.0, 3.5)
        ang = rng.uniform(0, 2 * math.pi) + np.array([0, 2 * math.pi / 3, 4 * math.pi / 3]) + rng.uniform(-0.3, 0.3, 3)
        T = c + r * np.stack([np.cos(ang), np.sin(ang)], axis=1)
        width = rng.uniform(0.15, 0.5)
        strips = tuple(_strip(T[i], T[(i + 1) % 3], width, width * rng.uniform(0.5, 1.5)) for i in range(3))
        inst = ImpreciseInstance(strips)
        ab = clip_convex(strips[0], strips[1])
        if ab is not None and clip_convex(ab, strips[2]) is None:
            return inst


def with_common_point(rng: np.random.Generator, n: int, max_vertices: int = 6) -> tuple[ImpreciseInstance, tuple[float, float]]:
    """Regions that all contain one drawn point."""
    x = rng.uniform(2, 8, 2)
    regions = []
    while len(regions) < n:
        r = rng.uniform(0.5, 2.0)
        c = x + rng.uniform(-0.6, 0.6, 2) * r
        poly = polygon(rng, c, r, max_vertices)
        if poly.contains(tuple(x), -1e-6):
            regions.append(poly)
    return ImpreciseInstance(tuple(regions)), (float(x[0]), float(x[1]))
