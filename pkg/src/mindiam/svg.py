"""SVG 1.1 figures of instances, selections and diameter witnesses."""

from __future__ import annotations

from typing import Optional, Sequence

from .geometry import ConvexPolygon, bounding_box, diameter
from .instances import ImpreciseInstance, IndecisiveInstance, Selection

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")
SIZE = 480.0


def _fmt(v: float) -> str:
    return f"{v:.4f}".rstrip("0").rstrip(".")


class _Frame:
    """Maps instance coordinates to the picture, y axis pointing up."""

    def __init__(self, points: Sequence[Sequence[float]]):
        box = bounding_box(points)
        (x0, y0), (x1, y1) = box.min_corner[:2], box.max_corner[:2]
        span = max(x1 - x0, y1 - y0, 1e-9)
        self.pad = 0.05 * span
        self.x0, self.y1 = x0 - self.pad, y1 + self.pad
        self.scale = SIZE / (span + 2 * self.pad)
        self.w = (x1 - x0 + 2 * self.pad) * self.scale
        self.h = (y1 - y0 + 2 * self.pad) * self.scale

    def __call__(self, p) -> tuple[str, str]:
        return _fmt((p[0] - self.x0) * self.scale), _fmt((self.y1 - p[1]) * self.scale)


def render(
    instance: IndecisiveInstance | ImpreciseInstance,
    selection: Optional[Selection] = None,
    extra: Sequence[ConvexPolygon] = (),
) -> str:
    """One element per region or candidate point, the chosen points, and the witness segment."""
    if instance.d != 2:
        raise ValueError("figures are planar only")
    if isinstance(instance, IndecisiveInstance):
        every = [p for cls in instance.classes for p in cls]
    else:
        every = [v for r in instance.polygons() for v in r.vertices]
    if selection is not None:
        every += list(selection.points)
    for poly in extra:
        every += list(poly.vertices)
    f = _Frame(every)
    r = _fmt(max(2.0, SIZE / 160))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(f.w)}" height="{_fmt(f.h)}" '
        f'viewBox="0 0 {_fmt(f.w)} {_fmt(f.h)}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for poly in extra:
        pts = " ".join(",".join(f(v)) for v in poly.vertices)
        out.append(f'<polygon class="frame" points="{pts}" fill="none" stroke="#999999" stroke-dasharray="4 3"/>')
    if isinstance(instance, IndecisiveInstance):
        for i, cls in enumerate(instance.classes):
            col = PALETTE[i % len(PALETTE)]
            for p in cls:
                x, y = f(p)
                out.append(f'<circle class="point" data-color="{i}" cx="{x}" cy="{y}" r="{r}" fill="{col}"/>')
    else:
        for i, poly in enumerate(instance.polygons()):
            col = PALETTE[i % len(PALETTE)]
            if poly.is_point:
                x, y = f(poly.vertices[0])
                out.append(f'<circle class="region" data-region="{i}" cx="{x}" cy="{y}" r="{r}" fill="{col}"/>')
            else:
                pts = " ".join(",".join(f(v)) for v in poly.vertices)
                out.append(
                    f'<polygon class="region" data-region="{i}" points="{pts}" '
                    f'fill="{col}" fill-opacity="0.3" stroke="{col}"/>'
                )
    if selection is not None and len(selection) > 0:
        for p in selection.points:
            x, y = f(p)
            out.append(f'<circle class="selected" cx="{x}" cy="{y}" r="{r}" fill="black"/>')
        dres = diameter(selection.points)
        i, j = dres.witness
        (xa, ya), (xb, yb) = f(selection.points[i]), f(selection.points[j])
        out.append(
            f'<line class="witness" x1="{xa}" y1="{ya}" x2="{xb}" y2="{yb}" stroke="red" stroke-width="2"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
