import math

import numpy as np
import pytest

from conftest import pinwheel_squares, unit_square
from mindiam import generate
from mindiam.errors import NotSeparable, PreconditionError, RegionOutsideFocus
from mindiam.geometry import ConvexPolygon, clip_convex
from mindiam.imprecise import (
    PIPELINE_CONSTANT,
    FocusRect,
    common_point,
    contact_separability,
    contact_separability_set,
    decompose,
    discretize,
    focus_rectangle,
    max_separability,
    max_separability_set,
    min_diam_eps,
    solve,
)
from mindiam.instances import ImpreciseInstance
from mindiam.oracle import sampling_oracle

DIRECTIONS = 10_000


def scan_alpha(A: ConvexPolygon, B: ConvexPolygon) -> float:
    """Width of the arc of unit normals w with max w.A < min w.B, by direction scan."""
    th = (np.arange(DIRECTIONS) + 0.5) * 2 * math.pi / DIRECTIONS
    W = np.stack([np.cos(th), np.sin(th)], axis=1)
    top_a = (W @ np.asarray(A.vertices).T).max(axis=1)
    low_b = (W @ np.asarray(B.vertices).T).min(axis=1)
    return float((low_b > top_a + 1e-12).sum()) * 2 * math.pi / DIRECTIONS


def test_alpha_matches_direction_scan(rng):
    checked = 0
    while checked < 40:
        A = generate.polygon(rng, rng.uniform(0, 10, 2), rng.uniform(0.3, 1.5))
        B = generate.polygon(rng, rng.uniform(0, 10, 2), rng.uniform(0.3, 1.5))
        cert = max_separability(A, B)
        if cert is None:
            assert clip_convex(A, B) is not None
            continue
        assert cert.alpha == pytest.approx(scan_alpha(A, B), abs=2e-3)
        assert cert.separates(A, B, 1e-7)
        checked += 1


def test_alpha_examples():
    cert = max_separability(unit_square(), unit_square(2, 0))
    assert cert.alpha == pytest.approx(math.pi / 2)
    pts = max_separability(ConvexPolygon(((0, 0),)), ConvexPolygon(((3, 4),)))
    assert pts.alpha == pytest.approx(math.pi)
    assert max_separability(unit_square(), unit_square(0.5, 0.5)) is None
    # touching squares are not strictly separable
    assert max_separability(unit_square(), unit_square(1, 0)) is None


def test_bisector_points_from_first_to_second():
    cert = max_separability(unit_square(), unit_square(3, 0))
    assert cert.bisector[0] == pytest.approx(1.0) and cert.bisector[1] == pytest.approx(0.0, abs=1e-12)
    assert cert.apex == pytest.approx((2.0, 0.5))


def test_max_separability_set():
    inst = ImpreciseInstance((unit_square(), unit_square(0.5, 0.5), unit_square(4, 0)))
    cert = max_separability_set(inst)
    assert cert.pair in {(0, 2), (1, 2)}
    assert max_separability_set(ImpreciseInstance(pinwheel_squares())) is None
    far = ImpreciseInstance((unit_square(), unit_square(5, 0), unit_square(0, 7), unit_square(9, 9)))
    regs = far.polygons()
    best = max(max_separability(regs[i], regs[j]).alpha for i in range(4) for j in range(i + 1, 4))
    assert max_separability_set(far).alpha == pytest.approx(best)


def test_focus_rectangle_formula():
    cert = max_separability(unit_square(), unit_square(2, 0))
    rect = focus_rectangle(cert, 1.0)
    assert rect.half_extents == pytest.approx((2 * math.sqrt(2), 2 * math.sqrt(2)))
    pts = max_separability(ConvexPolygon(((0, 0),)), ConvexPolygon(((1, 0),)))
    assert focus_rectangle(pts, 1.0).half_extents == pytest.approx((2.0, 2.0))
    with pytest.raises(PreconditionError):
        focus_rectangle(cert, 0.0)


def axis_rect(x0, y0, x1, y1):
    return FocusRect(((x0 + x1) / 2, (y0 + y1) / 2), ((1.0, 0.0), (0.0, 1.0)), ((x1 - x0) / 2, (y1 - y0) / 2))


def test_discretize_full_square():
    disc = discretize(ImpreciseInstance((ConvexPolygon.box(0, 0, 4, 4),)), axis_rect(0, 0, 4, 4), 1.0)
    assert disc.node_points == (25,)
    assert disc.completion_points == (0,)
    assert disc.nodes_per_axis == 5


def test_discretize_tiny_region_gets_one_point():
    tri = ConvexPolygon(((1.2, 1.2), (1.4, 1.2), (1.2, 1.4)))
    disc = discretize(ImpreciseInstance((tri,)), axis_rect(0, 0, 4, 4), 1.0)
    assert disc.node_points == (0,) and disc.completion_points == (1,)
    (p,) = disc.colored.classes[0]
    assert tri.contains(p)


def test_discretize_node_count_matches_recount():
    regs = (ConvexPolygon.box(0.3, 0.3, 2.3, 2.3), ConvexPolygon.box(1.3, 1.3, 3.3, 3.3))
    disc = discretize(ImpreciseInstance(regs), axis_rect(0, 0, 4, 4), 0.5)
    for reg, got in zip(regs, disc.node_points):
        want = sum(reg.contains((0.5 * a, 0.5 * b)) for a in range(9) for b in range(9))
        assert got == want
    for reg, cls in zip(regs, disc.colored.classes):
        assert all(reg.contains(p, 1e-9) for p in cls)


def test_discretize_outside_raises():
    with pytest.raises(RegionOutsideFocus):
        discretize(ImpreciseInstance((unit_square(10, 10),)), axis_rect(0, 0, 4, 4), 1.0)


def test_pipeline_two_squares():
    inst = ImpreciseInstance((unit_square(), unit_square(2, 0)))
    rep = min_diam_eps(inst, 0.3)
    assert rep.R_bound == pytest.approx(1.0)
    assert 1.0 - 1e-9 <= rep.value <= 1 + PIPELINE_CONSTANT * 0.3
    assert rep.selection.feasible_for(inst, 1e-7)
    with pytest.raises(PreconditionError):
        min_diam_eps(inst, 0.0)
    with pytest.raises(NotSeparable):
        min_diam_eps(ImpreciseInstance(pinwheel_squares()), 0.3)


def test_pipeline_random_against_oracle(rng):
    for _ in range(5):
        inst = generate.separable(rng, int(rng.integers(2, 4)))
        rep = min_diam_eps(inst, 0.3)
        orc = sampling_oracle(inst, 0.05)
        slack = 2 * math.sqrt(2) * orc.resolution
        assert rep.value >= orc.value - slack - 1e-9
        assert rep.value <= (1 + PIPELINE_CONSTANT * 0.3) * orc.value + slack
        assert rep.selection.feasible_for(inst, 1e-7)


def test_common_point_examples(rng):
    for _ in range(10):
        inst, _ = generate.with_common_point(rng, int(rng.integers(2, 6)))
        p = common_point(inst)
        assert p is not None
        assert all(r.contains(p, 1e-7) for r in inst.regions)
    assert common_point(ImpreciseInstance(pinwheel_squares())) is None
    assert common_point(ImpreciseInstance((unit_square(), unit_square(2, 0)))) is None


def test_pinwheel_decomposition():
    inst = ImpreciseInstance(pinwheel_squares())
    dec = decompose(inst)
    r, s = dec.pieces
    assert 1 <= r <= 4 and 1 <= s <= 4
    assert len(dec.instances) == 1 + r * s
    a, b, _ = dec.triple
    A, B = inst.regions[a], inst.regions[b]
    ab = clip_convex(A, B)
    left = {sub.regions[a] for sub in dec.instances[1:]}
    right = {sub.regions[b] for sub in dec.instances[1:]}
    assert sum(p.area for p in left) + ab.area == pytest.approx(A.area, rel=1e-9)
    assert sum(p.area for p in right) + ab.area == pytest.approx(B.area, rel=1e-9)
    first = dec.instances[0]
    assert first.regions[a] == first.regions[b] == ab


def test_decompose_preconditions(rng):
    with pytest.raises(PreconditionError):
        decompose(ImpreciseInstance((unit_square(), unit_square(2, 0), unit_square(0.5, 0))))
    inst, _ = generate.with_common_point(rng, 3)
    with pytest.raises(PreconditionError):
        decompose(inst)


def test_solve_dispatch(rng):
    assert solve(ImpreciseInstance((unit_square(4, 4),)), 0.3).method == "single"
    inst, _ = generate.with_common_point(rng, 3)
    res = solve(inst, 0.3)
    assert res.method == "common-point" and res.value == 0.0
    assert solve(ImpreciseInstance((unit_square(), unit_square(2, 0))), 0.3).method == "pipeline"


def test_solve_pinwheel():
    inst = ImpreciseInstance(pinwheel_squares())
    res = solve(inst, 0.3, oracle_resolution=0.05)
    assert res.method.startswith("decompose/")
    assert res.selection.feasible_for(inst, 1e-7)
    orc = sampling_oracle(inst, 0.05)
    slack = 2 * math.sqrt(2) * orc.resolution
    assert orc.value - slack - 1e-9 <= res.value <= (1 + PIPELINE_CONSTANT * 0.3) * orc.value + slack


def test_contact_certificate():
    A, B = unit_square(), unit_square(1, 1)
    assert max_separability(A, B) is None
    cert = contact_separability(A, B)
    assert cert.alpha == pytest.approx(math.pi / 2)
    assert cert.apex == pytest.approx((1.0, 1.0))
    assert cert.separates(A, B, 1e-9)
    assert contact_separability(unit_square(), unit_square(1, 0)) is None  # shared edge
    assert contact_separability(unit_square(), unit_square(0.5, 0.5)) is None
    assert contact_separability(unit_square(), unit_square(3, 0)) is None


def test_decomposition_pieces_touch_at_crossings(rng):
    # every case (ii) sub-instance that has no disjoint pair gets a contact certificate
    for _ in range(5):
        dec = decompose(generate.triple_overlap(rng))
        for sub in dec.instances[1:]:
            assert max_separability_set(sub) is not None or contact_separability_set(sub) is not None


def test_contact_pipeline_against_oracle():
    inst = ImpreciseInstance((unit_square(), unit_square(1, 1), ConvexPolygon(((0.0, 0.9), (1.1, 1.9), (0.0, 1.9)))))
    assert max_separability_set(inst) is None
    res = solve(inst, 0.3, allow_oracle=False)
    orc = sampling_oracle(inst, 0.02)
    assert res.method == "pipeline-contact"
    assert res.selection.feasible_for(inst, 1e-7)
    assert res.value <= (1 + PIPELINE_CONSTANT * 0.3) * orc.value + 2 * math.sqrt(2) * 0.02
