"""Acceptance gate: one pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import json
import math
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import SUMMARY  # noqa: E402
from lp_oracle import vertex_minimum  # noqa: E402
from mindiam import generate, io  # noqa: E402
from mindiam.cli import main  # noqa: E402
from mindiam.errors import MindiamError  # noqa: E402
from mindiam.imprecise import (  # noqa: E402
    PIPELINE_CONSTANT,
    common_point,
    decompose,
    focus_rectangle,
    min_diam_eps,
    solve,
)
from mindiam.instances import HalfSpaceRegion, ImpreciseInstance  # noqa: E402
from mindiam.lp import LinearProgram, LpStatus, build_lp3, simplex_solve, sqrt_d_approx  # noqa: E402
from mindiam.mindcs import brute_force, min_diameter_apx  # noqa: E402
from mindiam.oracle import sampling_oracle  # noqa: E402

SQRT2 = math.sqrt(2)
RES = 0.02
SLACK = 2 * SQRT2 * RES
EPS_PIPE = 0.3


def report(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}"
    SUMMARY.append(line)
    print(line)


def criterion_1() -> tuple[bool, str]:
    rng = np.random.default_rng(1001)
    worst, bad = 0.0, 0
    for _ in range(200):
        inst = generate.indecisive(rng, int(rng.integers(2, 5)), 4)
        opt = brute_force(inst).value
        for eps in (0.5, 0.25):
            res = min_diameter_apx(inst, eps)
            val = res.selection.diameter
            ok = res.selection.valid_for(inst) and opt - 1e-9 <= val <= (1 + 2 * SQRT2 * eps) * opt + 1e-9
            bad += not ok
            if opt > 0:
                worst = max(worst, val / opt)
    return bad == 0, f"400 runs, {bad} violations, worst ratio {worst:.4f}"


def criterion_2() -> tuple[bool, str]:
    rng = np.random.default_rng(1002)
    bad = 0
    for _ in range(100):
        inst = generate.imprecise(rng, int(rng.integers(2, 5)))
        ell = sqrt_d_approx(inst).ell
        orc = sampling_oracle(inst, RES)
        slack = 2 * SQRT2 * orc.resolution
        bad += not (orc.value - slack <= ell <= SQRT2 * (orc.value + slack))
    return bad == 0, f"100 instances, {bad} outside the sandwich"


@lru_cache(maxsize=1)
def separable_fleet():
    rng = np.random.default_rng(1003)
    fleet = []
    for _ in range(50):
        inst = generate.separable(rng, int(rng.integers(2, 5)))
        rep = min_diam_eps(inst, EPS_PIPE)
        orc = sampling_oracle(inst, RES)
        fleet.append((inst, rep, orc))
    return tuple(fleet)


def criterion_3() -> tuple[bool, str]:
    bad, worst = 0, 0.0
    for inst, rep, orc in separable_fleet():
        slack = 2 * SQRT2 * orc.resolution
        ok = rep.selection.feasible_for(inst, 1e-7)
        ok &= rep.value <= (1 + PIPELINE_CONSTANT * EPS_PIPE) * orc.value + slack
        bad += not ok
        worst = max(worst, rep.value / orc.value)
    return bad == 0, f"50 instances, {bad} violations, worst ratio {worst:.4f}"


def criterion_4() -> tuple[bool, str]:
    outside = 0
    for inst, rep, orc in separable_fleet():
        rect = focus_rectangle(rep.cert, rep.R_bound)
        outside += sum(not rect.contains(p) for p in orc.selection.points)
    return outside == 0, f"{outside} oracle points outside the focus rectangle"


def criterion_5() -> tuple[bool, str]:
    rng = np.random.default_rng(1005)
    bad = 0
    for _ in range(500):
        n = int(rng.integers(1, 5))
        m = int(rng.integers(0, 8))
        A = np.vstack([rng.uniform(-1, 1, size=(m, n)), np.ones((1, n))])
        b = np.concatenate([rng.uniform(0, 2, m), [rng.uniform(1, 5)]])
        c = rng.uniform(-1, 1, n)
        sol = simplex_solve(LinearProgram(c, A, b, ((0.0, None),) * n))
        want = vertex_minimum(c, A, b)
        bad += sol.status is not LpStatus.OPTIMAL or abs(sol.objective_value - want) > 1e-6
    fixtures = [
        (LinearProgram([1, 1], [[1, 1]], [-1], ((0.0, None),) * 2), LpStatus.INFEASIBLE),
        (LinearProgram([0, 0], [[1, 0], [-1, 0]], [1, -2]), LpStatus.INFEASIBLE),
        (LinearProgram([1], [[1], [-1]], [0.5, -0.5], ((1.0, 3.0),)), LpStatus.INFEASIBLE),
        (LinearProgram([-1, 0], [[0, 1]], [1], ((0.0, None),) * 2), LpStatus.UNBOUNDED),
        (LinearProgram([-1, 1], [[1, -1]], [3]), LpStatus.OPTIMAL),
        (LinearProgram([1], np.zeros((0, 1)), []), LpStatus.UNBOUNDED),
        (LinearProgram([-1, -1], [[1, -1], [-1, 1]], [1, 1], ((0.0, None),) * 2), LpStatus.UNBOUNDED),
    ]
    wrong = sum(simplex_solve(lp).status is not want for lp, want in fixtures)
    return bad == 0 and wrong == 0, f"500 LPs, {bad} mismatches; {len(fixtures)} fixtures, {wrong} misclassified"


def box_region(lo, hi):
    rows = []
    for k in range(len(lo)):
        e = [0.0] * len(lo)
        e[k] = 1.0
        rows += [(tuple(e), hi[k]), (tuple(-v for v in e), -lo[k])]
    return HalfSpaceRegion(tuple(rows))


def criterion_6() -> tuple[bool, str]:
    rng = np.random.default_rng(1006)
    bad, cases = 0, 0
    for d in (2, 3):
        for n in range(2, 7):
            if d == 2:
                inst = generate.imprecise(rng, n)
                sizes = [len(r.halfplanes()) for r in inst.polygons()]
            else:
                regs = []
                for _ in range(n):
                    lo = rng.uniform(0, 10, 3)
                    regs.append(box_region(lo, lo + rng.uniform(0.2, 2, 3)))
                inst = ImpreciseInstance(tuple(regs))
                sizes = [len(r) for r in regs]
            pairs = n * (n - 1) // 2
            lp, _ = build_lp3(inst)
            cases += 1
            bad += lp.n_vars != n * d + pairs * d + 1 or lp.n_rows != pairs + sum(sizes) + 2 * pairs * d
    return bad == 0, f"{cases} shapes, {bad} wrong counts"


def criterion_7() -> tuple[bool, str]:
    rng = np.random.default_rng(1007)
    missed = 0
    for _ in range(20):
        inst, _ = generate.with_common_point(rng, int(rng.integers(2, 6)))
        p = common_point(inst)
        missed += p is None or not all(r.contains(p, 1e-7) for r in inst.regions)
    bad, worst = 0, 0.0
    for _ in range(10):
        inst = generate.triple_overlap(rng)
        values = []
        for sub in decompose(inst).instances:
            try:
                values.append(solve(sub, EPS_PIPE, depth=1, allow_oracle=False).value)
            except MindiamError:
                continue
        orc = sampling_oracle(inst, RES)
        slack = 2 * SQRT2 * orc.resolution
        ok = bool(values) and min(values) <= (1 + PIPELINE_CONSTANT * EPS_PIPE) * orc.value + slack
        bad += not ok
        if values:
            worst = max(worst, min(values) / orc.value)
    return missed == 0 and bad == 0, f"common point {20 - missed}/20; triples {10 - bad}/10 within bound, worst ratio {worst:.4f}"


def _cli_report(argv, text, tmp: Path) -> str:
    path = tmp / "instance.json"
    path.write_text(text)
    out = tmp / "report.json"
    if main([argv[0], "--input", str(path), "--output", str(out), *argv[1:]]) != 0:
        return "error"
    doc = json.loads(out.read_text())
    doc.pop("wall_time")
    return json.dumps(doc)


def criterion_8(tmp: Path) -> tuple[bool, str]:
    rng = np.random.default_rng(1008)
    problems = []
    runs = [
        (("mindcs", "--eps", "0.25"), io.serialize_instance(generate.indecisive(rng, 4))),
        (("imprecise", "--eps", "0.3"), io.serialize_instance(generate.separable(rng, 3))),
        (("lp",), io.serialize_instance(generate.imprecise(rng, 4))),
    ]
    for argv, text in runs:
        if _cli_report(argv, text, tmp) != _cli_report(argv, text, tmp):
            problems.append(f"{argv[0]} not deterministic")
    for _ in range(20):
        inst = generate.indecisive(rng, int(rng.integers(2, 5)), decimals=None)
        base = min_diameter_apx(inst, 0.25)
        if min_diameter_apx(inst.transform(1.0, (5.0, -3.0)), 0.25).value != base.value:
            problems.append("mindcs translation")
        for s in (0.25, 4.0):
            if min_diameter_apx(inst.transform(s), 0.25).value != s * base.value:
                problems.append("mindcs scaling")
        reg = generate.imprecise(rng, int(rng.integers(2, 5)))
        ell = sqrt_d_approx(reg).ell
        if abs(sqrt_d_approx(reg.transform(1.0, (13.0, -4.5))).ell - ell) > 1e-7:
            problems.append("lp translation")
        for s in (0.25, 3.0):
            if abs(sqrt_d_approx(reg.transform(s)).ell - s * ell) > 1e-7 * max(1.0, s * ell):
                problems.append("lp scaling")
    return not problems, "ok" if not problems else "; ".join(sorted(set(problems)))


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


@pytest.mark.parametrize("number", range(1, 8))
def test_criterion(number):
    start = time.perf_counter()
    ok, detail = CRITERIA[number - 1]()
    report(number, ok, f"{detail} ({time.perf_counter() - start:.1f} s)")
    assert ok, detail


def test_criterion_8(tmp_path):
    start = time.perf_counter()
    ok, detail = criterion_8(tmp_path)
    report(8, ok, f"{detail} ({time.perf_counter() - start:.1f} s)")
    assert ok, detail


if __name__ == "__main__":
    import tempfile

    failed = 0
    for k, fn in enumerate(CRITERIA, 1):
        t0 = time.perf_counter()
        ok, detail = fn()
        report(k, ok, f"{detail} ({time.perf_counter() - t0:.1f} s)")
        failed += not ok
    with tempfile.TemporaryDirectory() as tmp:
        t0 = time.perf_counter()
        ok, detail = criterion_8(Path(tmp))
        report(8, ok, f"{detail} ({time.perf_counter() - t0:.1f} s)")
        failed += not ok
    raise SystemExit(1 if failed else 0)
