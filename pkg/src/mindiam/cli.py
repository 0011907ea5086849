"""Command-line front end.

Every command reads an instance file, writes a JSON report (stdout or
``--output``) and exits 0; failures print ``{"error": {...}}`` on stderr
and exit 1. Reports are deterministic apart from ``wall_time``.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import generate, io, svg
from .errors import MindiamError, PreconditionError
from .geometry import dist
from .imprecise import (
    PIPELINE_CONSTANT,
    SeparabilityCert,
    max_separability,
    max_separability_set,
    min_diam_eps,
    solve,
)
from .instances import ImpreciseInstance, IndecisiveInstance, Selection
from .lp import build_lp3, dump_lp, sqrt_d_approx
from .mindcs import brute_force, min_diameter_apx
from .oracle import sampling_oracle


def _selection(sel: Selection) -> list:
    return [list(p) for p in sel.points]


def _cert(cert: SeparabilityCert | None) -> dict | None:
    if cert is None:
        return None
    return {
        "pair": list(cert.pair),
        "alpha": cert.alpha,
        "apex": list(cert.apex),
        "lines": [{"point": list(l.point), "direction": list(l.direction)} for l in cert.lines],
    }


def _stats(instance) -> dict:
    if isinstance(instance, IndecisiveInstance):
        return {"model": "indecisive", "d": instance.d, "m": instance.m, "n": instance.n}
    return {"model": "imprecise", "d": instance.d, "n": instance.n}


def _load(args, kind: type):
    if not args.input:
        raise PreconditionError("--input is required")
    inst = io.parse_instance(Path(args.input).read_bytes())
    if not isinstance(inst, kind):
        want = "indecisive" if kind is IndecisiveInstance else "imprecise"
        raise PreconditionError(f"this command needs a {want} instance")
    args.instance = inst
    return inst


def _write_svg(args, instance, selection, extra=()) -> None:
    if args.svg:
        Path(args.svg).write_text(svg.render(instance, selection, extra))


def cmd_mindcs(args) -> dict:
    inst = _load(args, IndecisiveInstance)
    res = min_diameter_apx(inst, args.eps, strict=args.strict_eps)
    out: dict[str, Any] = {
        "value": res.value,
        "representative_value": res.rep_value,
        "selection": _selection(res.selection),
        "choice": list(res.choice),
        "witness": list(res.witness),
        "epsilon": res.epsilon,
        "pair": None if res.pair is None else list(res.pair),
        "delta": res.delta,
        "mask": sorted(list(c) for c in res.mask),
        "lenses_evaluated": res.lenses_evaluated,
        "bound_factor": 1 + 2 * math.sqrt(inst.d) * res.epsilon,
    }
    if args.oracle:
        bf = brute_force(inst)
        ratio = res.value / bf.value if bf.value > 0 else (1.0 if res.value == 0 else math.inf)
        out["oracle"] = {
            "value": bf.value,
            "selection": _selection(bf.selection),
            "ratio": ratio,
            "within_bound": bf.value - 1e-9 <= res.value <= out["bound_factor"] * bf.value + 1e-9,
        }
    _write_svg(args, inst, res.selection)
    return out


def cmd_imprecise(args) -> dict:
    inst = _load(args, ImpreciseInstance)
    out: dict[str, Any]
    if max_separability_set(inst) is not None:
        rep = min_diam_eps(inst, args.eps)
        out = {
            "method": "pipeline",
            "R_bound": rep.R_bound,
            "certificate": _cert(rep.cert),
            "focus_rect": {
                "center": list(rep.rect.center),
                "axes": [list(a) for a in rep.rect.axes],
                "half_extents": list(rep.rect.half_extents),
            },
            "cell": rep.cell,
            "colored_points": rep.colored_points,
            "mindcs_value": rep.mindcs.value,
            "value": rep.value,
            "selection": _selection(rep.selection),
        }
        extra = (rep.rect.polygon(),)
        sel = rep.selection
    else:
        res = solve(inst, args.eps, oracle_resolution=args.resolution)
        out = {"method": res.method, "value": res.value, "selection": _selection(res.selection)}
        out["warnings"] = list(res.warnings)
        extra, sel = (), res.selection
    out["bound_factor"] = 1 + PIPELINE_CONSTANT * args.eps
    if args.oracle:
        orc = sampling_oracle(inst, args.resolution)
        out["oracle"] = {
            "value": orc.value,
            "resolution": orc.resolution,
            "selection": _selection(orc.selection),
            "ratio": out["value"] / orc.value if orc.value > 0 else None,
        }
    _write_svg(args, inst, sel, extra)
    return out


def cmd_lp(args) -> dict:
    inst = _load(args, ImpreciseInstance)
    res = sqrt_d_approx(inst)
    pts = res.selection.points
    l1 = max((dist(p, q, "L1") for p in pts for q in pts), default=0.0)
    out: dict[str, Any] = {
        "ell": res.ell,
        "selection": _selection(res.selection),
        "l1_diameter": l1,
        "l2_diameter": res.selection.diameter,
        "iterations": res.iterations,
    }
    if inst.n >= 2:
        lp, lay = build_lp3(inst)
        out["variables"] = lp.n_vars
        out["rows"] = lp.n_rows
        if args.dump_lp:
            with open(args.dump_lp, "w") as fh:
                dump_lp(lp, fh, lay.names())
    if args.oracle:
        orc = sampling_oracle(inst, args.resolution)
        slack = 2 * math.sqrt(2) * orc.resolution
        out["oracle"] = {
            "value": orc.value,
            "resolution": orc.resolution,
            "within_bound": orc.value - slack <= res.ell <= math.sqrt(inst.d) * (orc.value + slack),
        }
    _write_svg(args, inst, res.selection)
    return out


def cmd_separability(args) -> dict:
    inst = _load(args, ImpreciseInstance)
    regs = inst.polygons()
    pairs = []
    for i in range(len(regs)):
        for j in range(i + 1, len(regs)):
            cert = max_separability(regs[i], regs[j], (i, j))
            pairs.append({"pair": [i, j], "alpha": None if cert is None else cert.alpha})
    best = max_separability_set(inst) if len(regs) >= 2 else None
    _write_svg(args, inst, None)
    return {"certificate": _cert(best), "pairs": pairs}


def cmd_oracle(args) -> dict:
    inst = _load(args, ImpreciseInstance)
    orc = sampling_oracle(inst, args.resolution)
    _write_svg(args, inst, orc.selection)
    return {
        "value": orc.value,
        "selection": _selection(orc.selection),
        "resolution": orc.resolution,
        "samples": list(orc.samples),
    }


def cmd_gen(args) -> dict:
    rng = np.random.default_rng(args.seed)
    if args.model == "indecisive":
        inst = generate.indecisive(rng, args.m, args.k)
    elif args.model == "imprecise":
        inst = generate.imprecise(rng, args.n, spread=args.spread)
    elif args.model == "separable":
        inst = generate.separable(rng, args.n, spread=args.spread)
    elif args.model == "triple":
        inst = generate.triple_overlap(rng)
    else:
        inst, _ = generate.with_common_point(rng, args.n)
    return io.instance_doc(inst)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--input", help="instance JSON file")
    shared.add_argument("--output", help="write the report here instead of stdout")
    shared.add_argument("--svg", help="write an SVG figure")
    shared.add_argument("--oracle", action="store_true", help="compare with the exact or sampling oracle")
    shared.add_argument("--resolution", type=float, default=0.02, help="sampling oracle grid step")

    p = argparse.ArgumentParser(prog="mindiam", description="Minimum-diameter selection for uncertain points.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mindcs", parents=[shared], help="colored candidate sets")
    s.add_argument("--eps", type=float, default=0.25)
    s.add_argument("--strict-eps", action="store_true", help="shrink eps so the factor is 1 + eps")
    s.set_defaults(run=cmd_mindcs)

    s = sub.add_parser("imprecise", parents=[shared], help="convex regions, (1 + eps) route")
    s.add_argument("--eps", type=float, default=0.3)
    s.set_defaults(run=cmd_imprecise)

    s = sub.add_parser("lp", parents=[shared], help="rectilinear relaxation")
    s.add_argument("--dump-lp", help="write the program as text rows")
    s.set_defaults(run=cmd_lp)

    s = sub.add_parser("separability", parents=[shared], help="separating wedges")
    s.set_defaults(run=cmd_separability)

    s = sub.add_parser("oracle", parents=[shared], help="sampling oracle")
    s.set_defaults(run=cmd_oracle)

    s = sub.add_parser("gen", help="random instance")
    s.add_argument("--model", choices=["indecisive", "imprecise", "separable", "triple", "common"], default="imprecise")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n", type=int, default=3, help="regions")
    s.add_argument("--m", type=int, default=3, help="colors")
    s.add_argument("--k", type=int, default=4, help="largest color class")
    s.add_argument("--spread", type=float, default=10.0, help="side of the placement square")
    s.add_argument("--output")
    s.set_defaults(run=cmd_gen)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        body = args.run(args)
    except MindiamError as exc:
        err = {"code": getattr(exc, "code", type(exc).__name__), "message": str(exc)}
        if getattr(exc, "path", ""):
            err["path"] = exc.path
        sys.stderr.write(io.dumps({"error": err}) + "\n")
        return 1
    except OSError as exc:
        sys.stderr.write(io.dumps({"error": {"code": "IOError", "message": str(exc)}}) + "\n")
        return 1
    if args.command == "gen":
        text = io.dumps(body)
    else:
        report = {"command": argv, "instance": _stats(args.instance), **body}
        report["wall_time"] = time.perf_counter() - start
        text = io.dumps(report, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
