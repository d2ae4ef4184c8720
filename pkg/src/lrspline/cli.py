"""Command-line driver.

Exit codes: 0 success, 1 usage error, 2 parse or semantic error, 3 the
``depend`` command found a linear dependence, 4 ``fuzz`` found a violated
invariant.
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings

from .dependence import find_active_dependence, peel
from .errors import LRRulesViolated, LRSplineError, UnknownScenario
from .fuzz import run_fuzz, seed_from_env
from .io import LRRuleWarning, load_mesh, parse_rational
from .mesh import HORIZONTAL, VERTICAL, SplitSpec, validate_lr_rules
from .render import render_png, render_svg
from .report import (
    bspline_dict,
    dependence_dict,
    hand_in_hand_dict,
    jsonable,
    mesh_summary,
    peel_dict,
    split_dict,
    to_json,
    to_tsv,
)
from .scenarios import NAMES, scenario
from .space import collection, dim_lr, hand_in_hand

OK, USAGE, INPUT, DEPENDENT, PROPERTY = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _source(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--scenario", choices=NAMES, metavar="NAME", help="built-in mesh")
    g.add_argument("--mesh", metavar="FILE", help="lrspec/1 mesh file")
    p.add_argument("--strict", action="store_true", help="LR-rule violations in a file are errors")


def _output(p, figure=False):
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    if figure:
        p.add_argument("--figure", metavar="PNG", help="also draw the mesh and relevant supports")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lrspline", description="Exact LR-mesh spline analysis.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("dim", help="spline space dimension")
    _source(p)
    _output(p)

    p = sub.add_parser("basis", help="MS or LR B-spline collection")
    _source(p)
    p.add_argument("--kind", choices=("ms", "lr"), default="lr")
    _output(p, figure=True)

    p = sub.add_parser("depend", help="exact linear dependence analysis")
    _source(p)
    p.add_argument("--kind", choices=("ms", "lr"), default="lr")
    _output(p, figure=True)

    p = sub.add_parser("peel", help="peeling algorithm")
    _source(p)
    p.add_argument("--kind", choices=("ms", "lr"), default="lr")
    p.add_argument("--improved", action="store_true", help="also peel owners of exclusive T-vertices")
    p.add_argument("--start", choices=("auto", "candidates"), default=None,
                   help="initial overloaded set; defaults to the scenario's candidates when it has them")
    _output(p, figure=True)

    p = sub.add_parser("handinhand", help="hand-in-hand test for a new split")
    _source(p)
    p.add_argument("--split", metavar="AXIS:AT:FROM:TO[:MULT]",
                   help="e.g. v:5/8:1/3:1; defaults to the scenario's pending split")
    p.add_argument("--kind", choices=("ms", "lr"), default="lr")
    _output(p)

    p = sub.add_parser("render", help="draw the mesh")
    _source(p)
    p.add_argument("--svg", metavar="PATH", help="deterministic SVG output")
    p.add_argument("--png", metavar="PATH", help="matplotlib PNG output")
    p.add_argument("--overlay", choices=("none", "highlight", "circuit-ms", "circuit-lr"),
                   default="none")
    p.add_argument("--t-vertices", action="store_true", help="mark the T-vertices")

    p = sub.add_parser("validate", help="LR-rule report")
    _source(p)
    _output(p)

    p = sub.add_parser("fuzz", help="randomized invariant checks")
    p.add_argument("--degree", action="append", metavar="P1,P2",
                   help="bidegree, repeatable (default 0,0 1,1 2,2 3,2)")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--steps", type=int, default=4)
    p.add_argument("--seed", type=int, default=None, help="overrides LRSPLINE_SEED")
    _output(p)

    p = sub.add_parser("scenarios", help="list the built-in meshes")
    _output(p)
    return parser


def _load(args):
    if args.scenario:
        return scenario(args.scenario)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", LRRuleWarning)
        mesh = load_mesh(args.mesh, strict=args.strict)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return _Anon(mesh)


class _Anon:
    """Stand-in for a scenario when the mesh comes from a file."""

    def __init__(self, mesh):
        self.name, self.mesh = None, mesh
        self.highlight, self.pending, self.candidates = (), None, None


def parse_split(text) -> SplitSpec:
    parts = text.split(":")
    if len(parts) not in (4, 5) or parts[0] not in ("v", "h"):
        raise UsageError(f"bad split {text!r}; expected AXIS:AT:FROM:TO[:MULT]")
    axis = VERTICAL if parts[0] == "v" else HORIZONTAL
    mult = int(parts[4]) if len(parts) == 5 else 1
    at, lo, hi = (parse_rational(v, "split") for v in parts[1:4])
    return SplitSpec(axis, at, lo, hi, mult)


def _emit(args, data):
    text = to_tsv(data) if args.format == "tsv" else to_json(data)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_dim(args, sc):
    violations = validate_lr_rules(sc.mesh) if sc.mesh.is_lr else []
    if violations and args.strict:
        raise LRRulesViolated("; ".join(v.message for v in violations))
    return OK, {"dim": dim_lr(sc.mesh, check_rules=False), "lr_rules_hold": not violations}


def _cmd_basis(args, sc):
    coll = collection(sc.mesh, args.kind)
    _figure(args, sc.mesh, coll.bsplines)
    return OK, {"kind": coll.kind, "cardinality": len(coll),
                "bsplines": [bspline_dict(B) for B in coll]}


def _cmd_depend(args, sc):
    coll = collection(sc.mesh, args.kind)
    rep = find_active_dependence(coll)
    _figure(args, sc.mesh, rep.circuit_bsplines())
    data = {"kind": coll.kind, "cardinality": len(coll), **dependence_dict(rep)}
    if rep.circuit:
        data["circuit_size"] = len(rep.circuit)
    return (OK if rep.independent else DEPENDENT), data


def _cmd_peel(args, sc):
    coll = collection(sc.mesh, args.kind)
    start_mode = args.start or ("candidates" if sc.candidates else "auto")
    if start_mode == "candidates" and not sc.candidates:
        raise UsageError("this mesh has no designated candidate set")
    start = sc.candidates if start_mode == "candidates" else None
    rep = peel(coll, improved=args.improved, start=start)
    _figure(args, sc.mesh, sorted(rep.overloaded_bsplines, key=lambda B: B.key))
    return OK, {"kind": coll.kind, "start": start_mode, **peel_dict(rep)}


def _cmd_handinhand(args, sc):
    split = parse_split(args.split) if args.split else sc.pending
    if split is None:
        raise UsageError("--split is required for this mesh")
    rep = hand_in_hand(sc.mesh, split, args.kind)
    return OK, {"kind": args.kind.upper(), "split": split_dict(split), **hand_in_hand_dict(rep)}


def _overlay(args, sc):
    if args.overlay == "highlight":
        return list(sc.highlight)
    if args.overlay.startswith("circuit"):
        rep = find_active_dependence(collection(sc.mesh, args.overlay[-2:]), diagnose=False)
        return rep.circuit_bsplines()
    return []


def _cmd_render(args, sc):
    if not (args.svg or args.png):
        raise UsageError("render needs --svg or --png")
    supports = _overlay(args, sc)
    marks = [v.position for v in sc.mesh.vertices if v.kind.startswith("T-")] if args.t_vertices else []
    title = getattr(sc, "name", None)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(sc.mesh, supports, marks, title))
    if args.png:
        render_png(sc.mesh, args.png, supports, marks, title)
    return OK, None


def _cmd_validate(args, sc):
    violations = validate_lr_rules(sc.mesh)
    data = {"lr_mesh": sc.mesh.is_lr, "violations": [
        {"rule": v.rule, "step": v.step, "message": v.message} for v in violations]}
    code = INPUT if (violations and args.strict) else OK
    return code, data


def _cmd_fuzz(args):
    try:
        degrees = [tuple(int(v) for v in d.split(",")) for d in (args.degree or ["0,0", "1,1", "2,2", "3,2"])]
        seed = args.seed if args.seed is not None else seed_from_env()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if any(len(d) != 2 or min(d) < 0 for d in degrees) or args.count < 1 or args.steps < 0:
        raise UsageError("fuzz needs bidegrees P1,P2 >= 0, a positive count and nonnegative steps")
    results = run_fuzz(degrees, args.count, seed, args.steps)
    data = {"seed": seed, "results": [
        {"degree": list(d), "meshes": f.meshes, "steps": f.steps, "ok": f.ok,
         "dim_failures": len(f.dim_failures), "unity_failures": len(f.unity_failures),
         "ms_circuit_sizes": sorted(f.ms_circuits), "lr_circuit_sizes": sorted(f.lr_circuits)}
        for d, f in results.items()]}
    return (OK if all(f.ok for f in results.values()) else PROPERTY), data


def _figure(args, mesh, supports):
    path = getattr(args, "figure", None)
    if path:
        render_png(mesh, path, list(supports))


_COMMANDS = {"dim": _cmd_dim, "basis": _cmd_basis, "depend": _cmd_depend, "peel": _cmd_peel,
             "handinhand": _cmd_handinhand, "render": _cmd_render, "validate": _cmd_validate}


def run_command(argv):
    """Run one command; returns ``(exit_code, report)`` without printing."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return USAGE, {"error": str(exc)}
    start = time.perf_counter()
    try:
        if args.command == "scenarios":
            code, data = OK, {"scenarios": [{"name": n, "caption": scenario(n).caption}
                                            for n in NAMES]}
        elif args.command == "fuzz":
            code, data = _cmd_fuzz(args)
        else:
            sc = _load(args)
            code, data = _COMMANDS[args.command](args, sc)
            if data is not None:
                data = {"mesh": mesh_summary(sc.mesh), **data}
    except (UsageError, UnknownScenario) as exc:
        return USAGE, {"error": str(exc)}
    except (LRSplineError, OSError) as exc:
        return INPUT, {"error": str(exc), "kind": type(exc).__name__}
    if data is None:
        return code, None
    report = {"command": list(argv), **data, "elapsed_ms": int((time.perf_counter() - start) * 1000)}
    return code, jsonable(report)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    code, report = run_command(argv)
    if report is None:
        return code
    if "error" in report:
        print(f"error: {report['error']}", file=sys.stderr)
        return code
    _emit(args, report)
    return code


if __name__ == "__main__":
    sys.exit(main())
