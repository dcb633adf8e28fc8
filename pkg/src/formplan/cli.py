"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 planning infeasible,
3 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench, mapgen, model, render, roadmap as rm_mod
from .errors import (ConstructionError, FormplanError, NoFeasiblePlanError,
                     OracleBudgetError, PlanningError, UnreachableGoalError)
from .model import PlanQuery
from .optimizer import plan_optimized
from .oracle import OracleLimits, exhaustive_optimum
from .planner import pathset_from_json, plan_sequential

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_ORACLE_BUDGET = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write(data: bytes | str, out: str | None) -> None:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _resolve_terminals(rm, args) -> tuple[int, int]:
    if args.start_id is not None or args.goal_id is not None:
        if args.start_id is None or args.goal_id is None:
            raise ValueError("--start-id and --goal-id must be given together")
        for vid in (args.start_id, args.goal_id):
            if vid not in rm.vertices:
                raise ValueError(f"vertex id {vid} not in roadmap")
        return args.start_id, args.goal_id
    return rm_mod.extreme_terminals(rm)


def _cmd_gen_map(args) -> int:
    params = {
        "width": args.width, "height": args.height, "rows": args.rows,
        "cols": args.cols, "fill": args.fill, "count": args.count,
        "min_size": args.min_size, "max_size": args.max_size,
        "margin": args.margin,
    }
    known = set(mapgen.default_params(args.kind))
    params = {k: v for k, v in params.items() if v is not None and k in known}
    pmap = mapgen.generate_map(args.kind, params, seed=args.seed)
    _write(model.save_map(pmap), args.out)
    return EXIT_OK


def _cmd_build_roadmap(args) -> int:
    pmap = model.load_map_file(args.map)
    params = rm_mod.RoadmapBuildParams(
        sampling_step=args.step, min_clearance=args.min_clearance)
    rm = rm_mod.construct_roadmap(pmap, params, prune=not args.keep_tails)
    _write(model.save_roadmap(rm), args.out)
    print(f"roadmap: {rm.n_vertices} vertices, {rm.n_edges} edges",
          file=sys.stderr)
    return EXIT_OK


def _cmd_plan(args) -> int:
    rm = model.load_roadmap_file(args.roadmap)
    start, goal = _resolve_terminals(rm, args)
    planning_rm = rm_mod.finalize_roadmap(rm, args.robots, args.k, args.alpha)
    query = PlanQuery(start=start, goal=goal, robots=args.robots, k=args.k)
    if args.optimize:
        ps = plan_optimized(planning_rm, query, opt_rounds=args.opt_rounds)
    else:
        ps = plan_sequential(planning_rm, query)
    _write(ps.to_json(), args.out)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    rm = model.load_roadmap_file(args.roadmap)
    start, goal = _resolve_terminals(rm, args)
    planning_rm = rm_mod.finalize_roadmap(rm, args.robots, args.k, args.alpha)
    query = PlanQuery(start=start, goal=goal, robots=args.robots, k=args.k)
    limits = OracleLimits(max_simple_paths=args.max_paths,
                          max_combinations=args.max_combos)
    ps = exhaustive_optimum(planning_rm, query, limits)
    _write(ps.to_json(), args.out)
    return EXIT_OK


def _cmd_bench(args) -> int:
    config_path = Path(args.config)
    config = json.loads(config_path.read_text(encoding="utf-8"))
    records = bench.run_benchmark(config, base_dir=config_path.parent)
    out = args.out or config.get("output")
    if out:
        bench.save_records(records, out)
    summary = bench.summarize(records)
    text = bench.format_summary(summary)
    _write(text, args.summary)
    return EXIT_OK


def _cmd_render(args) -> int:
    pmap = model.load_map_file(args.map)
    rm = model.load_roadmap_file(args.roadmap)
    ps = None
    if args.plan is not None:
        doc = json.loads(Path(args.plan).read_text(encoding="utf-8"))
        robots = max(1, len(doc.get("paths", [])))
        # plans are produced on the degree-reduced graph; rebuild it to
        # resolve chain vertex ids (costs are irrelevant for drawing)
        rm = rm_mod.finalize_roadmap(rm, robots, 0.0, 0.0)
        ps = pathset_from_json(json.dumps(doc), rm)
    _write(render.render_svg(pmap, rm, ps), args.out)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="formplan",
                     description="Split-and-merge formation path planning")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-map", help="generate a synthetic map")
    p.add_argument("--kind", choices=mapgen.KINDS, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=float)
    p.add_argument("--height", type=float)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--fill", type=float)
    p.add_argument("--count", type=int)
    p.add_argument("--min-size", type=float, dest="min_size")
    p.add_argument("--max-size", type=float, dest="max_size")
    p.add_argument("--margin", type=float)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_gen_map)

    p = sub.add_parser("build-roadmap", help="build a roadmap from a map")
    p.add_argument("map")
    p.add_argument("--step", type=float, default=2.0,
                   help="boundary sampling pitch (m)")
    p.add_argument("--min-clearance", type=float, default=1.0,
                   dest="min_clearance")
    p.add_argument("--keep-tails", action="store_true",
                   help="skip pruning of dead-end chains")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_build_roadmap)

    p = sub.add_parser("plan", help="plan paths for a formation")
    p.add_argument("roadmap")
    p.add_argument("--robots", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--alpha", type=float, default=1.0,
                   help="inverse-clearance cost weight")
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--opt-rounds", type=int, default=1, dest="opt_rounds")
    p.add_argument("--start-id", type=int, default=None, dest="start_id")
    p.add_argument("--goal-id", type=int, default=None, dest="goal_id")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("oracle", help="certified optimum by exhaustive search")
    p.add_argument("roadmap")
    p.add_argument("--robots", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--max-paths", type=int, default=1000, dest="max_paths")
    p.add_argument("--max-combos", type=int, default=1_000_000,
                   dest="max_combos")
    p.add_argument("--start-id", type=int, default=None, dest="start_id")
    p.add_argument("--goal-id", type=int, default=None, dest="goal_id")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("bench", help="run a benchmark configuration")
    p.add_argument("config")
    p.add_argument("-o", "--out", default=None, help="records JSON path")
    p.add_argument("--summary", default=None, help="summary text path")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("render", help="render map/roadmap/plan to SVG")
    p.add_argument("map")
    p.add_argument("roadmap")
    p.add_argument("plan", nargs="?", default=None)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=_cmd_render)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except OracleBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE_BUDGET
    except (PlanningError, UnreachableGoalError, NoFeasiblePlanError,
            ConstructionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (FormplanError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
