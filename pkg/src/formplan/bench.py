"""Benchmark harness: batch runs over maps, robot counts, and k values.

Each configuration builds a roadmap, picks terminals (by default the most
left-bottom and most right-top vertices), times the sequential and the
optimized planner, and optionally certifies the result against the
exhaustive oracle. Per-configuration failures are recorded, not fatal.
"""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import dataclass, asdict
from pathlib import Path as FsPath
from typing import Mapping, Sequence

from . import mapgen, model, roadmap as rm_mod
from .errors import FormplanError, NoFeasiblePlanError, OracleBudgetError
from .model import PlanQuery, PolygonMap, Roadmap
from .optimizer import plan_optimized
from .oracle import OracleLimits, exhaustive_optimum, gap
from .planner import plan_sequential

OPTIMAL_GAP = 1e-9


@dataclass
class ExperimentRecord:
    """Result of one (map, start, goal, R, k) configuration."""

    map_name: str
    nodes: int
    start: int
    goal: int
    robots: int
    k: float
    status: str = "ok"
    error: str | None = None
    seq_objective: float | None = None
    opt_objective: float | None = None
    oracle_objective: float | None = None
    gap_seq: float | None = None
    gap_opt: float | None = None
    runtime_seq: float = 0.0
    runtime_opt: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "ExperimentRecord":
        return cls(**doc)


def _load_map_spec(spec: Mapping, base_dir: FsPath | None) -> PolygonMap:
    if "file" in spec:
        path = FsPath(spec["file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return model.load_map_file(path)
    return mapgen.generate_map(spec["kind"], spec.get("params"),
                               seed=int(spec.get("seed", 0)))


def _build_params(cfg: Mapping) -> rm_mod.RoadmapBuildParams:
    build = cfg.get("build", {})
    return rm_mod.RoadmapBuildParams(
        sampling_step=float(build.get("sampling_step", 2.0)),
        min_clearance=float(build.get("min_clearance", 1.0)),
        alpha=float(build.get("alpha", 1.0)))


def run_benchmark(config: Mapping, base_dir: FsPath | str | None = None
                  ) -> list[ExperimentRecord]:
    """Run every (map, R, k) combination of a benchmark configuration.

    Config keys: ``maps`` (list of {"file": path} or {"kind", "seed",
    "params"}), ``robots`` (list of R), ``ks`` (list of k), optional
    ``build`` (sampling_step, min_clearance, alpha), optional ``terminals``
    ({"start_id", "goal_id"}, default extremes), optional ``oracle``
    ({"enabled", "max_simple_paths", "max_combinations"}), optional
    ``opt_rounds``.
    """
    base = FsPath(base_dir) if base_dir is not None else None
    params = _build_params(config)
    alpha = params.alpha
    robots_list = [int(r) for r in config.get("robots", [1])]
    k_list = [float(k) for k in config.get("ks", [100.0])]
    oracle_cfg = config.get("oracle", {})
    oracle_on = bool(oracle_cfg.get("enabled", False))
    limits = OracleLimits(
        max_simple_paths=int(oracle_cfg.get("max_simple_paths", 1000)),
        max_combinations=int(oracle_cfg.get("max_combinations", 1_000_000)))
    opt_rounds = int(config.get("opt_rounds", 1))
    terminals_cfg = config.get("terminals")

    records: list[ExperimentRecord] = []
    for spec in config.get("maps", []):
        try:
            pmap = _load_map_spec(spec, base)
            base_roadmap = rm_mod.construct_roadmap(pmap, params)
            reduced = rm_mod.reduce_degree(base_roadmap)
            if terminals_cfg:
                start, goal = int(terminals_cfg["start_id"]), int(terminals_cfg["goal_id"])
            else:
                start, goal = rm_mod.extreme_terminals(base_roadmap)
        except (FormplanError, OSError, KeyError, ValueError) as exc:
            for robots in robots_list:
                for k in k_list:
                    records.append(ExperimentRecord(
                        map_name=str(spec.get("file") or spec.get("kind", "?")),
                        nodes=0, start=-1, goal=-1, robots=robots, k=k,
                        status="failed", error=str(exc)))
            continue
        for robots in robots_list:
            for k in k_list:
                records.append(_run_one(
                    pmap.name, base_roadmap.n_vertices, reduced, start, goal,
                    robots, k, alpha, oracle_on, limits, opt_rounds))
    return records


def _run_one(map_name: str, nodes: int, reduced: Roadmap, start: int, goal: int,
             robots: int, k: float, alpha: float, oracle_on: bool,
             limits: OracleLimits, opt_rounds: int) -> ExperimentRecord:
    rec = ExperimentRecord(map_name=map_name, nodes=nodes,
                           start=start, goal=goal, robots=robots, k=k)
    try:
        planning_rm = rm_mod.evaluate_edge_costs(reduced, robots, k, alpha)
        query = PlanQuery(start=start, goal=goal, robots=robots, k=k)
        t0 = time.perf_counter()
        seq = plan_sequential(planning_rm, query)
        rec.runtime_seq = time.perf_counter() - t0
        t0 = time.perf_counter()
        opt = plan_optimized(planning_rm, query, opt_rounds=opt_rounds)
        rec.runtime_opt = time.perf_counter() - t0
        rec.seq_objective = seq.objective
        rec.opt_objective = opt.objective
    except FormplanError as exc:
        rec.status = "failed"
        rec.error = str(exc)
        return rec
    if oracle_on:
        try:
            best = exhaustive_optimum(planning_rm, query, limits)
            rec.oracle_objective = best.objective
            rec.gap_seq = gap(seq.objective, best.objective)
            rec.gap_opt = gap(opt.objective, best.objective)
        except (OracleBudgetError, NoFeasiblePlanError) as exc:
            # planning succeeded; record it without certification
            rec.error = f"oracle skipped: {exc}"
    return rec


def summarize(records: Sequence[ExperimentRecord]) -> dict:
    """Aggregate optimality percentages, gap statistics, and a runtime table."""
    if not records:
        raise ValueError("no records to summarize")
    ok = [r for r in records if r.status == "ok"]
    failed = len(records) - len(ok)
    summary: dict = {"total": len(records), "failed": failed}

    with_oracle = [r for r in ok if r.oracle_objective is not None]
    if with_oracle:
        gaps_seq = [r.gap_seq for r in with_oracle]
        gaps_opt = [r.gap_opt for r in with_oracle]
        summary["optimality"] = {
            "samples": len(with_oracle),
            "seq_optimal_pct": 100.0 * sum(
                1 for g in gaps_seq if g <= OPTIMAL_GAP) / len(with_oracle),
            "opt_optimal_pct": 100.0 * sum(
                1 for g in gaps_opt if g <= OPTIMAL_GAP) / len(with_oracle),
            "gap_seq": _gap_stats(gaps_seq),
            "gap_opt": _gap_stats(gaps_opt),
        }
    else:
        summary["optimality"] = None

    table: dict[tuple[str, int], dict[int, tuple[float, float]]] = {}
    for r in ok:
        row = table.setdefault((r.map_name, r.nodes), {})
        runtimes = row.setdefault(r.robots, (0.0, 0.0))
        # mean over k values for this (map, R) cell
        prev_opt, prev_seq = runtimes
        row[r.robots] = (prev_opt + r.runtime_opt, prev_seq + r.runtime_seq)
    counts: dict[tuple[str, int, int], int] = {}
    for r in ok:
        key = (r.map_name, r.nodes, r.robots)
        counts[key] = counts.get(key, 0) + 1
    runtime_rows = []
    for (map_name, nodes), cells in sorted(table.items()):
        row = {"map": map_name, "nodes": nodes, "cells": {}}
        for robots, (opt_sum, seq_sum) in sorted(cells.items()):
            n = counts[(map_name, nodes, robots)]
            row["cells"][robots] = {"opt": opt_sum / n, "nonopt": seq_sum / n}
        runtime_rows.append(row)
    summary["runtimes"] = runtime_rows
    return summary


def _gap_stats(gaps: Sequence[float]) -> dict:
    ordered = sorted(gaps)
    n = len(ordered)

    def pct(p: float) -> float:
        idx = min(n - 1, max(0, round(p / 100.0 * (n - 1))))
        return ordered[idx]

    return {
        "mean": statistics.fmean(ordered),
        "max": ordered[-1],
        "p50": pct(50), "p90": pct(90), "p99": pct(99),
    }


def format_summary(summary: Mapping) -> str:
    """Plain-text rendering: optimality section plus an aligned runtime table."""
    lines: list[str] = []
    lines.append(f"configurations: {summary['total']} "
                 f"({summary['failed']} failed)")
    opt = summary.get("optimality")
    if opt is None:
        lines.append("optimality: absent (no oracle results)")
    else:
        lines.append(
            f"optimal solutions: sequential {opt['seq_optimal_pct']:.1f}%  "
            f"optimized {opt['opt_optimal_pct']:.1f}%  "
            f"({opt['samples']} samples)")
        for label, stats in (("seq", opt["gap_seq"]), ("opt", opt["gap_opt"])):
            lines.append(
                f"gap[{label}]: mean {stats['mean']:.4f}  max {stats['max']:.4f}  "
                f"p50 {stats['p50']:.4f}  p90 {stats['p90']:.4f}  "
                f"p99 {stats['p99']:.4f}")
    rows = summary.get("runtimes", [])
    if rows:
        all_robots = sorted({r for row in rows for r in row["cells"]})
        header = f"{'map':<24}{'nodes':>6}"
        for r in all_robots:
            header += f"{f'opt R={r}':>14}{f'nonopt R={r}':>14}"
        lines.append("")
        lines.append(header)
        lines.append("-" * len(header))
        for row in rows:
            line = f"{row['map']:<24}{row['nodes']:>6}"
            for r in all_robots:
                cell = row["cells"].get(r)
                if cell is None:
                    line += f"{'-':>14}{'-':>14}"
                else:
                    line += f"{cell['opt']:>14.4f}{cell['nonopt']:>14.4f}"
            lines.append(line)
    return "\n".join(lines) + "\n"


def save_records(records: Sequence[ExperimentRecord], path) -> None:
    doc = [r.to_dict() for r in records]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_records(path) -> list[ExperimentRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        return [ExperimentRecord.from_dict(doc) for doc in json.load(fh)]
