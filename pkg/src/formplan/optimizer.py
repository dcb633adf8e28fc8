"""Improvement pass over a planned path set.

After every robot is added, each existing path is re-planned in turn against
the occupancy of the remaining paths; the re-planned set is adopted only if
it strictly lowers the formation objective. The sweep therefore never makes
the objective worse.
"""

from __future__ import annotations

from .errors import PlanningError, UnreachableGoalError
from .model import PlanQuery, Roadmap
from .planner import (PathSet, Path, build_pathset, dijkstra_single,
                      evaluate_plan, occupancy_of_paths, plan_sequential)

# minimum strict improvement for a re-planned set to be adopted
IMPROVEMENT_TOL = 1e-9


def max_cost(pathset: PathSet) -> float:
    """Formation objective: the most expensive individual robot cost."""
    if not pathset.robot_costs:
        raise ValueError("empty path set has no cost")
    return max(pathset.robot_costs)


def optimize_paths(roadmap: Roadmap, pathset: PathSet, query: PlanQuery,
                   diagnostics: list[str] | None = None) -> PathSet:
    """One improvement sweep: re-plan each path against the others.

    Path i is removed, re-planned with Dijkstra against the occupancy of the
    remaining paths, and the candidate set is re-priced at final occupancy.
    It replaces the current set only when its objective is strictly lower
    (by more than IMPROVEMENT_TOL). Re-planning failures skip that index and
    are appended to ``diagnostics`` when a list is passed.
    """
    paths: list[Path] = list(pathset.paths)
    for i in range(len(paths)):
        _, c_prev = evaluate_plan(roadmap, paths)
        rest = paths[:i] + paths[i + 1:]
        occ = occupancy_of_paths(roadmap, rest)
        try:
            replanned = dijkstra_single(roadmap, occ, query.start, query.goal)
        except UnreachableGoalError as exc:
            if diagnostics is not None:
                diagnostics.append(f"path {i} not re-planned: {exc.reason}")
            continue
        candidate = paths[:i] + [replanned] + paths[i + 1:]
        _, c_new = evaluate_plan(roadmap, candidate)
        if c_new < c_prev - IMPROVEMENT_TOL:
            paths = candidate
    return build_pathset(roadmap, paths)


def plan_optimized(roadmap: Roadmap, query: PlanQuery,
                   opt_rounds: int = 1) -> PathSet:
    """Sequential planning with an improvement sweep after each new robot.

    ``opt_rounds`` repeats the sweep on each partial set (default one sweep,
    matching the base algorithm).
    """
    if opt_rounds < 0:
        raise ValueError("opt_rounds must be >= 0")
    partial = plan_sequential(roadmap, PlanQuery(
        start=query.start, goal=query.goal, robots=1, k=query.k))
    for _ in range(opt_rounds):
        partial = optimize_paths(roadmap, partial, query)
    for r in range(2, query.robots + 1):
        occ = occupancy_of_paths(roadmap, partial.paths)
        try:
            path = dijkstra_single(roadmap, occ, query.start, query.goal)
        except UnreachableGoalError as exc:
            raise PlanningError(
                f"robot {r - 1} cannot reach the goal ({exc.reason})",
                robot=r - 1) from exc
        partial = build_pathset(roadmap, list(partial.paths) + [path])
        for _ in range(opt_rounds):
            partial = optimize_paths(roadmap, partial, query)
    return partial
