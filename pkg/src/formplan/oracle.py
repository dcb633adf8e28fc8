"""Exhaustive-search optimality oracle for small instances.

The certified joint optimum is defined over tuples of simple start->goal
paths, priced at final occupancy with the min-max objective (ties broken by
smaller total cost, then lexicographic path order). Tuples that share an
edge in opposite directions or have no consistent wait schedule are
infeasible. The search is exponential; hard budgets guard against blowup.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

from .errors import (NoFeasiblePlanError, OracleBudgetError,
                     OracleInconsistencyError)
from .model import PlanQuery, Roadmap
from .planner import (PathSet, Path, build_pathset, evaluate_plan,
                      has_schedule_conflict)

GAP_TOL = 1e-9


@dataclass(frozen=True)
class OracleLimits:
    """Budgets bounding the exponential enumeration."""

    max_simple_paths: int = 1000
    max_combinations: int = 1_000_000

    def __post_init__(self):
        if self.max_simple_paths <= 0 or self.max_combinations <= 0:
            raise ValueError("oracle limits must be positive")


def enumerate_simple_paths(roadmap: Roadmap, start: int, goal: int,
                           limit: int) -> list[Path]:
    """All simple start->goal paths in lexicographic vertex-id order."""
    if start not in roadmap.vertices or goal not in roadmap.vertices:
        raise KeyError(f"unknown terminal vertex ({start}, {goal})")
    result: list[Path] = []
    path = [start]
    on_path = {start}
    # stack of per-depth neighbor iterators keeps the DFS explicit
    stack = [iter(roadmap.neighbors(start))]
    while stack:
        try:
            v, _ = next(stack[-1])
        except StopIteration:
            stack.pop()
            on_path.discard(path.pop())
            continue
        if v in on_path:
            continue
        if v == goal:
            if len(result) >= limit:
                raise OracleBudgetError(
                    f"more than {limit} simple paths between {start} and {goal}",
                    count=limit + 1)
            result.append(tuple(path) + (goal,))
            continue
        path.append(v)
        on_path.add(v)
        stack.append(iter(roadmap.neighbors(v)))
    return result


def _opposite_sharing(paths: tuple[Path, ...]) -> bool:
    directions: dict[tuple[int, int], tuple[int, int]] = {}
    for path in paths:
        for a, b in zip(path, path[1:]):
            key = (min(a, b), max(a, b))
            prev = directions.get(key)
            if prev is None:
                directions[key] = (a, b)
            elif prev != (a, b):
                return True
    return False


def exhaustive_optimum(roadmap: Roadmap, query: PlanQuery,
                       limits: OracleLimits = OracleLimits()) -> PathSet:
    """Certified optimal path set by enumeration of simple-path tuples.

    Pricing is symmetric under robot permutation, so multisets of paths are
    enumerated instead of ordered tuples; the winner is reported in its
    lexicographically smallest arrangement, which equals the tie-break over
    all tuples. The combination budget is still counted as |paths|^R.
    """
    paths = enumerate_simple_paths(roadmap, query.start, query.goal,
                                   limits.max_simple_paths)
    if not paths:
        raise NoFeasiblePlanError(
            f"no simple path between {query.start} and {query.goal}")
    if len(paths) ** query.robots > limits.max_combinations:
        raise OracleBudgetError(
            f"{len(paths)}^{query.robots} combinations exceed the budget "
            f"{limits.max_combinations}", count=len(paths) ** query.robots)
    best_key: tuple[float, float, tuple[Path, ...]] | None = None
    for combo in combinations_with_replacement(paths, query.robots):
        if _opposite_sharing(combo):
            continue
        if has_schedule_conflict(combo):
            continue
        costs, objective = evaluate_plan(roadmap, combo)
        key = (objective, sum(costs), combo)
        if best_key is None or key < best_key:
            best_key = key
    if best_key is None:
        raise NoFeasiblePlanError(
            "every path combination violates the collision constraints")
    return build_pathset(roadmap, best_key[2])


def gap(c: float, c_opt: float) -> float:
    """Relative excess (c - c_opt) / c_opt of a solution over the optimum.

    Values within GAP_TOL of the optimum clamp to exactly 0. A cost below
    the certified optimum (beyond tolerance) means the oracle or the planner
    is broken and raises OracleInconsistencyError.
    """
    if c_opt <= 0:
        raise ValueError("optimum cost must be positive")
    if c < c_opt - GAP_TOL:
        raise OracleInconsistencyError(
            f"solution cost {c} undercuts the certified optimum {c_opt}")
    if abs(c - c_opt) <= GAP_TOL:
        return 0.0
    return (c - c_opt) / c_opt
