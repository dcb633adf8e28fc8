"""Sequential multi-robot path planning on an evaluated roadmap.

Robots of a formation share a start and a goal vertex. They are planned one
after another with a Dijkstra search whose edge prices depend on how many
previously planned robots already use the edge in the same direction;
opposite-direction use blocks the edge outright. Final per-robot costs are
re-priced at the final occupancy, and the formation objective is the most
expensive individual path.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (CapacityError, PlanningError, RoadmapFormatError,
                     SchedulingConflictError, UnreachableGoalError)
from .model import PlanQuery, Roadmap

Path = tuple[int, ...]
Direction = tuple[int, int]
# edge id -> (number of robots, direction they all travel)
Occupancy = dict[int, tuple[int, Direction]]


@dataclass(frozen=True)
class PathSet:
    """One planned path per robot plus final costs and edge occupancy."""

    paths: tuple[Path, ...]
    robot_costs: tuple[float, ...]
    occupancy: Mapping[int, tuple[int, Direction]]
    objective: float

    def to_json(self) -> bytes:
        doc = {
            "paths": [list(p) for p in self.paths],
            "costs": list(self.robot_costs),
            "objective": self.objective,
        }
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def pathset_from_json(data: bytes | str, roadmap: Roadmap) -> PathSet:
    doc = json.loads(data.decode("utf-8") if isinstance(data, bytes) else data)
    paths = [tuple(int(v) for v in p) for p in doc["paths"]]
    return build_pathset(roadmap, paths)


@dataclass(frozen=True)
class Schedule:
    """Wait-synchronized arrival steps, one (vertex, step) sequence per robot.

    Repeated vertices are waits inserted immediately before a shared vertex.
    k_min is the common goal-arrival step.
    """

    steps: tuple[tuple[tuple[int, int], ...], ...]
    k_min: int

    def to_json(self) -> bytes:
        doc = {"steps": [[[v, s] for v, s in robot] for robot in self.steps],
               "k_min": self.k_min}
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


@dataclass(frozen=True)
class Violation:
    """One broken feasibility constraint (1=start, 2=goal, 3=collision, 4=schedule)."""

    constraint: int
    robots: tuple[int, ...]
    detail: str


class SearchState:
    """Working state of one Dijkstra run: costs, predecessors, queue, visited."""

    def __init__(self, roadmap: Roadmap, start: int):
        self.cost: dict[int, float] = {vid: float("inf") for vid in roadmap.vertices}
        self.pred: dict[int, int | None] = {vid: None for vid in roadmap.vertices}
        self.cost[start] = 0.0
        self.heap: list[tuple[float, int]] = [(0.0, start)]
        self.visited: set[int] = set()


def robots_in_segment(occupancy: Mapping[int, tuple[int, Direction]],
                      edge_id: int, direction: Direction) -> int | None:
    """Formation size on an edge if one more robot joins in ``direction``.

    Returns 1 + the number of prior same-direction users, or None when a
    prior robot traverses the edge in the opposite direction (blocked).
    """
    entry = occupancy.get(edge_id)
    if entry is None:
        return 1
    count, used_dir = entry
    if used_dir == direction:
        return count + 1
    return None


def occupancy_of_paths(roadmap: Roadmap, paths: Iterable[Sequence[int]]) -> Occupancy:
    """Per-edge user count and direction; raises on opposite-direction sharing."""
    occ: Occupancy = {}
    for i, path in enumerate(paths):
        for a, b in zip(path, path[1:]):
            e = roadmap.edge_between(a, b)
            if e is None:
                raise RoadmapFormatError(
                    f"path {i} steps over a missing edge ({a}, {b})")
            entry = occ.get(e.id)
            if entry is None:
                occ[e.id] = (1, (a, b))
            elif entry[1] == (a, b):
                occ[e.id] = (entry[0] + 1, entry[1])
            else:
                raise RoadmapFormatError(
                    f"edge {e.id} is used in both directions")
    return occ


def _reachable(roadmap: Roadmap, start: int, goal: int) -> bool:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        if u == goal:
            return True
        for v, _ in roadmap.neighbors(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return False


def dijkstra_single(roadmap: Roadmap,
                    occupancy: Mapping[int, tuple[int, Direction]],
                    start: int, goal: int) -> Path:
    """Cheapest start->goal path under the current occupancy.

    Traversing edge (u, v) costs its cost-vector entry for the formation
    size returned by robots_in_segment; blocked edges are untraversable.
    Equal-cost relaxations prefer the smaller predecessor id, and the queue
    pops the smaller vertex id among equal costs, so results are
    deterministic.
    """
    if start not in roadmap.vertices or goal not in roadmap.vertices:
        raise RoadmapFormatError(f"unknown terminal vertex ({start}, {goal})")
    st = SearchState(roadmap, start)
    while st.heap:
        c, u = heapq.heappop(st.heap)
        if u in st.visited:
            continue
        st.visited.add(u)
        if u == goal:
            break
        for v, eid in roadmap.neighbors(u):
            if v in st.visited:
                continue
            size = robots_in_segment(occupancy, eid, (u, v))
            if size is None:
                continue
            costs = roadmap.edges[eid].costs
            if costs is None:
                raise RoadmapFormatError(
                    f"edge {eid} has no cost vector; run evaluate_edge_costs")
            if size > len(costs):
                raise CapacityError(
                    f"edge {eid} needs cost entry {size} but capacity is {len(costs)}")
            nc = c + costs[size - 1]
            if nc < st.cost[v]:
                st.cost[v] = nc
                st.pred[v] = u
                heapq.heappush(st.heap, (nc, v))
            elif nc == st.cost[v] and st.pred[v] is not None and u < st.pred[v]:
                st.pred[v] = u
    if goal not in st.visited:
        if _reachable(roadmap, start, goal):
            raise UnreachableGoalError(
                f"goal {goal} unreachable: all routes blocked by prior robots",
                reason="blocked")
        raise UnreachableGoalError(
            f"goal {goal} unreachable: graph disconnected", reason="disconnected")
    path = [goal]
    while path[-1] != start:
        prev = st.pred[path[-1]]
        assert prev is not None
        path.append(prev)
    path.reverse()
    return tuple(path)


def evaluate_plan(roadmap: Roadmap,
                  paths: Sequence[Sequence[int]]) -> tuple[tuple[float, ...], float]:
    """Final per-robot costs and objective at final occupancy.

    n_e is the number of robots whose path uses edge e; robot i pays the
    n_e-th cost entry on every edge of its path. The objective is the
    maximum robot cost.
    """
    counts: dict[int, int] = {}
    path_edges: list[list[int]] = []
    for i, path in enumerate(paths):
        eids: list[int] = []
        for a, b in zip(path, path[1:]):
            e = roadmap.edge_between(a, b)
            if e is None:
                raise RoadmapFormatError(
                    f"path {i} steps over a missing edge ({a}, {b})")
            eids.append(e.id)
        path_edges.append(eids)
        for eid in set(eids):
            counts[eid] = counts.get(eid, 0) + 1
    robot_costs = []
    for eids in path_edges:
        total = 0.0
        for eid in eids:
            costs = roadmap.edges[eid].costs
            if costs is None:
                raise RoadmapFormatError(
                    f"edge {eid} has no cost vector; run evaluate_edge_costs")
            n = counts[eid]
            if n > len(costs):
                raise CapacityError(
                    f"edge {eid} carries {n} robots but capacity is {len(costs)}")
            total += costs[n - 1]
        robot_costs.append(total)
    objective = max(robot_costs) if robot_costs else 0.0
    return tuple(robot_costs), objective


def build_pathset(roadmap: Roadmap, paths: Sequence[Sequence[int]]) -> PathSet:
    occ = occupancy_of_paths(roadmap, paths)
    robot_costs, objective = evaluate_plan(roadmap, paths)
    return PathSet(paths=tuple(tuple(p) for p in paths),
                   robot_costs=robot_costs, occupancy=occ, objective=objective)


def plan_sequential(roadmap: Roadmap, query: PlanQuery) -> PathSet:
    """Plan robots 1..R in order, each against the previous robots' occupancy."""
    occ: Occupancy = {}
    paths: list[Path] = []
    for i in range(query.robots):
        try:
            path = dijkstra_single(roadmap, occ, query.start, query.goal)
        except UnreachableGoalError as exc:
            raise PlanningError(
                f"robot {i} cannot reach the goal ({exc.reason})", robot=i) from exc
        paths.append(path)
        for a, b in zip(path, path[1:]):
            e = roadmap.edge_between(a, b)
            assert e is not None
            entry = occ.get(e.id)
            occ[e.id] = (1, (a, b)) if entry is None else (entry[0] + 1, entry[1])
    return build_pathset(roadmap, paths)


# -- feasibility -------------------------------------------------------------


def check_constraints(paths: Sequence[Sequence[int]],
                      query: PlanQuery) -> list[Violation]:
    """Feasibility audit against the four path constraints.

    Returns an empty list iff every path starts at the query start (1), ends
    at the goal (2), no edge is shared in opposite directions (3), and a
    consistent wait-synchronized schedule exists (4).
    """
    violations: list[Violation] = []
    for i, path in enumerate(paths):
        if not path or path[0] != query.start:
            violations.append(Violation(
                constraint=1, robots=(i,),
                detail=f"robot {i} starts at {path[0] if path else None}, "
                       f"expected {query.start}"))
        if not path or path[-1] != query.goal:
            violations.append(Violation(
                constraint=2, robots=(i,),
                detail=f"robot {i} ends at {path[-1] if path else None}, "
                       f"expected {query.goal}"))
    directed: dict[tuple[int, int], dict[Direction, list[int]]] = {}
    for i, path in enumerate(paths):
        for a, b in zip(path, path[1:]):
            key = (min(a, b), max(a, b))
            users = directed.setdefault(key, {})
            users.setdefault((a, b), []).append(i)
    for key, users in sorted(directed.items()):
        if len(users) > 1:
            robots = tuple(sorted({i for lst in users.values() for i in lst}))
            violations.append(Violation(
                constraint=3, robots=robots,
                detail=f"edge {key} is traversed in both directions "
                       f"by robots {list(robots)}"))
    try:
        make_schedule(paths)
    except SchedulingConflictError as exc:
        violations.append(Violation(
            constraint=4, robots=(),
            detail=f"no consistent schedule: cyclic waits at vertices "
                   f"{list(exc.cycle_vertices)}"))
    return violations


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _schedule_classes(paths: Sequence[Sequence[int]]):
    """Merge positions that share a vertex; return (class per position, DAG).

    Every occurrence of the same vertex across all paths must be assigned
    the same step, so those positions form one class. Path order induces
    class -> class precedence edges. A cycle among classes means no
    monotone step assignment exists.
    """
    offsets: list[int] = []
    total = 0
    for path in paths:
        offsets.append(total)
        total += len(path)
    uf = _UnionFind(total)
    first_pos: dict[int, int] = {}
    for i, path in enumerate(paths):
        for m, v in enumerate(path):
            pos = offsets[i] + m
            if v in first_pos:
                uf.union(first_pos[v], pos)
            else:
                first_pos[v] = pos
    succ: dict[int, set[int]] = {}
    for i, path in enumerate(paths):
        for m in range(len(path) - 1):
            a = uf.find(offsets[i] + m)
            b = uf.find(offsets[i] + m + 1)
            succ.setdefault(a, set()).add(b)
            succ.setdefault(b, set())
    for i, path in enumerate(paths):
        for m in range(len(path)):
            succ.setdefault(uf.find(offsets[i] + m), set())
    return offsets, uf, succ


def _class_vertex(paths, offsets, uf, cls: int) -> int:
    """Vertex id represented by a class root (for error reporting)."""
    for i, path in enumerate(paths):
        for m, v in enumerate(path):
            if uf.find(offsets[i] + m) == cls:
                return v
    raise KeyError(cls)


def make_schedule(paths: Sequence[Sequence[int]]) -> Schedule:
    """Assign wait-synchronized integer arrival steps to every path position.

    All robots arriving at a shared vertex get the same step (the later one;
    earlier robots wait in place just before it). Steps are the minimal
    solution of the induced precedence constraints. Raises
    SchedulingConflictError when shared vertices are visited in incompatible
    orders (cyclic precedence).
    """
    if not paths:
        return Schedule(steps=(), k_min=0)
    offsets, uf, succ = _schedule_classes(paths)

    indeg: dict[int, int] = {c: 0 for c in succ}
    for c, nbrs in succ.items():
        for b in nbrs:
            indeg[b] += 1
    ready = sorted(c for c, d in indeg.items() if d == 0)
    step: dict[int, int] = {c: 0 for c in ready}
    order: list[int] = []
    heap = list(ready)
    heapq.heapify(heap)
    while heap:
        c = heapq.heappop(heap)
        order.append(c)
        for b in succ[c]:
            cand = step[c] + 1
            if cand > step.get(b, 0):
                step[b] = cand
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, b)
    if len(order) != len(succ):
        # peel classes with no unresolved successors to isolate the cycles
        remaining = set(succ) - set(order)
        changed = True
        while changed:
            changed = False
            for c in sorted(remaining):
                if all(b not in remaining for b in succ[c]):
                    remaining.discard(c)
                    changed = True
        cycle_vertices = tuple(sorted(
            {_class_vertex(paths, offsets, uf, c) for c in remaining}))
        raise SchedulingConflictError(
            f"cyclic wait dependency among vertices {list(cycle_vertices)}",
            cycle_vertices=cycle_vertices)

    robots: list[tuple[tuple[int, int], ...]] = []
    k_min = 0
    for i, path in enumerate(paths):
        seq: list[tuple[int, int]] = []
        prev_step: int | None = None
        for m, v in enumerate(path):
            s = step[uf.find(offsets[i] + m)]
            if prev_step is not None:
                for wait in range(prev_step + 1, s):
                    seq.append((path[m - 1], wait))
            seq.append((v, s))
            prev_step = s
        robots.append(tuple(seq))
        if seq:
            k_min = max(k_min, seq[-1][1])
    return Schedule(steps=tuple(robots), k_min=k_min)


def has_schedule_conflict(paths: Sequence[Sequence[int]]) -> bool:
    """Cheap check used by the exhaustive oracle to reject cyclic tuples."""
    if not paths:
        return False
    _, _, succ = _schedule_classes(paths)
    indeg: dict[int, int] = {c: 0 for c in succ}
    for nbrs in succ.values():
        for b in nbrs:
            indeg[b] += 1
    stack = [c for c, d in indeg.items() if d == 0]
    done = 0
    while stack:
        c = stack.pop()
        done += 1
        for b in succ[c]:
            indeg[b] -= 1
            if indeg[b] == 0:
                stack.append(b)
    return done != len(succ)
