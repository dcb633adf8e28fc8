"""Exception types shared across the package."""

from __future__ import annotations


class FormplanError(Exception):
    """Base class for all errors raised by this package."""


class MapFormatError(FormplanError):
    """Map data could not be parsed."""


class MapInvariantError(FormplanError):
    """A parsed map violates a structural invariant."""

    def __init__(self, message: str, polygon_index: int | None = None):
        super().__init__(message)
        self.polygon_index = polygon_index


class RoadmapFormatError(FormplanError):
    """Roadmap data is malformed or structurally inconsistent."""


class ConstructionError(FormplanError):
    """Roadmap construction produced an unusable graph."""


class CapacityError(FormplanError):
    """Edge occupancy exceeded the capacity of its cost vector."""


class UnreachableGoalError(FormplanError):
    """Dijkstra could not reach the goal.

    ``reason`` is ``"blocked"`` when the graph connects start and goal but
    every route is closed by opposite-direction occupancy, and
    ``"disconnected"`` when no route exists at all.
    """

    def __init__(self, message: str, reason: str):
        super().__init__(message)
        self.reason = reason


class PlanningError(FormplanError):
    """Sequential planning failed for one robot of the formation."""

    def __init__(self, message: str, robot: int):
        super().__init__(message)
        self.robot = robot


class SchedulingConflictError(FormplanError):
    """No monotone wait-synchronized schedule exists for a path set."""

    def __init__(self, message: str, cycle_vertices: tuple[int, ...]):
        super().__init__(message)
        self.cycle_vertices = cycle_vertices


class OracleBudgetError(FormplanError):
    """Exhaustive search exceeded its path or combination budget."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count


class NoFeasiblePlanError(FormplanError):
    """The exhaustive search found no feasible path tuple."""


class OracleInconsistencyError(FormplanError):
    """A solution undercut the certified optimum; planner or oracle is broken."""


class PlacementError(FormplanError):
    """Random map generation could not place obstacles with the given density."""
