"""World and graph data types plus their on-disk JSON formats.

All types are immutable after construction; operations elsewhere in the
package always return new values. Coordinates and costs are 64-bit floats,
serialized through ``json`` so that save/load round-trips are bit-exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from . import geometry
from .errors import MapFormatError, MapInvariantError, RoadmapFormatError

Point = geometry.Point
Rect = geometry.Rect

COORD_TOL = 1e-9


@dataclass(frozen=True)
class PolygonMap:
    """Rectangular border plus simple polygonal obstacles, in meters.

    Invariants (checked at construction): the border has positive extent,
    every obstacle is a simple non-degenerate polygon lying inside the
    border, and obstacles are pairwise non-overlapping.
    """

    border: Rect
    obstacles: tuple[tuple[Point, ...], ...] = ()
    name: str = ""

    def __post_init__(self):
        xmin, ymin, xmax, ymax = self.border
        if not all(math.isfinite(v) for v in self.border):
            raise MapInvariantError("border coordinates must be finite")
        if xmax - xmin <= 0 or ymax - ymin <= 0:
            raise MapInvariantError("border must have positive width and height")
        for idx, poly in enumerate(self.obstacles):
            self._check_polygon(idx, poly)
        for i in range(len(self.obstacles)):
            for j in range(i + 1, len(self.obstacles)):
                if geometry.polygons_overlap(self.obstacles[i], self.obstacles[j]):
                    raise MapInvariantError(
                        f"obstacles {i} and {j} overlap", polygon_index=i)

    def _check_polygon(self, idx: int, poly: tuple[Point, ...]) -> None:
        if len(poly) < 3:
            raise MapInvariantError(
                f"polygon {idx} has fewer than 3 vertices", polygon_index=idx)
        for x, y in poly:
            if not (math.isfinite(x) and math.isfinite(y)):
                raise MapInvariantError(
                    f"polygon {idx} has non-finite coordinates", polygon_index=idx)
            if not geometry.point_in_rect((x, y), self.border):
                raise MapInvariantError(
                    f"polygon {idx} lies outside the border", polygon_index=idx)
        if geometry.polygon_has_repeated_vertices(poly):
            raise MapInvariantError(
                f"polygon {idx} repeats a vertex", polygon_index=idx)
        if not geometry.polygon_is_simple(poly):
            raise MapInvariantError(
                f"polygon {idx} is self-intersecting", polygon_index=idx)
        if geometry.polygon_has_collinear_run(poly) or geometry.polygon_area(poly) <= geometry.EPS:
            raise MapInvariantError(
                f"polygon {idx} is degenerate (zero area or collinear vertices)",
                polygon_index=idx)

    def contains_free_point(self, p: Point) -> bool:
        """True if p is inside the border and outside every obstacle."""
        if not geometry.point_in_rect(p, self.border):
            return False
        return not any(geometry.point_in_polygon(p, poly) for poly in self.obstacles)

    def free_area(self) -> float:
        total = (self.border[2] - self.border[0]) * (self.border[3] - self.border[1])
        return total - sum(geometry.polygon_area(poly) for poly in self.obstacles)


@dataclass(frozen=True)
class Vertex:
    id: int
    x: float
    y: float
    clearance: float

    @property
    def point(self) -> Point:
        return (self.x, self.y)


@dataclass(frozen=True)
class Edge:
    """Undirected roadmap edge.

    ``costs`` is the per-formation-size cost vector (c_1..c_R), or None
    before cost evaluation has run. Virtual edges are the zero-length,
    zero-cost links introduced by degree reduction.
    """

    id: int
    u: int
    v: int
    length: float
    clearance: float
    virtual: bool = False
    costs: tuple[float, ...] | None = None

    def other(self, vid: int) -> int:
        return self.v if vid == self.u else self.u

    def direction_key(self, a: int, b: int) -> bool:
        """True when (a, b) traverses the edge from u to v."""
        return (a, b) == (self.u, self.v)


class Roadmap:
    """Undirected planning graph of 2-D vertices with clearance annotations.

    Vertex and edge ids are nonnegative integers assigned densely at
    construction; operations that remove elements keep the surviving ids
    stable so that callers' references remain valid.
    """

    def __init__(self, vertices, edges):
        self.vertices: dict[int, Vertex] = {}
        self.edges: dict[int, Edge] = {}
        for v in sorted(vertices, key=lambda v: v.id):
            if v.id < 0:
                raise RoadmapFormatError(f"vertex id {v.id} is negative")
            if v.id in self.vertices:
                raise RoadmapFormatError(f"duplicate vertex id {v.id}")
            if not (math.isfinite(v.x) and math.isfinite(v.y)):
                raise RoadmapFormatError(f"vertex {v.id} has non-finite coordinates")
            if not math.isfinite(v.clearance) or v.clearance < 0:
                raise RoadmapFormatError(f"vertex {v.id} has invalid clearance")
            self.vertices[v.id] = v
        pair_seen: dict[tuple[int, int], int] = {}
        for e in sorted(edges, key=lambda e: e.id):
            self._check_edge(e, pair_seen)
            self.edges[e.id] = e
        adj: dict[int, list[tuple[int, int]]] = {vid: [] for vid in self.vertices}
        for e in self.edges.values():
            adj[e.u].append((e.v, e.id))
            adj[e.v].append((e.u, e.id))
        self._adj: dict[int, tuple[tuple[int, int], ...]] = {
            vid: tuple(sorted(lst)) for vid, lst in adj.items()}
        self._pair = pair_seen

    def _check_edge(self, e: Edge, pair_seen: dict[tuple[int, int], int]) -> None:
        if e.id < 0:
            raise RoadmapFormatError(f"edge id {e.id} is negative")
        if e.id in self.edges:
            raise RoadmapFormatError(f"duplicate edge id {e.id}")
        for vid in (e.u, e.v):
            if vid not in self.vertices:
                raise RoadmapFormatError(
                    f"edge {e.id} references missing vertex id {vid}")
        if e.u == e.v:
            raise RoadmapFormatError(f"edge {e.id} is a self-loop on vertex {e.u}")
        key = (min(e.u, e.v), max(e.u, e.v))
        if key in pair_seen:
            raise RoadmapFormatError(
                f"edges {pair_seen[key]} and {e.id} duplicate the pair {key}")
        pair_seen[key] = e.id
        if not math.isfinite(e.length) or e.length < 0:
            raise RoadmapFormatError(f"edge {e.id} has invalid length")
        if not math.isfinite(e.clearance) or e.clearance < 0:
            raise RoadmapFormatError(f"edge {e.id} has invalid clearance")
        if e.virtual and e.length != 0.0:
            raise RoadmapFormatError(f"virtual edge {e.id} has nonzero length")
        if e.costs is not None:
            if len(e.costs) == 0:
                raise RoadmapFormatError(f"edge {e.id} has an empty cost vector")
            for c in e.costs:
                if not math.isfinite(c) or c < 0:
                    raise RoadmapFormatError(f"edge {e.id} has invalid cost {c!r}")
            if e.virtual and any(c != 0.0 for c in e.costs):
                raise RoadmapFormatError(f"virtual edge {e.id} has nonzero costs")

    # -- queries -------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, vid: int) -> tuple[tuple[int, int], ...]:
        """(neighbor id, edge id) pairs, sorted for deterministic iteration."""
        return self._adj[vid]

    def degree(self, vid: int) -> int:
        return len(self._adj[vid])

    def edge_between(self, a: int, b: int) -> Edge | None:
        eid = self._pair.get((min(a, b), max(a, b)))
        return None if eid is None else self.edges[eid]

    def next_vertex_id(self) -> int:
        return max(self.vertices, default=-1) + 1

    def next_edge_id(self) -> int:
        return max(self.edges, default=-1) + 1

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {next(iter(self.vertices))}
        stack = list(seen)
        while stack:
            u = stack.pop()
            for v, _ in self._adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(self.vertices)

    def cost_capacity(self) -> int | None:
        """Length of the evaluated cost vectors, or None if not evaluated."""
        for e in self.edges.values():
            if not e.virtual:
                return None if e.costs is None else len(e.costs)
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Roadmap):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __repr__(self) -> str:
        return f"Roadmap(n_vertices={self.n_vertices}, n_edges={self.n_edges})"


@dataclass(frozen=True)
class PlanQuery:
    """One planning request: start/goal vertex ids, robot count, coefficient k."""

    start: int
    goal: int
    robots: int
    k: float = 0.0

    def __post_init__(self):
        if self.robots < 1:
            raise ValueError("robot count must be >= 1")
        if self.k < 0:
            raise ValueError("formation control coefficient k must be >= 0")
        if self.start == self.goal:
            raise ValueError("start and goal vertices must differ")


# -- map serialization -----------------------------------------------------


def _decode(data: bytes | str) -> str:
    return data.decode("utf-8") if isinstance(data, bytes) else data


def load_map(data: bytes | str) -> PolygonMap:
    """Parse a map file; raises MapFormatError / MapInvariantError."""
    try:
        doc = json.loads(_decode(data))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MapFormatError(f"map is not valid JSON: {exc}") from exc
    try:
        name = doc.get("name", "")
        border = tuple(float(v) for v in doc["border"])
        if len(border) != 4:
            raise MapFormatError("border must be [xmin, ymin, xmax, ymax]")
        obstacles = tuple(
            tuple((float(x), float(y)) for x, y in poly)
            for poly in doc.get("obstacles", []))
    except MapFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise MapFormatError(f"malformed map document: {exc}") from exc
    return PolygonMap(border=border, obstacles=obstacles, name=str(name))


def save_map(pmap: PolygonMap) -> bytes:
    doc = {
        "name": pmap.name,
        "border": list(pmap.border),
        "obstacles": [[[x, y] for x, y in poly] for poly in pmap.obstacles],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def load_map_file(path) -> PolygonMap:
    with open(path, "rb") as fh:
        return load_map(fh.read())


def save_map_file(pmap: PolygonMap, path) -> None:
    with open(path, "wb") as fh:
        fh.write(save_map(pmap))


# -- roadmap serialization ---------------------------------------------------


def load_roadmap(data: bytes | str) -> Roadmap:
    try:
        doc = json.loads(_decode(data))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise RoadmapFormatError(f"roadmap is not valid JSON: {exc}") from exc
    try:
        vertices = [
            Vertex(id=int(v["id"]), x=float(v["x"]), y=float(v["y"]),
                   clearance=float(v["clearance"]))
            for v in doc["vertices"]]
        edges = []
        for e in doc["edges"]:
            costs = tuple(float(c) for c in e.get("costs", []))
            edges.append(Edge(
                id=int(e["id"]), u=int(e["u"]), v=int(e["v"]),
                length=float(e["length"]), clearance=float(e["clearance"]),
                virtual=bool(e.get("virtual", False)),
                costs=costs if costs else None))
    except (KeyError, TypeError, ValueError) as exc:
        raise RoadmapFormatError(f"malformed roadmap document: {exc}") from exc
    return Roadmap(vertices, edges)


def save_roadmap(roadmap: Roadmap) -> bytes:
    doc = {
        "vertices": [
            {"id": v.id, "x": v.x, "y": v.y, "clearance": v.clearance}
            for v in roadmap.vertices.values()],
        "edges": [
            {"id": e.id, "u": e.u, "v": e.v, "length": e.length,
             "clearance": e.clearance, "virtual": e.virtual,
             "costs": list(e.costs) if e.costs is not None else []}
            for e in roadmap.edges.values()],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")


def load_roadmap_file(path) -> Roadmap:
    with open(path, "rb") as fh:
        return load_roadmap(fh.read())


def save_roadmap_file(roadmap: Roadmap, path) -> None:
    with open(path, "wb") as fh:
        fh.write(save_roadmap(roadmap))
