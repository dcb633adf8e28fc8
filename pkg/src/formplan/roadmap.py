"""Roadmap construction from a polygonal map.

Pipeline: sample the obstacle and border boundaries into point sites, take
the Voronoi diagram of the sites (dual of their Delaunay triangulation) as
an approximate free-space skeleton, clip it to the border, filter edges by
clearance, prune tails, insert terminals, reduce vertex degrees to <= 3,
and evaluate per-formation-size edge cost vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import Voronoi

from . import geometry
from .errors import ConstructionError
from .model import Edge, PolygonMap, Roadmap, Vertex

Point = geometry.Point

# keys for merging coincident Voronoi/clip points
_MERGE_DECIMALS = 9


@dataclass(frozen=True)
class RoadmapBuildParams:
    """Knobs of the construction pipeline.

    sampling_step: boundary discretization pitch (m).
    min_clearance: edges closer than this to an obstacle/border are dropped (m).
    alpha:         weight of the inverse-clearance term in edge costs.
    k:             formation control coefficient (sharing penalty scale).
    robots:        capacity R of the evaluated cost vectors.
    """

    sampling_step: float = 2.0
    min_clearance: float = 1.0
    alpha: float = 1.0
    k: float = 100.0
    robots: int = 1

    def __post_init__(self):
        if self.sampling_step <= 0:
            raise ValueError("sampling_step must be > 0")
        if self.min_clearance < 0:
            raise ValueError("min_clearance must be >= 0")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.robots < 1:
            raise ValueError("robots must be >= 1")


def _sample_loop(loop: tuple[Point, ...], step: float) -> list[Point]:
    """Sample a closed vertex loop at pitch <= step; includes the vertices."""
    pts: list[Point] = []
    n = len(loop)
    for i in range(n):
        a, b = loop[i], loop[(i + 1) % n]
        m = max(1, math.ceil(geometry.dist(a, b) / step))
        for t in range(m):
            pts.append((a[0] + (b[0] - a[0]) * t / m, a[1] + (b[1] - a[1]) * t / m))
    return pts


def boundary_sites(pmap: PolygonMap, step: float) -> np.ndarray:
    """Point sites along the border and all obstacle boundaries."""
    sites = _sample_loop(geometry.rect_corners(pmap.border), step)
    for poly in pmap.obstacles:
        sites.extend(_sample_loop(poly, step))
    return np.asarray(sites, dtype=float)


def _free_space_clearance(points, segs: np.ndarray, pmap: PolygonMap) -> np.ndarray:
    """Distance to the nearest boundary segment, zero outside the free space.

    Voronoi ridges between samples of one boundary segment can pierce the
    obstacle they border; zeroing non-free points makes such edges fail the
    clearance filter instead of surviving on their unsigned distance.
    """
    clear = geometry.min_distance_to_segments(np.asarray(points), segs)
    for i, p in enumerate(points):
        if not pmap.contains_free_point(p):
            clear[i] = 0.0
    return clear


def build_skeleton(pmap: PolygonMap, params: RoadmapBuildParams) -> Roadmap:
    """Approximate Voronoi skeleton of the map's free space.

    Finite ridges of the point-site Voronoi diagram are clipped to the
    border; vertex and edge clearances are recomputed geometrically as the
    exact distance to the nearest obstacle/border segment. The result still
    contains edges inside obstacles and sampling spikes; run filter_edges
    and prune_tails afterwards.
    """
    if pmap.free_area() <= geometry.EPS:
        raise ConstructionError("map has zero free space")
    sites = boundary_sites(pmap, params.sampling_step)
    if len(sites) < 4:
        raise ConstructionError("too few boundary sites to build a skeleton")
    vor = Voronoi(sites)

    key_to_id: dict[tuple[float, float], int] = {}
    points: list[Point] = []
    seen_pairs: set[tuple[int, int]] = set()
    edge_ends: list[tuple[int, int]] = []

    def intern(p: Point) -> int:
        key = (round(p[0], _MERGE_DECIMALS), round(p[1], _MERGE_DECIMALS))
        vid = key_to_id.get(key)
        if vid is None:
            vid = len(points)
            key_to_id[key] = vid
            points.append(p)
        return vid

    for i, j in vor.ridge_vertices:
        if i < 0 or j < 0:
            continue
        clipped = geometry.clip_segment_to_rect(
            (float(vor.vertices[i][0]), float(vor.vertices[i][1])),
            (float(vor.vertices[j][0]), float(vor.vertices[j][1])),
            pmap.border)
        if clipped is None:
            continue
        a, b = clipped
        if geometry.dist(a, b) <= geometry.EPS:
            continue
        u, v = intern(a), intern(b)
        if u == v:
            continue
        pair = (min(u, v), max(u, v))
        if pair in seen_pairs:
            continue
        seen_pairs.add(pair)
        edge_ends.append((u, v))

    if not edge_ends:
        raise ConstructionError("skeleton construction produced no edges")

    segs = geometry.boundary_segments(pmap.border, pmap.obstacles)
    mids = [((points[u][0] + points[v][0]) / 2.0,
             (points[u][1] + points[v][1]) / 2.0) for u, v in edge_ends]
    vclear = _free_space_clearance(points, segs, pmap)
    mclear = _free_space_clearance(mids, segs, pmap)

    vertices = [Vertex(id=i, x=p[0], y=p[1], clearance=float(vclear[i]))
                for i, p in enumerate(points)]
    edges = []
    for eid, (u, v) in enumerate(edge_ends):
        clearance = min(float(vclear[u]), float(vclear[v]), float(mclear[eid]))
        edges.append(Edge(
            id=eid, u=u, v=v, length=geometry.dist(points[u], points[v]),
            clearance=clearance))
    return Roadmap(vertices, edges)


def filter_edges(roadmap: Roadmap, pmap: PolygonMap, min_clearance: float) -> Roadmap:
    """Drop edges with clearance below the threshold or inside an obstacle.

    Zero-clearance edges (touching an obstacle vertex or the border) are
    always removed. Vertices left without any incident edge are removed too.
    Virtual edges are exempt.
    """
    kept: list[Edge] = []
    for e in roadmap.edges.values():
        if e.virtual:
            kept.append(e)
            continue
        if e.clearance < min_clearance or e.clearance <= 0.0:
            continue
        va, vb = roadmap.vertices[e.u], roadmap.vertices[e.v]
        mid = ((va.x + vb.x) / 2.0, (va.y + vb.y) / 2.0)
        if any(geometry.point_in_polygon(mid, poly) for poly in pmap.obstacles):
            continue
        kept.append(e)
    if not kept:
        raise ConstructionError("no edges survive clearance filtering")
    used = {e.u for e in kept} | {e.v for e in kept}
    vertices = [v for v in roadmap.vertices.values() if v.id in used]
    return Roadmap(vertices, kept)


def prune_tails(roadmap: Roadmap, keep: set[int] | frozenset[int] = frozenset()) -> Roadmap:
    """Iteratively remove degree<=1 vertices not in ``keep`` until a fixpoint."""
    degree = {vid: roadmap.degree(vid) for vid in roadmap.vertices}
    removed_vertices: set[int] = set()
    removed_edges: set[int] = set()
    queue = [vid for vid, d in degree.items() if d <= 1 and vid not in keep]
    while queue:
        vid = queue.pop()
        if vid in removed_vertices or degree[vid] > 1:
            continue
        removed_vertices.add(vid)
        for nbr, eid in roadmap.neighbors(vid):
            if eid in removed_edges or nbr in removed_vertices:
                continue
            removed_edges.add(eid)
            degree[nbr] -= 1
            if degree[nbr] <= 1 and nbr not in keep:
                queue.append(nbr)
    if not removed_vertices:
        return roadmap
    vertices = [v for v in roadmap.vertices.values() if v.id not in removed_vertices]
    edges = [e for e in roadmap.edges.values() if e.id not in removed_edges
             and e.u not in removed_vertices and e.v not in removed_vertices]
    return Roadmap(vertices, edges)


def largest_component(roadmap: Roadmap) -> Roadmap:
    """Restrict the roadmap to its largest connected component.

    Ties are broken toward the component containing the smallest vertex id.
    """
    unseen = set(roadmap.vertices)
    best: set[int] | None = None
    while unseen:
        root = min(unseen)
        comp = {root}
        stack = [root]
        while stack:
            u = stack.pop()
            for v, _ in roadmap.neighbors(u):
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        unseen -= comp
        if best is None or len(comp) > len(best):
            best = comp
    if best is None or len(best) == len(roadmap.vertices):
        return roadmap
    vertices = [v for v in roadmap.vertices.values() if v.id in best]
    edges = [e for e in roadmap.edges.values() if e.u in best and e.v in best]
    return Roadmap(vertices, edges)


def insert_terminal(roadmap: Roadmap, point: Point,
                    pmap: PolygonMap | None = None) -> tuple[Roadmap, int]:
    """Connect a free-space point to the roadmap, returning its vertex id.

    A point coinciding with an existing vertex (within 1e-9) reuses that
    vertex. Otherwise the point is projected onto the nearest non-virtual
    edge (ties broken by smaller edge id); the edge is split at the
    projection and the point is linked to the split vertex. New edges carry
    no cost vectors; re-run evaluate_edge_costs before planning.
    """
    if pmap is not None and not pmap.contains_free_point(point):
        raise ConstructionError(
            f"terminal {point} is outside the free space of the map")
    for vid in sorted(roadmap.vertices):
        v = roadmap.vertices[vid]
        if geometry.dist(point, v.point) <= 1e-9:
            return roadmap, vid

    best: tuple[float, int] | None = None
    for eid in sorted(roadmap.edges):
        e = roadmap.edges[eid]
        if e.virtual:
            continue
        a = roadmap.vertices[e.u].point
        b = roadmap.vertices[e.v].point
        d = geometry.point_segment_distance(point, a, b)
        if best is None or d < best[0] - geometry.EPS:
            best = (d, eid)
    if best is None:
        raise ConstructionError("roadmap has no non-virtual edge to attach to")

    e = roadmap.edges[best[1]]
    a = roadmap.vertices[e.u].point
    b = roadmap.vertices[e.v].point
    _, foot = geometry.project_on_segment(point, a, b)

    vertices = list(roadmap.vertices.values())
    edges = [x for x in roadmap.edges.values() if x.id != e.id]
    next_vid = roadmap.next_vertex_id()
    next_eid = roadmap.next_edge_id()

    if geometry.dist(foot, a) <= 1e-9 or geometry.dist(foot, b) <= 1e-9:
        # projection hits an endpoint: keep the edge, just attach a connector
        if geometry.dist(foot, a) <= 1e-9:
            anchor, anchor_pt = e.u, a
        else:
            anchor, anchor_pt = e.v, b
        edges.append(e)
    else:
        anchor, anchor_pt = next_vid, foot
        vertices.append(Vertex(id=anchor, x=foot[0], y=foot[1], clearance=e.clearance))
        next_vid += 1
        edges.append(Edge(id=next_eid, u=e.u, v=anchor,
                          length=geometry.dist(a, foot), clearance=e.clearance))
        edges.append(Edge(id=next_eid + 1, u=anchor, v=e.v,
                          length=geometry.dist(foot, b), clearance=e.clearance))
        next_eid += 2

    terminal = next_vid
    vertices.append(Vertex(id=terminal, x=point[0], y=point[1], clearance=e.clearance))
    edges.append(Edge(id=next_eid, u=terminal, v=anchor,
                      length=geometry.dist(point, anchor_pt), clearance=e.clearance))
    return Roadmap(vertices, edges), terminal


def reduce_degree(roadmap: Roadmap) -> Roadmap:
    """Substitute every vertex of degree d > 3 by a chain of d-2 vertices.

    The chain vertices are colocated copies linked by zero-length virtual
    edges with zero cost; the d original edges are distributed so that every
    chain vertex ends with degree exactly 3 (chain ends take two, interior
    vertices one). The first chain vertex keeps the original vertex id, so
    existing vertex references stay valid. Shortest-path costs are
    preserved exactly because virtual edges cost nothing.
    """
    capacity = roadmap.cost_capacity()
    zero_costs = (0.0,) * capacity if capacity is not None else None

    vertices = dict(roadmap.vertices)
    edges = dict(roadmap.edges)
    next_vid = roadmap.next_vertex_id()
    next_eid = roadmap.next_edge_id()

    high = [vid for vid in sorted(roadmap.vertices) if roadmap.degree(vid) > 3]
    for vid in high:
        incident = sorted(eid for _, eid in roadmap.neighbors(vid))
        d = len(incident)
        chain = [vid] + list(range(next_vid, next_vid + d - 3))
        next_vid += d - 3
        base = vertices[vid]
        for cvid in chain[1:]:
            vertices[cvid] = Vertex(id=cvid, x=base.x, y=base.y,
                                    clearance=base.clearance)
        # chain ends take two original edges, interior vertices take one
        assignment: list[int] = [chain[0], chain[0]]
        for interior in chain[1:-1]:
            assignment.append(interior)
        assignment.extend([chain[-1], chain[-1]])
        for eid, owner in zip(incident, assignment):
            e = edges[eid]
            if e.u == vid:
                edges[eid] = Edge(id=e.id, u=owner, v=e.v, length=e.length,
                                  clearance=e.clearance, virtual=e.virtual,
                                  costs=e.costs)
            else:
                edges[eid] = Edge(id=e.id, u=e.u, v=owner, length=e.length,
                                  clearance=e.clearance, virtual=e.virtual,
                                  costs=e.costs)
        for a, b in zip(chain, chain[1:]):
            edges[next_eid] = Edge(id=next_eid, u=a, v=b, length=0.0,
                                   clearance=base.clearance, virtual=True,
                                   costs=zero_costs)
            next_eid += 1
    return Roadmap(vertices.values(), edges.values())


def evaluate_edge_costs(roadmap: Roadmap, robots: int, k: float,
                        alpha: float) -> Roadmap:
    """Attach cost vectors c_r = length * (1 + alpha/clearance) * (1 + k*(r-1)/100).

    Virtual edges receive all-zero vectors. A non-virtual edge with zero
    clearance should have been filtered and is reported as an internal error.
    """
    if robots < 1:
        raise ValueError("robots must be >= 1")
    if k < 0 or alpha < 0:
        raise ValueError("k and alpha must be >= 0")
    edges = []
    for e in roadmap.edges.values():
        if e.virtual:
            costs: tuple[float, ...] = (0.0,) * robots
        else:
            if e.clearance <= 0.0:
                raise ConstructionError(
                    f"internal error: non-virtual edge {e.id} has zero clearance "
                    "(should have been filtered)")
            base = e.length * (1.0 + alpha / e.clearance)
            costs = tuple(base * (1.0 + k * (r - 1) / 100.0)
                          for r in range(1, robots + 1))
        edges.append(Edge(id=e.id, u=e.u, v=e.v, length=e.length,
                          clearance=e.clearance, virtual=e.virtual, costs=costs))
    return Roadmap(roadmap.vertices.values(), edges)


def extreme_terminals(roadmap: Roadmap) -> tuple[int, int]:
    """Default terminal rule: lexicographic (x, y) minimum and maximum vertices."""
    if not roadmap.vertices:
        raise ConstructionError("empty roadmap has no terminals")
    items = [(v.x, v.y, v.id) for v in roadmap.vertices.values()]
    start = min(items)[2]
    goal = max(items)[2]
    if start == goal:
        raise ConstructionError("degenerate roadmap: single extreme vertex")
    return start, goal


def construct_roadmap(pmap: PolygonMap, params: RoadmapBuildParams,
                      prune: bool = True) -> Roadmap:
    """Skeleton, clearance filter, largest component, and tail pruning.

    Pruning protects the default terminal vertices (lexicographic extremes)
    so tree-like skeletons keep a usable spine. The result carries no cost
    vectors yet; apply finalize_roadmap (or reduce_degree plus
    evaluate_edge_costs) before planning.
    """
    rm = build_skeleton(pmap, params)
    rm = filter_edges(rm, pmap, params.min_clearance)
    rm = largest_component(rm)
    if prune:
        rm = prune_tails(rm, set(extreme_terminals(rm)))
    return rm


def finalize_roadmap(roadmap: Roadmap, robots: int, k: float,
                     alpha: float) -> Roadmap:
    """Degree-reduce and evaluate costs; the result is ready for planning."""
    return evaluate_edge_costs(reduce_degree(roadmap), robots, k, alpha)
