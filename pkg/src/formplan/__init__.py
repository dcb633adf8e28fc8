"""Split-and-merge path planning for robot formations on Voronoi roadmaps."""

from .bench import ExperimentRecord, format_summary, run_benchmark, summarize
from .mapgen import generate_map
from .model import (Edge, PlanQuery, PolygonMap, Roadmap, Vertex, load_map,
                    load_map_file, load_roadmap, load_roadmap_file, save_map,
                    save_map_file, save_roadmap, save_roadmap_file)
from .optimizer import max_cost, optimize_paths, plan_optimized
from .oracle import OracleLimits, enumerate_simple_paths, exhaustive_optimum, gap
from .planner import (PathSet, Schedule, Violation, check_constraints,
                      dijkstra_single, evaluate_plan, make_schedule,
                      plan_sequential, robots_in_segment)
from .render import render_svg
from .roadmap import (RoadmapBuildParams, build_skeleton, construct_roadmap,
                      evaluate_edge_costs, extreme_terminals, filter_edges,
                      finalize_roadmap, insert_terminal, largest_component,
                      prune_tails, reduce_degree)

__version__ = "0.1.0"

__all__ = [
    "Edge", "ExperimentRecord", "OracleLimits", "PathSet", "PlanQuery",
    "PolygonMap", "Roadmap", "RoadmapBuildParams", "Schedule", "Vertex",
    "Violation", "build_skeleton", "check_constraints", "construct_roadmap",
    "dijkstra_single", "enumerate_simple_paths", "evaluate_edge_costs",
    "evaluate_plan", "exhaustive_optimum", "extreme_terminals", "filter_edges",
    "finalize_roadmap", "format_summary", "gap", "generate_map",
    "insert_terminal", "largest_component", "load_map", "load_map_file",
    "load_roadmap", "load_roadmap_file", "make_schedule", "max_cost",
    "optimize_paths", "plan_optimized", "plan_sequential", "prune_tails",
    "reduce_degree", "render_svg", "robots_in_segment", "run_benchmark",
    "save_map", "save_map_file", "save_roadmap", "save_roadmap_file",
    "summarize",
]
