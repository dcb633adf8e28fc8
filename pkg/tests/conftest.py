"""Session-scoped fixtures shared between module tests and the acceptance suite."""

from __future__ import annotations

import random
from dataclasses import dataclass

import pytest

import formplan as fp
from formplan.oracle import OracleLimits

import helpers


@dataclass
class Instance:
    """One solved random instance: both planners plus the certified optimum."""

    roadmap: object
    query: fp.PlanQuery
    seq: fp.PathSet
    opt: fp.PathSet
    oracle: fp.PathSet


@dataclass
class InstanceBatch:
    instances: list
    seconds: float


@pytest.fixture(scope="session")
def instance_batch() -> InstanceBatch:
    """The 220-instance random batch used by acceptance criteria 2, 3, and 8."""
    import time

    rng = random.Random(20260811)
    limits = OracleLimits(max_simple_paths=300, max_combinations=3_000_000)
    batch = []
    t0 = time.perf_counter()
    for _ in range(220):
        rm, s, g = helpers.random_instance(rng)
        robots = rng.randint(1, 3)
        query = fp.PlanQuery(start=s, goal=g, robots=robots, k=100.0)
        batch.append(Instance(
            roadmap=rm, query=query,
            seq=fp.plan_sequential(rm, query),
            opt=fp.plan_optimized(rm, query),
            oracle=fp.exhaustive_optimum(rm, query, limits)))
    return InstanceBatch(instances=batch, seconds=time.perf_counter() - t0)


@pytest.fixture(scope="session")
def corridor_setup():
    """Fixed multi-corridor map for the formation-control criterion."""
    pmap = fp.generate_map("grid-blocks", {"rows": 3, "cols": 3, "fill": 0.55},
                           seed=5)
    params = fp.RoadmapBuildParams(sampling_step=3.0, min_clearance=1.0)
    base = fp.construct_roadmap(pmap, params)
    start, goal = fp.extreme_terminals(base)
    return pmap, base, start, goal


@pytest.fixture(scope="session")
def scaling_setup():
    """Roadmap of roughly 60 vertices for the runtime-scaling criterion."""
    pmap = fp.generate_map("grid-blocks", {"rows": 2, "cols": 2, "fill": 0.5},
                           seed=1)
    params = fp.RoadmapBuildParams(sampling_step=10.0, min_clearance=1.0)
    base = fp.construct_roadmap(pmap, params)
    start, goal = fp.extreme_terminals(base)
    return base, start, goal
