"""Exhaustive search, path enumeration, and the gap metric."""

import random

import pytest

import formplan as fp
from formplan.errors import (NoFeasiblePlanError, OracleBudgetError,
                             OracleInconsistencyError)
from formplan.model import PlanQuery
from formplan.oracle import OracleLimits

import helpers


class TestEnumerateSimplePaths:
    def test_diamond(self):
        rm = helpers.diamond_roadmap()
        paths = fp.enumerate_simple_paths(rm, 0, 3, 100)
        assert paths == [(0, 1, 3), (0, 2, 3)]

    def test_diamond_with_chord(self):
        rm = helpers.make_roadmap([
            (0, 1, (1.0,)), (1, 3, (1.0,)), (0, 2, (1.0,)), (2, 3, (1.0,)),
            (1, 2, (1.0,))])
        paths = fp.enumerate_simple_paths(rm, 0, 3, 100)
        assert paths == [(0, 1, 2, 3), (0, 1, 3), (0, 2, 1, 3), (0, 2, 3)]

    def test_limit_exceeded(self):
        rm = helpers.diamond_roadmap()
        with pytest.raises(OracleBudgetError) as err:
            fp.enumerate_simple_paths(rm, 0, 3, 1)
        assert err.value.count == 2


class TestExhaustiveOptimum:
    def test_single_robot_reduces_to_dijkstra(self):
        rng = random.Random(2)
        for _ in range(25):
            rm = helpers.random_connected_roadmap(rng, max_vertices=9, capacity=1)
            goal = max(rm.vertices)
            q = PlanQuery(start=0, goal=goal, robots=1, k=0.0)
            best = fp.exhaustive_optimum(rm, q, OracleLimits(2000, 100000))
            assert best.objective == helpers.reference_dijkstra(rm, 0, goal)

    def test_diamond_two_robots(self):
        rm = helpers.diamond_roadmap(k=100.0)
        q = PlanQuery(start=0, goal=3, robots=2, k=100.0)
        best = fp.exhaustive_optimum(rm, q)
        assert best.objective == pytest.approx(24.0)

    def test_forced_sharing_doubles_cost(self):
        rm = helpers.make_roadmap([(0, 1, (5.0, 10.0)), (1, 2, (5.0, 10.0))])
        q = PlanQuery(start=0, goal=2, robots=2, k=100.0)
        best = fp.exhaustive_optimum(rm, q)
        assert best.paths == ((0, 1, 2), (0, 1, 2))
        assert best.objective == pytest.approx(20.0)

    def test_combination_budget(self):
        rm = helpers.make_roadmap([
            (0, 1, (1.0,) * 3), (1, 3, (1.0,) * 3), (0, 2, (1.0,) * 3),
            (2, 3, (1.0,) * 3), (1, 2, (1.0,) * 3)])
        q = PlanQuery(start=0, goal=3, robots=3, k=0.0)
        with pytest.raises(OracleBudgetError):
            fp.exhaustive_optimum(rm, q, OracleLimits(100, 10))

    def test_no_feasible_plan(self):
        split = helpers.make_roadmap([(0, 1, (5.0,)), (2, 3, (5.0,))])
        q = PlanQuery(start=0, goal=3, robots=1, k=0.0)
        with pytest.raises(NoFeasiblePlanError):
            fp.exhaustive_optimum(split, q)

    def test_dominates_planners(self):
        rng = random.Random(31)
        for _ in range(50):
            rm, s, g = helpers.random_instance(rng)
            robots = rng.randint(1, 3)
            q = PlanQuery(start=s, goal=g, robots=robots, k=0.0)
            best = fp.exhaustive_optimum(rm, q)
            assert best.objective <= fp.plan_sequential(rm, q).objective + 1e-9
            assert best.objective <= fp.plan_optimized(rm, q).objective + 1e-9
            assert fp.check_constraints(best.paths, q) == []


class TestGap:
    def test_zero_when_equal(self):
        assert fp.gap(24.0, 24.0) == 0.0
        assert fp.gap(24.0 + 5e-10, 24.0) == 0.0

    def test_paper_figures(self):
        assert fp.gap(418.0, 412.0) == pytest.approx(0.0145631, abs=1e-6)

    def test_arithmetic(self):
        assert fp.gap(150.0, 100.0) == pytest.approx(0.5)

    def test_undercut_is_hard_error(self):
        with pytest.raises(OracleInconsistencyError):
            fp.gap(99.0, 100.0)
        with pytest.raises(ValueError):
            fp.gap(1.0, 0.0)
