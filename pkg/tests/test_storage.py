"""Allocation counting, closed-form candidates, and grid optimisation."""

import math
from fractions import Fraction

import pytest

from hypermatch.hypercore import VertexWeighting, threshold_hypergraph
from hypermatch.optmatch import fractional_matching
from hypermatch.storage import (
    Allocation,
    GridBudgetError,
    candidate_allocations,
    optimize_grid,
    phi,
    sandwich,
)


def uniform_allocation(value, n, r, budget):
    return Allocation(VertexWeighting((Fraction(value),) * n), r, budget)


class TestAllocation:
    def test_validation(self):
        with pytest.raises(ValueError):
            uniform_allocation(Fraction(1, 2), 4, 5, 4)
        with pytest.raises(ValueError):
            uniform_allocation(Fraction(1, 2), 4, 2, -1)
        with pytest.raises(ValueError):
            uniform_allocation(Fraction(1, 2), 4, 2, 1)  # total 2 > budget 1

    def test_phi_extremes(self):
        full = uniform_allocation(Fraction(1, 2), 5, 2, 5)
        report = phi(full)
        assert report.phi == math.comb(5, 2)
        assert report.success_probability == 1
        empty = uniform_allocation(0, 5, 2, 0)
        assert phi(empty).phi == 0

    def test_phi_matches_threshold_hypergraph(self):
        x = VertexWeighting(
            (Fraction(1), Fraction(1, 2), Fraction(1, 2), Fraction(1, 3), 0)
        )
        a = Allocation(x, 2, 3)
        assert phi(a).phi == threshold_hypergraph(x, 2).num_edges

    def test_allocation_respects_budget_fractionally(self):
        # the fractional matching number of the success hypergraph never
        # exceeds the stored total: the amounts form a fractional cover
        x = VertexWeighting((Fraction(1, 2),) * 4 + (Fraction(1),))
        a = Allocation(x, 2, 3)
        h = threshold_hypergraph(x, 2)
        value, _, _ = fractional_matching(h)
        assert value <= a.x.total() <= a.budget


class TestCandidates:
    def test_both_families_present(self):
        reports = candidate_allocations(7, 3, 2)
        assert [r.phi for r in reports] == [
            math.comb(6, 3),
            math.comb(7, 3) - math.comb(5, 3),
        ]

    def test_concentrated_family_needs_room(self):
        reports = candidate_allocations(5, 3, 2)  # r*budget = 6 > 5
        assert len(reports) == 1
        assert reports[0].phi == math.comb(5, 3) - math.comb(3, 3)

    def test_budget_beyond_everything(self):
        assert candidate_allocations(4, 2, 5) == []

    def test_zero_budget(self):
        reports = candidate_allocations(4, 2, 0)
        assert [r.phi for r in reports] == [0, 0]


class TestOptimizeGrid:
    def test_spread_wins_on_tiny_instance(self):
        report = optimize_grid(4, 2, 1, q=4)
        assert report.phi == 3
        assert report.allocation.x.weights == (1, 0, 0, 0)

    def test_concentrated_wins_with_more_budget(self):
        report = optimize_grid(5, 2, 2, q=4)
        assert report.phi == 7
        assert report.allocation.x.weights == (1, 1, 0, 0, 0)

    def test_half_grid_beats_both_candidates(self):
        report = optimize_grid(4, 2, 2, q=4)
        assert report.phi == 6
        assert report.allocation.x.weights == (Fraction(1, 2),) * 4

    def test_tie_breaks_to_lexicographically_largest(self):
        report = optimize_grid(2, 1, 1, q=2)
        assert report.phi == 1
        assert report.allocation.x.weights == (1, 0)

    def test_budget_is_spent_exactly(self):
        report = optimize_grid(5, 2, 2, q=3)
        assert report.allocation.x.total() == 2

    def test_jobs_do_not_change_the_answer(self):
        solo = optimize_grid(5, 2, 2, q=4, jobs=1)
        forked = optimize_grid(5, 2, 2, q=4, jobs=3)
        assert solo.phi == forked.phi
        assert solo.allocation == forked.allocation

    def test_grid_budget_error(self):
        with pytest.raises(GridBudgetError):
            optimize_grid(6, 2, 3, q=4, max_points=10)

    def test_default_denominator_is_twice_r(self):
        report = optimize_grid(3, 2, 1)
        denominators = {w.denominator for w in report.allocation.x.weights}
        assert denominators <= {1, 2, 4}

    def test_budget_range(self):
        with pytest.raises(ValueError):
            optimize_grid(4, 2, 5)
        assert optimize_grid(4, 2, 0).phi == 0
        assert optimize_grid(4, 2, 4).phi == math.comb(4, 2)


class TestSandwich:
    def test_tiny_instance_holds(self):
        report = sandwich(4, 2, 1, q=4)
        assert report.holds
        assert report.lower <= report.grid.phi <= report.upper
        assert (report.lower, report.grid.phi, report.upper) == (1, 3, 4)

    def test_bigger_budget(self):
        report = sandwich(5, 2, 2, q=4)
        assert report.holds
        assert (report.lower, report.grid.phi, report.upper) == (5, 7, 11)

    def test_budget_validation(self):
        with pytest.raises(ValueError):
            sandwich(4, 2, 0)
