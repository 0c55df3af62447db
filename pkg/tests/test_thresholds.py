"""Exhaustive threshold search, reductions, and formula comparisons."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hypermatch import thresholds
from hypermatch.hypercore import (
    VertexWeighting,
    min_d_degree,
    threshold_hypergraph,
)
from hypermatch.optmatch import fractional_matching, matching_number
from hypermatch.thresholds import (
    BudgetExceededError,
    ReductionInfeasibleError,
    SearchBudget,
    ThresholdQuery,
    brute_force_threshold,
    compare_with_conjecture,
    linear_remap,
    reduce_fractional_instance,
)


class TestQueryValidation:
    def test_mode_and_ranges(self):
        with pytest.raises(ValueError):
            ThresholdQuery(2, 4, 1, 2, "both")
        with pytest.raises(ValueError):
            ThresholdQuery(5, 4, 1, 1, "integral")
        with pytest.raises(ValueError):
            ThresholdQuery(2, 4, 2, 1, "integral")
        with pytest.raises(ValueError):
            ThresholdQuery(2, 4, 1, Fraction(3, 2), "integral")
        with pytest.raises(ValueError):
            ThresholdQuery(2, 4, 1, 0, "fractional")

    def test_fractional_targets_may_exceed_perfect(self):
        # degenerate targets are legal: nothing attains them, so the search
        # maximises the degree over every edge set
        q = ThresholdQuery(2, 5, 0, 3, "fractional")
        assert q.s == Fraction(3)


class TestBruteForce:
    def test_single_edge_suffices_for_one(self):
        result = brute_force_threshold(ThresholdQuery(2, 5, 0, 1, "fractional"))
        assert result.value == 1
        assert result.witness.num_edges == 0

    def test_degenerate_target_maximises_over_everything(self):
        result = brute_force_threshold(ThresholdQuery(2, 5, 0, 3, "fractional"))
        assert result.value == math.comb(5, 2) + 1
        assert result.witness.num_edges == math.comb(5, 2)

    def test_pairs_on_six_disjoint_target(self):
        result = brute_force_threshold(ThresholdQuery(2, 6, 1, 3, "integral"))
        assert result.value == 3

    def test_triples_on_six_with_pair_degrees(self):
        result = brute_force_threshold(ThresholdQuery(3, 6, 2, 2, "integral"))
        assert result.value == 3
        witness = result.witness
        assert min_d_degree(witness, 2) == 2
        assert matching_number(witness) == 1

    def test_witness_is_extremal_not_just_feasible(self):
        result = brute_force_threshold(ThresholdQuery(3, 6, 2, 2, "fractional"))
        assert result.value == 2
        assert min_d_degree(result.witness, 2) == 1
        value, _, _ = fractional_matching(result.witness)
        assert value < 2

    def test_sharded_run_matches_sequential(self):
        query = ThresholdQuery(2, 6, 1, 3, "integral")
        thresholds._memo.clear()
        solo = brute_force_threshold(query, jobs=1)
        thresholds._memo.clear()
        forked = brute_force_threshold(query, jobs=3)
        assert solo.value == forked.value
        assert solo.witness == forked.witness

    def test_memoised_repeat_is_identical(self):
        query = ThresholdQuery(2, 4, 0, 1, "integral")
        first = brute_force_threshold(query)
        assert brute_force_threshold(query) is first

    def test_budget_refusal_carries_bounds(self):
        with pytest.raises(BudgetExceededError) as info:
            brute_force_threshold(
                ThresholdQuery(3, 6, 1, 2, "integral"),
                budget=SearchBudget(max_edge_sets=100),
            )
        err = info.value
        assert err.search_space == 1 << 20
        assert 1 <= err.lower_bound <= err.upper_bound
        assert err.upper_bound == math.comb(5, 2) + 1

    def test_space_beyond_bitmask_is_rejected_outright(self):
        with pytest.raises(ValueError, match="enumeration limit"):
            brute_force_threshold(ThresholdQuery(3, 10, 0, 2, "integral"))


class TestLinearRemap:
    def test_pinned_reduction(self):
        w = VertexWeighting(
            (Fraction(1, 10), Fraction(1, 5), Fraction(2, 5), Fraction(1, 2))
        )
        red = reduce_fractional_instance(w, 3, 1)
        assert red.l_set == (0,)
        assert red.averaged.weights == w.weights
        assert red.w_prime.weights == (
            Fraction(0),
            Fraction(1, 7),
            Fraction(3, 7),
            Fraction(4, 7),
        )
        assert red.hypergraph.edges == ((0, 2, 3), (1, 2, 3))
        assert red.link_graph.edges == ((1, 2),)
        assert red.link_cover.weights == (
            Fraction(1, 7),
            Fraction(3, 7),
            Fraction(4, 7),
        )

    def test_link_cover_covers_the_link(self):
        w = VertexWeighting(
            (Fraction(1, 10), Fraction(1, 5), Fraction(2, 5), Fraction(1, 2))
        )
        red = reduce_fractional_instance(w, 3, 1)
        for edge in red.link_graph.edges:
            assert sum(red.link_cover[v] for v in edge) >= 1

    def test_infeasible_floor(self):
        heavy = VertexWeighting((Fraction(1, 2),) * 4)
        with pytest.raises(ReductionInfeasibleError):
            reduce_fractional_instance(heavy, 3, 1)
        with pytest.raises(ReductionInfeasibleError):
            linear_remap(heavy, 3)

    def test_remap_caps_at_one(self):
        w = VertexWeighting((Fraction(0), Fraction(9, 10)))
        out = linear_remap(w, 2)
        assert out.weights == (Fraction(0), Fraction(9, 10))
        w2 = VertexWeighting((Fraction(1, 10), Fraction(9, 10)))
        out2 = linear_remap(w2, 2)
        assert out2.weights == (Fraction(0), Fraction(1))

    @given(
        st.lists(
            st.fractions(min_value=0, max_value=1, max_denominator=8),
            min_size=3,
            max_size=7,
        ),
        st.integers(min_value=2, max_value=3),
    )
    @settings(max_examples=80)
    def test_remap_preserves_threshold_hypergraph(self, weights, k):
        if len(weights) < k or min(weights) * k >= 1:
            return
        w = VertexWeighting(tuple(weights))
        before = threshold_hypergraph(w, k)
        after = threshold_hypergraph(linear_remap(w, k), k)
        assert before == after

    def test_parameter_validation(self):
        w = VertexWeighting((Fraction(1, 10),) * 4)
        with pytest.raises(ValueError):
            reduce_fractional_instance(w, 3, 0)
        with pytest.raises(ValueError):
            reduce_fractional_instance(w, 3, 3)
        with pytest.raises(ValueError):
            reduce_fractional_instance(w, 5, 1)


class TestComparison:
    def test_triples_on_six_whole_web(self):
        report = compare_with_conjecture(
            ThresholdQuery(3, 6, 0, 2, "fractional"), jobs=2
        )
        assert report.integral_value == 11
        assert report.fractional_value == 11
        assert report.formulas["Conj1.8"] == 11
        assert all(report.flags.values())
        assert report.integral_bounds["h0"] == 11

    def test_pairs_on_four(self):
        report = compare_with_conjecture(ThresholdQuery(2, 4, 1, 2, "integral"))
        assert report.integral_value == 2
        assert report.fractional_value <= report.integral_value
        assert all(report.flags.values())
