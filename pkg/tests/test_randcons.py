"""Randomised two-round construction: sampling, checks, build, tail bounds."""

import math
from fractions import Fraction

import pytest

from hypermatch.hypercore import Hypergraph
from hypermatch.randcons import (
    AmbiguousMembershipError,
    CheckConfig,
    RoundOnePlan,
    RoundOneOutcome,
    build_sparse_subgraph,
    chernoff_bound,
    check_near_regularity,
    compute_round_matchings,
    coverage_count,
    preset_scale_parameters,
    sample_rounds,
)

TWO_TRIPLES = Hypergraph(3, 6, ((0, 1, 2), (3, 4, 5)))


class TestPlan:
    def test_validation(self):
        with pytest.raises(ValueError):
            RoundOnePlan(TWO_TRIPLES, 2, 0.0, 1)
        with pytest.raises(ValueError):
            RoundOnePlan(TWO_TRIPLES, 2, 1.5, 1)
        with pytest.raises(ValueError):
            RoundOnePlan(TWO_TRIPLES, -1, 0.5, 1)
        with pytest.raises(ValueError):
            RoundOnePlan(TWO_TRIPLES, 2, 0.5, 3)

    def test_sampling_is_reproducible(self):
        plan = RoundOnePlan(Hypergraph.complete(3, 12), 5, 0.5, 1, seed=3)
        a = sample_rounds(plan)
        b = sample_rounds(plan)
        assert a.subsets == b.subsets
        assert a.subsets != sample_rounds(
            RoundOnePlan(Hypergraph.complete(3, 12), 5, 0.5, 1, seed=4)
        ).subsets


class TestChecks:
    def test_full_sampling_fails_multiplicity_only_by_duplication(self):
        plan = RoundOnePlan(TWO_TRIPLES, 2, 1.0, 1)
        outcome = sample_rounds(plan)
        multiplicity = outcome.check("edge_multiplicity")
        assert not multiplicity.passed
        assert multiplicity.violations == 2  # both edges appear twice

    def test_zero_rounds_is_vacuous(self):
        outcome = sample_rounds(RoundOnePlan(TWO_TRIPLES, 0, 0.5, 1))
        assert outcome.subsets == ()
        for c in outcome.checks:
            assert c.passed, c.name

    def test_unknown_check_name(self):
        outcome = sample_rounds(RoundOnePlan(TWO_TRIPLES, 0, 0.5, 1))
        with pytest.raises(KeyError):
            outcome.check("colourfulness")

    def test_size_band_on_a_large_sample(self):
        base = Hypergraph.complete(3, 60)
        plan = RoundOnePlan(base, 40, 0.5, 1, seed=7)
        outcome = sample_rounds(plan)
        sizes = [len(r) for r in outcome.subsets]
        assert outcome.check("subset_sizes").passed
        assert 20 <= min(sizes) and max(sizes) <= 40
        # at rate 1/2 over 40 rounds, pair coverage necessarily exceeds the
        # cap of 2, and the checks report rather than raise
        assert not outcome.check("pair_coverage").passed
        assert len(outcome.check("pair_coverage").witnesses) <= 10


class TestRoundMatchings:
    def test_perfect_round_is_kept(self):
        plan = RoundOnePlan(TWO_TRIPLES, 1, 1.0, 1)
        outcome = sample_rounds(plan, with_matchings=True)
        assert outcome.skipped_rounds == ()
        (matching,) = outcome.matchings
        assert sum(w for _, w in matching.support()) == Fraction(2)

    def test_imperfect_round_is_skipped(self):
        plan = RoundOnePlan(TWO_TRIPLES, 1, 0.5, 1)
        outcome = RoundOneOutcome(plan, subsets=((0, 1, 2, 3),), checks=())
        solved = compute_round_matchings(outcome)
        assert solved.skipped_rounds == (0,)
        assert solved.matchings == (None,)

    def test_jobs_do_not_change_anything(self):
        plan = RoundOnePlan(Hypergraph.complete(3, 9), 4, 0.7, 1, seed=5)
        solo = sample_rounds(plan, with_matchings=True, jobs=1)
        forked = sample_rounds(plan, with_matchings=True, jobs=3)
        assert solo.skipped_rounds == forked.skipped_rounds
        assert solo.matchings == forked.matchings


class TestBuild:
    def test_single_perfect_round_keeps_the_matching(self):
        plan = RoundOnePlan(TWO_TRIPLES, 1, 1.0, 1)
        outcome = sample_rounds(plan, with_matchings=True)
        sparse = build_sparse_subgraph(outcome)
        assert sparse.hypergraph.edges == TWO_TRIPLES.edges
        assert sparse.degrees == (1,) * 6
        assert sparse.coverage == (1,) * 6
        assert sparse.max_codegree() == 1
        assert sparse.skipped_rounds == ()

    def test_strict_mode_requires_unambiguous_membership(self):
        plan = RoundOnePlan(TWO_TRIPLES, 2, 1.0, 1)
        outcome = sample_rounds(plan, with_matchings=True)
        with pytest.raises(AmbiguousMembershipError):
            build_sparse_subgraph(outcome, strict=True)
        sparse = build_sparse_subgraph(outcome, strict=False)
        # both rounds keep both weight-1 edges: the multiset degree doubles
        assert sparse.degrees == (2,) * 6

    def test_build_is_reproducible(self):
        plan = RoundOnePlan(Hypergraph.complete(3, 9), 4, 0.7, 1, seed=5)
        outcome = sample_rounds(plan, with_matchings=True)
        a = build_sparse_subgraph(outcome, seed=11)
        b = build_sparse_subgraph(outcome, seed=11)
        assert a == b

    def test_degrees_decompose_over_rounds(self):
        plan = RoundOnePlan(Hypergraph.complete(3, 9), 5, 0.7, 1, seed=2)
        outcome = sample_rounds(plan, with_matchings=True)
        sparse = build_sparse_subgraph(outcome, seed=3)
        for v in range(9):
            recount = sum(
                sum(1 for e in kept if v in e)
                for kept in sparse.per_round_selected
            )
            assert sparse.degrees[v] == recount
            assert sparse.coverage[v] == coverage_count(outcome.subsets, {v})


class TestRegularity:
    def test_matching_is_perfectly_regular(self):
        report = check_near_regularity(TWO_TRIPLES, 1.0, 0.5)
        assert report
        assert report.max_codegree == 0

    def test_complete_triples_fail_on_codegree(self):
        report = check_near_regularity(Hypergraph.complete(3, 6), 10.0, 0.1)
        assert not report
        assert report.max_codegree == 4
        assert report.degree_violators == ()

    def test_edgeless_fails(self):
        assert not check_near_regularity(Hypergraph(3, 6, ()), 1.0, 0.5)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            check_near_regularity(TWO_TRIPLES, 0, 0.5)
        with pytest.raises(ValueError):
            check_near_regularity(TWO_TRIPLES, 1.0, 0)


class TestChernoff:
    def test_small_deviation_value(self):
        bound = chernoff_bound("small", expectation=50, alpha=0.3)
        assert bound == pytest.approx(2 * math.exp(-1.5))

    def test_binomial_matches_small_at_matching_alpha(self):
        lam = 6.0
        by_binomial = chernoff_bound("binomial", n=40, p=0.5, lam=lam)
        alpha = lam / (40 * 0.5)
        by_small = chernoff_bound("small", expectation=20, alpha=alpha)
        assert by_binomial == pytest.approx(by_small / 2)

    def test_large_deviation_value(self):
        assert chernoff_bound("large", expectation=1, x=10) == pytest.approx(
            math.exp(-10)
        )

    def test_validity_ranges(self):
        with pytest.raises(ValueError):
            chernoff_bound("small", expectation=50, alpha=2.0)
        with pytest.raises(ValueError):
            chernoff_bound("binomial", n=40, p=0.5, lam=31.0)
        with pytest.raises(ValueError):
            chernoff_bound("large", expectation=10, x=69)
        with pytest.raises(ValueError):
            chernoff_bound("huge", expectation=1, x=10)
        with pytest.raises(TypeError):
            chernoff_bound("small", expectation=50, alpha=0.3, slack=1)

    def test_scale_preset(self):
        p, rounds = preset_scale_parameters(60)
        assert p == pytest.approx(60**-0.9)
        assert rounds == round(60**1.1)
        with pytest.raises(ValueError):
            preset_scale_parameters(0)
