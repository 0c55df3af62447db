"""Matching and cover optima against independent brute-force oracles."""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from hypermatch.hypercore import Hypergraph
from hypermatch.optmatch import (
    DualityReport,
    cover_number,
    fractional_matching,
    fractional_optimum,
    has_perfect_matching,
    matching_number,
    maximum_matching,
    minimum_cover,
)


def _pairwise_disjoint(edges) -> bool:
    seen: set[int] = set()
    for e in edges:
        if not seen.isdisjoint(e):
            return False
        seen.update(e)
    return True


def oracle_matching_number(h: Hypergraph) -> int:
    """Largest set of pairwise-disjoint edges, by subset enumeration."""
    for size in range(h.num_edges, 0, -1):
        for edges in itertools.combinations(h.edges, size):
            if _pairwise_disjoint(edges):
                return size
    return 0


def oracle_cover_number(h: Hypergraph) -> int:
    """Smallest vertex set meeting every edge, by subset enumeration."""
    if h.num_edges == 0:
        return 0
    for size in range(h.n + 1):
        for cover in itertools.combinations(range(h.n), size):
            cset = set(cover)
            if all(cset & set(e) for e in h.edges):
                return size
    raise AssertionError("the full vertex set always covers")


def random_small_hypergraphs(count: int, seed: int = 11):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        k = int(rng.integers(2, 4))
        n = int(rng.integers(k, 9))
        pool = list(itertools.combinations(range(n), k))
        keep = rng.random(len(pool)) < 0.4
        edges = [e for e, kept in zip(pool, keep) if kept][:12]
        yield Hypergraph(k, n, edges)


class TestIntegralOptima:
    def test_against_oracles_on_random_instances(self):
        for h in random_small_hypergraphs(80):
            assert matching_number(h) == oracle_matching_number(h)
            assert cover_number(h) == oracle_cover_number(h)

    def test_certificates_are_real(self):
        for h in random_small_hypergraphs(30, seed=5):
            matching = maximum_matching(h)
            seen: set[int] = set()
            for e in matching:
                assert e in h
                assert seen.isdisjoint(e)
                seen.update(e)
            cover = minimum_cover(h)
            cset = set(cover)
            assert all(cset & set(e) for e in h.edges)

    def test_complete_graph_values(self):
        k4 = Hypergraph.complete(3, 4)
        assert matching_number(k4) == 1
        assert cover_number(k4) == 2
        assert minimum_cover(k4) == (0, 1)
        k6 = Hypergraph.complete(3, 6)
        assert matching_number(k6) == 2
        assert cover_number(k6) == 4

    def test_edgeless(self):
        h = Hypergraph(3, 7, [])
        assert matching_number(h) == 0
        assert cover_number(h) == 0
        assert maximum_matching(h) == ()
        assert minimum_cover(h) == ()

    @pytest.mark.parametrize(
        "h, expected",
        [
            (Hypergraph(3, 6, [(0, 1, 2), (3, 4, 5)]), True),
            (Hypergraph(3, 6, [(0, 1, 2), (2, 3, 4)]), False),
            (Hypergraph(3, 7, [(0, 1, 2), (3, 4, 5)]), False),  # 3 does not divide 7
            (Hypergraph.complete(2, 6), True),
        ],
    )
    def test_has_perfect_matching(self, h, expected):
        assert has_perfect_matching(h) is expected


class TestFractionalOptima:
    def test_known_values(self):
        value, _, _ = fractional_matching(Hypergraph.complete(3, 4))
        assert value == Fraction(4, 3)
        cycle5 = Hypergraph(2, 5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        value, _, _ = fractional_matching(cycle5)
        assert value == Fraction(5, 2)
        fano = Hypergraph(
            3,
            7,
            [
                (0, 1, 2),
                (0, 3, 4),
                (0, 5, 6),
                (1, 3, 5),
                (1, 4, 6),
                (2, 3, 6),
                (2, 4, 5),
            ],
        )
        value, _, _ = fractional_matching(fano)
        assert value == Fraction(7, 3)

    def test_complete_graphs_reach_n_over_k(self):
        for k, n in ((2, 5), (2, 6), (3, 6), (3, 7), (4, 8)):
            value, _, _ = fractional_matching(Hypergraph.complete(k, n))
            assert value == Fraction(n, k)

    def test_empty_instances(self):
        value, matching, cover = fractional_matching(Hypergraph(3, 5, []))
        assert value == 0
        assert matching.total() == 0

    def test_certificate_pair_is_self_verifying(self):
        # Feasibility of both sides plus equal totals is an optimality
        # certificate by weak duality, independent of the solver.
        for h in random_small_hypergraphs(40, seed=23):
            value, matching, cover = fractional_matching(h)
            assert matching.total() == value
            assert sum(cover.weights, Fraction(0)) == value
            for e in h.edges:
                assert sum(cover[v] for v in e) >= 1

    def test_duality_report_chain(self):
        for h in random_small_hypergraphs(25, seed=31):
            report = fractional_optimum(h)
            assert report.nu <= report.nu_star == report.tau_star <= report.tau
            assert report.nu == len(report.matching_certificate)
            assert report.tau == len(report.cover_certificate)

    def test_report_rejects_broken_chain(self):
        h = Hypergraph.complete(3, 4)
        good = fractional_optimum(h)
        with pytest.raises(AssertionError):
            DualityReport(
                hypergraph=h,
                nu=2,  # claims more than nu* allows
                nu_star=good.nu_star,
                tau_star=good.tau_star,
                tau=good.tau,
                matching_certificate=good.matching_certificate,
                fractional_matching=good.fractional_matching,
                fractional_cover=good.fractional_cover,
                cover_certificate=good.cover_certificate,
            )

    def test_integrality_gap_instance(self):
        # One triple from each complementary pair on 6 vertices:
        # intersecting (nu = 1) yet fractionally perfect (nu* = 2).
        edges = [
            (0, 1, 2),
            (0, 1, 3),
            (0, 2, 4),
            (0, 3, 5),
            (0, 4, 5),
            (1, 2, 5),
            (1, 3, 4),
            (1, 4, 5),
            (2, 3, 4),
            (2, 3, 5),
        ]
        report = fractional_optimum(Hypergraph(3, 6, edges))
        assert report.nu == 1
        assert report.nu_star == 2
        assert report.tau == 3
