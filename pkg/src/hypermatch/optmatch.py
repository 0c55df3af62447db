"""Exact matching and cover optimisation on k-uniform hypergraphs.

Provides the integral matching number (branch and bound), the integral
vertex cover number, and the fractional matching/cover LP pair solved
exactly over rationals.  One LP solve produces both the optimal fractional
matching and the optimal fractional cover, which is why the two optimal
values are equal by construction; the report re-verifies every certificate
anyway so a bug cannot go unnoticed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .hypercore import EdgeWeighting, Hypergraph, VertexWeighting
from .simplex import solve_unit_packing

__all__ = [
    "DualityReport",
    "matching_number",
    "maximum_matching",
    "has_perfect_matching",
    "cover_number",
    "minimum_cover",
    "fractional_matching",
    "fractional_optimum",
]

_COVER_DP_LIMIT = 20  # 2^n table; beyond this fall back to branching search


def _edge_bitmasks(h: Hypergraph) -> list[int]:
    out = []
    for e in h.edges:
        m = 0
        for v in e:
            m |= 1 << v
        out.append(m)
    return out


def maximum_matching(h: Hypergraph) -> tuple[tuple[int, ...], ...]:
    """A maximum set of pairwise disjoint edges, deterministically chosen.

    Branch and bound on the lowest still-available vertex: either it is
    matched by one of its edges (tried in lexicographic order) or it is left
    unmatched.  Subtrees are cut with the bound  current + floor(free/k),
    and a visited-state table keyed by the availability mask prunes
    re-entries that cannot beat an earlier visit.
    """
    edge_masks = _edge_bitmasks(h)
    by_vertex: list[list[int]] = [[] for _ in range(h.n)]
    for idx, mask in enumerate(edge_masks):
        for v in h.edges[idx]:
            by_vertex[v].append(idx)

    full = (1 << h.n) - 1
    k = h.k
    best_count = 0
    best_edges: list[int] = []
    seen: dict[int, int] = {}

    def dfs(avail: int, count: int, chosen: list[int]) -> None:
        nonlocal best_count, best_edges
        if count > best_count:
            best_count = count
            best_edges = chosen.copy()
        if avail == 0:
            return
        if count + avail.bit_count() // k <= best_count:
            return
        prev = seen.get(avail)
        if prev is not None and prev >= count:
            return
        seen[avail] = count
        v = (avail & -avail).bit_length() - 1
        for idx in by_vertex[v]:
            em = edge_masks[idx]
            if em & avail == em:
                chosen.append(idx)
                dfs(avail ^ em, count + 1, chosen)
                chosen.pop()
        dfs(avail ^ (1 << v), count, chosen)

    dfs(full, 0, [])
    return tuple(sorted(h.edges[i] for i in best_edges))


def matching_number(h: Hypergraph) -> int:
    return len(maximum_matching(h))


def has_perfect_matching(h: Hypergraph) -> bool:
    """True iff k divides n and some matching covers every vertex."""
    return h.n % h.k == 0 and matching_number(h) == h.n // h.k


def minimum_cover(h: Hypergraph) -> tuple[int, ...]:
    """A minimum vertex set meeting every edge, deterministically chosen.

    A set C covers every edge exactly when its complement spans no edge, so
    for moderate n the search walks all vertex subsets once, marking the
    up-closure of the edges, and takes a maximum edge-free set.  Larger
    instances use iterative-deepening branching on an uncovered edge.
    """
    if h.num_edges == 0:
        return ()
    if h.n <= _COVER_DP_LIMIT:
        return _cover_by_complement(h)
    return _cover_by_branching(h)


def _cover_by_complement(h: Hypergraph) -> tuple[int, ...]:
    size = 1 << h.n
    spans_edge = bytearray(size)
    for em in _edge_bitmasks(h):
        spans_edge[em] = 1
    full = size - 1
    best_mask = 0
    best_pop = 0
    for mask in range(size):
        if spans_edge[mask]:
            rest = full & ~mask
            while rest:
                b = rest & -rest
                spans_edge[mask | b] = 1
                rest ^= b
        else:
            pop = mask.bit_count()
            if pop > best_pop or (pop == best_pop and mask > best_mask):
                best_pop = pop
                best_mask = mask
    return tuple(v for v in range(h.n) if not best_mask >> v & 1)


def _cover_by_branching(h: Hypergraph) -> tuple[int, ...]:
    edge_masks = _edge_bitmasks(h)

    def greedy_disjoint(masks: list[int]) -> int:
        used = 0
        count = 0
        for em in masks:
            if em & used == 0:
                used |= em
                count += 1
        return count

    def attempt(budget: int, masks: list[int], chosen: list[int]) -> list[int] | None:
        if not masks:
            return chosen.copy()
        if greedy_disjoint(masks) > budget:
            return None
        first = masks[0]
        v = first & -first
        while v <= first:
            if first & v:
                vid = v.bit_length() - 1
                rest = [em for em in masks if not em & v]
                chosen.append(vid)
                got = attempt(budget - 1, rest, chosen)
                chosen.pop()
                if got is not None:
                    return got
            v <<= 1
        return None

    for budget in range(greedy_disjoint(edge_masks), h.n + 1):
        got = attempt(budget, edge_masks, [])
        if got is not None:
            return tuple(sorted(got))
    raise AssertionError("cover search must terminate by budget n")


def cover_number(h: Hypergraph) -> int:
    return len(minimum_cover(h))


def fractional_matching(
    h: Hypergraph,
) -> tuple[Fraction, EdgeWeighting, VertexWeighting]:
    """Solve the fractional matching LP exactly.

    Returns (optimal value, optimal fractional matching, optimal fractional
    cover).  Both certificates are feasible by construction and share the
    same total weight, which pins the value from both sides.
    """
    result = solve_unit_packing(h.n, h.edges)
    matching = EdgeWeighting(h, result.primal)
    cover = VertexWeighting(result.dual)
    _verify_lp_pair(h, result.value, matching, cover)
    return result.value, matching, cover


def _verify_lp_pair(
    h: Hypergraph, value: Fraction, matching: EdgeWeighting, cover: VertexWeighting
) -> None:
    if matching.total() != value or cover.total() != value:
        raise AssertionError("certificate totals disagree with the LP value")
    for e in h.edges:
        if sum((cover[v] for v in e), Fraction(0)) < 1:
            raise AssertionError(f"cover misses edge {e}")
    # EdgeWeighting construction already enforced loads <= 1 and weight range.


@dataclass(frozen=True)
class DualityReport:
    """All four optima of one hypergraph with verifiable certificates.

    The chain  nu <= nu_star == tau_star <= tau  holds exactly; the middle
    equality is rational equality, not a tolerance.
    """

    hypergraph: Hypergraph
    nu: int
    nu_star: Fraction
    tau_star: Fraction
    tau: int
    matching_certificate: tuple[tuple[int, ...], ...]
    fractional_matching: EdgeWeighting
    fractional_cover: VertexWeighting
    cover_certificate: tuple[int, ...]

    def __post_init__(self) -> None:
        if not (self.nu <= self.nu_star == self.tau_star <= self.tau):
            raise AssertionError(
                f"duality chain violated: nu={self.nu} nu*={self.nu_star} "
                f"tau*={self.tau_star} tau={self.tau}"
            )


def fractional_optimum(h: Hypergraph) -> DualityReport:
    """Compute nu, nu*, tau*, tau with certificates, all exactly."""
    value, frac_matching, frac_cover = fractional_matching(h)
    matching = maximum_matching(h)
    cover = minimum_cover(h)
    _verify_integral(h, matching, cover)
    return DualityReport(
        hypergraph=h,
        nu=len(matching),
        nu_star=value,
        tau_star=value,
        tau=len(cover),
        matching_certificate=matching,
        fractional_matching=frac_matching,
        fractional_cover=frac_cover,
        cover_certificate=cover,
    )


def _verify_integral(
    h: Hypergraph,
    matching: Sequence[tuple[int, ...]],
    cover: Sequence[int],
) -> None:
    used: set[int] = set()
    edge_set = set(h.edges)
    for e in matching:
        if e not in edge_set:
            raise AssertionError(f"matching certificate uses foreign edge {e}")
        if used & set(e):
            raise AssertionError("matching certificate edges intersect")
        used |= set(e)
    cset = set(cover)
    for e in h.edges:
        if not cset & set(e):
            raise AssertionError(f"cover certificate misses edge {e}")
