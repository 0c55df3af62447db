"""Brute-forced degree thresholds for matchings in small hypergraphs.

For uniformity k, vertex count n, degree order d and a size target s, the
integral threshold is the least m such that every k-graph on n vertices
with min d-degree at least m has a matching of size s; the fractional
threshold asks instead for fractional matching number at least s.  Both
equal  1 + max { min-d-degree(H) : H fails the target },  and that maximum
is found by enumerating all 2^binom(n, k) edge sets.

The enumeration walks edge-set bitmasks in increasing numeric order (edges
indexed lexicographically), so results and witnesses are reproducible and
shards over mask ranges merge deterministically.  Two prunes keep it fast:
the min d-degree is computed first and the expensive feasibility check is
skipped unless it beats the best so far, and an integral matching of size
ceil(s) is searched before any LP is solved, because finding one already
rules the edge set out.
"""

from __future__ import annotations

import itertools
import math
import multiprocessing
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .extremal import construct_clique_plus_isolated, construct_h0, construct_h1
from .hypercore import Hypergraph, VertexWeighting, link, min_d_degree, threshold_hypergraph
from .optmatch import fractional_matching, matching_number
from .simplex import solve_unit_packing

__all__ = [
    "ThresholdQuery",
    "SearchBudget",
    "ThresholdResult",
    "BudgetExceededError",
    "ReductionInfeasibleError",
    "FractionalReduction",
    "ThresholdComparison",
    "brute_force_threshold",
    "linear_remap",
    "reduce_fractional_instance",
    "compare_with_conjecture",
]


@dataclass(frozen=True)
class ThresholdQuery:
    """One threshold instance.

    mode "integral" targets matchings of integer size s >= 1; mode
    "fractional" targets fractional matching number >= s for rational
    s > 0.  Targets above n/k are permitted and yield the degenerate
    maximum over all edge sets (nothing can reach them), which the
    sandwich bounds of the storage module rely on.
    """

    k: int
    n: int
    d: int
    s: Fraction
    mode: str

    def __init__(self, k: int, n: int, d: int, s: Fraction | int | str, mode: str):
        if mode not in ("integral", "fractional"):
            raise ValueError(f"mode must be integral|fractional, got {mode!r}")
        if not 1 <= k <= n:
            raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
        if not 0 <= d <= k - 1:
            raise ValueError(f"need 0 <= d <= k-1, got d={d}")
        s_frac = Fraction(s)
        if mode == "integral":
            if s_frac.denominator != 1 or s_frac < 1:
                raise ValueError(f"integral mode needs integer s >= 1, got {s}")
        elif s_frac <= 0:
            raise ValueError(f"fractional mode needs s > 0, got {s}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "s", s_frac)
        object.__setattr__(self, "mode", mode)


@dataclass(frozen=True)
class SearchBudget:
    max_edge_sets: int = 1 << 24


class BudgetExceededError(RuntimeError):
    """Enumeration would overrun the budget; carries the free bounds."""

    def __init__(
        self, query: ThresholdQuery, search_space: int, budget: SearchBudget
    ):
        self.query = query
        self.search_space = search_space
        self.budget = budget
        self.lower_bound = _construction_floor(query)
        self.upper_bound = math.comb(query.n - query.d, query.k - query.d) + 1
        super().__init__(
            f"enumerating {search_space} edge sets exceeds the budget of "
            f"{budget.max_edge_sets}; value is within "
            f"[{self.lower_bound}, {self.upper_bound}]"
        )


class ReductionInfeasibleError(ValueError):
    """The weight floor reaches 1/k, so the linear remap loses its slack."""


@dataclass(frozen=True)
class ThresholdResult:
    query: ThresholdQuery
    value: int
    witness: Hypergraph
    instances_examined: int
    runtime_seconds: float


def _edge_universe(k: int, n: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n), k))


def _dset_edge_masks(edges: list[tuple[int, ...]], n: int, d: int) -> list[int]:
    if d == 0:
        return [(1 << len(edges)) - 1]
    masks = []
    for s in itertools.combinations(range(n), d):
        ss = frozenset(s)
        m = 0
        for i, e in enumerate(edges):
            if ss <= frozenset(e):
                m |= 1 << i
        masks.append(m)
    return masks


def _disjointness_masks(edges: list[tuple[int, ...]]) -> list[int]:
    sets = [frozenset(e) for e in edges]
    out = []
    for i, a in enumerate(sets):
        m = 0
        for j, b in enumerate(sets):
            if a.isdisjoint(b):
                m |= 1 << j
        out.append(m)
    return out


def _has_matching_of_size(mask: int, need: int, disj: list[int]) -> bool:
    """Does the edge set of ``mask`` contain ``need`` pairwise disjoint edges?"""
    if need <= 0:
        return True
    if mask.bit_count() < need:
        return False
    m = mask
    while m:
        b = m & -m
        m ^= b
        i = b.bit_length() - 1
        rest = mask & disj[i] & ~((b << 1) - 1)
        if _has_matching_of_size(rest, need - 1, disj):
            return True
    return False


def _scan_range(
    k: int,
    n: int,
    d: int,
    mode: str,
    s: Fraction,
    start: int,
    stop: int,
) -> tuple[int, int, int]:
    """Best (delta, witness mask) over masks in [start, stop), plus LP count.

    Witness is the smallest mask in the range attaining the returned delta
    among qualifying edge sets; delta is -1 if nothing in range qualifies.
    """
    edges = _edge_universe(k, n)
    dmasks = _dset_edge_masks(edges, n, d)
    disj = _disjointness_masks(edges)
    s_ceil = math.ceil(s)
    integral = mode == "integral"
    s_int = int(s) if integral else 0

    best = -1
    best_mask = -1
    lp_calls = 0
    bit_count = int.bit_count
    for mask in range(start, stop):
        delta = 1 << 30
        for sm in dmasks:
            c = bit_count(mask & sm)
            if c < delta:
                delta = c
                if delta <= best:
                    break
        if delta <= best:
            continue
        if integral:
            qualifies = not _has_matching_of_size(mask, s_int, disj)
        elif _has_matching_of_size(mask, s_ceil, disj):
            qualifies = False  # nu >= ceil(s) forces nu* >= s
        else:
            lp_calls += 1
            columns = [
                edges[i]
                for i in range(len(edges))
                if mask >> i & 1
            ]
            qualifies = solve_unit_packing(n, columns).value < s
        if qualifies:
            best = delta
            best_mask = mask
    return best, best_mask, lp_calls


def _scan_shard(payload: tuple) -> tuple[int, int, int]:
    k, n, d, mode, s_num, s_den, start, stop = payload
    return _scan_range(k, n, d, mode, Fraction(s_num, s_den), start, stop)


_memo: dict[tuple, ThresholdResult] = {}


def brute_force_threshold(
    query: ThresholdQuery,
    budget: SearchBudget = SearchBudget(),
    jobs: int = 1,
) -> ThresholdResult:
    """Exhaustively determine the threshold value with a witness.

    Requires binom(n, k) <= 24 so the edge-set space fits a bitmask scan.
    ``jobs`` > 1 shards the mask range into contiguous blocks handled by
    worker processes; the merged result is independent of the shard count
    because ties between shards resolve to the smallest witness mask.
    The result is memoised per query (it is a pure function of it).
    """
    num_edges = math.comb(query.n, query.k)
    if num_edges > 24:
        raise ValueError(
            f"binom(n, k) = {num_edges} exceeds the enumeration limit of 24"
        )
    space = 1 << num_edges
    if space > budget.max_edge_sets:
        raise BudgetExceededError(query, space, budget)
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")

    key = (query.mode, query.k, query.n, query.d, query.s)
    cached = _memo.get(key)
    if cached is not None:
        return cached

    started = time.perf_counter()
    if jobs == 1 or space < (1 << 12):
        best, best_mask, _ = _scan_range(
            query.k, query.n, query.d, query.mode, query.s, 0, space
        )
    else:
        bounds = [space * i // jobs for i in range(jobs + 1)]
        payloads = [
            (
                query.k,
                query.n,
                query.d,
                query.mode,
                query.s.numerator,
                query.s.denominator,
                bounds[i],
                bounds[i + 1],
            )
            for i in range(jobs)
        ]
        with multiprocessing.get_context("fork").Pool(jobs) as pool:
            parts = pool.map(_scan_shard, payloads)
        best, best_mask = -1, -1
        for delta, mask, _ in parts:
            if delta > best or (delta == best and 0 <= mask < best_mask):
                best = delta
                best_mask = mask

    if best < 0 or best_mask < 0:
        raise AssertionError("the empty edge set always qualifies")
    edges = _edge_universe(query.k, query.n)
    witness = Hypergraph(
        query.k,
        query.n,
        [edges[i] for i in range(num_edges) if best_mask >> i & 1],
    )
    _verify_witness(query, witness, best)
    result = ThresholdResult(
        query=query,
        value=best + 1,
        witness=witness,
        instances_examined=space,
        runtime_seconds=time.perf_counter() - started,
    )
    _memo[key] = result
    return result


def _verify_witness(query: ThresholdQuery, witness: Hypergraph, delta: int) -> None:
    """Re-check the winning edge set with the independent solvers."""
    if min_d_degree(witness, query.d) != delta:
        raise AssertionError("witness degree disagrees with the scan")
    if query.mode == "integral":
        if matching_number(witness) > query.s - 1:
            raise AssertionError("witness admits the matching it must avoid")
    else:
        value, _, _ = fractional_matching(witness)
        if value >= query.s:
            raise AssertionError("witness reaches the fractional target")


def _construction_floor(query: ThresholdQuery) -> int:
    """Best construction-based lower bound for the threshold value."""
    bounds = [1]
    s_ceil = math.ceil(query.s)
    if 1 <= s_ceil <= query.n // query.k + 1:
        h1 = construct_h1(query.k, query.n, s_ceil)
        bounds.append(min_d_degree(h1, query.d) + 1)
    if (
        query.mode == "integral"
        and query.n % query.k == 0
        and query.s == query.n // query.k
    ):
        try:
            h0 = construct_h0(query.k, query.n)
        except ValueError:
            pass
        else:
            bounds.append(min_d_degree(h0, query.d) + 1)
    return max(bounds)


# ---------------------------------------------------------------------------
# Fractional-instance reduction: strip the weight floor, pass to a link.
# ---------------------------------------------------------------------------


def linear_remap(w: VertexWeighting, k: int) -> VertexWeighting:
    """Shift out the minimum weight and rescale so k-set thresholds survive.

    With floor w0 = min(w) < 1/k, maps each weight to (x - w0)/(1 - k*w0),
    capped at 1.  A k-set sums to at least 1 before iff it does after:
    subtracting k*w0 from both sides of  sum >= 1  and dividing by the
    positive 1 - k*w0 is an equivalence, and capping only changes
    coordinates that already dominate any sum they join.
    """
    if len(w) == 0:
        raise ValueError("empty weighting")
    w0 = min(w.weights)
    scale = 1 - k * w0
    if scale <= 0:
        raise ReductionInfeasibleError(
            f"weight floor {w0} reaches 1/k for k={k}; remap undefined"
        )
    return VertexWeighting(
        tuple(min((x - w0) / scale, Fraction(1)) for x in w.weights)
    )


@dataclass(frozen=True)
class FractionalReduction:
    """Outcome of one reduction step.

    ``averaged`` replaces the d lightest weights by their mean (ties broken
    by vertex index); ``w_prime`` is its remap, which zeroes exactly the
    vertices of ``l_set``.  The threshold hypergraphs of ``averaged`` and
    ``w_prime`` coincide edge for edge, ``link_graph`` is the link of that
    hypergraph at ``l_set``, and ``link_cover`` (w_prime restricted to the
    surviving vertices, relabelled like the link) is a fractional cover of
    the link: an edge of the link plus l_set sums to >= 1 entirely on the
    surviving coordinates because l_set carries weight 0.
    """

    k: int
    d: int
    l_set: tuple[int, ...]
    averaged: VertexWeighting
    w_prime: VertexWeighting
    hypergraph: Hypergraph
    link_graph: Hypergraph
    link_cover: VertexWeighting


def reduce_fractional_instance(
    w: VertexWeighting, k: int, d: int
) -> FractionalReduction:
    """Average the d lightest weights, remap, and restrict to the link."""
    n = len(w)
    if not 1 <= d <= k - 1:
        raise ValueError(f"need 1 <= d <= k-1, got d={d}")
    if not k <= n:
        raise ValueError(f"need k <= n, got k={k}, n={n}")
    order = sorted(range(n), key=lambda v: (w[v], v))
    l_set = tuple(sorted(order[:d]))
    mean = sum((w[v] for v in l_set), Fraction(0)) / d
    averaged = VertexWeighting(
        tuple(mean if v in l_set else w[v] for v in range(n))
    )
    if k * mean >= 1:
        raise ReductionInfeasibleError(
            f"averaged floor {mean} reaches 1/k for k={k}"
        )
    w_prime = linear_remap(averaged, k)
    hypergraph = threshold_hypergraph(w_prime, k)
    link_graph = link(hypergraph, l_set)
    survivors = [v for v in range(n) if v not in l_set]
    link_cover = VertexWeighting(tuple(w_prime[v] for v in survivors))
    return FractionalReduction(
        k=k,
        d=d,
        l_set=l_set,
        averaged=averaged,
        w_prime=w_prime,
        hypergraph=hypergraph,
        link_graph=link_graph,
        link_cover=link_cover,
    )


# ---------------------------------------------------------------------------
# Brute force versus the closed-form predictions.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdComparison:
    query: ThresholdQuery
    integral_value: int
    fractional_value: int
    integral_bounds: dict[str, int]
    fractional_bounds: dict[str, int]
    formulas: dict[str, object]
    flags: dict[str, bool] = field(default_factory=dict)


def compare_with_conjecture(
    query: ThresholdQuery,
    budget: SearchBudget = SearchBudget(),
    jobs: int = 1,
) -> ThresholdComparison:
    """Brute-force both threshold flavours and line them up with the formulas.

    The integral side runs at ceil(s), the fractional side at s itself; the
    construction lower bounds are the min-d-degrees (plus one) of the
    families that provably fail each target.  Flags record the inequality
    web: fractional <= integral, and each brute-forced value at least its
    construction bounds.
    """
    from .extremal import conjecture_values

    s = query.s
    s_ceil = math.ceil(s)
    integral = brute_force_threshold(
        ThresholdQuery(query.k, query.n, query.d, s_ceil, "integral"),
        budget,
        jobs,
    )
    fractional = brute_force_threshold(
        ThresholdQuery(query.k, query.n, query.d, s, "fractional"),
        budget,
        jobs,
    )

    k, n, d = query.k, query.n, query.d
    int_bounds: dict[str, int] = {}
    frac_bounds: dict[str, int] = {}
    if 1 <= s_ceil <= n // k + 1:
        h1_delta = min_d_degree(construct_h1(k, n, s_ceil), d)
        int_bounds["h1"] = h1_delta + 1
        frac_bounds["h1"] = h1_delta + 1
    if n % k == 0 and s == n // k:
        try:
            int_bounds["h0"] = min_d_degree(construct_h0(k, n), d) + 1
        except ValueError:
            pass
    if k * s_ceil - 1 <= n:
        int_bounds["clique"] = (
            min_d_degree(construct_clique_plus_isolated(k, n, s_ceil), d) + 1
        )
    frac_clique_span = math.ceil(k * s) - 1
    if k <= frac_clique_span <= n:
        frac_clique = Hypergraph(
            k, n, itertools.combinations(range(frac_clique_span), k)
        )
        frac_bounds["clique"] = min_d_degree(frac_clique, d) + 1

    formulas: dict[str, object] = {}
    if d == 0 and s_ceil * k <= n:
        formulas["Conj1.8"] = conjecture_values(
            "Conj1.8", k=k, n=n, s=s_ceil
        ).count
        formulas["Conj1.9"] = conjecture_values("Conj1.9", l=k, m=n, s=s).count
    if 1 <= d <= k - 1:
        formulas["Eq3"] = conjecture_values("Eq3", k=k, d=d).coefficient
        formulas["Eq4"] = conjecture_values("Eq4", k=k, d=d).coefficient

    flags = {
        "fractional_le_integral": fractional.value <= integral.value,
        "integral_ge_bounds": all(
            integral.value >= b for b in int_bounds.values()
        ),
        "fractional_ge_bounds": all(
            fractional.value >= b for b in frac_bounds.values()
        ),
    }
    return ThresholdComparison(
        query=query,
        integral_value=integral.value,
        fractional_value=fractional.value,
        integral_bounds=int_bounds,
        fractional_bounds=frac_bounds,
        formulas=formulas,
        flags=flags,
    )
