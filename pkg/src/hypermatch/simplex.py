"""Exact revised simplex for unit packing programs.

Solves   max sum(x_j)  subject to  sum_{j: i in col_j} x_j <= 1 for every
row i, x >= 0, where each column is a set of row indices (an edge viewed as
its incident vertices).  This is the fractional matching LP; the dual read
off the final basis is a fractional vertex cover of the same value.

Everything is computed over ``fractions.Fraction``.  Floats appear in one
place only: a pricing prefilter that proposes candidate entering columns.
Every candidate is confirmed exactly before entering, and when the
prefilter proposes nothing the solver falls back to a full exact pricing
pass, so no decision ever rests on a float.

Pivoting uses Bland's rule (smallest variable id enters, smallest basis
variable leaves among the minimum ratios), which makes the optimal basis,
hence both certificates, deterministic.  Because the prefilter may visit
ids out of order, a long run of pivots degrades to pure exact Bland
pricing, restoring the termination guarantee unconditionally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

__all__ = ["PackingResult", "solve_unit_packing"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class PackingResult:
    value: Fraction
    primal: tuple[Fraction, ...]  # one weight per column
    dual: tuple[Fraction, ...]  # one weight per row
    pivots: int


def solve_unit_packing(
    n_rows: int, columns: Sequence[Sequence[int]]
) -> PackingResult:
    """Maximise the total column weight under unit row capacities.

    ``columns[j]`` lists the rows column j hits (distinct indices in
    0..n_rows-1).  Returns exact optimal primal and dual vectors; with no
    columns the optimum is 0 with an all-zero dual.
    """
    m = n_rows
    ncols = len(columns)
    cols = [tuple(col) for col in columns]
    for col in cols:
        for r in col:
            if not (0 <= r < m):
                raise ValueError(f"row index {r} out of range 0..{m - 1}")
        if len(set(col)) != len(col):
            raise ValueError(f"column {col} repeats a row")
    if ncols == 0 or m == 0:
        return PackingResult(_ZERO, (_ZERO,) * ncols, (_ZERO,) * m, 0)

    # Variable ids: 0..ncols-1 are structural columns, ncols..ncols+m-1 are
    # slacks.  The initial basis is the slack identity (b = 1 is feasible).
    binv = [[_ONE if i == j else _ZERO for j in range(m)] for i in range(m)]
    xb = [_ONE] * m
    basis = [ncols + i for i in range(m)]

    pivots = 0
    fast_pivot_budget = 2000 + 20 * (m + 1)
    while True:
        in_basis = set(basis)
        y = [_ZERO] * m
        for r in range(m):
            if basis[r] < ncols:
                row = binv[r]
                for i in range(m):
                    if row[i]:
                        y[i] += row[i]

        entering = _price(cols, y, in_basis, ncols, pivots < fast_pivot_budget)
        if entering < 0:
            # Exact slack pricing: slack i improves iff y[i] < 0.
            for i in range(m):
                if ncols + i not in in_basis and y[i] < 0:
                    entering = ncols + i
                    break
        if entering < 0:
            break  # optimal, certified by the exact pricing passes

        # Direction d = B^-1 * A_entering.
        if entering < ncols:
            col = cols[entering]
            d = [sum((binv[r][i] for i in col), _ZERO) for r in range(m)]
        else:
            i = entering - ncols
            d = [binv[r][i] for r in range(m)]

        leaving_row = -1
        best_ratio: Fraction | None = None
        for r in range(m):
            if d[r] > 0:
                ratio = xb[r] / d[r]
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[leaving_row])
                ):
                    best_ratio = ratio
                    leaving_row = r
        if leaving_row < 0:
            raise ArithmeticError("unit packing LP cannot be unbounded")

        piv = d[leaving_row]
        if piv != 1:
            inv = 1 / piv
            binv[leaving_row] = [v * inv for v in binv[leaving_row]]
            xb[leaving_row] *= inv
        prow = binv[leaving_row]
        pxb = xb[leaving_row]
        for r in range(m):
            if r != leaving_row and d[r]:
                f = d[r]
                row = binv[r]
                for i in range(m):
                    if prow[i]:
                        row[i] -= f * prow[i]
                xb[r] -= f * pxb
        basis[leaving_row] = entering
        pivots += 1

    primal = [_ZERO] * ncols
    value = _ZERO
    for r in range(m):
        if basis[r] < ncols:
            primal[basis[r]] = xb[r]
            value += xb[r]
    for i in range(m):
        if y[i] < 0:
            raise ArithmeticError("negative dual at optimality")
    return PackingResult(value, tuple(primal), tuple(y), pivots)


def _price(
    cols: list[tuple[int, ...]],
    y: list[Fraction],
    in_basis: set[int],
    ncols: int,
    use_prefilter: bool,
) -> int:
    """Smallest structural id with exactly positive reduced cost, else -1."""
    if use_prefilter:
        yf = [float(v) for v in y]
        skipped_any = False
        for j in range(ncols):
            if j in in_basis:
                continue
            if 1.0 - sum(yf[r] for r in cols[j]) <= -1e-9:
                skipped_any = True
                continue
            if _ONE - sum((y[r] for r in cols[j]), _ZERO) > 0:
                return j
        if not skipped_any:
            return -1
        # The prefilter rejected candidates on float evidence alone; make
        # the final word exact before concluding anything.
    for j in range(ncols):
        if j in in_basis:
            continue
        if _ONE - sum((y[r] for r in cols[j]), _ZERO) > 0:
            return j
    return -1
