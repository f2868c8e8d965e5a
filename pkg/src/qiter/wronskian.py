"""Difference orders and the iterative Wronskian.

For x_1..x_r in C(t) the difference orders are the lexicographically least
strictly increasing tuple d_1 < ... < d_r with det(delta^(d_i)(x_j)) != 0.
Rows are the vectors (delta^(d)(x_1), ..., delta^(d)(x_r)); they form a matroid,
so scanning d = 0, 1, 2, ... and keeping every row that raises the rank yields
that least tuple.  Non-increasing tuples only permute or repeat rows, so they
never succeed when no increasing tuple does.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrix import Matrix
from .qarith import QContext
from .ratfunc import RatFunc, delta_range

__all__ = ["WronskianResult", "NotFoundUpTo", "difference_orders", "wronskian_matrix", "q_casoratian"]


@dataclass(frozen=True)
class NotFoundUpTo:
    bound: int

    def __str__(self):
        return f"NotFoundUpTo({self.bound})"


@dataclass(frozen=True)
class WronskianResult:
    orders: tuple | NotFoundUpTo
    det: RatFunc | None = None

    @property
    def found(self) -> bool:
        return not isinstance(self.orders, NotFoundUpTo)


def wronskian_matrix(ctx: QContext, xs: list[RatFunc], orders) -> Matrix:
    top = max(orders)
    tables = [delta_range(ctx, top, x) for x in xs]
    return Matrix([[tab[d] for tab in tables] for d in orders], ctx.tower)


def _reduce_row(row, basis):
    """Eliminate row against an echelon basis [(pivot, row)]; returns the remainder."""
    row = list(row)
    for piv, b in basis:
        if row[piv]:
            f = row[piv] / b[piv]
            row = [x - f * y if y else x for x, y in zip(row, b)]
    return row


def difference_orders(ctx: QContext, xs: list[RatFunc], bound: int | None = None) -> WronskianResult:
    """Least increasing (d_1..d_r), d_r <= bound, with nonzero Wronskian; default bound 3 n r."""
    if not xs:
        raise ValueError("need at least one function")
    r = len(xs)
    if bound is None:
        bound = 3 * ctx.n * r
    if bound < r - 1:
        return WronskianResult(NotFoundUpTo(bound))
    tables = [delta_range(ctx, bound, x) for x in xs]
    basis = []
    chosen = []
    for d in range(bound + 1):
        row = [tab[d] for tab in tables]
        rem = _reduce_row(row, basis)
        piv = next((i for i, x in enumerate(rem) if x), None)
        if piv is None:
            continue
        basis.append((piv, rem))
        chosen.append(d)
        if len(chosen) == r:
            W = Matrix([[tab[k] for tab in tables] for k in chosen], ctx.tower)
            return WronskianResult(tuple(chosen), W.det())
    return WronskianResult(NotFoundUpTo(bound))


def q_casoratian(ctx: QContext, xs: list[RatFunc]) -> RatFunc:
    """The naive determinant det(sigma^(i-1)(x_j))."""
    r = len(xs)
    return Matrix([[x.sigma(ctx, i) for x in xs] for i in range(r)], ctx.tower).det()
