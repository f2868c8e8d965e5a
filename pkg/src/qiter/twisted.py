"""Truncated twisted power series over C(t) and the Taylor map.

The product is ``(sum A_r T^r) * (sum B_k T^k) = sum_m (sum_{r+k=m} sigma^r(B_k) A_r) T^m``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .qarith import QContext, q_binom
from .ratfunc import RatFunc, delta_range

__all__ = [
    "TwistedSeries",
    "TruncationMismatch",
    "NotInvertible",
    "star_mul",
    "star_one",
    "taylor",
    "star_inverse",
    "delta_via_series",
    "delta_T",
]


class TruncationMismatch(ValueError):
    pass


class NotInvertible(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class TwistedSeries:
    """coeffs[k] is the coefficient of T^k; terms above T^N are unknown, not zero."""

    N: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.N + 1:
            raise ValueError("need exactly N + 1 coefficients")

    def __getitem__(self, k: int) -> RatFunc:
        if k > self.N:
            raise TruncationMismatch(f"coefficient {k} is beyond truncation {self.N}")
        return self.coeffs[k]

    def __add__(self, other: TwistedSeries) -> TwistedSeries:
        _same_n(self, other)
        return TwistedSeries(self.N, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: TwistedSeries) -> TwistedSeries:
        _same_n(self, other)
        return TwistedSeries(self.N, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def truncate(self, M: int) -> TwistedSeries:
        if M > self.N:
            raise TruncationMismatch(f"cannot extend truncation {self.N} to {M}")
        return TwistedSeries(M, self.coeffs[: M + 1])


def _same_n(A, B):
    if A.N != B.N:
        raise TruncationMismatch(f"truncations differ: {A.N} vs {B.N}")


def star_one(tower, N: int) -> TwistedSeries:
    zero = RatFunc.constant(tower, 0)
    return TwistedSeries(N, (RatFunc.constant(tower, 1),) + (zero,) * N)


def monomial_series(c: RatFunc, r: int, N: int) -> TwistedSeries:
    """c * T^r truncated at N."""
    zero = RatFunc.constant(c.tower, 0)
    return TwistedSeries(N, tuple(c if k == r else zero for k in range(N + 1)))


def star_mul(ctx: QContext, A: TwistedSeries, B: TwistedSeries) -> TwistedSeries:
    _same_n(A, B)
    out = []
    for m in range(A.N + 1):
        acc = RatFunc.constant(ctx.tower, 0)
        for r in range(m + 1):
            a, b = A.coeffs[r], B.coeffs[m - r]
            if a and b:
                acc = acc + b.sigma(ctx, r) * a
        out.append(acc)
    return TwistedSeries(A.N, tuple(out))


def taylor(ctx: QContext, a: RatFunc, N: int) -> TwistedSeries:
    """T_a = sum_k delta^(k)(a) T^k up to T^N."""
    return TwistedSeries(N, tuple(delta_range(ctx, N, a)))


def star_inverse(ctx: QContext, A: TwistedSeries) -> TwistedSeries:
    """Right inverse by forward substitution; it is also a left inverse."""
    a0 = A.coeffs[0]
    if not a0:
        raise NotInvertible("constant term is zero")
    inv0 = a0.inverse()
    B = [inv0]
    for m in range(1, A.N + 1):
        acc = RatFunc.constant(ctx.tower, 0)
        for r in range(1, m + 1):
            a = A.coeffs[r]
            if a:
                acc = acc + B[m - r].sigma(ctx, r) * a
        B.append(-acc * inv0)
    return TwistedSeries(A.N, tuple(B))


def delta_via_series(ctx: QContext, k: int, a: RatFunc, b: RatFunc) -> RatFunc:
    """Coefficient k of T_a * (T_b)^(-1)."""
    if not b:
        raise NotInvertible("b is zero")
    Ta = taylor(ctx, a, k)
    Tb = taylor(ctx, b, k)
    return star_mul(ctx, Ta, star_inverse(ctx, Tb)).coeffs[k]


def delta_T(ctx: QContext, k: int, A: TwistedSeries) -> TwistedSeries:
    """delta_T^(k)(T^r) = (r over k)_q T^(r-k); the truncation drops to N - k."""
    if k > A.N:
        raise TruncationMismatch(f"delta_T^({k}) needs truncation >= {k}")
    out = []
    for j in range(A.N - k + 1):
        c = A.coeffs[j + k]
        w = q_binom(ctx, j + k, k)
        out.append(c * w if w else RatFunc.constant(ctx.tower, 0))
    return TwistedSeries(A.N - k, tuple(out))

