"""q-integers, q-factorials and Gaussian binomials at a primitive root of unity."""

from __future__ import annotations

import math
import threading

from .exactfield import FieldElement, FieldTower, NoOrderUpTo, find_root_of_unity, mult_order

__all__ = ["QContext", "make_context", "q_int", "q_factorial", "q_binom", "q_binom_lucas", "pochhammer_coeffs"]


class QContext:
    """A tower together with q of exact multiplicative order n >= 2.

    Holds a memo table for q-binomials; the table is guarded by a lock so a
    context can be shared between threads.
    """

    def __init__(self, tower: FieldTower, q: FieldElement, n: int | None = None):
        if q.tower != tower:
            raise ValueError("q does not belong to the tower")
        if not q:
            raise ValueError("q must be nonzero")
        bound = n if n is not None else 10_000
        try:
            order = mult_order(q, bound)
        except NoOrderUpTo:
            raise ValueError(f"q has no finite order up to {bound}") from None
        if n is not None and order != n:
            raise ValueError(f"q has order {order}, not {n}")
        if order == 1:
            raise ValueError("q = 1 is not allowed")
        self.tower = tower
        self.q = q
        self.n = order
        self._qpow = [tower.one()]
        for _ in range(order - 1):
            self._qpow.append(self._qpow[-1] * q)
        self._rows: list[list[FieldElement]] = [[tower.one()]]
        self._lock = threading.Lock()

    @property
    def p(self) -> int:
        return self.tower.characteristic

    def qpow(self, e: int) -> FieldElement:
        """q^e for any integer e (uses q^n = 1)."""
        return self._qpow[e % self.n]

    def binom_row(self, r: int) -> list[FieldElement]:
        rows = self._rows
        if r < len(rows):
            return rows[r]
        with self._lock:
            while len(rows) <= r:
                prev = rows[-1]
                m = len(rows)
                row = [self.tower.one()]
                for k in range(1, m):
                    # B(m,k) = B(m-1,k-1) + q^k B(m-1,k)
                    row.append(prev[k - 1] + self._qpow[k % self.n] * prev[k])
                row.append(self.tower.one())
                rows.append(row)
        return rows[r]

    def __eq__(self, other):
        return isinstance(other, QContext) and self.tower == other.tower and self.q == other.q

    def __hash__(self):
        return hash((self.tower, self.q))

    def __repr__(self):
        return f"QContext(n={self.n}, q={self.q}, tower={self.tower!r})"


def make_context(tower: FieldTower, n: int, q: FieldElement | None = None) -> QContext:
    """Context with q of order n; q defaults to find_root_of_unity(tower, n)."""
    if q is None:
        q = find_root_of_unity(tower, n)
    return QContext(tower, q, n)


def q_int(ctx: QContext, k: int) -> FieldElement:
    """[k]_q = 1 + q + ... + q^(k-1)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    # each full block 1 + q + ... + q^(n-1) is zero
    rest = k % ctx.n
    out = ctx.tower.zero()
    for i in range(rest):
        out = out + ctx.qpow(i)
    return out


def q_factorial(ctx: QContext, k: int) -> FieldElement:
    out = ctx.tower.one()
    for i in range(1, k + 1):
        out = out * q_int(ctx, i)
        if not out:
            break
    return out


# rows above this are not tabulated; see q_binom
PASCAL_LIMIT = 192


def q_binom(ctx: QContext, r: int, k: int) -> FieldElement:
    """Gaussian binomial (r over k)_q; 0 when k > r or k < 0.

    Small rows come from the q-Pascal table.  Beyond PASCAL_LIMIT we use the
    q-Lucas factorization (r over k)_q = (r0 over k0)_q * C(r1, k1), where
    r = r1*n + r0 and k = k1*n + k0, which is exact at a root of order n.
    """
    if r < 0:
        raise ValueError("upper index must be nonnegative")
    if k < 0 or k > r:
        return ctx.tower.zero()
    if r <= PASCAL_LIMIT:
        return ctx.binom_row(r)[k]
    return q_binom_lucas(ctx, r, k)


def q_binom_lucas(ctx: QContext, r: int, k: int) -> FieldElement:
    n = ctx.n
    r1, r0 = divmod(r, n)
    k1, k0 = divmod(k, n)
    if k0 > r0 or k1 > r1:
        return ctx.tower.zero()
    small = ctx.binom_row(r0)[k0]
    return small * ctx.tower.scalar(_comb_in_char(r1, k1, ctx.p))


def _comb_in_char(a: int, b: int, p: int) -> int:
    if not p:
        return math.comb(a, b)
    out = 1
    # Lucas: product of digit binomials
    while a or b:
        a, ad = divmod(a, p)
        b, bd = divmod(b, p)
        if bd > ad:
            return 0
        out = out * math.comb(ad, bd) % p
    return out


def pochhammer_coeffs(ctx: QContext, m: int) -> list[FieldElement]:
    """Coefficients of (1 - t)(1 - qt)...(1 - q^(m-1) t), low to high."""
    coeffs = [ctx.tower.one()]
    for i in range(m):
        c = ctx.qpow(i)
        nxt = coeffs + [ctx.tower.zero()]
        for j in range(len(coeffs)):
            nxt[j + 1] = nxt[j + 1] - c * coeffs[j]
        coeffs = nxt
    return coeffs
