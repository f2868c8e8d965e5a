"""p-adic digits and Galois-group verdicts for the rank-1 and unipotent worked families.

Finite digit data can never prove that a p-adic number is irrational, so
explicit streams without a detected period get ``UndecidedUpTo(K)`` and never a
torus or full additive verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactfield import FieldElement, charp_tower
from .qarith import QContext, make_context, q_binom

__all__ = [
    "DigitStream",
    "Period",
    "NoPeriodUpTo",
    "Cyclic",
    "TorusGm",
    "AdditiveFinite",
    "AdditiveGa",
    "UndecidedUpTo",
    "DenominatorDivisibleByP",
    "padic_digits",
    "explicit_digits",
    "detect_period",
    "alpha_from_periodic",
    "classify_rank1_charp",
    "classify_rank1_char0",
    "classify_ga",
    "monomial_solution_check",
    "thue_morse",
]


class DenominatorDivisibleByP(ValueError):
    pass


@dataclass(frozen=True)
class DigitStream:
    p: int
    digits: tuple
    # (a, m) for the rational a/m, or None for explicit data
    rational: tuple | None = None

    @property
    def K(self) -> int:
        return len(self.digits)

    @property
    def provenance(self) -> str:
        return "rational" if self.rational is not None else "explicit"


@dataclass(frozen=True)
class Period:
    preperiod: int
    period: int


@dataclass(frozen=True)
class NoPeriodUpTo:
    bound: int


# verdicts


@dataclass(frozen=True)
class Cyclic:
    order: int
    kind: str = "cyclic"

    def __str__(self):
        return f"Z/{self.order}Z"


@dataclass(frozen=True)
class TorusGm:
    kind: str = "Gm"

    def __str__(self):
        return "Gm"


@dataclass(frozen=True)
class AdditiveFinite:
    """A finite subgroup of Ga; its order (a power of p) is not computed."""

    p: int
    kind: str = "additive-finite"

    def __str__(self):
        return f"finite subgroup of Ga (order a power of {self.p})"


@dataclass(frozen=True)
class AdditiveGa:
    # never produced from finite data; kept for completeness of the verdict type
    kind: str = "Ga"


@dataclass(frozen=True)
class UndecidedUpTo:
    bound: int
    hint: str = ""
    kind: str = "undecided"

    def __str__(self):
        return f"undecided up to {self.bound} digits ({self.hint})"


def padic_digits(a: int, m: int, p: int, count: int) -> DigitStream:
    """First ``count`` digits of a/m in Z_p."""
    if m <= 0:
        raise ValueError("m must be positive")
    if m % p == 0:
        raise DenominatorDivisibleByP(f"{m} is divisible by {p}")
    minv = pow(m, -1, p)
    num = a
    out = []
    for _ in range(count):
        d = num * minv % p
        out.append(d)
        num = (num - d * m) // p
    g = math.gcd(a, m)
    return DigitStream(p, tuple(out), (a // g, m // g))


def explicit_digits(digits, p: int) -> DigitStream:
    digits = tuple(int(d) for d in digits)
    if any(not 0 <= d < p for d in digits):
        raise ValueError(f"digits must lie in 0..{p - 1}")
    return DigitStream(p, digits, None)


def detect_period(d: DigitStream) -> Period | NoPeriodUpTo:
    """Least (s, l) with a_(i+l) = a_i for s <= i < K - l and K - s >= 2 l."""
    a = d.digits
    K = len(a)
    for s in range(K):
        for ell in range(1, (K - s) // 2 + 1):
            if all(a[i + ell] == a[i] for i in range(s, K - ell)):
                return Period(s, ell)
    return NoPeriodUpTo(K)


def alpha_from_periodic(pre, period, p: int) -> tuple[int, int]:
    """(a, m) in lowest terms, m > 0, for the p-adic number pre + p^s * (period repeated)."""
    pre, period = list(pre), list(period)
    if not period:
        raise ValueError("period must be nonempty")
    A = sum(x * p**i for i, x in enumerate(pre))
    B = sum(x * p**i for i, x in enumerate(period))
    val = Fraction(A) + Fraction(p ** len(pre) * B, 1 - p ** len(period))
    return val.numerator, val.denominator


def alpha_of(d: DigitStream) -> tuple[int, int] | None:
    if d.rational is not None:
        return d.rational
    per = detect_period(d)
    if isinstance(per, NoPeriodUpTo):
        return None
    return alpha_from_periodic(d.digits[: per.preperiod], d.digits[per.preperiod: per.preperiod + per.period], d.p)


def classify_rank1_charp(d: DigitStream, n: int | None = None, p: int | None = None):
    """Group of delta^(np^k)(y) = (a_k / t^(np^k)) y: Z/mZ with m the denominator of alpha."""
    if p is not None and p != d.p:
        raise ValueError("digit stream has another prime")
    al = alpha_of(d)
    if al is None:
        return UndecidedUpTo(d.K, "consistent with Gm at this bound")
    return Cyclic(al[1])


def classify_ga(d: DigitStream, n: int | None = None, p: int | None = None):
    """Group of the unipotent family with Atilde_k = [[0, a_k], [0, 0]]."""
    if p is not None and p != d.p:
        raise ValueError("digit stream has another prime")
    if alpha_of(d) is None:
        return UndecidedUpTo(d.K, "consistent with Ga at this bound")
    return AdditiveFinite(d.p)


def classify_rank1_char0(a: FieldElement, n: int):
    """Group of delta^(n)(y) = a/(n t^n) y over a characteristic-0 tower."""
    if a.tower.characteristic:
        raise ValueError("needs a characteristic-0 element")
    if not a.is_scalar():
        return TorusGm()
    return Cyclic((Fraction(a.scalar_value()) / n).denominator)


def monomial_solution_check(d: DigitStream, n: int, K: int | None = None, ctx: QContext | None = None) -> bool:
    """With A = n sum_{l<K} a_l p^l, check (A over np^k)_q = a_k in F_p for k < K.

    This is delta^(np^k)(t^A) = a_k t^(A - np^k), i.e. t^A solves the rank-1 family.
    """
    p = d.p
    if K is None:
        K = d.K
    if ctx is None:
        ctx = default_charp_context(p, n)
    if ctx.p != p or ctx.n != n:
        raise ValueError("context does not match p and n")
    A = n * sum(x * p**l for l, x in enumerate(d.digits[:K]))
    return all(q_binom(ctx, A, n * p**k) == ctx.tower.scalar(d.digits[k]) for k in range(K))


def default_charp_context(p: int, n: int) -> QContext:
    """F_(p^f) with f the order of p mod n, and q its canonical root of order n."""
    if n % p == 0:
        raise ValueError("n must be prime to p")
    return make_context(charp_tower(p, n), n)


def thue_morse(count: int) -> tuple:
    return tuple(bin(i).count("1") % 2 for i in range(count))
