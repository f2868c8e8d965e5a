"""Randomized invariant suites behind ``qiter selftest``.

Each trial returns True or False; a suite result is the pass count out of the
trials run.  All randomness comes from one seeded ``random.Random``.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .exactfield import FieldTower, elements_random
from .galois import NoPeriodUpTo, alpha_from_periodic, detect_period, monomial_solution_check, padic_digits
from .qarith import QContext, q_binom
from .ratfunc import Poly, RatFunc, delta, delta_range
from .twisted import delta_T, delta_via_series, star_mul, taylor
from .wronskian import difference_orders

SUITES = ("identities", "operators", "series", "taylor", "wronskian", "padic")


def random_poly(tower: FieldTower, rng: random.Random, deg: int, height: int = 3) -> Poly:
    terms = {}
    for e in range(deg + 1):
        if rng.random() < 0.7 or e == deg:
            c = elements_random(tower, rng, height)
            if c:
                terms[e] = c
    return Poly(tower, terms)


def random_ratfunc(tower: FieldTower, rng: random.Random, deg: int = 3) -> RatFunc:
    num = random_poly(tower, rng, rng.randint(0, deg))
    den = random_poly(tower, rng, rng.randint(0, deg))
    while not den:
        den = random_poly(tower, rng, rng.randint(0, deg))
    if rng.random() < 0.3:
        den = den * Poly.monomial(tower, rng.randint(0, 2))
    return RatFunc(num, den)


def _trial_identities(ctx: QContext, rng: random.Random) -> bool:
    n = ctx.n
    which = rng.randrange(3)
    one = ctx.tower.one()
    if which == 0:
        a = rng.randint(0, 12)
        b = rng.randint(0, a)
        from math import comb

        return q_binom(ctx, a * n, b * n) == ctx.tower.scalar(comb(a, b))
    if which == 1:
        r, s = rng.randint(0, 40), rng.randint(0, 40)
        k = rng.randint(0, r + s)
        rhs = ctx.tower.zero()
        for j in range(k + 1):
            rhs = rhs + q_binom(ctx, r, k - j) * q_binom(ctx, s, j) * ctx.qpow(j * (r - k + j))
        return q_binom(ctx, r + s, k) == rhs
    # q-Pascal step
    r = rng.randint(1, 60)
    k = rng.randint(1, r)
    return q_binom(ctx, r, k) == q_binom(ctx, r - 1, k - 1) + ctx.qpow(k) * q_binom(ctx, r - 1, k) and q_binom(ctx, r, 0) == one


def _trial_operators(ctx: QContext, rng: random.Random) -> bool:
    f = random_ratfunc(ctx.tower, rng)
    g = random_ratfunc(ctx.tower, rng)
    n = ctx.n
    k = rng.randint(0, 2 * n)
    # twisted Leibniz
    df, dg, dfg = delta_range(ctx, k, f), delta_range(ctx, k, g), delta(ctx, k, f * g)
    lhs = RatFunc.constant(ctx.tower, 0)
    for i in range(k + 1):
        lhs = lhs + df[i] * dg[k - i].sigma(ctx, i)
    if lhs != dfg:
        return False
    i, j = rng.randint(0, n), rng.randint(0, n)
    if delta(ctx, i, delta(ctx, j, f)) != delta(ctx, i + j, f) * q_binom(ctx, i + j, i):
        return False
    if delta(ctx, k, f).sigma(ctx, j) * ctx.qpow(j * k) != delta(ctx, k, f.sigma(ctx, j)):
        return False
    x = f
    for _ in range(n):
        x = delta(ctx, 1, x)
    return not x


def _trial_series(ctx: QContext, rng: random.Random) -> bool:
    a = random_ratfunc(ctx.tower, rng, 2)
    b = random_ratfunc(ctx.tower, rng, 2)
    while not b:
        b = random_ratfunc(ctx.tower, rng, 2)
    k = rng.randint(0, 2 * ctx.n)
    return delta(ctx, k, a / b) == delta_via_series(ctx, k, a, b)


def _trial_taylor(ctx: QContext, rng: random.Random) -> bool:
    N = 2 * ctx.n
    a, b = random_ratfunc(ctx.tower, rng, 2), random_ratfunc(ctx.tower, rng, 2)
    if taylor(ctx, a * b, N) != star_mul(ctx, taylor(ctx, a, N), taylor(ctx, b, N)):
        return False
    k = rng.randint(0, N)
    return delta_T(ctx, k, taylor(ctx, a, N)) == taylor(ctx, delta(ctx, k, a), N - k)


def _trial_wronskian(ctx: QContext, rng: random.Random) -> bool:
    n = ctx.n
    r = rng.randint(1, 4)
    exps = rng.sample(range(0, 3 * n + 1), r)
    xs = [RatFunc.t(ctx.tower, e) for e in exps]
    res = difference_orders(ctx, xs, 3 * n)
    if not res.found or not res.det:
        return False
    # adding a combination of the others must be detected as dependent
    c = elements_random(ctx.tower, rng) or ctx.tower.one()
    dep = xs + [xs[0] * RatFunc.constant(ctx.tower, c)]
    return not difference_orders(ctx, dep, 3 * n).found


def _trial_padic(ctx: QContext, rng: random.Random) -> bool:
    p = rng.choice([2, 3, 5, 7])
    m = rng.randint(1, 50)
    while m % p == 0:
        m = rng.randint(1, 50)
    a = rng.randint(-50, 50)
    # window of four times (preperiod bound + period) so no shorter false period fits
    ell = next(k for k in range(1, m + 1) if (p**k - 1) % m == 0)
    d = padic_digits(a, m, p, 4 * (ell + 8))
    per = detect_period(type(d)(p, d.digits))
    if isinstance(per, NoPeriodUpTo):
        return False
    got = alpha_from_periodic(d.digits[: per.preperiod], d.digits[per.preperiod: per.preperiod + per.period], p)
    f = Fraction(a, m)
    if got != (f.numerator, f.denominator):
        return False
    n = rng.choice([k for k in (2, 3, 4, 5) if k % p])
    return monomial_solution_check(d, n, K=min(4, d.K))


_TRIALS = {
    "identities": _trial_identities,
    "operators": _trial_operators,
    "series": _trial_series,
    "taylor": _trial_taylor,
    "wronskian": _trial_wronskian,
    "padic": _trial_padic,
}


def run_suite(name: str, ctx: QContext, trials: int = 100, seed: int = 0) -> tuple[int, int, list[int]]:
    """(passed, trials, failing trial indices)."""
    if name not in _TRIALS:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rng = random.Random(f"{name}:{seed}")
    fn = _TRIALS[name]
    failed = []
    for i in range(trials):
        if not fn(ctx, rng):
            failed.append(i)
    return trials - len(failed), trials, failed
