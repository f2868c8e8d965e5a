import math
import random

import pytest
from hypothesis import given, strategies as st

from qiter.exactfield import charp_tower, cyclotomic_tower, make_tower
from qiter.qarith import (
    PASCAL_LIMIT,
    make_context,
    pochhammer_coeffs,
    q_binom,
    q_binom_lucas,
    q_factorial,
    q_int,
)


def gauss_poly(r, k, memo={}):
    """Integer coefficients of the Gaussian polynomial, built from the mirrored Pascal rule."""
    if k < 0 or k > r:
        return [0]
    if k == 0 or k == r:
        return [1]
    key = (r, k)
    if key not in memo:
        # [r,k] = q^(r-k) [r-1,k-1] + [r-1,k]
        a = [0] * (r - k) + gauss_poly(r - 1, k - 1)
        b = gauss_poly(r - 1, k)
        out = [0] * max(len(a), len(b))
        for i, c in enumerate(a):
            out[i] += c
        for i, c in enumerate(b):
            out[i] += c
        memo[key] = out
    return memo[key]


def evaluate(coeffs, q):
    acc = q.tower.zero()
    for c in reversed(coeffs):
        acc = acc * q + c
    return acc


CONTEXTS = [make_context(cyclotomic_tower(n), n) for n in (2, 3, 4, 5, 6)] + [
    make_context(charp_tower(p, n), n) for p, n in [(5, 2), (5, 4), (7, 3), (7, 6), (13, 3), (13, 4), (2, 3)]
]
IDS = [f"char{c.p}-n{c.n}" for c in CONTEXTS]


@pytest.mark.parametrize("ctx", CONTEXTS, ids=IDS)
def test_binom_matches_integer_polynomial(ctx):
    for r in range(0, 26):
        for k in range(0, r + 1):
            assert q_binom(ctx, r, k) == evaluate(gauss_poly(r, k), ctx.q)


@pytest.mark.parametrize("ctx", CONTEXTS, ids=IDS)
def test_multiplicativity(ctx):
    n = ctx.n
    for a in range(13):
        for b in range(a + 1):
            assert q_binom(ctx, a * n, b * n) == ctx.tower.scalar(math.comb(a, b))


@pytest.mark.parametrize("ctx", CONTEXTS, ids=IDS)
def test_lucas_agrees_with_pascal(ctx):
    for r in range(0, PASCAL_LIMIT + 1, 7):
        for k in range(0, r + 1, 3):
            assert q_binom_lucas(ctx, r, k) == q_binom(ctx, r, k)


@pytest.mark.parametrize("ctx", CONTEXTS[:5], ids=IDS[:5])
def test_vandermonde_above_table(ctx):
    rng = random.Random(5)
    for _ in range(10):
        r, s = rng.randint(150, 260), rng.randint(0, 60)
        k = rng.randint(0, r + s)
        rhs = ctx.tower.zero()
        for j in range(k + 1):
            rhs = rhs + q_binom(ctx, r, k - j) * q_binom(ctx, s, j) * ctx.qpow(j * (r - k + j))
        assert q_binom(ctx, r + s, k) == rhs


def test_charp_vanishing_remark():
    for p, n in [(5, 2), (7, 3), (13, 4), (2, 3)]:
        ctx = make_context(charp_tower(p, n), n)
        for j in range(1, 4):
            for i in range(1, p**j):
                assert not q_binom(ctx, n * p**j, n * i)


@given(st.integers(0, 80), st.integers(0, 80), st.data())
def test_symmetry_and_pascal(r, s, data):
    ctx = CONTEXTS[1]
    k = data.draw(st.integers(0, r))
    assert q_binom(ctx, r, k) == q_binom(ctx, r, r - k)
    if r and k:
        assert q_binom(ctx, r, k) == q_binom(ctx, r - 1, k - 1) + ctx.qpow(k) * q_binom(ctx, r - 1, k)


def test_q_int_and_factorial():
    ctx = make_context(cyclotomic_tower(3), 3)
    g = ctx.q
    assert q_int(ctx, 0) == 0
    assert q_int(ctx, 2) == 1 + g
    assert not q_int(ctx, 3)
    assert q_int(ctx, 4) == 1
    assert not q_factorial(ctx, 3)
    assert q_factorial(ctx, 2) == 1 + g
    # k! (r over k) = r (r-1) ... (r-k+1) in q-numbers, for k < n
    for r in range(1, 10):
        assert q_factorial(ctx, 2) * q_binom(ctx, r, 2) == q_int(ctx, r) * q_int(ctx, r - 1)


def test_pochhammer_expands_q_binomial_theorem():
    # prod (1 + q^i t) = sum q^(k(k-1)/2) (m over k) t^k; compare with t -> -t
    for ctx in CONTEXTS[:4]:
        for m in range(9):
            co = pochhammer_coeffs(ctx, m)
            for k in range(m + 1):
                want = q_binom(ctx, m, k) * ctx.qpow(k * (k - 1) // 2) * (-1) ** k
                assert co[k] == want


def test_context_validation():
    T = cyclotomic_tower(3)
    with pytest.raises(ValueError):
        make_context(T, 3, T.one())
    with pytest.raises(ValueError):
        make_context(T, 6, T.gen())
    with pytest.raises(ValueError):
        make_context(make_tower(0, [0, 1]), 3)
    assert make_context(T, 3).q == T.gen()
