from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qiter.exactfield import cyclotomic_tower, make_tower
from qiter.galois import (
    AdditiveFinite,
    Cyclic,
    DenominatorDivisibleByP,
    NoPeriodUpTo,
    Period,
    TorusGm,
    UndecidedUpTo,
    alpha_from_periodic,
    classify_ga,
    classify_rank1_char0,
    classify_rank1_charp,
    detect_period,
    explicit_digits,
    monomial_solution_check,
    padic_digits,
    thue_morse,
)


def digits_oracle(a, m, p, K):
    # a/m mod p^K, read off in base p
    x = a * pow(m, -1, p**K) % p**K
    out = []
    for _ in range(K):
        x, d = divmod(x, p)
        out.append(d)
    return out


def test_padic_examples():
    assert padic_digits(1, 3, 5, 6).digits == (2, 3, 1, 3, 1, 3)
    assert padic_digits(7, 1, 5, 4).digits == (2, 1, 0, 0)
    assert padic_digits(-1, 1, 3, 4).digits == (2, 2, 2, 2)
    with pytest.raises(DenominatorDivisibleByP):
        padic_digits(1, 10, 5, 3)


@given(st.integers(-50, 50), st.integers(1, 50), st.sampled_from([2, 3, 5, 7]))
def test_digits_match_modular_inverse(a, m, p):
    if m % p == 0:
        return
    assert list(padic_digits(a, m, p, 20).digits) == digits_oracle(a, m, p, 20)


def test_period_examples():
    assert detect_period(explicit_digits((2, 3, 1, 3, 1, 3), 5)) == Period(1, 2)
    assert detect_period(explicit_digits((0,) * 8, 5)) == Period(0, 1)
    assert detect_period(explicit_digits(thue_morse(32), 2)) == NoPeriodUpTo(32)


def test_alpha_examples():
    assert alpha_from_periodic([2], [3, 1], 5) == (1, 3)
    assert alpha_from_periodic([], [0], 5) == (0, 1)
    for p in (2, 3, 5, 7):
        assert alpha_from_periodic([], [p - 1], p) == (-1, 1)


def _order(p, m):
    return next(k for k in range(1, m + 1) if (p**k - 1) % m == 0)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_round_trip_all_small_rationals(p):
    for m in range(1, 51):
        if m % p == 0:
            continue
        ell = _order(p, m)
        for a in range(-50, 51):
            d = padic_digits(a, m, p, 4 * (ell + 8))
            per = detect_period(explicit_digits(d.digits, p))
            got = alpha_from_periodic(d.digits[: per.preperiod], d.digits[per.preperiod: per.preperiod + per.period], p)
            f = Fraction(a, m)
            assert got == (f.numerator, f.denominator)


def test_charp_classification():
    assert classify_rank1_charp(padic_digits(1, 3, 5, 24), 2, 5) == Cyclic(3)
    assert classify_rank1_charp(padic_digits(4, 1, 5, 24), 2, 5) == Cyclic(1)
    assert classify_rank1_charp(explicit_digits(thue_morse(32), 2), 3, 2) == UndecidedUpTo(32, "consistent with Gm at this bound")
    # explicit periodic data is classified through its period
    assert classify_rank1_charp(explicit_digits(padic_digits(2, 7, 3, 40).digits, 3)) == Cyclic(7)


@given(st.integers(-50, 50), st.integers(1, 50), st.sampled_from([2, 3, 5, 7]))
def test_cyclic_order_divides_denominator(a, m, p):
    if m % p == 0:
        return
    v = classify_rank1_charp(padic_digits(a, m, p, 16))
    assert isinstance(v, Cyclic) and m % v.order == 0
    if Fraction(a, m).denominator == m:
        assert v.order == m


def test_char0_classification():
    for n in (2, 3, 5):
        T = cyclotomic_tower(n)
        assert classify_rank1_char0(T.scalar(Fraction(2 * n, 5)), n) == Cyclic(5)
        assert classify_rank1_char0(T.scalar(n), n) == Cyclic(1)
    s2 = make_tower(0, [-2, 0, 1])
    assert classify_rank1_char0(s2.gen(), 2) == TorusGm()
    assert classify_rank1_char0(s2.scalar(Fraction(3, 4)), 2) == Cyclic(8)


def test_ga_classification():
    assert classify_ga(padic_digits(1, 3, 5, 24)) == AdditiveFinite(5)
    assert classify_ga(explicit_digits([0] * 10, 2)) == AdditiveFinite(2)
    assert isinstance(classify_ga(explicit_digits(thue_morse(32), 2)), UndecidedUpTo)


def test_finite_data_never_claims_torus():
    # aperiodic explicit streams only ever give Undecided
    for K in (8, 16, 32, 64):
        for fn in (classify_rank1_charp, classify_ga):
            v = fn(explicit_digits(thue_morse(K), 2))
            assert isinstance(v, UndecidedUpTo) and v.bound == K


def test_monomial_solution_examples():
    assert monomial_solution_check(explicit_digits([2, 1], 5), 2, 2)
    assert monomial_solution_check(explicit_digits([0, 0, 0], 7), 3)
    for p, n in [(5, 2), (7, 3), (2, 3), (3, 4)]:
        assert monomial_solution_check(explicit_digits([1], p), n)


def test_monomial_solution_grid():
    # 50 points: rationals a/m over p in {3, 5} and n in {2, 4}
    count = 0
    for p, n in [(3, 2), (3, 4), (5, 2), (5, 4)]:
        for a, m in [(1, 2), (-1, 2), (3, 7), (5, 4), (-2, 11), (7, 1), (13, 8), (1, 13), (-9, 16), (4, 1), (2, 17), (-1, 1), (22, 19)]:
            if m % p == 0:
                continue
            d = padic_digits(a, m, p, 5)
            assert monomial_solution_check(d, n)
            count += 1
    assert count >= 50


def test_digit_range_is_checked():
    with pytest.raises(ValueError):
        explicit_digits([0, 5], 5)
