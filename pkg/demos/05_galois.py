"""Rank-one equations and their Galois groups in characteristic p.

A rank-one family is determined by its digits a_k; those digits are the
p-adic expansion of a number alpha, and the group is finite exactly when the
expansion is eventually periodic.
"""

from fractions import Fraction

from qiter import cyclotomic_tower, make_tower
from qiter.galois import (
    classify_ga,
    classify_rank1_char0,
    classify_rank1_charp,
    detect_period,
    padic_digits,
    explicit_digits,
    thue_morse,
)

d = padic_digits(1, 3, 5, 24)
print("1/3 in base 5:", d.digits[:10], "...")
print("period:", detect_period(d))
print("group:", classify_rank1_charp(d, 2, 5))

tm = explicit_digits(thue_morse(64), 2)
print("Thue-Morse digits:", classify_rank1_charp(tm, 3, 2))
print("same stream as an additive family:", classify_ga(tm))

# in characteristic 0 the exponent a/n decides
T = cyclotomic_tower(3)
print("a = 6/5 at n = 3:", classify_rank1_char0(T.scalar(Fraction(6, 5)), 3))
print("a = sqrt 2 at n = 2:", classify_rank1_char0(make_tower(0, [-2, 0, 1]).gen(), 2))
