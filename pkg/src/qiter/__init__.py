"""Exact iterative q-difference calculus at roots of unity."""

from .exactfield import FieldTower, FieldElement, make_tower, cyclotomic_tower, charp_tower
from .qarith import QContext, make_context, q_binom
from .ratfunc import Poly, RatFunc, parse, delta, sigma_q
from .matrix import Matrix

__version__ = "0.1.0"
