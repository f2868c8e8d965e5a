"""Linear independence over the constants via difference orders.

The naive q-Casoratian uses only delta^(1), which cannot see t^n at all.
Searching over all orders finds a nonzero determinant whenever the family is
independent.
"""

from qiter import cyclotomic_tower, make_context, parse
from qiter.wronskian import difference_orders, q_casoratian

ctx = make_context(cyclotomic_tower(3), 3)
P = lambda *xs: [parse(ctx, x) for x in xs]

xs = P("1", "t^3")
print("Casoratian of {1, t^3}:", q_casoratian(ctx, xs))
r = difference_orders(ctx, xs)
print("difference orders:", r.orders, "det:", r.det)

for family in (P("1", "t", "t^2"), P("t", "1/(t - 1)", "t^4"), P("1/(t + 1)", "2/(t + 1)")):
    r = difference_orders(ctx, family)
    print([str(x) for x in family], "->", r.orders)
