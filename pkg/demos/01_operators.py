"""A first look at the iterative q-difference operators at a cube root of unity.

With q of order n the single operator delta^(1) is nilpotent: applying it n
times kills everything.  The higher operators delta^(k) carry on where the
powers of delta^(1) stop.
"""

from qiter import cyclotomic_tower, delta, make_context, parse, q_binom

ctx = make_context(cyclotomic_tower(3), 3)  # q = g, a primitive cube root of unity
f = parse(ctx, "t^6")

print("delta^(k)(t^6) for k = 0..6:")
for k in range(7):
    print(f"  k={k}: {delta(ctx, k, f)}")

# powers of delta^(1) die after n steps, even on t^3
h = parse(ctx, "t^3 + 1/(t - 1)")
for step in range(1, 4):
    h = delta(ctx, 1, h)
    print(f"(delta^(1))^{step} applied: {h}")

# delta^(3) is not a composite of delta^(1): the binomial weight vanishes
print("binom(3, 1)_q =", q_binom(ctx, 3, 1))
print("delta^(3)(t^3) =", delta(ctx, 3, parse(ctx, "t^3")))

# the twisted Leibniz rule on a product
a, b = parse(ctx, "t + g"), parse(ctx, "1/(t^2 - 2)")
k = 4
lhs = delta(ctx, k, a * b)
rhs = sum((delta(ctx, i, a) * delta(ctx, k - i, b).sigma(ctx, i) for i in range(k + 1)), parse(ctx, "0"))
print("Leibniz at k=4 holds:", lhs == rhs)
