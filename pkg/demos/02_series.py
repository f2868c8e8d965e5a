"""Taylor series in the twisted power series ring.

The map a -> sum delta^(k)(a) T^k is multiplicative for the twisted product,
so quotients can be differenced by inverting a series instead of using the
recursion directly.
"""

from qiter import cyclotomic_tower, delta, make_context, parse
from qiter.twisted import delta_via_series, star_mul, taylor

ctx = make_context(cyclotomic_tower(4), 4)
a, b = parse(ctx, "t^2 + 1"), parse(ctx, "t - g")
N = 2 * ctx.n

Ta, Tb = taylor(ctx, a, N), taylor(ctx, b, N)
print("taylor(a) =", [str(c) for c in Ta.coeffs])
print("taylor(ab) == taylor(a) * taylor(b):", taylor(ctx, a * b, N) == star_mul(ctx, Ta, Tb))

for k in range(N + 1):
    direct = delta(ctx, k, a / b)
    assert direct == delta_via_series(ctx, k, a, b)
print(f"both routes agree on delta^(k)(a/b) for k <= {N}")
print("for example delta^(5)(a/b) =", delta(ctx, 5, a / b))
