"""Exact arithmetic in simple field towers ``P[x]/(f)`` with ``P`` = Q or F_p.

A tower is fixed by its characteristic and a monic modulus ``f`` given low-to-high.
Elements keep their coordinates in the power basis ``1, g, ..., g^(d-1)``.

Characteristic-0 elements are stored as a tuple of integer numerators over a
single positive common denominator; characteristic-p elements as residues in
``range(p)`` with denominator 1.  Everything is immutable.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "FieldError",
    "ReducibleModulus",
    "IrreducibilityUnknown",
    "NotPrime",
    "NoSuchRoot",
    "ZeroElement",
    "BadReduction",
    "PoleAtPlace",
    "NoOrderUpTo",
    "FieldTower",
    "FieldElement",
    "Place",
    "make_tower",
    "tower_from_config",
    "tower_to_config",
    "find_root_of_unity",
    "mult_order",
    "residue_places",
    "reduce_at_place",
    "is_prime",
    "cyclotomic_tower",
    "charp_tower",
    "field_from_spec",
]


class FieldError(ValueError):
    """Base class for errors raised by this module."""


class ReducibleModulus(FieldError):
    pass


class IrreducibilityUnknown(FieldError):
    """No irreducibility certificate was found and none was asserted."""


class NotPrime(FieldError):
    pass


class NoSuchRoot(FieldError):
    pass


class ZeroElement(FieldError, ZeroDivisionError):
    pass


class BadReduction(FieldError):
    pass


class PoleAtPlace(FieldError):
    pass


class NoOrderUpTo(FieldError):
    def __init__(self, bound: int):
        super().__init__(f"no multiplicative order up to {bound}")
        self.bound = bound


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _to_fraction(c) -> Fraction:
    if isinstance(c, str):
        return Fraction(c.strip())
    return Fraction(c)


# --- dense polynomials over F_p, low-to-high lists of ints -------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _fp_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    if len(a) <= db:
        return [], _trim(a)
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            c = c * inv % p
            quo[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return _trim(quo), _trim([x % p for x in a[:db]])


def _fp_monic(a: list[int], p: int) -> list[int]:
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def _fp_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    return _fp_monic(a, p)


def _fp_powmod(base: list[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _fp_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _fp_divmod(_fp_mul(result, base, p), mod, p)[1]
        e >>= 1
        if e:
            base = _fp_divmod(_fp_mul(base, base, p), mod, p)[1]
    return result


def _fp_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _fp_deriv(a: Sequence[int], p: int) -> list[int]:
    return _trim([(i * a[i]) % p for i in range(1, len(a))])


def _fp_is_irreducible(f: Sequence[int], p: int) -> bool:
    """Rabin-style test: f is irreducible iff gcd(x^(p^i) - x, f) = 1 for i <= d/2."""
    d = len(f) - 1
    if d <= 0:
        return False
    if d == 1:
        return True
    xp = [0, 1]
    for _ in range(d // 2):
        xp = _fp_powmod(xp, p, f, p)
        if len(_fp_gcd(f, _fp_sub(xp, [0, 1], p), p)) > 1:
            return False
    return True


def _fp_ddf(f: list[int], p: int) -> list[tuple[int, list[int]]]:
    """Distinct-degree factorization of a monic squarefree f."""
    out = []
    i = 1
    xp = [0, 1]
    f = list(f)
    while len(f) - 1 >= 2 * i:
        xp = _fp_powmod(xp, p, f, p)
        g = _fp_gcd(f, _fp_sub(xp, [0, 1], p), p)
        if len(g) > 1:
            out.append((i, g))
            f = _fp_divmod(f, g, p)[0]
            xp = _fp_divmod(xp, f, p)[1] if len(f) > 1 else xp
        i += 1
    if len(f) > 1:
        out.append((len(f) - 1, f))
    return out


def _fp_edf(f: list[int], d: int, p: int, rng: random.Random) -> list[list[int]]:
    """Equal-degree splitting (Cantor-Zassenhaus) of a product of degree-d factors."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = _trim([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(d-1)) over F_(2^d)
            t, cur = list(a), list(a)
            for _ in range(d - 1):
                cur = _fp_divmod(_fp_mul(cur, cur, p), f, p)[1]
                t = _fp_sub(t, [(-c) % p for c in cur], p)
            b = t
        else:
            b = _fp_sub(_fp_powmod(a, (p**d - 1) // 2, f, p), [1], p)
        g = _fp_gcd(f, b, p)
        if 1 < len(g) < len(f):
            h = _fp_divmod(f, g, p)[0]
            return _fp_edf(g, d, p, rng) + _fp_edf(_fp_monic(h, p), d, p, rng)


def _fp_factor_squarefree(f: list[int], p: int) -> list[list[int]]:
    rng = random.Random(0x51A7 + p)
    factors = []
    for d, g in _fp_ddf(_fp_monic(f, p), p):
        factors.extend(_fp_edf(g, d, p, rng))
    return sorted(factors, key=lambda g: (len(g), g))


def _fp_vandermonde_inverse(roots: list[int], p: int) -> list[list[int]]:
    """Inverse of V[j][i] = roots[j]^i mod p, by Gauss-Jordan elimination."""
    d = len(roots)
    rows = [[pow(r, i, p) for i in range(d)] + [int(i == j) for i in range(d)] for j, r in enumerate(roots)]
    for c in range(d):
        piv = next(k for k in range(c, d) if rows[k][c])
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = pow(rows[c][c], -1, p)
        rows[c] = [x * inv % p for x in rows[c]]
        for k in range(d):
            if k != c and rows[k][c]:
                m = rows[k][c]
                rows[k] = [(x - m * y) % p for x, y in zip(rows[k], rows[c])]
    return [row[d:] for row in rows]


def rational_reconstruct(x: int, m: int) -> Fraction | None:
    """The fraction a/b = x mod m with |a|, b below sqrt(m/2), if there is one."""
    bound = math.isqrt(m // 2)
    r0, r1 = m, x % m
    s0, s1 = 0, 1
    while r1 > bound:
        q_ = r0 // r1
        r0, r1 = r1, r0 - q_ * r1
        s0, s1 = s1, s0 - q_ * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


# --- Q[x] helpers for the irreducibility certificate --------------------------


def _cyclotomic(m: int) -> list[int]:
    """Integer coefficients of the m-th cyclotomic polynomial, low-to-high."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _int_exact_div(num, _cyclotomic(d))
    return num


def _int_exact_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] // b[-1]
        quo[i - db] = c
        for j in range(db + 1):
            a[i - db + j] -= c * b[j]
    return quo


def _rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    denom = math.lcm(*[c.denominator for c in coeffs])
    ints = [int(c * denom) for c in coeffs]
    while ints and ints[0] == 0:
        return [Fraction(0)]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(x):
        return [d for d in range(1, x + 1) if x % d == 0]

    roots = []
    for u in divisors(a0):
        for v in divisors(an):
            for s in (1, -1):
                r = Fraction(s * u, v)
                if r in roots:
                    continue
                val = Fraction(0)
                for c in reversed(coeffs):
                    val = val * r + c
                if val == 0:
                    roots.append(r)
    return roots


def _subset_degrees(degs: list[int]) -> set[int]:
    sums = {0}
    for d in degs:
        sums |= {s + d for s in sums}
    return sums


def _certify_irreducible_over_q(coeffs: list[Fraction]) -> bool:
    """True if irreducible is proved, False if undecided.

    Raises ReducibleModulus when a rational root is found.
    """
    d = len(coeffs) - 1
    if d == 1:
        return True
    if _rational_roots(coeffs):
        raise ReducibleModulus("modulus has a rational root")
    if d <= 3:
        return True
    if all(c.denominator == 1 for c in coeffs):
        ints = [int(c) for c in coeffs]
        for m in range(1, 8 * d * d + 2):
            phi = _cyclotomic(m)
            if len(phi) - 1 == d and phi == ints:
                return True
    denom = math.lcm(*[c.denominator for c in coeffs])
    possible = set(range(d + 1))
    for p in range(2, 400):
        if not is_prime(p) or denom % p == 0:
            continue
        fp = [int(c * denom) % p for c in coeffs]
        fp = _fp_monic(_trim(fp), p)
        if len(fp) - 1 != d:
            continue
        if len(_fp_gcd(fp, _fp_deriv(fp, p), p)) > 1:
            continue
        degs = [len(g) - 1 for g in _fp_factor_squarefree(fp, p)]
        possible &= _subset_degrees(degs)
        if possible == {0, d}:
            return True
    return False


# --- towers and elements -------------------------------------------------------


class FieldTower:
    """The field P[x]/(modulus), P = Q (characteristic 0) or F_p."""

    __slots__ = ("characteristic", "modulus", "generator_name", "degree", "_imod", "_lc", "_fmod", "_zero", "_one", "_split", "_split_primes", "_split_next")

    def __init__(self, characteristic: int, modulus: Sequence, generator_name: str = "g", *, _checked=False):
        if not _checked:
            raise TypeError("use make_tower() to construct towers")
        self.characteristic = characteristic
        self.generator_name = generator_name
        if characteristic == 0:
            mod = tuple(_to_fraction(c) for c in modulus)
            den = math.lcm(*[c.denominator for c in mod])
            self._imod = tuple(int(c * den) for c in mod)
            self._lc = den
        else:
            mod = tuple(int(c) % characteristic for c in modulus)
            self._imod = mod
            self._lc = 1
        self.modulus = mod
        self.degree = len(mod) - 1
        self._fmod = [int(c) for c in self._imod]
        self._split = False
        self._split_primes = None
        self._split_next = (1 << 30) + 1
        self._zero = FieldElement._raw(self, (0,) * self.degree, 1)
        self._one = FieldElement._raw(self, (1,) + (0,) * (self.degree - 1), 1)

    def __eq__(self, other):
        return (
            isinstance(other, FieldTower)
            and self.characteristic == other.characteristic
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.characteristic, self.modulus))

    def __repr__(self):
        return f"FieldTower(char={self.characteristic}, modulus={[str(c) for c in self.modulus]})"

    @property
    def is_prime_field(self) -> bool:
        return self.degree == 1

    def zero(self) -> FieldElement:
        return self._zero

    def one(self) -> FieldElement:
        return self._one

    def gen(self) -> FieldElement:
        return self.element([0, 1])

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.tower != self:
                raise ValueError("element belongs to another tower")
            return value
        if isinstance(value, (list, tuple)):
            return self.element(value)
        return self.scalar(value)

    def scalar(self, c) -> FieldElement:
        """Embed an integer or rational (characteristic p: reduced mod p)."""
        d = self.degree
        if self.characteristic == 0:
            c = _to_fraction(c)
            return FieldElement._raw(self, (c.numerator,) + (0,) * (d - 1), c.denominator)
        p = self.characteristic
        c = _to_fraction(c)
        if c.denominator % p == 0:
            raise PoleAtPlace(f"{c} has a pole modulo {p}")
        v = c.numerator * pow(c.denominator, -1, p) % p
        return FieldElement._raw(self, (v,) + (0,) * (d - 1), 1)

    def element(self, coeffs: Sequence) -> FieldElement:
        """Element from power-basis coordinates (any length; reduced mod modulus)."""
        coeffs = list(coeffs) or [0]
        if self.characteristic == 0:
            fr = [_to_fraction(c) for c in coeffs]
            den = math.lcm(*[c.denominator for c in fr])
            nums = [int(c * den) for c in fr]
            return self._make(nums, den)
        p = self.characteristic
        vals = []
        for c in coeffs:
            c = _to_fraction(c)
            if c.denominator % p == 0:
                raise PoleAtPlace(f"{c} has a pole modulo {p}")
            vals.append(c.numerator * pow(c.denominator, -1, p) % p)
        return self._make(vals, 1)

    # internal arithmetic on (nums, den) pairs

    def _make(self, nums: list[int], den: int) -> FieldElement:
        d = self.degree
        if len(nums) > d:
            nums, den = self._reduce(list(nums), den)
        elif len(nums) < d:
            nums = list(nums) + [0] * (d - len(nums))
        if self.characteristic:
            p = self.characteristic
            return FieldElement._raw(self, tuple(x % p for x in nums), 1)
        if den < 0:
            den = -den
            nums = [-x for x in nums]
        g = math.gcd(den, *nums)
        if g != 1:
            nums = [x // g for x in nums]
            den //= g
        return FieldElement._raw(self, tuple(nums), den)

    def _sum_of_products(self, pairs) -> FieldElement:
        """sum x*y over pairs of elements, reduced once at the end."""
        d = self.degree
        p = self.characteristic
        by_den: dict = {}
        for x, y in pairs:
            D = x._d * y._d
            acc = by_den.get(D)
            if acc is None:
                acc = by_den[D] = [0] * (2 * d - 1)
            for i, u in enumerate(x._v):
                if u:
                    for j, w in enumerate(y._v):
                        if w:
                            acc[i + j] += u * w
        if not by_den:
            return self.zero()
        if len(by_den) == 1:
            (D, acc), = by_den.items()
            return self._make(acc, D)
        L = math.lcm(*by_den)
        total = [0] * (2 * d - 1)
        for D, acc in by_den.items():
            m = L // D
            for i, u in enumerate(acc):
                total[i] += u * m
        return self._make(total, L)

    def _reduce(self, nums: list[int], den: int) -> tuple[list[int], int]:
        d = self.degree
        F = self._fmod
        L = F[d]
        p = self.characteristic
        for k in range(len(nums) - 1, d - 1, -1):
            c = nums[k]
            if p:
                c %= p
            if not c:
                continue
            if L != 1:
                nums = [x * L for x in nums]
                den *= L
                c = nums[k] // L
            base = k - d
            for i in range(d):
                if F[i]:
                    nums[base + i] -= c * F[i]
            nums[k] = 0
        return nums[:d], den

    def split_place(self) -> tuple[int, int] | None:
        """A large prime p and a simple root r of the modulus mod p, or None.

        Only offered for characteristic 0 with an integral modulus; then
        g -> r is a reduction map from a discrete valuation ring of K onto F_p.
        Used to certify coprimality cheaply.
        """
        if self._split is not False:
            return self._split
        found = None
        if self.characteristic == 0 and self._lc == 1:
            f = list(self._imod)
            p = (1 << 31) + 1
            for _ in range(400):
                p += 2
                if not is_prime(p):
                    continue
                fp = _trim([c % p for c in f])
                if len(fp) != len(f) or len(_fp_gcd(fp, _fp_deriv(fp, p), p)) > 1:
                    continue
                if self.degree == 1:
                    found = (p, (-fp[0]) % p)
                    break
                lin = _fp_gcd(fp, _fp_sub(_fp_powmod([0, 1], p, fp, p), [0, 1], p), p)
                if len(lin) > 1:
                    root = _fp_factor_squarefree(lin, p)[0]
                    found = (p, (-root[0]) % p)
                    break
        self._split = found
        return found

    def split_primes(self, count: int) -> list:
        """Up to ``count`` triples (p, roots, vinv) with the modulus split into distinct linear factors mod p.

        ``vinv`` inverts the Vandermonde matrix of the roots mod p, so the
        coordinates of an element can be read back from its images g -> r.
        Char-0 towers with a monic integral modulus only; otherwise [].
        """
        if self._split_primes is None:
            self._split_primes = []
        out = self._split_primes
        if self.characteristic or self._lc != 1 or self._imod[-1] != 1:
            return []
        f = list(self._imod)
        d = self.degree
        p = self._split_next
        tries = 0
        while len(out) < count and tries < 4000:
            p += 2
            tries += 1
            if not is_prime(p):
                continue
            fp = [c % p for c in f]
            if d == 1:
                roots = [(-fp[0]) % p]
            else:
                if len(_fp_gcd(fp, _fp_deriv(fp, p), p)) > 1:
                    continue
                if _fp_sub(_fp_powmod([0, 1], p, fp, p), [0, 1], p):
                    continue
                roots = [(-r[0]) % p for r in _fp_factor_squarefree(fp, p)]
            out.append((p, roots, _fp_vandermonde_inverse(roots, p)))
        self._split_next = p
        return out[:count]

    def enumerate_scalars(self, height: int) -> list:
        """Prime-field scalars in the canonical small-to-large order."""
        if self.characteristic:
            return list(range(self.characteristic))
        vals = {Fraction(0)}
        for den in range(1, height + 1):
            for num in range(-height, height + 1):
                vals.add(Fraction(num, den))
        return sorted(vals, key=_rational_key)


def _rational_key(c: Fraction):
    return (max(abs(c.numerator), c.denominator), c.denominator, abs(c.numerator), c < 0)


class FieldElement:
    """An element of a FieldTower; supports +, -, *, /, ** and ==."""

    __slots__ = ("tower", "_v", "_d")

    @classmethod
    def _raw(cls, tower: FieldTower, v: tuple, d: int) -> FieldElement:
        self = object.__new__(cls)
        self.tower = tower
        self._v = v
        self._d = d
        return self

    @property
    def coeffs(self) -> list:
        """Power-basis coordinates: Fractions in char 0, ints in range(p) otherwise."""
        if self.tower.characteristic:
            return list(self._v)
        return [Fraction(x, self._d) for x in self._v]

    def is_zero(self) -> bool:
        return not any(self._v)

    def __bool__(self):
        return any(self._v)

    def is_scalar(self) -> bool:
        """True when the element lies in the prime field."""
        return not any(self._v[1:])

    def scalar_value(self):
        if not self.is_scalar():
            raise ValueError("element is not in the prime field")
        if self.tower.characteristic:
            return self._v[0]
        return Fraction(self._v[0], self._d)

    def _coerce(self, other) -> FieldElement | None:
        if isinstance(other, FieldElement):
            if other.tower is not self.tower and other.tower != self.tower:
                raise ValueError("cannot mix elements of different towers")
            return other
        if isinstance(other, (int, Fraction)):
            return self.tower.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = self.tower
        if t.characteristic:
            p = t.characteristic
            return FieldElement._raw(t, tuple((a + b) % p for a, b in zip(self._v, o._v)), 1)
        if self._d == o._d:
            return t._make([a + b for a, b in zip(self._v, o._v)], self._d)
        return t._make([a * o._d + b * self._d for a, b in zip(self._v, o._v)], self._d * o._d)

    __radd__ = __add__

    def __neg__(self):
        t = self.tower
        if t.characteristic:
            p = t.characteristic
            return FieldElement._raw(t, tuple((-a) % p for a in self._v), 1)
        return FieldElement._raw(t, tuple(-a for a in self._v), self._d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = self.tower
        if t.characteristic:
            p = t.characteristic
            return FieldElement._raw(t, tuple((a - b) % p for a, b in zip(self._v, o._v)), 1)
        if self._d == o._d:
            return t._make([a - b for a, b in zip(self._v, o._v)], self._d)
        return t._make([a * o._d - b * self._d for a, b in zip(self._v, o._v)], self._d * o._d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        t = self.tower
        a, b = self._v, o._v
        if t.degree == 1:
            if t.characteristic:
                return FieldElement._raw(t, ((a[0] * b[0]) % t.characteristic,), 1)
            return t._make([a[0] * b[0]], self._d * o._d)
        out = [0] * (2 * t.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return t._make(out, self._d * o._d)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if not self:
            raise ZeroElement("inverse of zero")
        t = self.tower
        p = t.characteristic
        if t.degree == 1:
            if p:
                return FieldElement._raw(t, (pow(self._v[0], -1, p),), 1)
            return t._make([self._d], self._v[0])
        if p:
            # extended Euclid in F_p[x]
            r0, r1 = list(t.modulus), _trim(list(self._v))
            s0, s1 = [], [1]
            while len(r1) > 1:
                qt, r = _fp_divmod(r0, r1, p)
                r0, r1 = r1, r
                s0, s1 = s1, _fp_sub(s0, _fp_mul(qt, s1, p), p)
            inv = pow(r1[0], -1, p)
            return t.element([c * inv % p for c in s1])
        # extended Euclid in Q[x] on Fractions
        r0 = list(t.modulus)
        r1 = [Fraction(x, self._d) for x in self._v]
        while r1 and r1[-1] == 0:
            r1.pop()
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            qt, r = _q_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _q_sub(s0, _q_mul(qt, s1))
        c = r1[0]
        return t.element([x / c for x in s1])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self._v == other._v and self._d == other._d and self.tower == other.tower
        if isinstance(other, (int, Fraction)):
            try:
                return self == self.tower.scalar(other)
            except PoleAtPlace:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self._v, self._d))

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        return format_element(self)

    def mod_image(self, p: int, r: int) -> int | None:
        """Image under g -> r mod p, or None when the denominator vanishes mod p."""
        d = self._d % p
        if not d:
            return None
        acc = 0
        for c in reversed(self._v):
            acc = (acc * r + c) % p
        return acc * pow(d, -1, p) % p

    def sort_key(self):
        """Deterministic key for ordering elements (lexicographic on coordinates)."""
        if self.tower.characteristic:
            return tuple(self._v)
        return tuple(_rational_key(c) for c in self.coeffs)


def _q_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _q_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _q_divmod(a, b):
    a = list(a)
    db = len(b) - 1
    quo = [Fraction(0)] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / b[-1]
        quo[i - db] = c
        for j in range(db + 1):
            a[i - db + j] -= c * b[j]
    rem = a[:db]
    while rem and rem[-1] == 0:
        rem.pop()
    return quo, rem


def _format_scalar(c) -> str:
    return str(c)


def format_element(x: FieldElement) -> str:
    """Print in the expression grammar: descending powers of the generator."""
    t = x.tower
    coeffs = x.coeffs
    if t.degree == 1:
        return _format_scalar(coeffs[0])
    name = t.generator_name
    parts = []
    for i in range(t.degree - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        neg = c < 0 if t.characteristic == 0 else False
        mag = -c if neg else c
        if i == 0:
            body = _format_scalar(mag)
        else:
            mono = name if i == 1 else f"{name}^{i}"
            body = mono if mag == 1 else f"{_format_scalar(mag)}*{mono}"
        parts.append(("-" if neg else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# --- construction ----------------------------------------------------------------


def make_tower(characteristic: int, modulus: Sequence, generator_name: str = "g", *, assume_irreducible: bool = False) -> FieldTower:
    """Build ``P[x]/(modulus)`` after checking the modulus is monic and irreducible.

    Over F_p irreducibility is decided exactly.  Over Q a rational-root search
    is complete up to degree 3; beyond that a cyclotomic match or a mod-p
    factor-degree certificate is required unless ``assume_irreducible`` is set.
    """
    if characteristic != 0 and not is_prime(characteristic):
        raise NotPrime(f"{characteristic} is neither 0 nor prime")
    modulus = list(modulus)
    if len(modulus) < 2:
        raise FieldError("modulus must have degree >= 1")
    if characteristic == 0:
        coeffs = [_to_fraction(c) for c in modulus]
        if coeffs[-1] != 1:
            raise FieldError("modulus must be monic")
        certified = _certify_irreducible_over_q(coeffs)
        if not certified and not assume_irreducible:
            raise IrreducibilityUnknown(
                "could not certify irreducibility over Q; pass assume_irreducible=True to assert it"
            )
    else:
        p = characteristic
        coeffs = [int(_to_fraction(c).numerator * pow(_to_fraction(c).denominator, -1, p)) % p for c in modulus]
        if coeffs[-1] != 1:
            raise FieldError("modulus must be monic")
        if not _fp_is_irreducible(coeffs, p):
            raise ReducibleModulus(f"modulus is reducible over F_{p}")
    return FieldTower(characteristic, coeffs, generator_name, _checked=True)


def cyclotomic_tower(n: int, generator_name: str = "g") -> FieldTower:
    """Q(zeta_n); plain Q for n <= 2."""
    if n < 1:
        raise FieldError("n must be positive")
    if n <= 2:
        return make_tower(0, [0, 1], generator_name)
    return make_tower(0, _cyclotomic(n), generator_name)


def charp_tower(p: int, n: int = 1, generator_name: str = "g") -> FieldTower:
    """F_(p^f) with f the order of p mod n, modulus the lexicographically first monic irreducible."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n % p == 0:
        raise NoSuchRoot(f"no primitive {n}-th root of unity in characteristic {p}")
    f = 1
    while (p**f - 1) % n:
        f += 1
    if f == 1:
        return make_tower(p, [0, 1], generator_name)
    for tail in itertools.product(range(p), repeat=f):
        cand = list(reversed(tail)) + [1]
        if _fp_is_irreducible(cand, p):
            return FieldTower(p, cand, generator_name, _checked=True)
    raise AssertionError("unreachable: irreducibles exist in every degree")


def field_from_spec(spec: str) -> FieldTower:
    """Field from a JSON path, inline JSON, or one of "Q", "F7", "Q(zeta5)", "F7(zeta3)"."""
    import os

    text = spec.strip()
    if text.startswith("{"):
        return tower_from_config(text)
    m = re.fullmatch(r"Q(?:\(zeta(\d+)\))?", text)
    if m:
        return cyclotomic_tower(int(m.group(1)) if m.group(1) else 1)
    m = re.fullmatch(r"F(\d+)(?:\(zeta(\d+)\))?", text)
    if m:
        return charp_tower(int(m.group(1)), int(m.group(2)) if m.group(2) else 1)
    if os.path.exists(text):
        with open(text) as fh:
            return tower_from_config(json.load(fh))
    raise FieldError(f"cannot read a field from {spec!r}")


def tower_from_config(cfg: dict | str) -> FieldTower:
    """Tower from the JSON config ``{"char": 0, "modulus": [...], "generator": "g"}``."""
    if isinstance(cfg, str):
        cfg = json.loads(cfg)
    return make_tower(
        int(cfg.get("char", 0)),
        cfg.get("modulus", [0, 1]),
        cfg.get("generator", "g"),
        assume_irreducible=bool(cfg.get("assume_irreducible", False)),
    )


def tower_to_config(tower: FieldTower) -> dict:
    if tower.characteristic:
        mod = [int(c) for c in tower.modulus]
    else:
        mod = [int(c) if c.denominator == 1 else str(c) for c in tower.modulus]
    return {"char": tower.characteristic, "modulus": mod, "generator": tower.generator_name}


# --- roots of unity and orders -------------------------------------------------------


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _euler_phi(n: int) -> int:
    result = n
    for p in _prime_factors(n):
        result = result // p * (p - 1)
    return result


def _has_exact_order(x: FieldElement, n: int) -> bool:
    if not x or x ** n != x.tower.one():
        return False
    return all(x ** (n // r) != x.tower.one() for r in _prime_factors(n))


def find_root_of_unity(tower: FieldTower, n: int, *, height: int = 2) -> FieldElement:
    """First element of exact multiplicative order n in the canonical enumeration.

    Candidates run over coordinate vectors in lexicographic order, each coordinate
    taken from ``tower.enumerate_scalars`` (0..p-1 in characteristic p; in
    characteristic 0 the rationals of height <= ``height`` ordered 0, 1, -1, 2, ...).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    p = tower.characteristic
    if p:
        if n % p == 0:
            raise NoSuchRoot(f"no element of order {n} in characteristic {p}")
        size = p**tower.degree
        if (size - 1) % n:
            raise NoSuchRoot(f"{n} does not divide |K*| = {size - 1}")
    elif tower.degree % _euler_phi(n):
        raise NoSuchRoot(f"Q(zeta_{n}) has degree {_euler_phi(n)}, which does not divide {tower.degree}")
    scalars = tower.enumerate_scalars(height)
    for coords in itertools.product(scalars, repeat=tower.degree):
        if not any(coords):
            continue
        x = tower.element(list(coords))
        if _has_exact_order(x, n):
            return x
    raise NoSuchRoot(f"no element of order {n} found (coordinate height <= {height})")


def mult_order(x: FieldElement, bound: int) -> int:
    """Least k <= bound with x^k = 1; raises NoOrderUpTo(bound) otherwise."""
    if not x:
        raise ZeroElement("zero has no multiplicative order")
    one = x.tower.one()
    y = x
    for k in range(1, bound + 1):
        if y == one:
            return k
        y = y * x
    raise NoOrderUpTo(bound)


# --- places ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """A finite place over the prime p: an irreducible factor of the modulus mod p."""

    p: int
    factor: tuple[int, ...]
    residue_tower: FieldTower

    def symmetric_factor(self) -> list[int]:
        half = self.p // 2
        return [c - self.p if c > half else c for c in self.factor]


def residue_places(tower: FieldTower, p: int) -> list[Place]:
    """One Place per monic irreducible factor of the modulus mod p, sorted by (degree, coefficients)."""
    if tower.characteristic != 0:
        raise FieldError("residue places are defined for characteristic-0 towers")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    coeffs = []
    for c in tower.modulus:
        if c.denominator % p == 0:
            raise BadReduction(f"modulus has a coefficient with denominator divisible by {p}")
        coeffs.append(c.numerator * pow(c.denominator, -1, p) % p)
    f = _trim(coeffs)
    if len(_fp_gcd(f, _fp_deriv(f, p), p)) > 1:
        raise BadReduction(f"modulus has repeated factors modulo {p}")
    places = []
    for g in _fp_factor_squarefree(f, p):
        residue = FieldTower(p, g, tower.generator_name, _checked=True)
        places.append(Place(p, tuple(g), residue))
    return places


def reduce_at_place(x: FieldElement, v: Place) -> FieldElement:
    """Reduce coordinates mod p then the generator polynomial mod the place's factor."""
    if x.tower.characteristic != 0:
        raise FieldError("reduction needs a characteristic-0 element")
    p = v.p
    if x._d % p == 0:
        # common denominator may hide cancellations; check coordinate-wise
        for c in x.coeffs:
            if c.denominator % p == 0:
                raise PoleAtPlace(f"{x} has a pole at the place over {p}")
    inv = pow(x._d % p, -1, p) if x._d % p else None
    if inv is None:
        vals = [c.numerator * pow(c.denominator, -1, p) % p for c in x.coeffs]
    else:
        vals = [a * inv % p for a in x._v]
    return v.residue_tower._make(vals, 1)


def elements_random(tower: FieldTower, rng: random.Random, height: int = 3) -> FieldElement:
    """A random element with small coordinates (test helper)."""
    if tower.characteristic:
        return tower.element([rng.randrange(tower.characteristic) for _ in range(tower.degree)])
    return tower.element(
        [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(tower.degree)]
    )


def as_elements(tower: FieldTower, values: Iterable) -> list[FieldElement]:
    return [tower(v) for v in values]
