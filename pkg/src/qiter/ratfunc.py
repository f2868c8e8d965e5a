"""Polynomials and rational functions in t over a field tower, with sigma_q and delta^(k).

The iterative operators are fixed by the monomial rule
``delta^(k)(c t^r) = c (r over k)_q t^(r-k)`` on polynomials.  On a reduced
fraction a/b they are computed from the twisted Leibniz rule applied to
``a = (a/b) * b``.  Writing ``delta^(k)(a/b) = N_k / (b sigma(b) ... sigma^k(b))``
the numerators satisfy a recursion needing no division at all; the result is
then reduced one factor ``sigma^l(b)`` at a time.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from fractions import Fraction
from typing import Iterable

from .exactfield import FieldElement, FieldTower, _fp_gcd, _trim, rational_reconstruct
from .qarith import QContext, q_binom

__all__ = [
    "Poly",
    "RatFunc",
    "ExprSyntaxError",
    "DivisionByZeroExpr",
    "parse",
    "parse_element",
    "sigma_q",
    "delta_poly",
    "delta",
    "delta_range",
    "is_constant",
    "poly_gcd",
]


class ExprSyntaxError(SyntaxError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos
        self.text = text


class DivisionByZeroExpr(ZeroDivisionError):
    pass


# --- polynomials -----------------------------------------------------------


class Poly:
    """Sparse polynomial: ``terms`` maps exponent -> nonzero FieldElement."""

    __slots__ = ("tower", "terms", "_hash")

    def __init__(self, tower: FieldTower, terms: dict | None = None):
        self.tower = tower
        self.terms = {e: c for e, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, tower, terms):
        self = object.__new__(cls)
        self.tower = tower
        self.terms = terms
        self._hash = None
        return self

    @classmethod
    def constant(cls, tower: FieldTower, c) -> Poly:
        c = tower(c)
        return cls._raw(tower, {0: c} if c else {})

    @classmethod
    def monomial(cls, tower: FieldTower, e: int, c=1) -> Poly:
        c = tower(c)
        return cls._raw(tower, {e: c} if c else {})

    @classmethod
    def from_coeffs(cls, tower: FieldTower, coeffs: Iterable) -> Poly:
        return cls(tower, {i: tower(c) for i, c in enumerate(coeffs)})

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def dense(self) -> list[FieldElement]:
        d = self.degree()
        z = self.tower.zero()
        return [self.terms.get(i, z) for i in range(d + 1)] if d >= 0 else []

    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    def valuation(self) -> int:
        return min(self.terms) if self.terms else -1

    def lc(self) -> FieldElement:
        return self.terms[max(self.terms)]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_one(self) -> bool:
        return len(self.terms) == 1 and 0 in self.terms and self.terms[0] == self.tower.one()

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other: Poly) -> Poly:
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(self.tower, out)

    def __neg__(self) -> Poly:
        return Poly._raw(self.tower, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        if not self.terms or not other.terms:
            return Poly._raw(self.tower, {})
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (eb, cb), = b.items()
            return Poly._raw(self.tower, {ea + eb: ca * cb for ea, ca in a.items()})
        groups: dict = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                groups.setdefault(ea + eb, []).append((ca, cb))
        sp = self.tower._sum_of_products
        out = {}
        for e, pairs in groups.items():
            c = sp(pairs)
            if c:
                out[e] = c
        return Poly._raw(self.tower, out)

    def scale(self, c: FieldElement) -> Poly:
        if not c:
            return Poly._raw(self.tower, {})
        return Poly._raw(self.tower, {e: v * c for e, v in self.terms.items()})

    def shift(self, k: int) -> Poly:
        """Multiply by t^k (k may be negative if every exponent stays >= 0)."""
        return Poly._raw(self.tower, {e + k: c for e, c in self.terms.items()})

    def monic(self) -> Poly:
        if not self.terms:
            return self
        lc = self.lc()
        if lc == self.tower.one():
            return self
        return self.scale(lc.inverse())

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if not other.terms:
            raise ZeroDivisionError("polynomial division by zero")
        db = other.degree()
        lc = other.lc()
        inv = None if lc == self.tower.one() else lc.inverse()
        rem = dict(self.terms)
        quo: dict = {}
        lower = [(e, c) for e, c in other.terms.items() if e != db]
        while rem:
            dr = max(rem)
            if dr < db:
                break
            c = rem.pop(dr)
            if inv is not None:
                c = c * inv
            s = dr - db
            quo[s] = c
            for e, v in lower:
                k = e + s
                w = rem.get(k)
                w = -(c * v) if w is None else w - c * v
                if w:
                    rem[k] = w
                else:
                    rem.pop(k, None)
        return Poly._raw(self.tower, quo), Poly._raw(self.tower, rem)

    def exact_div(self, other: Poly) -> Poly:
        if other.is_monomial():
            (e, c), = other.terms.items()
            inv = c.inverse()
            return Poly._raw(self.tower, {k - e: v * inv for k, v in self.terms.items()})
        q_, r = self.divmod(other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q_

    def sigma(self, ctx: QContext, i: int = 1) -> Poly:
        """t -> q^i t."""
        if i % ctx.n == 0:
            return self
        return Poly._raw(self.tower, {e: c * ctx.qpow(e * i) for e, c in self.terms.items()})

    def __call__(self, x):
        out = self.tower.zero()
        for e, c in self.terms.items():
            out = out + c * x ** e
        return out

    def map_coeffs(self, f, tower: FieldTower) -> Poly:
        out = {}
        for e, c in self.terms.items():
            v = f(c)
            if v:
                out[e] = v
        return Poly._raw(tower, out)

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    if not a.terms:
        return b.monic()
    if not b.terms:
        return a.monic()
    va, vb = a.valuation(), b.valuation()
    v = min(va, vb)
    tower = a.tower
    if a.is_monomial() or b.is_monomial():
        return Poly.monomial(tower, v)
    if va:
        a = a.shift(-va)
    if vb:
        b = b.shift(-vb)
    if a.degree() < b.degree():
        a, b = b, a
    if _coprime_mod_place(a, b):
        return Poly.monomial(tower, v)
    g = _modular_gcd(a, b)
    if g is not None:
        return g.shift(v) if v else g
    while b.terms:
        if b.degree() == 0:
            return Poly.monomial(tower, v)
        # monic remainders keep the coefficient size in check
        a, b = b, a.divmod(b)[1].monic()
    g = a.monic()
    return g.shift(v) if v else g


def _coprime_mod_place(a: Poly, b: Poly) -> bool:
    """True if the images at a good degree-1 place are coprime (then a, b are coprime).

    With lc(a) a unit at the place, a nontrivial common factor would survive
    reduction with its degree intact (Gauss's lemma over the local ring).
    """
    sp = a.tower.split_place()
    if sp is None:
        return False
    p, r = sp
    imgs = []
    for poly in (a, b):
        d = poly.degree()
        dense = [0] * (d + 1)
        for e, c in poly.terms.items():
            x = c.mod_image(p, r)
            if x is None:
                return False
            dense[e] = x
        imgs.append(dense)
    fa, fb = imgs
    if not fa[-1]:
        return False
    return len(_fp_gcd(fa, _trim(fb), p)) == 1


def _images(poly: Poly, p: int, roots) -> list | None:
    """Dense images of poly under g -> r mod p for each root, or None at a bad prime."""
    d = poly.degree()
    out = [[0] * (d + 1) for _ in roots]
    for e, c in poly.terms.items():
        for j, r in enumerate(roots):
            x = c.mod_image(p, r)
            if x is None:
                return None
            out[j][e] = x
    if any(not img[-1] for img in out):
        return None
    return out


def _modular_gcd(a: Poly, b: Poly, max_primes: int = 24) -> Poly | None:
    """Monic gcd from images at split primes, certified by trial division.

    Each image gcd has degree at least that of the true gcd, so a candidate of
    the least degree seen that divides both inputs is the gcd.  Returns None
    when the tower has no split primes or no candidate was certified.
    """
    tower = a.tower
    primes = tower.split_primes(max_primes)
    if not primes:
        return None
    d = tower.degree
    best = None  # least degree seen
    M, acc = 1, None
    last = None
    for p, roots, vinv in primes:
        ia, ib = _images(a, p, roots), _images(b, p, roots)
        if ia is None or ib is None:
            continue
        gs = [_fp_gcd(x, y, p) for x, y in zip(ia, ib)]
        e = len(gs[0]) - 1
        if any(len(g_) - 1 != e for g_ in gs):
            continue
        if e == 0:
            return Poly.constant(tower, 1)
        if best is not None and e > best:
            continue
        # coordinates mod p of the coefficients below the leading 1
        coords = [[sum(vinv[i][j] * gs[j][k] for j in range(d)) % p for i in range(d)] for k in range(e)]
        if best is None or e < best:
            best, M, acc, last = e, p, coords, None
        else:
            inv = pow(M, -1, p)
            acc = [[x + M * ((y - x) * inv % p) for x, y in zip(cx, cy)] for cx, cy in zip(acc, coords)]
            M *= p
        cand = []
        for cx in acc:
            vals = [rational_reconstruct(x, M) for x in cx]
            if any(v_ is None for v_ in vals):
                cand = None
                break
            cand.append(tuple(vals))
        if cand is None or cand != last:
            # wait for the reconstruction to settle before paying for a division
            last = cand
            continue
        terms = {k: tower.element(list(c)) for k, c in enumerate(cand) if any(c)}
        terms[best] = tower.one()
        g = Poly(tower, terms)
        if not a.divmod(g)[1].terms and not b.divmod(g)[1].terms:
            return g
    return None


# --- rational functions --------------------------------------------------------


class RatFunc:
    """Reduced fraction num/den with den monic; zero is 0/1."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None):
        tower = num.tower
        if den is None:
            den = Poly.constant(tower, 1)
        if not den.terms:
            raise DivisionByZeroExpr("zero denominator")
        if not num.terms:
            self.num, self.den = num, Poly.constant(tower, 1)
        else:
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lc()
            if lc != tower.one():
                inv = lc.inverse()
                num, den = num.scale(inv), den.scale(inv)
            self.num, self.den = num, den
        self._hash = None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> RatFunc:
        """Trusts that gcd(num, den) = 1; only makes den monic."""
        self = object.__new__(cls)
        if not num.terms:
            den = Poly.constant(num.tower, 1)
        else:
            lc = den.lc()
            if lc != num.tower.one():
                inv = lc.inverse()
                num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den
        self._hash = None
        return self

    @classmethod
    def constant(cls, tower: FieldTower, c) -> RatFunc:
        return cls._raw(Poly.constant(tower, c), Poly.constant(tower, 1))

    @classmethod
    def t(cls, tower: FieldTower, e: int = 1) -> RatFunc:
        if e >= 0:
            return cls._raw(Poly.monomial(tower, e), Poly.constant(tower, 1))
        return cls._raw(Poly.constant(tower, 1), Poly.monomial(tower, -e))

    @property
    def tower(self) -> FieldTower:
        return self.num.tower

    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def is_poly(self) -> bool:
        return self.den.degree() == 0

    def _coerce(self, other) -> RatFunc | None:
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc._raw(other, Poly.constant(self.tower, 1))
        if isinstance(other, (int, Fraction, FieldElement)):
            return RatFunc.constant(self.tower, other)
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num.terms:
            return self
        if not self.num.terms:
            return o
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if d1 == d2:
            n = n1 + n2
            if d1.degree() == 0:
                return RatFunc._raw(n, d1)
            return RatFunc(n, d1)
        g = poly_gcd(d1, d2)
        if g.degree() == 0:
            return RatFunc._raw(n1 * d2 + n2 * d1, d1 * d2)
        # reduced inputs: the sum only needs a gcd against g
        d1g, d2g = d1.exact_div(g), d2.exact_div(g)
        n = n1 * d2g + n2 * d1g
        g2 = poly_gcd(n, g)
        if g2.degree() > 0:
            n = n.exact_div(g2)
            g = g.exact_div(g2)
        return RatFunc._raw(n, d1g * d2g * g)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num.terms or not o.num.terms:
            return RatFunc.constant(self.tower, 0)
        n1, d1, n2, d2 = self.num, self.den, o.num, o.den
        if d2.degree() > 0:
            g = poly_gcd(n1, d2)
            if g.degree() > 0:
                n1, d2 = n1.exact_div(g), d2.exact_div(g)
        if d1.degree() > 0:
            g = poly_gcd(n2, d1)
            if g.degree() > 0:
                n2, d1 = n2.exact_div(g), d1.exact_div(g)
        return RatFunc._raw(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if not self.num.terms:
            raise DivisionByZeroExpr("inverse of zero")
        return RatFunc._raw(self.den, self.num)

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

    def __pow__(self, e: int) -> RatFunc:
        if e < 0:
            return self.inverse() ** (-e)
        out = RatFunc.constant(self.tower, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def sigma(self, ctx: QContext, i: int = 1) -> RatFunc:
        if i % ctx.n == 0:
            return self
        return RatFunc._raw(self.num.sigma(ctx, i), self.den.sigma(ctx, i))

    def map_coeffs(self, f, tower: FieldTower) -> RatFunc:
        """Apply a ring map to coefficients and re-reduce (used for reduction at places)."""
        num = self.num.map_coeffs(f, tower)
        den = self.den.map_coeffs(f, tower)
        return RatFunc(num, den)

    def constant_value(self) -> FieldElement | None:
        if self.num.degree() <= 0 and self.den.degree() == 0:
            return self.num.terms.get(0, self.tower.zero())
        return None

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)})"

    def __str__(self):
        return format_ratfunc(self)


# --- printing --------------------------------------------------------------------


def _coeff_parts(c: FieldElement) -> tuple[bool, str, bool]:
    """(negative, magnitude text, needs parentheses when multiplied)."""
    coords = c.coeffs
    nz = [i for i, x in enumerate(coords) if x]
    char0 = c.tower.characteristic == 0
    if len(nz) == 1:
        i = nz[0]
        x = coords[i]
        neg = char0 and x < 0
        mag = -x if neg else x
        if i == 0:
            return neg, str(mag), False
        name = c.tower.generator_name
        mono = name if i == 1 else f"{name}^{i}"
        return neg, mono if mag == 1 else f"{mag}*{mono}", False
    return False, str(c), True


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e in sorted(p.terms, reverse=True):
        neg, mag, paren = _coeff_parts(p.terms[e])
        mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
        if not mono:
            body = f"({mag})" if paren and len(p.terms) > 1 else mag
        elif mag == "1":
            body = mono
        else:
            body = f"({mag})*{mono}" if paren else f"{mag}*{mono}"
        parts.append((neg, body))
    neg, body = parts[0]
    out = ("-" if neg else "") + body
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def format_ratfunc(f: RatFunc) -> str:
    if f.den.degree() == 0:
        return format_poly(f.num)
    num = format_poly(f.num)
    # division is left-associative, so a single term needs no parentheses
    if len(f.num.terms) > 1 or _coeff_parts(next(iter(f.num.terms.values())))[2]:
        num = f"({num})"
    den = format_poly(f.den)
    if len(f.den.terms) > 1:
        den = f"({den})"
    return f"{num}/{den}"


# --- parsing -----------------------------------------------------------------------


class _Parser:
    def __init__(self, tower: FieldTower, q: FieldElement | None, text: str):
        self.tower = tower
        self.q = q
        self.text = text
        self.tokens = self._tokenize(text)
        self.i = 0

    def _tokenize(self, text):
        toks = []
        i = 0
        name = self.tower.generator_name
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                toks.append(("int", int(text[i:j]), i))
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                if word not in ("t", "q", name) or (word == "q" and self.q is None):
                    raise ExprSyntaxError(f"unknown symbol {word!r}", i, text)
                toks.append(("name", word, i))
                i = j
            elif ch in "+-*/^()":
                toks.append((ch, ch, i))
                i += 1
            else:
                raise ExprSyntaxError(f"unexpected character {ch!r}", i, text)
        toks.append(("end", None, len(text)))
        return toks

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> RatFunc:
        if self.peek()[0] == "end":
            raise ExprSyntaxError("empty expression", 0, self.text)
        v = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return v

    def expr(self):
        neg = False
        if self.peek()[0] in "+-" and self.peek()[0] != "end":
            neg = self.take()[0] == "-"
        v = self.term()
        if neg:
            v = -v
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            w = self.factor()
            if op == "*":
                v = v * w
            else:
                if not w:
                    raise DivisionByZeroExpr(f"division by zero at position {pos}")
                v = v / w
        return v

    def factor(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek()[0] == "^":
            _, _, pos = self.take()
            e = self._exponent()
            if e < 0 and not base:
                raise DivisionByZeroExpr(f"zero to a negative power at position {pos}")
            base = base ** e
        return base

    def _exponent(self) -> int:
        tok = self.peek()
        if tok[0] == "(":
            self.take()
            e = self._exponent()
            self.take(")")
            return e
        sign = 1
        if tok[0] == "-":
            self.take()
            sign = -1
        return sign * self.take("int")[1]

    def atom(self):
        tok = self.take()
        tower = self.tower
        kind, val, pos = tok
        if kind == "int":
            return RatFunc.constant(tower, val)
        if kind == "name":
            if val == "t":
                return RatFunc.t(tower)
            if val == "q":
                return RatFunc.constant(tower, self.q)
            return RatFunc.constant(tower, tower.gen())
        if kind == "(":
            v = self.expr()
            self.take(")")
            return v
        raise ExprSyntaxError(f"unexpected {'end of input' if kind == 'end' else repr(val)}", pos, self.text)


def parse(ctx: QContext, text: str) -> RatFunc:
    """Parse an expression in t, q and the tower generator into a RatFunc."""
    return _Parser(ctx.tower, ctx.q, text).parse()


def parse_element(tower: FieldTower, text: str) -> FieldElement:
    """Parse a constant expression in the generator (no t, no q)."""
    f = _Parser(tower, None, str(text)).parse()
    c = f.constant_value()
    if c is None:
        raise ExprSyntaxError("expected a constant", 0, str(text))
    return c


# --- sigma and delta ------------------------------------------------------------------


def sigma_q(ctx: QContext, f: RatFunc, i: int = 1) -> RatFunc:
    """f(t) -> f(q^i t)."""
    return f.sigma(ctx, i)


def delta_poly(ctx: QContext, k: int, f: Poly) -> Poly:
    if k == 0:
        return f
    out = {}
    for e, c in f.terms.items():
        if e >= k:
            b = q_binom(ctx, e, k)
            if b:
                v = c * b
                if v:
                    out[e - k] = v
    return Poly._raw(f.tower, out)


class _DeltaTower:
    """Cached numerators N_j for one reduced fraction a/b."""

    __slots__ = ("a", "b", "bsig", "dnum", "dden", "N", "results", "lock")

    def __init__(self, f: RatFunc):
        self.a = f.num
        self.b = f.den
        self.bsig: list[Poly] = []
        self.dden: list[Poly] = []
        self.N: list[Poly] = []
        self.results: list[RatFunc] = []
        self.lock = threading.Lock()

    def extend(self, ctx: QContext, k: int) -> list[RatFunc]:
        with self.lock:
            a, b = self.a, self.b
            n = ctx.n
            if not self.bsig:
                self.bsig = [b.sigma(ctx, l) for l in range(n)]
                for i in range(b.degree() + 1):
                    self.dden.append(delta_poly(ctx, i, b))
            while len(self.results) <= k:
                m = len(self.N)
                acc = delta_poly(ctx, m, a)
                for i in range(m, 0, -1):
                    acc = acc * self.bsig[i % n]
                    if i < len(self.dden):
                        acc = acc - self.N[m - i].sigma(ctx, i) * self.dden[i]
                self.N.append(acc)
                self.results.append(_reduce_over_pieces(acc, [self.bsig[l % n] for l in range(m + 1)]))
            return self.results[: k + 1]


def _reduce_over_pieces(num: Poly, pieces: list[Poly]) -> RatFunc:
    tower = num.tower
    if not num.terms:
        return RatFunc.constant(tower, 0)
    den = Poly.constant(tower, 1)
    for piece in pieces:
        while piece.degree() > 0:
            g = poly_gcd(num, piece)
            if g.degree() <= 0:
                break
            num = num.exact_div(g)
            piece = piece.exact_div(g)
        den = den * piece
    return RatFunc._raw(num, den)


_CACHE_SIZE = 4096
_cache: OrderedDict = OrderedDict()
_cache_lock = threading.Lock()


def _tower_for(ctx: QContext, f: RatFunc) -> _DeltaTower:
    key = (id(ctx), ctx.q, f)
    with _cache_lock:
        tw = _cache.get(key)
        if tw is not None:
            _cache.move_to_end(key)
            return tw
        tw = _DeltaTower(f)
        _cache[key] = tw
        if len(_cache) > _CACHE_SIZE:
            _cache.popitem(last=False)
        return tw


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


def delta_range(ctx: QContext, k: int, f: RatFunc) -> list[RatFunc]:
    """[delta^(0)(f), ..., delta^(k)(f)]."""
    if f.is_poly():
        one = Poly.constant(f.tower, 1)
        return [RatFunc._raw(delta_poly(ctx, j, f.num), one) for j in range(k + 1)]
    return list(_tower_for(ctx, f).extend(ctx, k))


def delta(ctx: QContext, k: int, f: RatFunc) -> RatFunc:
    """delta^(k)(f) for any rational function f."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if f.is_poly():
        return RatFunc._raw(delta_poly(ctx, k, f.num), Poly.constant(f.tower, 1))
    return _tower_for(ctx, f).extend(ctx, k)[k]


def is_constant(ctx: QContext, f: RatFunc) -> bool:
    """Membership in the coefficient field (the constants of C(t))."""
    return f.num.degree() <= 0 and f.den.degree() == 0
