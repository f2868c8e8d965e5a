"""Small immutable matrices over C(t), with the entrywise sigma/delta actions."""

from __future__ import annotations

from typing import Iterable, Sequence

from .qarith import QContext
from .ratfunc import RatFunc, delta

__all__ = ["Matrix", "DimensionMismatch", "SingularMatrix"]


class DimensionMismatch(ValueError):
    pass


class SingularMatrix(ZeroDivisionError):
    pass


class Matrix:
    __slots__ = ("rows", "tower")

    def __init__(self, rows: Sequence[Sequence[RatFunc]], tower=None):
        self.rows = tuple(tuple(r) for r in rows)
        if not self.rows or not self.rows[0]:
            raise DimensionMismatch("empty matrix")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise DimensionMismatch("ragged rows")
        self.tower = tower if tower is not None else self.rows[0][0].tower

    @classmethod
    def identity(cls, tower, m: int) -> Matrix:
        one, zero = RatFunc.constant(tower, 1), RatFunc.constant(tower, 0)
        return cls([[one if i == j else zero for j in range(m)] for i in range(m)], tower)

    @classmethod
    def zero(cls, tower, m: int, r: int | None = None) -> Matrix:
        zero = RatFunc.constant(tower, 0)
        return cls([[zero] * (m if r is None else r) for _ in range(m)], tower)

    @classmethod
    def scalar(cls, f: RatFunc) -> Matrix:
        return cls([[f]], f.tower)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self) -> Iterable[RatFunc]:
        for r in self.rows:
            yield from r

    def is_zero(self) -> bool:
        return not any(self.entries())

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def map(self, f) -> Matrix:
        return Matrix([[f(x) for x in r] for r in self.rows], self.tower)

    def __add__(self, other: Matrix) -> Matrix:
        self._same_shape(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.tower)

    def __sub__(self, other: Matrix) -> Matrix:
        self._same_shape(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.tower)

    def __neg__(self) -> Matrix:
        return self.map(lambda x: -x)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __mul__(self, other) -> Matrix:
        if not isinstance(other, Matrix):
            return self.map(lambda x: x * other)
        m, k = self.shape
        k2, r = other.shape
        if k != k2:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        zero = RatFunc.constant(self.tower, 0)
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            line = []
            for col in cols:
                acc = zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                line.append(acc)
            out.append(line)
        return Matrix(out, self.tower)

    def __rmul__(self, c) -> Matrix:
        return self.map(lambda x: c * x)

    @property
    def T(self) -> Matrix:
        return Matrix(list(zip(*self.rows)), self.tower)

    def sigma(self, ctx: QContext, i: int = 1) -> Matrix:
        return self.map(lambda x: x.sigma(ctx, i))

    def delta(self, ctx: QContext, k: int) -> Matrix:
        return self.map(lambda x: delta(ctx, k, x))

    def kron(self, other: Matrix) -> Matrix:
        m1, n1 = self.shape
        m2, n2 = other.shape
        out = []
        for i in range(m1):
            for k in range(m2):
                out.append([self.rows[i][j] * other.rows[k][l] for j in range(n1) for l in range(n2)])
        return Matrix(out, self.tower)

    def _echelon(self):
        """Row-reduce a copy; returns (rows, pivot columns, sign, product of pivots)."""
        rows = [list(r) for r in self.rows]
        m, n = self.shape
        pivots = []
        sign = 1
        prod = RatFunc.constant(self.tower, 1)
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, m) if rows[i][c]), None)
            if piv is None:
                continue
            if piv != r:
                rows[r], rows[piv] = rows[piv], rows[r]
                sign = -sign
            pv = rows[r][c]
            prod = prod * pv
            inv = pv.inverse()
            for i in range(r + 1, m):
                if rows[i][c]:
                    f = rows[i][c] * inv
                    rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == m:
                break
        return rows, pivots, sign, prod

    def rank(self) -> int:
        return len(self._echelon()[1])

    def det(self) -> RatFunc:
        m, n = self.shape
        if m != n:
            raise DimensionMismatch("determinant of a non-square matrix")
        if m == 1:
            return self.rows[0][0]
        if m == 2:
            (a, b), (c, d) = self.rows
            return a * d - b * c
        _, pivots, sign, prod = self._echelon()
        if len(pivots) < m:
            return RatFunc.constant(self.tower, 0)
        return prod if sign > 0 else -prod

    def inverse(self) -> Matrix:
        m, n = self.shape
        if m != n:
            raise DimensionMismatch("inverse of a non-square matrix")
        one, zero = RatFunc.constant(self.tower, 1), RatFunc.constant(self.tower, 0)
        if m == 1:
            if not self.rows[0][0]:
                raise SingularMatrix("matrix is singular")
            return Matrix([[self.rows[0][0].inverse()]], self.tower)
        rows = [list(r) + [one if i == j else zero for j in range(m)] for i, r in enumerate(self.rows)]
        for c in range(m):
            piv = next((i for i in range(c, m) if rows[i][c]), None)
            if piv is None:
                raise SingularMatrix("matrix is singular")
            rows[c], rows[piv] = rows[piv], rows[c]
            inv = rows[c][c].inverse()
            rows[c] = [x * inv for x in rows[c]]
            for i in range(m):
                if i != c and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[c])]
        return Matrix([r[m:] for r in rows], self.tower)

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]

    def __repr__(self):
        return f"Matrix({self.to_strings()})"
