import random

import pytest
import sympy

from qiter.exactfield import make_tower
from qiter.matrix import DimensionMismatch, Matrix, SingularMatrix
from qiter.qarith import make_context
from qiter.ratfunc import parse

Q = make_context(make_tower(0, [0, 1]), 2)
t = sympy.Symbol("t")


def rand_entry(rng):
    a, b, c = rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(1, 3)
    return f"({a}*t + {b})/(t + {c})" if rng.random() < 0.5 else f"{a}*t^{rng.randint(0, 2)} + {b}"


def to_sympy(rows):
    return sympy.Matrix([[sympy.sympify(x.replace("^", "**")) for x in r] for r in rows])


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_det_and_inverse_match_sympy(size):
    rng = random.Random(size)
    for _ in range(6):
        rows = [[rand_entry(rng) for _ in range(size)] for _ in range(size)]
        A = Matrix([[parse(Q, x) for x in r] for r in rows], Q.tower)
        S = to_sympy(rows)
        want = sympy.cancel(S.det())
        got = A.det()
        assert sympy.cancel(sympy.sympify(str(got).replace("^", "**")) - want) == 0
        if want != 0:
            inv = A.inverse()
            assert A * inv == Matrix.identity(Q.tower, size)
            assert inv * A == Matrix.identity(Q.tower, size)
        else:
            with pytest.raises(SingularMatrix):
                A.inverse()


def test_rank_and_kron():
    A = Matrix([[parse(Q, "1"), parse(Q, "t")], [parse(Q, "t"), parse(Q, "t^2")]], Q.tower)
    assert A.rank() == 1 and not A.det()
    B = Matrix.identity(Q.tower, 2)
    K = A.kron(B)
    assert K.shape == (4, 4)
    C = Matrix([[parse(Q, "t + 1"), parse(Q, "2")], [parse(Q, "0"), parse(Q, "1/t")]], Q.tower)
    # mixed product rule
    assert (A.kron(B)) * (C.kron(B)) == (A * C).kron(B)


def test_shape_errors():
    A = Matrix.identity(Q.tower, 2)
    with pytest.raises(DimensionMismatch):
        A + Matrix.identity(Q.tower, 3)
    with pytest.raises(DimensionMismatch):
        Matrix.zero(Q.tower, 2, 3).det()
    with pytest.raises(DimensionMismatch):
        Matrix([[parse(Q, "1")], [parse(Q, "1"), parse(Q, "1")]])
