import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from qiter.curvature import (
    NONZERO,
    SKIPPED_BAD,
    SKIPPED_ORDER,
    VANISHES,
    CurvatureInput,
    isotriviality_survey,
    iterate_matrix,
    load_curvature_input,
    parse_primes,
    pi_v_curvature,
    reduce_matrix,
    residue_context,
    survey_json,
)
from qiter.exactfield import cyclotomic_tower, is_prime, make_tower, residue_places
from qiter.matrix import Matrix
from qiter.qarith import make_context
from qiter.ratfunc import RatFunc, delta, parse

DATA = Path(__file__).resolve().parent.parent / "data" / "modules"
Q2 = make_context(make_tower(0, [0, 1]), 2)
S2 = make_context(make_tower(0, [-2, 0, 1]), 2)


def M(ctx, rows):
    return Matrix([[parse(ctx, str(x)) for x in r] for r in rows], ctx.tower)


def falling(a, k):
    out = 1
    for j in range(k):
        out = out * (a - j)
    return out


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rank1_closed_form(n):
    ctx = make_context(cyclotomic_tower(n), n)
    for a in (Fraction(7), Fraction(-3, 2), Fraction(1, 3)):
        A = M(ctx, [[f"{a}/t^{n}"]])
        for k in range(1, 11):
            want = RatFunc.constant(ctx.tower, falling(a, k)) / RatFunc.t(ctx.tower, k * n)
            assert iterate_matrix(ctx, A, k) == Matrix([[want]], ctx.tower)


def test_second_iterate_symbolic_root():
    # a = sqrt 2 is not rational, so nothing collapses
    A = M(S2, [["g/t^2"]])
    g = S2.tower.gen()
    assert iterate_matrix(S2, A, 2) == Matrix([[RatFunc.constant(S2.tower, g * (g - 1)) / RatFunc.t(S2.tower, 4)]], S2.tower)


def test_zero_matrix_stays_zero():
    Z = Matrix.zero(Q2.tower, 2)
    assert all(iterate_matrix(Q2, Z, k).is_zero() for k in range(1, 6))


def test_recursion_forces_inverse_power_rule():
    # rank 1 with a = -1: A_[2] = 2/t^(2n) must equal delta^(n)(A) + A^2
    for n in (2, 3):
        ctx = make_context(cyclotomic_tower(n), n)
        tn = RatFunc.t(ctx.tower, n)
        assert delta(ctx, n, tn.inverse()) == -RatFunc.t(ctx.tower, -2 * n)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_reduce_and_iterate_commute(p):
    rng = random.Random(p)
    ctx = S2
    rows = [
        [f"({rng.randint(-3, 3)} + {rng.randint(-3, 3)}*g)/t^2", f"{rng.randint(1, 3)}/(t - 1)"],
        [f"{rng.randint(-3, 3)}*g", f"({rng.randint(-3, 3)} + g)/t^2"],
    ]
    A = M(ctx, rows)
    big = [iterate_matrix(ctx, A, k) for k in range(1, 8)]
    for v in residue_places(ctx.tower, p):
        rctx = residue_context(ctx, v)
        small = reduce_matrix(A, v)
        for k in range(1, 8):
            assert reduce_matrix(big[k - 1], v) == iterate_matrix(rctx, small, k)


def test_place_examples():
    inp = CurvatureInput(Q2, M(Q2, [["2/t^2"]]))
    (v5,) = residue_places(Q2.tower, 5)
    assert pi_v_curvature(inp, v5).status == VANISHES
    inp = CurvatureInput(S2, M(S2, [["g/t^2"]]))
    (v3,) = residue_places(S2.tower, 3)
    rep = pi_v_curvature(inp, v3)
    assert rep.status == NONZERO and rep.witness
    v7 = [v for v in residue_places(S2.tower, 7) if v.symmetric_factor() == [-3, 1]][0]
    assert pi_v_curvature(inp, v7).status == VANISHES


def test_sqrt2_survey_follows_quadratic_residues():
    inp = load_curvature_input(DATA / "sqrt2.json")
    report = isotriviality_survey(inp, parse_primes("3..97"))
    for row in report["places"]:
        p = row["p"]
        splits = pow(2, (p - 1) // 2, p) == 1  # Euler's criterion
        assert row["status"] == (VANISHES if splits else NONZERO)
        assert (p % 8 in (1, 7)) == splits
    assert report["summary"]["verdict"].startswith("not isotrivial")


def test_integer_survey_all_vanish():
    inp = load_curvature_input(DATA / "a2.json")
    report = isotriviality_survey(inp, parse_primes("5..97"))
    assert {r["status"] for r in report["places"]} == {VANISHES}
    assert report["summary"]["verdict"] == "consistent-with-isotrivial"
    inp = load_curvature_input(DATA / "a5half.json")
    report = isotriviality_survey(inp, [3, 7, 11])
    assert {r["status"] for r in report["places"]} == {VANISHES}


def test_skips_are_reported():
    inp = load_curvature_input(DATA / "sqrt2.json")
    rows = isotriviality_survey(inp, [2])["places"]
    assert rows == [{"p": 2, "factor": None, "status": SKIPPED_BAD}]
    inp = load_curvature_input(DATA / "a2.json")
    rows = isotriviality_survey(inp, [2, 3])["places"]
    assert rows[0]["status"] == SKIPPED_ORDER and rows[1]["status"] == VANISHES
    # a pole at the place
    bad = CurvatureInput(Q2, M(Q2, [["1/3/t^2"]]))
    (v3,) = residue_places(Q2.tower, 3)
    assert pi_v_curvature(bad, v3).status == SKIPPED_BAD


def test_survey_is_deterministic():
    inp = load_curvature_input(DATA / "sqrt2.json")
    a = survey_json(isotriviality_survey(inp, parse_primes("3..50")))
    b = survey_json(isotriviality_survey(inp, list(reversed(parse_primes("3..50")))))
    assert a == b
    rows = json.loads(a)["places"]
    assert rows == sorted(rows, key=lambda r: (r["p"], r["factor"] or []))


def test_parse_primes():
    assert parse_primes("3..20") == [p for p in range(3, 21) if is_prime(p)]
    assert parse_primes("31,3..7") == [3, 5, 7, 31]
    with pytest.raises(ValueError):
        parse_primes("9")
