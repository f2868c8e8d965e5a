"""The pi_v-curvature recursion and a survey of it over finite places.

The production path reduces A at the place first and then iterates p times
over the residue field; iterating over K(t) and reducing afterwards gives the
same matrix at good places but blows up in size.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .exactfield import (
    BadReduction,
    FieldError,
    NoOrderUpTo,
    Place,
    PoleAtPlace,
    mult_order,
    reduce_at_place,
    residue_places,
)
from .idqmod import _load_doc, _matrix_from_json, context_from_json
from .matrix import Matrix
from .qarith import QContext
from .ratfunc import Poly, RatFunc, delta

__all__ = [
    "CurvatureInput",
    "PlaceReport",
    "iterate_matrix",
    "reduce_matrix",
    "pi_v_curvature",
    "isotriviality_survey",
    "load_curvature_input",
    "parse_primes",
    "VANISHES",
    "NONZERO",
    "SKIPPED_BAD",
    "SKIPPED_ORDER",
]

VANISHES = "vanishes"
NONZERO = "nonzero"
SKIPPED_BAD = "skipped-bad-reduction"
SKIPPED_ORDER = "skipped-order-loss"


@dataclass(frozen=True)
class CurvatureInput:
    """delta^(n) acts by A on a basis where delta^(1) vanishes; char-0 tower only."""

    ctx: QContext
    A: Matrix

    def __post_init__(self):
        if self.ctx.p:
            raise ValueError("curvature input needs a characteristic-0 field")
        m, r = self.A.shape
        if m != r:
            raise ValueError("A must be square")


@dataclass(frozen=True)
class PlaceReport:
    p: int
    factor: tuple | None
    status: str
    witness: str | None = None
    place: Place | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        out = {"p": self.p, "factor": self.symmetric_factor(), "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def symmetric_factor(self):
        if self.factor is None:
            return None
        half = self.p // 2
        return [c - self.p if c > half else c for c in self.factor]

    def sort_key(self):
        return (self.p, self.symmetric_factor() or [])


def iterate_matrix(ctx: QContext, A: Matrix, k: int) -> Matrix:
    """A_[k] with A_[1] = A and A_[j+1] = delta^(n)(A_[j]) + A_[j] A."""
    if k < 1:
        raise ValueError("k must be at least 1")
    cur = A
    for _ in range(k - 1):
        cur = cur.delta(ctx, ctx.n) + cur * A
    return cur


def _reduce_poly(f: Poly, v: Place) -> Poly:
    return Poly(v.residue_tower, {e: reduce_at_place(c, v) for e, c in f.terms.items()})


def reduce_ratfunc(f: RatFunc, v: Place) -> RatFunc:
    # den is monic, so a pole-free reduction of its coefficients keeps it nonzero
    return RatFunc(_reduce_poly(f.num, v), _reduce_poly(f.den, v))


def reduce_matrix(A: Matrix, v: Place) -> Matrix:
    return Matrix([[reduce_ratfunc(x, v) for x in row] for row in A.rows], v.residue_tower)


def residue_context(ctx: QContext, v: Place) -> QContext | None:
    """The context over the residue field, or None when q loses its order there."""
    if ctx.n % v.p == 0:
        return None
    qbar = reduce_at_place(ctx.q, v)
    if not qbar:
        return None
    try:
        if mult_order(qbar, ctx.n) != ctx.n:
            return None
    except NoOrderUpTo:
        return None
    return QContext(v.residue_tower, qbar, ctx.n)


def pi_v_curvature(inp: CurvatureInput, v: Place) -> PlaceReport:
    ctx = inp.ctx
    rctx = residue_context(ctx, v)
    if rctx is None:
        return PlaceReport(v.p, v.factor, SKIPPED_ORDER, place=v)
    try:
        Abar = reduce_matrix(inp.A, v)
    except PoleAtPlace:
        return PlaceReport(v.p, v.factor, SKIPPED_BAD, place=v)
    Ap = iterate_matrix(rctx, Abar, v.p)
    for i, row in enumerate(Ap.rows):
        for j, x in enumerate(row):
            if x:
                return PlaceReport(v.p, v.factor, NONZERO, f"({i},{j}): {x}", place=v)
    return PlaceReport(v.p, v.factor, VANISHES, place=v)


def _places_or_skip(inp: CurvatureInput, p: int):
    try:
        return residue_places(inp.ctx.tower, p), None
    except BadReduction:
        return [], PlaceReport(p, None, SKIPPED_BAD)


def isotriviality_survey(inp: CurvatureInput, primes) -> dict:
    """One report per place over each prime, sorted by (p, factor), plus a summary block."""
    reports = []
    for p in sorted(set(primes)):
        places, skipped = _places_or_skip(inp, p)
        if skipped is not None:
            reports.append(skipped)
        reports.extend(pi_v_curvature(inp, v) for v in places)
    reports.sort(key=PlaceReport.sort_key)
    counts = {s: 0 for s in (VANISHES, NONZERO, SKIPPED_BAD, SKIPPED_ORDER)}
    for r in reports:
        counts[r.status] += 1
    witnesses = [r.to_json() for r in reports if r.status == NONZERO]
    if witnesses:
        verdict = "not isotrivial (witness places listed)"
    else:
        verdict = "consistent-with-isotrivial"
    return {
        "places": [r.to_json() for r in reports],
        "summary": {
            "counts": counts,
            "verdict": verdict,
            "witnesses": [[w["p"], w["factor"]] for w in witnesses],
        },
    }


def survey_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def load_curvature_input(src) -> CurvatureInput:
    """{"field": {...}, "n": 2, "q": "-1", "A": [["g/t^2"]]}"""
    doc = _load_doc(src)
    ctx = context_from_json(doc)
    return CurvatureInput(ctx, _matrix_from_json(ctx, doc["A"]))


def parse_primes(spec: str) -> list[int]:
    """Primes from "3..200" (inclusive) or a comma list "3,7,11"; mixed forms are fine."""
    from .exactfield import is_prime

    out = set()
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.update(x for x in range(int(lo), int(hi) + 1) if is_prime(x))
        else:
            x = int(part)
            if not is_prime(x):
                raise FieldError(f"{x} is not prime")
            out.add(x)
    return sorted(out)


def write_report(report: dict, path) -> None:
    Path(path).write_text(survey_json(report) + "\n")
