"""``qiter`` command line: operators, equations, Wronskians, classification, curvature.

Exit codes: 0 success, 1 domain error, 2 usage or expression syntax error.
Errors go to stderr as ``error[CODE]: message``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import curvature, galois, idqmod, selftest
from .exactfield import FieldError, cyclotomic_tower, field_from_spec
from .qarith import make_context
from .ratfunc import ExprSyntaxError, delta, delta_range, parse, parse_element
from .wronskian import difference_orders


class UsageError(Exception):
    pass


def _context(args):
    if args.field:
        tower = field_from_spec(args.field)
    elif getattr(args, "p", None):
        tower = field_from_spec(f"F{args.p}(zeta{args.n})")
    else:
        tower = cyclotomic_tower(args.n)
    q = parse_element(tower, args.q) if getattr(args, "q", None) else None
    return make_context(tower, args.n, q)


def _emit(args, text_lines, payload):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_delta(args):
    ctx = _context(args)
    f = parse(ctx, args.expr)
    out = delta(ctx, args.k, f)
    _emit(args, [str(out)], {"k": args.k, "expr": str(f), "delta": str(out)})


def cmd_taylor(args):
    ctx = _context(args)
    f = parse(ctx, args.expr)
    N = args.N if args.N is not None else 2 * ctx.n
    coeffs = [str(x) for x in delta_range(ctx, N, f)]
    lines = [f"T^{k}: {c}" for k, c in enumerate(coeffs)]
    _emit(args, lines, {"N": N, "expr": str(f), "coeffs": coeffs})


def _family_from_file(path):
    doc = idqmod._load_doc(path)
    if "D" in doc:
        return idqmod.equations_from_system(idqmod.load_system(doc))
    return idqmod.load_family(doc)


def cmd_equations(args):
    fam = _family_from_file(args.system)
    doc = idqmod.family_to_json(fam)
    doc["consistency"] = idqmod.consistency_check(fam, args.bound).to_json()
    print(json.dumps(doc, indent=2))


def cmd_check(args):
    fam = _family_from_file(args.system)
    text = args.solution
    if not text.lstrip().startswith("["):
        with open(text) as fh:
            text = fh.read()
    rows = json.loads(text)
    if isinstance(rows, dict):
        rows = rows["Y"]
    Y = idqmod._matrix_from_json(fam.ctx, rows)
    bad = idqmod.failing_levels(fam, Y)
    ok = not bad
    _emit(args, ["OK" if ok else f"FAIL at levels {bad}"], {"ok": ok, "failing_levels": bad})
    return 0 if ok else 1


def cmd_wronskian(args):
    ctx = _context(args)
    xs = [parse(ctx, s) for s in _split_exprs(args.exprs)]
    res = difference_orders(ctx, xs, args.bound)
    if res.found:
        lines = [f"orders {tuple(res.orders)}", f"det {res.det}"]
        payload = {"orders": list(res.orders), "det": str(res.det)}
    else:
        lines = [f"NotFoundUpTo({res.orders.bound})"]
        payload = {"orders": None, "not_found_up_to": res.orders.bound}
    _emit(args, lines, payload)


def _split_exprs(text):
    # commas inside parentheses belong to no expression in this grammar, so a flat split is fine
    parts = [s.strip() for s in text.split(",")]
    if any(not s for s in parts):
        raise UsageError("empty expression in --exprs")
    return parts


def _verdict_json(v):
    out = {"kind": v.kind, "text": str(v)}
    for key in ("order", "bound", "p"):
        if hasattr(v, key):
            out[key] = getattr(v, key)
    return out


def _digit_stream(args):
    if args.p is None:
        raise UsageError("--p is required for this kind")
    if args.digits is not None:
        return galois.explicit_digits([int(x) for x in args.digits.split(",") if x.strip()], args.p)
    if args.alpha is not None:
        a = Fraction(args.alpha)
        return galois.padic_digits(a.numerator, a.denominator, args.p, args.digits_count)
    raise UsageError("give --alpha or --digits")


def cmd_classify(args):
    if args.kind == "rank1-char0":
        if args.a is None:
            raise UsageError("--a is required for rank1-char0")
        tower = field_from_spec(args.field) if args.field else cyclotomic_tower(1)
        a = parse_element(tower, args.a)
        v = galois.classify_rank1_char0(a, args.n)
        payload = {"verdict": _verdict_json(v)}
    else:
        d = _digit_stream(args)
        fn = galois.classify_rank1_charp if args.kind == "rank1-charp" else galois.classify_ga
        v = fn(d, args.n, args.p)
        per = galois.detect_period(d)
        payload = {
            "verdict": _verdict_json(v),
            "digits": list(d.digits),
            "provenance": d.provenance,
            "period": None if isinstance(per, galois.NoPeriodUpTo) else [per.preperiod, per.period],
        }
    _emit(args, [str(v)], payload)


def cmd_curvature(args):
    inp = curvature.load_curvature_input(args.input)
    primes = curvature.parse_primes(args.primes)
    report = curvature.isotriviality_survey(inp, primes)
    if args.report:
        curvature.write_report(report, args.report)
    summ = report["summary"]
    c = summ["counts"]
    lines = [
        f"{summ['verdict']}",
        f"vanishes {c['vanishes']}, nonzero {c['nonzero']}, skipped {c['skipped-bad-reduction'] + c['skipped-order-loss']}",
    ]
    _emit(args, lines, report)


def cmd_selftest(args):
    ctx = _context(args)
    names = selftest.SUITES if args.suite == "all" else [args.suite]
    worst = 0
    payload = {}
    for name in names:
        passed, total, failed = selftest.run_suite(name, ctx, args.trials, args.seed)
        payload[name] = {"passed": passed, "trials": total, "failed": failed}
        tag = "OK" if passed == total else "FAIL"
        prefix = "" if len(names) == 1 else f"{name}: "
        if not args.json:
            print(f"{prefix}{tag} {passed}/{total}")
        if passed != total:
            worst = 1
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    return worst


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qiter", description="Iterative q-difference calculus at roots of unity.")
    sub = ap.add_subparsers(dest="command", required=True)

    def ctx_flags(sp, need_n=True):
        sp.add_argument("--field", help='JSON file, inline JSON, or "Q", "F7", "Q(zeta3)", "F2(zeta3)"')
        sp.add_argument("--n", type=int, required=need_n, help="order of q")
        sp.add_argument("--q", help="q as an element of the field (default: canonical root)")
        sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("delta", help="apply delta^(k) to an expression")
    ctx_flags(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--expr", required=True)
    sp.set_defaults(func=cmd_delta)

    sp = sub.add_parser("taylor", help="iterative Taylor coefficients delta^(0..N)")
    ctx_flags(sp)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--N", type=int)
    sp.set_defaults(func=cmd_taylor)

    sp = sub.add_parser("equations", help="equation matrices from a system or family file")
    sp.add_argument("--system", required=True)
    sp.add_argument("--bound", type=int, help="consistency check bound")
    sp.set_defaults(func=cmd_equations)

    sp = sub.add_parser("check", help="check a candidate fundamental matrix")
    sp.add_argument("--system", required=True)
    sp.add_argument("--solution", required=True, help="JSON matrix or a file holding one")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("wronskian", help="difference orders and the Wronskian")
    ctx_flags(sp)
    sp.add_argument("--exprs", required=True, help="comma separated")
    sp.add_argument("--bound", type=int)
    sp.set_defaults(func=cmd_wronskian)

    sp = sub.add_parser("classify", help="Galois group of the worked families")
    sp.add_argument("--kind", required=True, choices=["rank1-charp", "rank1-char0", "ga"])
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--alpha", help="rational alpha such as 1/3")
    sp.add_argument("--digits-count", type=int, default=24)
    sp.add_argument("--digits", help="explicit digits, comma separated")
    sp.add_argument("--field")
    sp.add_argument("--a", help="the constant a for rank1-char0")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("curvature", help="pi_v-curvature survey over primes")
    sp.add_argument("--input", required=True)
    sp.add_argument("--primes", default="3..100", help='like "3..200" or "3,7,11"')
    sp.add_argument("--report", help="write the JSON report here")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_curvature)

    sp = sub.add_parser("selftest", help="randomized invariant suites")
    sp.add_argument("--suite", default="all", choices=["all", *selftest.SUITES])
    ctx_flags(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_selftest)
    return ap


def _fail(code: str, msg, status: int) -> int:
    print(f"error[{code}]: {msg}", file=sys.stderr)
    return status


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        rc = args.func(args)
    except UsageError as e:
        ap.print_usage(sys.stderr)
        return _fail("usage", e, 2)
    except ExprSyntaxError as e:
        return _fail("syntax", e, 2)
    except (OSError, json.JSONDecodeError) as e:
        return _fail("input", e, 1)
    except (FieldError, ValueError, ZeroDivisionError, KeyError, ArithmeticError) as e:
        return _fail("domain", f"{type(e).__name__}: {e}", 1)
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
