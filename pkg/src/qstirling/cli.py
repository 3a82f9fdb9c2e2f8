"""Command-line entry point: ``qstirling <command> [options]``.

Exit status: 0 on success, 1 when an identity check fails, 2 on usage
errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import bell as bell_mod
from .explicit import METHODS, coefficients, staircase_shape
from .report import Report
from .rewrite import (
    format_normal_form, normal_form_to_json, normal_order, parse_word, shape_from_word,
)
from .rook import RULES, FerrersBoard, enumerate_placements, render_placement, rook_number, rook_number_numeric
from .scalar import RationalPoint, Scalar, evaluate
from .triangles import (
    NAMED_TRIANGLES, TRIANGLE_IDENTITIES, IdentityParams, WeightSeq, named_triangle,
    random_points, verify_triangle_identity,
)


class UsageError(Exception):
    pass


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _point(text: str) -> RationalPoint:
    try:
        return RationalPoint.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}")


def _shape(text: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``"r1,r2;s1,s2"`` with r_1, s_1 the rightmost block."""
    if ";" not in text:
        raise argparse.ArgumentTypeError("shape must look like 'r1,r2,...;s1,s2,...'")
    r, s = text.split(";", 1)
    return _int_list(r), _int_list(s)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _scalar_out(x: Scalar, point: Optional[RationalPoint]):
    return str(evaluate(x, point)) if point is not None else str(x)


def _resolve_shape(args) -> tuple[tuple[int, ...], tuple[int, ...]]:
    given = [x is not None for x in (args.shape, args.word, args.n)]
    if sum(given) != 1:
        raise UsageError("give exactly one of --shape, --word, --n")
    if args.shape is not None:
        r, s = args.shape
    elif args.word is not None:
        r, s = shape_from_word(parse_word(args.word))
    else:
        if args.n < 0:
            raise UsageError("--n must be nonnegative")
        r, s = staircase_shape(args.n)
    if len(r) != len(s):
        raise UsageError("--shape: r and s lists must have equal length")
    return r, s


def _check_output(args) -> None:
    if getattr(args, "csv", False) and getattr(args, "eval", None) is None:
        raise UsageError("--csv prints evaluated rationals and needs --eval q=..,h=..")


# -- commands ----------------------------------------------------------------------


def cmd_table(args, out) -> int:
    _check_output(args)
    if args.n_max < 0:
        raise UsageError("--n-max must be nonnegative")
    tri = named_triangle(args.triangle, args.n_max, args.s)
    if args.json:
        data = tri.to_json()
        data.update({"triangle": args.triangle, "s": args.s})
        if args.eval is not None:
            for e in data["entries"]:
                e["value"] = str(evaluate(tri[e["n"], e["k"]], args.eval))
        out.write(_dump(data) + "\n")
    elif args.csv:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "k", "value"])
        for n, k, c in tri.entries():
            w.writerow([n, k, evaluate(c, args.eval)])
    else:
        for n, k, c in tri.entries():
            out.write(f"{n} {k} {_scalar_out(c, args.eval)}\n")
    return 0


def cmd_normal_order(args, out) -> int:
    _check_output(args)
    if args.s < 0:
        raise UsageError("--s must be >= 0 for normal ordering")
    nf = normal_order(parse_word(args.word), args.s, args.strategy)
    if args.json:
        data = normal_form_to_json(nf, args.s)
        if args.eval is not None:
            for t in data["terms"]:
                t["value"] = str(evaluate(nf[(t["v"], t["u"])], args.eval))
        out.write(_dump(data) + "\n")
    elif args.csv:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["v", "u", "value"])
        for (v, u), c in sorted(nf.items(), key=lambda kv: kv[0][1]):
            w.writerow([v, u, evaluate(c, args.eval)])
    elif args.eval is not None:
        for (v, u), c in sorted(nf.items(), key=lambda kv: kv[0][1]):
            out.write(f"V^{v} U^{u}: {evaluate(c, args.eval)}\n")
    else:
        out.write(format_normal_form(nf) + "\n")
    return 0


def cmd_coeffs(args, out) -> int:
    _check_output(args)
    r, s_vec = _resolve_shape(args)
    if not r:
        raise UsageError("empty shape")
    coeffs = coefficients(r, s_vec, args.s, args.method)
    total_r, total_s = sum(r), sum(s_vec)
    if args.json:
        data = {
            "r": list(r), "s_vec": list(s_vec), "s": args.s, "method": args.method,
            "coeffs": [
                {"k": k, "v": total_r - (total_s - k) * (1 - args.s), "coeff": c.to_json()}
                | ({"value": str(evaluate(c, args.eval))} if args.eval is not None else {})
                for k, c in coeffs.items()
            ],
        }
        out.write(_dump(data) + "\n")
    elif args.csv:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["k", "value"])
        for k, c in coeffs.items():
            w.writerow([k, evaluate(c, args.eval)])
    else:
        for k, c in coeffs.items():
            out.write(f"{k} {_scalar_out(c, args.eval)}\n")
    return 0


def cmd_rook(args, out) -> int:
    if (args.word is None) == (args.heights is None):
        raise UsageError("give exactly one of --word, --heights")
    board = FerrersBoard.from_word(parse_word(args.word)) if args.word is not None else FerrersBoard(list(args.heights))
    if args.rule is None:
        args.rule = "pre-weight" if args.s_real is not None else "row-creation"
    if args.s_real is not None:
        if args.eval is None:
            raise UsageError("--s-real needs --eval q=..,h=..")
        val = rook_number_numeric(board, args.k, args.s_real, args.eval, args.rule)
        out.write(_dump({"k": args.k, "s_real": args.s_real, "rule": args.rule, "value": val}) + "\n"
                  if args.json else f"{val!r}\n")
        return 0
    if args.s is None:
        raise UsageError("give --s (integer) or --s-real with --eval")
    total = rook_number(board, args.k, args.s, args.rule)
    placements = []
    if args.enumerate:
        placements = list(enumerate_placements(board, args.k, args.s, args.rule))
    if args.json:
        data = {"heights": list(board.heights), "k": args.k, "s": args.s, "rule": args.rule,
                "rook_number": total.to_json()}
        if args.eval is not None:
            data["value"] = str(evaluate(total, args.eval))
        if args.enumerate:
            data["placements"] = [{"rooks": [list(r) for r in p.rooks], "weight": w.to_json()} for p, w in placements]
        out.write(_dump(data) + "\n")
        return 0
    out.write(f"R[k={args.k}] = {_scalar_out(total, args.eval)}\n")
    for p, w in placements:
        out.write(f"\nrooks {list(p.rooks)} weight {w}\n")
        out.write(render_placement(board, p, args.s) + "\n")
    return 0


def _identity_params(args, seed_suffix: str = "") -> IdentityParams:
    v = w = None
    if args.weights == "random":
        v = WeightSeq.random(f"{args.seed}{seed_suffix}:v")
        w = WeightSeq.random(f"{args.seed}{seed_suffix}:w")
    return IdentityParams(
        n_max=args.n_max, s=args.s, v=v, w=w, l_max=args.l_max, m_max=args.m_max,
        points=random_points(args.seed),
    )


def _emit_reports(reports: Sequence[Report], args, out) -> int:
    if args.json:
        out.write(_dump([r.to_json() for r in reports]) + "\n")
    else:
        for r in reports:
            out.write(r.summary() + "\n")
            fail = r.first_failure()
            if fail is not None:
                out.write(f"  first failure: {fail.label}\n    lhs = {fail.lhs}\n    rhs = {fail.rhs}\n")
    return 0 if all(r.passed for r in reports) else 1


def cmd_verify(args, out) -> int:
    if args.n_max < 0:
        raise UsageError("--n-max must be nonnegative")
    tags = TRIANGLE_IDENTITIES if "all" in args.identity else args.identity
    reports = []
    for tag in tags:
        if args.weights == "random" and args.pairs > 1:
            rep = Report(tag)
            for i in range(args.pairs):
                rep.extend(verify_triangle_identity(tag, _identity_params(args, f"/{i}")))
        else:
            rep = verify_triangle_identity(tag, _identity_params(args))
        reports.append(rep)
    return _emit_reports(reports, args, out)


def cmd_bell(args, out) -> int:
    if args.identity:
        n = args.n if args.n is not None else 6
        n_max = args.n_max if args.n_max is not None else n + (args.m or 0)
        tags = bell_mod.BELL_IDENTITIES if "all" in args.identity else args.identity
        params = bell_mod.BellParams(n_max=n_max, s=args.s)
        return _emit_reports([bell_mod.verify_bell_identity(t, params) for t in tags], args, out)
    r, s_vec = _resolve_shape(args)
    poly = bell_mod.bell_poly(r, s_vec, args.s, args.method) if r else bell_mod.BellPoly({0: Scalar.const(1)})
    x = Fraction(1) if args.x is None else args.x
    value = poly.at(Scalar.const(x))
    if args.json:
        data = poly.to_json()
        data.update({"x": str(x), "value": value.to_json()})
        if args.eval is not None:
            data["evaluated"] = str(evaluate(value, args.eval))
        out.write(_dump(data) + "\n")
    else:
        out.write(f"B[x] = {poly}\n")
        out.write(f"B[{x}] = {_scalar_out(value, args.eval)}\n")
    return 0


def cmd_dobinsky(args, out) -> int:
    r, s_vec = _resolve_shape(args)
    if not r:
        raise UsageError("empty shape")
    if args.s == 1:
        raise UsageError("--s 1 is excluded: the Dobinsky-type formula needs s != 1")
    point = args.eval if args.eval is not None else RationalPoint(Fraction(1, 2), Fraction(1))
    N = args.order if args.order is not None else sum(s_vec) + 2
    res = bell_mod.dobinsky_check(r, s_vec, args.s, point, args.x, N)
    rep = res.coefficient_report
    if args.json:
        out.write(_dump({
            "lhs": str(res.lhs), "rhs_N": str(res.rhs_N), "gap": res.gap, "N": res.N,
            "coefficients": rep.to_json(),
        }) + "\n")
    else:
        out.write(f"B[x0] = {res.lhs}\n")
        out.write(f"truncated product (N={res.N}) ~ {float(res.rhs_N)!r}\n")
        out.write(f"gap = {res.gap:.3e}\n")
        out.write(rep.summary() + "\n")
    return 0 if rep.passed else 1


def cmd_eval(args, out) -> int:
    try:
        x = Scalar.parse(args.expr)
    except ValueError as exc:
        raise UsageError(f"--expr: {exc}")
    val = evaluate(x, args.eval)
    if args.json:
        out.write(_dump({"expr": str(x), "q": str(args.eval.q0), "h": str(args.eval.h0), "value": str(val)}) + "\n")
    else:
        out.write(f"{val}\n")
    return 0


# -- parser --------------------------------------------------------------------------


def _add_format(p, csv_ok: bool = True) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", action="store_true", help="JSON output (full symbolic coefficients)")
    if csv_ok:
        g.add_argument("--csv", action="store_true", help="CSV output of evaluated rationals (needs --eval)")
    p.add_argument("--eval", type=_point, metavar="q=..,h=..", help="evaluation point")


def _add_shape(p) -> None:
    p.add_argument("--shape", type=_shape, help="'r1,..,rn;s1,..,sn' (r1, s1 rightmost)")
    p.add_argument("--word", help="word in U, V with optional carets, e.g. V^2U^3V^3U^2")
    p.add_argument("--n", type=int, help="staircase (VU)^n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qstirling", description="Generalized q-Stirling numbers and normal ordering.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="print a named triangle")
    p.add_argument("--triangle", choices=NAMED_TRIANGLES, default="S")
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--n-max", type=int, default=5)
    _add_format(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("normal-order", help="normal-order a word")
    p.add_argument("--word", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--strategy", choices=("rightmost", "leftmost"), default="rightmost")
    _add_format(p)
    p.set_defaults(func=cmd_normal_order)

    p = sub.add_parser("coeffs", help="normal-ordering coefficients of H_{r,s}")
    _add_shape(p)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--method", choices=METHODS, default="gamma")
    _add_format(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("rook", help="rook numbers of a Ferrers board")
    p.add_argument("--word")
    p.add_argument("--heights", type=_int_list, help="column heights, left to right")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--s-real", type=float, help="real s (numeric pre-weight mode)")
    p.add_argument("--rule", choices=RULES, help="default: row-creation, or pre-weight with --s-real")
    p.add_argument("--enumerate", action="store_true", help="list every placement with its weight")
    _add_format(p, csv_ok=False)
    p.set_defaults(func=cmd_rook)

    p = sub.add_parser("verify", help="check triangle identities")
    p.add_argument("--identity", nargs="+", required=True, choices=TRIANGLE_IDENTITIES + ("all",))
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--l-max", type=int, default=3)
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--weights", choices=("stirling", "random"), default="stirling")
    p.add_argument("--pairs", type=int, default=1, help="number of random weight pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bell", help="Bell polynomials, numbers and identities")
    _add_shape(p)
    p.add_argument("--m", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--x", type=_fraction)
    p.add_argument("--method", choices=METHODS, default="gamma")
    p.add_argument("--identity", nargs="+", choices=bell_mod.BELL_IDENTITIES + ("all",))
    _add_format(p, csv_ok=False)
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("dobinsky", help="check the Dobinsky-type product")
    _add_shape(p)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--x", type=_fraction, default=Fraction(1))
    p.add_argument("--order", type=int, help="truncation order N")
    _add_format(p, csv_ok=False)
    p.set_defaults(func=cmd_dobinsky)

    p = sub.add_parser("eval", help="evaluate a Scalar at a rational point")
    p.add_argument("--expr", required=True)
    p.add_argument("--eval", type=_point, required=True, metavar="q=..,h=..")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)
    return ap


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, ValueError) as exc:
        print(f"qstirling {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
