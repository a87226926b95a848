"""Command-line front end: solve, classify, isolate, enumerate-algebraic, check."""

from __future__ import annotations

import argparse
import contextlib
import decimal
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from . import algclass as ac
from . import expr as ex
from . import parse as ps
from . import poly as pl
from . import rewrite as rw
from . import solver as sv
from .interval import MAX_PRECISION, Sign, eval_const

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_SYNTAX = 2
EXIT_FLAGS = 3

DEFAULT_PRECISION = 256
DISPLAY_DIGITS = 10


class FlagError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 by default; flags errors are 3 here
        raise FlagError(message)


def _decimal_text(q: Fraction, digits: int) -> str:
    ctx = decimal.Context(prec=max(1, digits), rounding=decimal.ROUND_HALF_EVEN)
    d = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    s = format(d, "f") if abs(d) >= decimal.Decimal("1e-6") or d == 0 else format(d, "e")
    return s


def format_enclosure(lo: Fraction, hi: Fraction) -> str:
    """Midpoint with as many significant digits as the width certifies, at most ten."""
    if lo == hi:
        return _decimal_text(lo, DISPLAY_DIGITS) if lo.denominator != 1 else str(lo.numerator)
    mid = (lo + hi) / 2
    width = hi - lo
    if mid == 0:
        digits = 1
    else:
        rel = float(width / abs(mid)) if width else 0.0
        digits = DISPLAY_DIGITS if rel == 0 else min(DISPLAY_DIGITS, max(1, int(-math.log10(rel))))
    return f"{_decimal_text(mid, digits)}…(certified ±ulp)"


def _rep_text(rep, precision: int) -> str:
    iv = rep.enclosure(precision)
    if isinstance(rep, sv.ExactRational):
        return rep.describe()
    return f"{rep.describe()} ≈ {format_enclosure(iv.lo, iv.hi)}"


def _exact_text(q: Fraction) -> str:
    return str(q)


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


def render_solution_text(ss: sv.SolutionSet, precision: int) -> str:
    if ss.kind == "identity":
        return "identity: every point of the domain is a solution"
    if ss.kind == "unsolved":
        return f"unsolved: {ss.reason}"
    parts = []
    if ss.solutions:
        sols = ", ".join(_rep_text(s, precision) for s in ss.solutions)
        parts.append(f"{_plural(len(ss.solutions), 'solution')}: {sols}")
    else:
        parts.append("no solution")
    for r in ss.rejected:
        parts.append(f"rejected candidate: {r.candidate.describe()} ({r.reason})")
    for r in ss.inconclusive:
        parts.append(f"inconclusive candidate: {_rep_text(r.candidate, precision)} ({r.reason})")
    return "; ".join(parts)


def _trace_text(trace: rw.Trace) -> list[str]:
    lines = [f"{i + 1}. {s}" for i, s in enumerate(trace.steps)]
    if trace.steps:
        lines.append(f"overall relation: {trace.overall.value}")
    lines.extend(f"note: {n}" for n in trace.notes)
    return lines


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_solve(args, out: TextIO) -> int:
    eq = ps.parse_equation(args.equation, args.domain)
    cfg = sv.SolveConfig(precision=args.precision, max_precision=max(args.precision, MAX_PRECISION),
                         check_precision=max(2 * args.precision, 512))
    ss, trace = sv.solve(eq, cfg)
    if args.json:
        out.write(ps.render_json(ss) + "\n")
        if args.trace:
            out.write(ps.render_json(trace) + "\n")
        return EXIT_OK
    if args.trace or ss.kind == "unsolved":
        steps = list(trace.steps)
        if args.max_steps is not None:
            steps = steps[: args.max_steps]
        notes = tuple(n for n in trace.notes if n != ss.reason)
        for line in _trace_text(rw.Trace(tuple(steps), notes)):
            out.write(line + "\n")
    out.write(render_solution_text(ss, args.precision) + "\n")
    return EXIT_OK


def _cmd_classify(args, out: TextIO) -> int:
    e = ps.parse_expression(args.expression)
    dom = ps.parse_domain(args.domain) if args.domain else None
    try:
        cert = ac.classify(e, dom)
    except ac.EmptyDomain as err:
        out.write(f"unknown: {err}\n")
        return EXIT_OK
    if isinstance(cert, ac.Algebraic):
        out.write(f"algebraic; annihilator: {cert.annihilator.to_text()}\n")
    elif isinstance(cert, ac.Transcendental):
        out.write(f"transcendental ({cert.rule}): {cert.reason}\n")
    else:
        out.write(f"unknown: {cert.reason}\n")
    return EXIT_OK


def _cmd_isolate(args, out: TextIO) -> int:
    e = ps.parse_expression(args.polynomial)
    p = pl.from_expr(e)
    if p is None:
        raise ps.ParseError("expected a polynomial in x", ps.SourceSpan(0, len(args.polynomial)), args.polynomial)
    if p.is_zero():
        out.write("zero polynomial: every real number is a root\n")
        return EXIT_OK
    roots = pl.exact_isolate(p)
    out.write(f"{_plural(len(roots), 'real root')}\n")
    for r in roots:
        iv = r.enclosure(args.precision)
        if r.exact:
            out.write(f"  exact root {_exact_text(r.lo)}\n")
        else:
            out.write(
                f"  isolating interval ({r.lo}, {r.hi}) ≈ {format_enclosure(iv.lo, iv.hi)}\n"
            )
    return EXIT_OK


def _cmd_enumerate(args, out: TextIO) -> int:
    items = ac.enumerate_algebraic(args.count)
    texts = []
    for p, r in items:
        if r.exact:
            val = _exact_text(r.lo)
        else:
            iv = r.enclosure(64)
            val = format_enclosure(iv.lo, iv.hi)
        texts.append(f"{val} (root of {p})")
    for i, t in enumerate(texts):
        out.write(f"{i + 1}. {t}\n")
    return EXIT_OK


def _as_surd(e: ex.Expr) -> Optional[tuple[Fraction, Fraction, int]]:
    """(a, b, d) with e = a + b*sqrt(d) for constants built from rationals and one square root."""
    if isinstance(e, ex.RationalLit):
        return e.value, Fraction(0), 1
    if isinstance(e, ex.Root) and e.index == 2:
        v = ex.try_exact(e.arg, 0) if not e.arg.has_var() else None
        if v is None or v < 0:
            return None
        if v == 0:
            return Fraction(0), Fraction(0), 1
        s, d = pl.squarefree_split(v.numerator * v.denominator)
        if d == 1:
            return Fraction(s, v.denominator), Fraction(0), 1
        return Fraction(0), Fraction(s, v.denominator), d
    if isinstance(e, ex.Neg):
        a = _as_surd(e.arg)
        return None if a is None else (-a[0], -a[1], a[2])
    if isinstance(e, (ex.Add, ex.Sub, ex.Mul, ex.Div)):
        a, b = _as_surd(e.left), _as_surd(e.right)
        if a is None or b is None:
            return None
        d = max(a[2], b[2])
        if a[2] != b[2] and min(a[2], b[2]) != 1:
            return None
        x = pl.QuadraticSurd(a[0], a[1], d)
        y = pl.QuadraticSurd(b[0], b[1], d)
        if isinstance(e, ex.Add):
            r = x + y
        elif isinstance(e, ex.Sub):
            r = x - y
        elif isinstance(e, ex.Mul):
            r = x * y
        else:
            norm = y.a * y.a - y.b * y.b * d
            if norm == 0:
                return None
            r = x * pl.QuadraticSurd(y.a / norm, -y.b / norm, d)
        return r.a, r.b, d
    return None


def _cmd_check(args, out: TextIO) -> int:
    eq = ps.parse_equation(args.equation, args.domain)
    cand = ps.parse_expression(args.candidate)
    if cand.has_var():
        raise ps.ParseError("candidate must be a constant expression", ps.SourceSpan(0, len(args.candidate)), args.candidate)
    q = ex.try_exact(cand, 0)
    if q is not None:
        rep = sv.ExactRational(q)
    else:
        s = _as_surd(cand)
        rep = pl.QuadraticSurd(*s) if s is not None and s[1] != 0 else sv.ClosedForm(cand)
    inside = sv._in_domain(rep, eq.domain, args.precision * 4)
    diff = ex.Sub(eq.lhs, eq.rhs)
    if inside is False:
        out.write(f"rejected: {rep.describe()} lies outside the domain {eq.domain}\n")
        return EXIT_OK
    try:
        sign = sv._sign_of_rep(diff, rep, max(args.precision * 4, 1024))
    except ex.DomainViolation:
        out.write(f"rejected: equation undefined at {rep.describe()}\n")
        return EXIT_OK
    exact = isinstance(rep, sv.ExactRational) or (
        isinstance(rep, pl.QuadraticSurd) and pl.from_expr(diff) is not None
    )
    if sign == Sign.UNKNOWN and isinstance(rep, pl.QuadraticSurd):
        # fall back on the solver: an exactly matching verified solution settles it
        ss, _ = sv.solve(eq)
        if any(s == rep for s in ss.solutions):
            sign, exact = Sign.ZERO, True
    if sign in (Sign.POSITIVE, Sign.NEGATIVE):
        out.write(f"rejected: lhs - rhs is certified {'positive' if sign == Sign.POSITIVE else 'negative'} at {rep.describe()}\n")
    elif sign == Sign.ZERO and exact and inside:
        out.write(f"verified: {rep.describe()} is a solution\n")
    else:
        iv = eval_const(ex.substitute(diff, cand), args.precision)
        out.write(
            f"inconclusive: lhs - rhs encloses 0 at {rep.describe()} "
            f"(width {format_enclosure(iv.hi - iv.lo, iv.hi - iv.lo)}); verified numerically only\n"
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eqlogic", description="Certified equation solving with rewriting traces.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("solve", help="solve an equation in x")
    s.add_argument("equation")
    s.add_argument("--domain")
    s.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    s.add_argument("--trace", action="store_true")
    s.add_argument("--json", action="store_true")
    s.add_argument("--max-steps", type=int)

    c = sub.add_parser("classify", help="algebraic / transcendental certificate")
    c.add_argument("expression")
    c.add_argument("--domain")

    i = sub.add_parser("isolate", help="isolate the real roots of a polynomial")
    i.add_argument("polynomial")
    i.add_argument("--precision", type=int, default=DEFAULT_PRECISION)

    n = sub.add_parser("enumerate-algebraic", help="list real algebraic numbers by height")
    n.add_argument("--count", type=int, required=True)

    k = sub.add_parser("check", help="check a candidate solution against an equation")
    k.add_argument("equation")
    k.add_argument("--candidate", required=True)
    k.add_argument("--domain")
    k.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    return p


def _validate(args) -> None:
    prec = getattr(args, "precision", None)
    if prec is not None and not 8 <= prec <= MAX_PRECISION:
        raise FlagError(f"--precision must lie in [8, {MAX_PRECISION}]")
    if getattr(args, "count", None) is not None and args.count < 0:
        raise FlagError("--count must be non-negative")
    if getattr(args, "max_steps", None) is not None and args.max_steps < 0:
        raise FlagError("--max-steps must be non-negative")


_COMMANDS = {
    "solve": _cmd_solve,
    "classify": _cmd_classify,
    "isolate": _cmd_isolate,
    "enumerate-algebraic": _cmd_enumerate,
    "check": _cmd_check,
}


def run(argv: Sequence[str], out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    try:
        with contextlib.redirect_stdout(out):
            args = build_parser().parse_args(list(argv))
        _validate(args)
    except FlagError as e:
        err.write(f"error: {e}\n")
        return EXIT_FLAGS
    except SystemExit as e:  # --help
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except ps.ParseError as e:
        err.write(e.pretty() + "\n")
        return EXIT_SYNTAX
    except Exception as e:  # never show a stack trace to the user
        err.write(f"internal error: {type(e).__name__}: {e}\n")
        return EXIT_INTERNAL


def main() -> None:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
