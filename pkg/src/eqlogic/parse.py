"""Recursive-descent parser for expressions, equations and domains, plus JSON output."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

from . import expr as ex


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(ValueError):
    """Input outside the grammar; carries the offending span."""

    def __init__(self, message: str, span: SourceSpan, text: str = ""):
        super().__init__(message)
        self.message = message
        self.span = span
        self.text = text

    def pretty(self) -> str:
        if not self.text:
            return f"syntax error at {self.span.start}: {self.message}"
        caret = " " * self.span.start + "^" * max(1, self.span.end - self.span.start)
        return f"syntax error at {self.span.start}: {self.message}\n  {self.text}\n  {caret}"


class MultipleEquals(ParseError):
    pass


class EmptySide(ParseError):
    pass


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    start: int
    end: int


_OPS = set("+-*/^(),=[]U")


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == ".":
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            toks.append(Token("num", text[i:j], i, j))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            toks.append(Token("op" if word == "U" else "name", word, i, j))
            i = j
            continue
        if c in _OPS:
            toks.append(Token("op", c, i, i + 1))
            i += 1
            continue
        raise ParseError(f"unexpected character {c!r}", SourceSpan(i, i + 1), text)
    toks.append(Token("end", "", n, n))
    return toks


def _decimal(s: str) -> Fraction:
    # Fraction parses decimal strings exactly
    return Fraction(s)


# ---------------------------------------------------------------------------
# expression parser
# ---------------------------------------------------------------------------

_FUNCS = {"sqrt": None, "exp": ex.Exp, "ln": ex.Ln, "sin": ex.Sin, "cos": ex.Cos}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, expected: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        got = "end of input" if tok.kind == "end" else repr(tok.text)
        return ParseError(f"expected {expected}, got {got}", SourceSpan(tok.start, max(tok.end, tok.start + 1)), self.text)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.tok.kind == "op" and self.tok.text == text:
            t = self.tok
            self.i += 1
            return t
        raise self.error(f"'{text}'")

    def int_literal(self, signed: bool = True) -> int:
        neg = signed and self.accept("-")
        t = self.tok
        if t.kind != "num" or "." in t.text:
            raise self.error("integer literal")
        self.i += 1
        return -int(t.text) if neg else int(t.text)

    # expr := term (("+"|"-") term)*
    def expr(self) -> ex.Expr:
        node = self.term()
        while True:
            if self.accept("+"):
                node = ex.Add(node, self.term())
            elif self.accept("-"):
                node = ex.Sub(node, self.term())
            else:
                return node

    # term := factor (("*"|"/") factor)*
    def term(self) -> ex.Expr:
        node = self.factor()
        while True:
            if self.accept("*"):
                node = ex.Mul(node, self.factor())
            elif self.accept("/"):
                rhs = self.factor()
                if isinstance(node, ex.RationalLit) and isinstance(rhs, ex.RationalLit):
                    if rhs.value == 0:
                        raise self.error("nonzero divisor", self.toks[self.i - 1])
                    node = ex.RationalLit(node.value / rhs.value)
                else:
                    node = ex.Div(node, rhs)
            elif self.tok.kind in ("num", "name") or (self.tok.kind == "op" and self.tok.text == "("):
                raise self.error("operator ('*' is required for multiplication)")
            else:
                return node

    # factor := "-" factor | atom ("^" signed-int)?   (right-associative chains fold)
    def factor(self) -> ex.Expr:
        if self.accept("-"):
            return ex.Neg(self.factor())
        base = self.atom()
        if self.accept("^"):
            start = self.tok
            exps = [self.int_literal()]
            while self.accept("^"):
                exps.append(self.int_literal())
            k = exps[-1]
            for b in reversed(exps[:-1]):
                if k < 0:
                    raise self.error("integer exponent (tower yields a fraction)", start)
                k = b**k
            return ex.IntPow(base, k)
        return base

    def atom(self) -> ex.Expr:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return ex.RationalLit(_decimal(t.text))
        if t.kind == "op" and t.text == "(":
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "name":
            self.i += 1
            if t.text == "x":
                return ex.Var()
            if t.text == "e":
                return ex.ConstE()
            if t.text == "pi":
                return ex.ConstPi()
            if t.text in _FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                cls = _FUNCS[t.text]
                return ex.Root(2, arg) if cls is None else cls(arg)
            if t.text in ("root", "W"):
                self.expect("(")
                kt = self.tok
                k = self.int_literal()
                self.expect(",")
                arg = self.expr()
                self.expect(")")
                if t.text == "root":
                    if k < 2:
                        raise self.error("root index >= 2", kt)
                    return ex.Root(k, arg)
                if k not in (0, -1):
                    raise self.error("Lambert W branch 0 or -1", kt)
                return ex.LambertW(k, arg)
            raise ParseError(f"unknown name {t.text!r}", SourceSpan(t.start, t.end), self.text)
        raise self.error("number, 'x', constant, function call or '('")

    def finish(self) -> None:
        if self.tok.kind != "end":
            raise self.error("end of input")


def parse_expression(text: str) -> ex.Expr:
    p = _Parser(text)
    node = p.expr()
    p.finish()
    return node


def parse_equation(text: str, domain_text: Optional[str] = None) -> ex.Equation:
    eqs = [i for i, c in enumerate(text) if c == "="]
    if not eqs:
        raise ParseError("expected '='", SourceSpan(len(text), len(text)), text)
    if len(eqs) > 1:
        raise MultipleEquals("more than one '='", SourceSpan(eqs[1], eqs[1] + 1), text)
    k = eqs[0]
    left, right = text[:k], text[k + 1 :]
    if not left.strip():
        raise EmptySide("left side is empty", SourceSpan(0, k), text)
    if not right.strip():
        raise EmptySide("right side is empty", SourceSpan(k + 1, len(text)), text)
    lhs = _parse_at(left, 0, text)
    rhs = _parse_at(right, k + 1, text)
    dom = parse_domain(domain_text) if domain_text is not None else None
    return ex.Equation(lhs, rhs, dom)


def _parse_at(part: str, offset: int, full: str) -> ex.Expr:
    try:
        return parse_expression(part)
    except ParseError as err:
        span = SourceSpan(err.span.start + offset, err.span.end + offset)
        raise type(err)(err.message, span, full) from None


# ---------------------------------------------------------------------------
# domains:  [a,b]  (a,b)  [a,inf)  (-inf,b]  joined with U
# ---------------------------------------------------------------------------


def _endpoint(p: _Parser) -> Optional[Fraction]:
    neg = p.accept("-")
    t = p.tok
    if t.kind == "name" and t.text == "inf":
        p.i += 1
        return None if not neg else "-inf"  # type: ignore[return-value]
    if t.kind != "num":
        raise p.error("rational endpoint or inf")
    p.i += 1
    v = _decimal(t.text)
    if p.accept("/"):
        d = p.int_literal(signed=False)
        if d == 0:
            raise p.error("nonzero denominator", p.toks[p.i - 1])
        v = v / d
    return -v if neg else v


def parse_domain(text: str) -> ex.Domain:
    p = _Parser(text)
    parts = []
    while True:
        t = p.tok
        if p.accept("["):
            lo_closed = True
        elif p.accept("("):
            lo_closed = False
        else:
            raise p.error("'[' or '('")
        lo_tok = p.tok
        lo = _endpoint(p)
        p.expect(",")
        hi_tok = p.tok
        hi = _endpoint(p)
        if p.accept("]"):
            hi_closed = True
        elif p.accept(")"):
            hi_closed = False
        else:
            raise p.error("']' or ')'")
        if lo is None:
            raise ParseError("lower endpoint cannot be +inf", SourceSpan(lo_tok.start, lo_tok.end), text)
        if hi == "-inf":
            raise ParseError("upper endpoint cannot be -inf", SourceSpan(hi_tok.start, hi_tok.end), text)
        lo_v = None if lo == "-inf" else lo
        if (lo_v is None and lo_closed) or (hi is None and hi_closed):
            raise ParseError("infinite endpoints must be open", SourceSpan(t.start, p.toks[p.i - 1].end), text)
        parts.append(ex.Interval(lo_v, hi, lo_closed, hi_closed))
        if not p.accept("U"):
            break
    p.finish()
    return ex.Domain.normalize(parts)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def rational_json(q) -> dict:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def interval_json(iv) -> dict:
    return {"lo": rational_json(iv.lo), "hi": rational_json(iv.hi)}


def domain_json(d: ex.Domain) -> list:
    out = []
    for iv in d.intervals:
        out.append(
            {
                "lo": None if iv.lo is None else rational_json(iv.lo),
                "hi": None if iv.hi is None else rational_json(iv.hi),
                "lo_closed": iv.lo_closed,
                "hi_closed": iv.hi_closed,
            }
        )
    return out


def _rep_json(rep, precision: Optional[int]) -> dict:
    d = rep.json_fields()
    if precision is not None:
        d["enclosure"] = interval_json(rep.enclosure(precision))
    return d


def solution_set_json(value, precision: Optional[int] = None) -> dict:
    out: dict[str, Any] = {"kind": value.kind}
    if value.kind == "identity":
        return out
    if value.kind == "unsolved":
        out["reason"] = value.reason
        return out
    out["solutions"] = [_rep_json(s, precision) for s in value.solutions]
    if value.rejected:
        out["rejected"] = [{**_rep_json(r.candidate, precision), "reason": r.reason} for r in value.rejected]
    if value.inconclusive:
        out["inconclusive"] = [{**_rep_json(r.candidate, precision), "reason": r.reason} for r in value.inconclusive]
    return out


def trace_json(trace) -> dict:
    return {
        "steps": [
            {
                "rule": s.rule,
                "relation": s.relation.value,
                "side_conditions": [str(c) for c in s.side_conditions],
                "equation": s.output_text(),
            }
            for s in trace.steps
        ],
        "overall_relation": trace.overall.value,
    }


def render_json(value, precision: Optional[int] = None) -> str:
    """Deterministic compact JSON for a SolutionSet or a Trace."""
    if hasattr(value, "steps"):
        data = trace_json(value)
    else:
        data = solution_set_json(value, precision)
    return json.dumps(data, separators=(",", ":"), ensure_ascii=False)
