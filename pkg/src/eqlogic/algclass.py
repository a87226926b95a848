"""Algebraic vs. transcendental classification with checkable certificates."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

from . import expr as ex
from . import poly as pl
from .interval import DyadicInterval, EmptyIntersection, UnboundedEnclosure, eval_interval
from .poly import BiPoly, UniPoly, ZeroInput


class EmptyDomain(ValueError):
    pass


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Algebraic:
    annihilator: BiPoly

    def __str__(self) -> str:
        return f"algebraic; annihilator: {self.annihilator}"


@dataclass(frozen=True)
class Transcendental:
    rule: str  # R1 .. R4
    reason: str

    def __str__(self) -> str:
        return f"transcendental ({self.rule}): {self.reason}"


@dataclass(frozen=True)
class Unknown:
    reason: str = "no closure rule applies"

    def __str__(self) -> str:
        return f"unknown: {self.reason}"


AlgebraicityCertificate = Union[Algebraic, Transcendental, Unknown]

FLAGGED_CONSTANTS: tuple[ex.Expr, ...] = (ex.ConstE(), ex.ConstPi())


# ---------------------------------------------------------------------------
# coefficient form  P(x, y) = sum_k p_k(x) y^k
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientForm:
    coeffs: tuple[UniPoly, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        if not cs:
            raise ZeroInput("coefficient form needs a nonzero p_k")
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> UniPoly:
        return self.coeffs[k] if k < len(self.coeffs) else UniPoly()


def to_coefficient_form(P: BiPoly) -> CoefficientForm:
    if P.is_zero():
        raise ZeroInput("zero polynomial")
    return CoefficientForm(tuple(P.coefficient_list()))


def from_coefficient_form(cf: CoefficientForm) -> BiPoly:
    return BiPoly.from_coefficient_list(cf.coeffs)


def inverse_annihilator(P: BiPoly) -> BiPoly:
    """Swap x and y: an annihilator of f becomes one of f^-1 (f injective)."""
    if P.is_zero():
        raise ZeroInput("zero polynomial")
    return P.swap()


# ---------------------------------------------------------------------------
# annihilator construction
# ---------------------------------------------------------------------------


def _lift3(P: BiPoly, yvar: int) -> dict:
    """Embed P(x, y) into Q[x, y, z] with y placed at index ``yvar``."""
    out = {}
    for (i, j), c in P.terms.items():
        k = [i, 0, 0]
        k[yvar] = j
        out[tuple(k)] = Fraction(c)
    return out


def _project(m: dict) -> BiPoly:
    return BiPoly.from_rational({(k[0], k[1]): c for k, c in m.items()})


def normalize_annihilator(P: BiPoly) -> BiPoly:
    """Primitive, positive leading y-coefficient, x-content removed."""
    if P.is_zero():
        raise ZeroInput("zero annihilator")
    cs = P.coefficient_list()
    g = UniPoly()
    for c in cs:
        g = pl.poly_gcd(g, c) if not g.is_zero() else c.monic()
    if g.degree > 0:
        cs = [c // g for c in cs]
    return BiPoly.from_rational({(i, j): v for j, c in enumerate(cs) for i, v in enumerate(c.coeffs) if v})


def _shift_y(P: BiPoly) -> dict:
    """P(x, y - z) in Q[x, y, z]."""
    out: dict = {}
    for (i, j), c in P.terms.items():
        # (y - z)^j = sum C(j, m) y^(j-m) (-z)^m
        binom = 1
        for m in range(j + 1):
            k = (i, j - m, m)
            out[k] = out.get(k, 0) + Fraction(c * binom * (-1) ** m)
            binom = binom * (j - m) // (m + 1)
    return {k: v for k, v in out.items() if v}


def ann_neg(P: BiPoly) -> BiPoly:
    return BiPoly({(i, j): c * (-1) ** j for (i, j), c in P.terms.items()})


def ann_sum(P: BiPoly, Q: BiPoly) -> BiPoly:
    # Res_z(P(x, z), Q(x, y - z))
    r = pl.mp_resultant(_lift3(P, 2), _shift_y(Q), 2, 3)
    return _project(r)


def ann_product(P: BiPoly, Q: BiPoly) -> BiPoly:
    # Res_z(P(x, z), z^d Q(x, y/z))
    d = Q.deg_y
    q = {(i, j, d - j): Fraction(c) for (i, j), c in Q.terms.items()}
    r = pl.mp_resultant(_lift3(P, 2), q, 2, 3)
    return _project(r)


def ann_reciprocal(P: BiPoly) -> BiPoly:
    d = P.deg_y
    return BiPoly({(i, d - j): c for (i, j), c in P.terms.items()})


def ann_power(P: BiPoly, k: int) -> BiPoly:
    if k == 0:
        return BiPoly({(0, 1): 1, (0, 0): -1})
    if k < 0:
        return ann_reciprocal(ann_power(P, -k))
    if k == 1:
        return P
    q = {(0, 1, 0): Fraction(1), (0, 0, k): Fraction(-1)}
    return _project(pl.mp_resultant(_lift3(P, 2), q, 2, 3))


def ann_root(P: BiPoly, n: int) -> BiPoly:
    return BiPoly({(i, j * n): c for (i, j), c in P.terms.items()})


def _rational_annihilator(e: ex.Expr) -> Optional[BiPoly]:
    r = pl.rational_parts(e)
    if r is None:
        return None
    num, den, _ = r
    g = pl.poly_gcd(num, den) if not num.is_zero() else den.monic()
    if g.degree > 0:
        num, den = num // g, den // g
    terms = {(i, 1): c for i, c in enumerate(den.coeffs) if c}
    for i, c in enumerate(num.coeffs):
        if c:
            terms[(i, 0)] = terms.get((i, 0), 0) - c
    return BiPoly.from_rational(terms)


def annihilator(e: ex.Expr) -> Optional[BiPoly]:
    """A nonzero integer P with P(x, e(x)) = 0 on the natural domain, or None."""
    a = _annihilator(e)
    return None if a is None else normalize_annihilator(a)


def _annihilator(e: ex.Expr) -> Optional[BiPoly]:
    direct = _rational_annihilator(e)
    if direct is not None:
        return direct
    if isinstance(e, ex.Neg):
        a = _annihilator(e.arg)
        return None if a is None else ann_neg(a)
    if isinstance(e, (ex.Add, ex.Sub, ex.Mul, ex.Div)):
        a = _annihilator(e.left)
        if a is None:
            return None
        b = _annihilator(e.right)
        if b is None:
            return None
        if isinstance(e, ex.Add):
            return normalize_annihilator(ann_sum(a, b))
        if isinstance(e, ex.Sub):
            return normalize_annihilator(ann_sum(a, ann_neg(b)))
        if isinstance(e, ex.Mul):
            return normalize_annihilator(ann_product(a, b))
        return normalize_annihilator(ann_product(a, ann_reciprocal(b)))
    if isinstance(e, ex.IntPow):
        a = _annihilator(e.base)
        return None if a is None else normalize_annihilator(ann_power(a, e.exponent))
    if isinstance(e, ex.Root):
        a = _annihilator(e.arg)
        return None if a is None else ann_root(a, e.index)
    return None


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def power_function(a: ex.Expr) -> ex.Expr:
    """a^x spelled through the engine's primitive: exp(x * ln(a))."""
    return ex.Exp(ex.Mul(ex.Var(), ex.Ln(a)))


def _base_of_power(e: ex.Expr) -> Optional[ex.Expr]:
    """a when e is exp(x*ln(a)) or exp(ln(a)*x); ConstE for exp(x)."""
    if not isinstance(e, ex.Exp):
        return None
    u = e.arg
    if isinstance(u, ex.Var):
        return ex.ConstE()
    if isinstance(u, ex.Mul):
        for v, l in ((u.left, u.right), (u.right, u.left)):
            if isinstance(v, ex.Var) and isinstance(l, ex.Ln) and not l.arg.has_var():
                return l.arg
    return None


def pivot_at_one(f: ex.Expr) -> ex.Expr:
    """Structural value f(1) for f = a^x: exp(1*ln(a)) collapses to a."""
    a = _base_of_power(f)
    if a is None:
        raise ValueError("not of the form a^x")
    g = ex.substitute(f, ex.RationalLit(1))
    if isinstance(g, ex.Exp) and isinstance(g.arg, ex.RationalLit) and g.arg.value == 1:
        return ex.ConstE()
    if isinstance(g, ex.Exp) and isinstance(g.arg, ex.Mul):
        m = g.arg
        for one, other in ((m.left, m.right), (m.right, m.left)):
            if one == ex.RationalLit(1) and isinstance(other, ex.Ln):
                return other.arg
    raise ValueError("unexpected shape")


def _nonconstant(e: ex.Expr, ann: BiPoly) -> bool:
    # an algebraic argument with an x-dependent annihilator that is not (c*y - d)
    if not e.has_var():
        return False
    p = pl.from_expr(e)
    if p is not None:
        return p.degree >= 1
    return ann.deg_x > 0


def classify(
    e: ex.Expr,
    domain: Optional[ex.Domain] = None,
    transcendental_constants: Iterable[ex.Expr] = (),
) -> AlgebraicityCertificate:
    """Algebraic with an annihilator, Transcendental by rule R1-R4, or Unknown."""
    nat = ex.natural_domain(e)
    dom = nat if domain is None else domain.intersect(nat)
    if dom.is_empty():
        raise EmptyDomain("classification needs a nonempty domain")
    if len(dom.intervals) == 1 and dom.intervals[0].lo == dom.intervals[0].hi is not None:
        q = dom.intervals[0].lo
        return Algebraic(BiPoly.from_rational({(1, 0): 1, (0, 0): -q}))
    flagged = tuple(FLAGGED_CONSTANTS) + tuple(transcendental_constants)
    ann = annihilator(e)
    if ann is not None:
        return Algebraic(ann)
    a = _base_of_power(e)
    if a is not None and a in flagged:
        return Transcendental("R2", f"a^x with a = {ex.to_text(a)} flagged transcendental; f(1) = a")
    if isinstance(e, ex.Ln) and isinstance(e.arg, ex.Var):
        return Transcendental("R3", "inverse of exp (R2); an algebraic injective function has an algebraic inverse")
    if isinstance(e, (ex.Exp, ex.Ln, ex.Sin, ex.Cos)):
        inner = annihilator(e.arg)
        if inner is not None and _nonconstant(e.arg, inner):
            name = type(e).__name__.lower()
            return Transcendental("R1", f"{name} of the nonconstant algebraic argument {ex.to_text(e.arg)}")
    if isinstance(e, ex.LambertW):
        inner = annihilator(e.arg)
        if inner is not None and _nonconstant(e.arg, inner):
            return Transcendental("R4", f"Lambert W of the nonconstant algebraic argument {ex.to_text(e.arg)}")
    return Unknown()


class EquationClass(enum.Enum):
    ALGEBRAIC = "AlgebraicEq"
    TRANSCENDENTAL = "TranscendentalEq"
    UNKNOWN = "UnknownEq"


def classify_equation(eq: ex.Equation) -> EquationClass:
    dom = eq.domain if not eq.domain.is_empty() else None
    certs = []
    for side in (eq.lhs, eq.rhs):
        try:
            certs.append(classify(side, dom))
        except EmptyDomain:
            certs.append(Unknown("empty domain"))
    if any(isinstance(c, Transcendental) for c in certs):
        return EquationClass.TRANSCENDENTAL
    if all(isinstance(c, Algebraic) for c in certs):
        return EquationClass.ALGEBRAIC
    return EquationClass.UNKNOWN


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


class Verdict(enum.Enum):
    VERIFIED = "Verified"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"


def _samples(dom: ex.Domain, n: int) -> list[Fraction]:
    if dom.is_empty():
        return []
    per = max(1, -(-n // len(dom.intervals)))
    return dom.sample_points(per)[: max(n, 1)]


def annihilator_verify(
    e: ex.Expr, P: BiPoly, samples: int = 20, precision: int = 128, domain: Optional[ex.Domain] = None
) -> Verdict:
    if P.is_zero():
        raise ZeroInput("zero polynomial")
    dom = ex.natural_domain(e) if domain is None else domain.intersect(ex.natural_domain(e))
    for t in _samples(dom, samples):
        x = DyadicInterval.point(t, precision)
        try:
            y = eval_interval(e, x, precision)
        except (EmptyIntersection, UnboundedEnclosure):
            continue
        v = P(x, y)
        if not isinstance(v, DyadicInterval):
            v = DyadicInterval.point(v, precision)
        if not v.contains_zero():
            return Verdict.REFUTED
    A = annihilator(e)
    if A is None:
        return Verdict.INCONCLUSIVE
    rem = pl.pseudo_remainder_y(P, A)
    if all(c.is_zero() for c in rem):
        return Verdict.VERIFIED
    return Verdict.INCONCLUSIVE


# ---------------------------------------------------------------------------
# enumeration of real algebraic numbers
# ---------------------------------------------------------------------------


def _polys_of_height(h: int) -> Iterator[UniPoly]:
    """Integer polynomials with deg + sum|a_i| = h and positive leading coefficient."""
    for d in range(1, h):
        norm = h - d
        tuples = []
        for lead in range(1, norm + 1):
            for rest in _signed_compositions(norm - lead, d):
                tuples.append((lead,) + rest)
        for t in sorted(tuples, reverse=True):
            yield UniPoly(reversed(t))


def _signed_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All integer tuples of length ``parts`` with sum of absolute values ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for a in range(-total, total + 1):
        for rest in _signed_compositions(total - abs(a), parts - 1):
            yield (a,) + rest


def _same_number(p: UniPoly, r: pl.IsolatedRoot, q: UniPoly, s: pl.IsolatedRoot) -> bool:
    if r.exact or s.exact:
        if r.exact and s.exact:
            return r.lo == s.lo
        v, other, op = (r.lo, s, q) if r.exact else (s.lo, r, p)
        return other.lo < v < other.hi and op(v) == 0
    lo, hi = max(r.lo, s.lo), min(r.hi, s.hi)
    if lo >= hi:
        return False
    g = pl.poly_gcd(p, q)
    if g.degree < 1:
        return False
    return pl.count_real_roots(g, lo, hi) > 0


def iter_algebraic() -> Iterator[tuple[UniPoly, pl.IsolatedRoot]]:
    """Distinct real algebraic numbers in height order (stateless, restartable)."""
    found: list[tuple[UniPoly, pl.IsolatedRoot]] = []
    for h in itertools.count(2):
        for p in _polys_of_height(h):
            for r in pl.exact_isolate(p):
                if any(_same_number(p, r, q, s) for q, s in found):
                    continue
                found.append((p, r))
                yield p, r


def enumerate_algebraic(count: int) -> list[tuple[UniPoly, pl.IsolatedRoot]]:
    if count < 0:
        raise ValueError("count must be nonnegative")
    return list(itertools.islice(iter_algebraic(), count))
