"""Outward-rounded interval arithmetic with dyadic endpoints.

Endpoints are :class:`Fraction` values whose denominators are powers of two.
After every operation the lower endpoint is rounded down and the upper one up
to ``prec`` significant bits, so each result is a proof that the true value
lies inside. Elementary functions are evaluated in fixed point with an
explicit bound on truncation and rounding error.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import expr as ex

DEFAULT_PRECISION = 64
MAX_PRECISION = 4096


class EmptyIntersection(ValueError):
    """The input interval misses the natural domain of the expression."""


class UnboundedEnclosure(ArithmeticError):
    """The enclosure would be unbounded (pole, log at 0, W(-1) near 0)."""


class Sign(enum.Enum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    ZERO = "zero"
    CONTAINS_ZERO = "contains_zero"
    UNKNOWN = "unknown"


# ---------------------------------------------------------------------------
# rounding
# ---------------------------------------------------------------------------


def round_down(q: Fraction, prec: int) -> Fraction:
    n, d = q.numerator, q.denominator
    if n == 0:
        return q
    if d & (d - 1) == 0 and abs(n).bit_length() <= prec:
        return q
    shift = prec - (abs(n).bit_length() - d.bit_length())
    if shift >= 0:
        return Fraction((n << shift) // d, 1 << shift)
    return Fraction((n // (d << -shift)) << -shift)


def round_up(q: Fraction, prec: int) -> Fraction:
    return -round_down(-q, prec)


def _fix(q: Fraction, w: int, up: bool) -> int:
    """floor (or ceil) of q * 2^w."""
    n = q.numerator << w
    if up:
        return -((-n) // q.denominator)
    return n // q.denominator


# ---------------------------------------------------------------------------
# the interval type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DyadicInterval:
    lo: Fraction
    hi: Fraction
    prec: int = DEFAULT_PRECISION

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", round_down(lo, self.prec))
        object.__setattr__(self, "hi", round_up(hi, self.prec))

    @classmethod
    def point(cls, q, prec: int = DEFAULT_PRECISION) -> "DyadicInterval":
        q = Fraction(q)
        return cls(q, q, prec)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, q) -> bool:
        return self.lo <= q <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def with_prec(self, prec: int) -> "DyadicInterval":
        return DyadicInterval(self.lo, self.hi, prec)

    def hull(self, other: "DyadicInterval") -> "DyadicInterval":
        return DyadicInterval(min(self.lo, other.lo), max(self.hi, other.hi), self.prec)

    def intersect(self, other: "DyadicInterval") -> Optional["DyadicInterval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return DyadicInterval(lo, hi, self.prec)

    def sign(self) -> Sign:
        if self.lo > 0:
            return Sign.POSITIVE
        if self.hi < 0:
            return Sign.NEGATIVE
        if self.lo == self.hi == 0:
            return Sign.ZERO
        return Sign.CONTAINS_ZERO

    def __neg__(self):
        return DyadicInterval(-self.hi, -self.lo, self.prec)

    def __add__(self, other):
        other = _coerce(other, self.prec)
        return DyadicInterval(self.lo + other.lo, self.hi + other.hi, self.prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other, self.prec)
        return DyadicInterval(self.lo - other.hi, self.hi - other.lo, self.prec)

    def __rsub__(self, other):
        return _coerce(other, self.prec) - self

    def __mul__(self, other):
        other = _coerce(other, self.prec)
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return DyadicInterval(min(ps), max(ps), self.prec)

    __rmul__ = __mul__

    def reciprocal(self) -> "DyadicInterval":
        if self.lo <= 0 <= self.hi:
            raise UnboundedEnclosure("division by an interval containing zero")
        return DyadicInterval(1 / self.hi, 1 / self.lo, self.prec)

    def __truediv__(self, other):
        return self * _coerce(other, self.prec).reciprocal()

    def __rtruediv__(self, other):
        return _coerce(other, self.prec) * self.reciprocal()

    def __pow__(self, k: int) -> "DyadicInterval":
        if k == 0:
            return DyadicInterval(1, 1, self.prec)
        if k < 0:
            return (self**-k).reciprocal()
        a, b = self.lo**k, self.hi**k
        if k % 2 == 1 or self.lo >= 0:
            return DyadicInterval(min(a, b), max(a, b), self.prec)
        if self.hi <= 0:
            return DyadicInterval(b, a, self.prec)
        return DyadicInterval(0, max(a, b), self.prec)

    def __str__(self) -> str:
        return f"[{float(self.lo):.17g}, {float(self.hi):.17g}]"


def _coerce(v, prec) -> DyadicInterval:
    if isinstance(v, DyadicInterval):
        return v
    return DyadicInterval.point(Fraction(v), prec)


# ---------------------------------------------------------------------------
# fixed-point kernels; each returns (value, error) in units of 2^-w
# ---------------------------------------------------------------------------


def _exp_series(tn: int, w: int) -> tuple[int, int]:
    # 0 <= t <= 1/2
    one = 1 << w
    term, total, k = one, one, 1
    while term:
        term = (term * tn >> w) // k
        total += term
        k += 1
    return total, 3 * k + 10


def _atanh_series(tn: int, w: int) -> tuple[int, int]:
    # 0 <= t <= 1/3
    t2 = tn * tn >> w
    pw, total, j = tn, 0, 0
    while pw:
        total += pw // (2 * j + 1)
        pw = pw * t2 >> w
        j += 1
    return total, 4 * j + 10


def _atan_inv_series(n: int, w: int) -> tuple[int, int]:
    # atan(1/n), n >= 2
    pw = (1 << w) // n
    n2 = n * n
    total, j, sign = 0, 0, 1
    while pw:
        total += sign * (pw // (2 * j + 1))
        pw //= n2
        sign = -sign
        j += 1
    return total, 3 * j + 10


def _sin_series(tn: int, w: int) -> tuple[int, int]:
    # |t| <= 4
    if tn < 0:
        v, err = _sin_series(-tn, w)
        return -v, err
    t2 = tn * tn >> w
    term, total, k = tn, tn, 1
    while term:
        term = -((term * t2 >> w) // ((2 * k) * (2 * k + 1)))
        total += term
        k += 1
    return total, 40 * k + 40


# ---------------------------------------------------------------------------
# point enclosures of elementary functions
# ---------------------------------------------------------------------------


def exp_bounds(q: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    q = Fraction(q)
    if q == 0:
        return Fraction(1), Fraction(1)
    if q < 0:
        lo, hi = exp_bounds(-q, prec + 4)
        return round_down(1 / hi, prec), round_up(1 / lo, prec)
    s = max(0, math.ceil(q).bit_length() + 1)
    w = prec + s + 40
    t = q / (1 << s)
    lo_n, e1 = _exp_series(_fix(t, w, False), w)
    hi_n, e2 = _exp_series(_fix(t, w, True), w)
    lo_n -= e1
    hi_n += e2
    for _ in range(s):
        lo_n = lo_n * lo_n >> w
        hi_n = -((-hi_n * hi_n) >> w)
    return round_down(Fraction(lo_n, 1 << w), prec), round_up(Fraction(hi_n, 1 << w), prec)


@lru_cache(maxsize=64)
def ln2_bounds(prec: int) -> tuple[Fraction, Fraction]:
    w = prec + 40
    v, err = _atanh_series(_fix(Fraction(1, 3), w, False), w)
    v2, err2 = _atanh_series(_fix(Fraction(1, 3), w, True), w)
    return Fraction(2 * (v - err), 1 << w), Fraction(2 * (v2 + err2), 1 << w)


def ln_bounds(q: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    q = Fraction(q)
    if q <= 0:
        raise EmptyIntersection("logarithm of a non-positive number")
    if q == 1:
        return Fraction(0), Fraction(0)
    k = q.numerator.bit_length() - q.denominator.bit_length()
    m = q / (Fraction(2) ** k)
    if m < 1:
        m *= 2
        k -= 1
    w = prec + 40 + abs(k).bit_length()
    t = (m - 1) / (m + 1)
    a, ea = _atanh_series(_fix(t, w, False), w)
    b, eb = _atanh_series(_fix(t, w, True), w)
    lnm_lo, lnm_hi = Fraction(2 * (a - ea), 1 << w), Fraction(2 * (b + eb), 1 << w)
    l2lo, l2hi = ln2_bounds(w)
    if k >= 0:
        lo, hi = k * l2lo + lnm_lo, k * l2hi + lnm_hi
    else:
        lo, hi = k * l2hi + lnm_lo, k * l2lo + lnm_hi
    return round_down(lo, prec), round_up(hi, prec)


@lru_cache(maxsize=64)
def pi_bounds(prec: int) -> tuple[Fraction, Fraction]:
    w = prec + 40
    a, ea = _atan_inv_series(5, w)
    b, eb = _atan_inv_series(239, w)
    lo = 16 * (a - ea) - 4 * (b + eb)
    hi = 16 * (a + ea) - 4 * (b - eb)
    return Fraction(lo, 1 << w), Fraction(hi, 1 << w)


@lru_cache(maxsize=64)
def inv_e_bounds(prec: int) -> tuple[Fraction, Fraction]:
    """Enclosure of 1/e."""
    return exp_bounds(Fraction(-1), prec)


def _sin_point(q: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    w = prec + 40
    plo, phi = pi_bounds(w + q.numerator.bit_length())
    k = round(q / (plo + phi))  # q / (2*pi)
    r_lo = q - 2 * k * (phi if k > 0 else plo)
    r_hi = q - 2 * k * (plo if k > 0 else phi)
    v, err = _sin_series(_fix(r_lo, w, False), w)
    lo = Fraction(v - err, 1 << w) - (r_hi - r_lo) - Fraction(1, 1 << (w - 2))
    hi = Fraction(v + err, 1 << w) + (r_hi - r_lo) + Fraction(1, 1 << (w - 2))
    return max(Fraction(-1), round_down(lo, prec)), min(Fraction(1), round_up(hi, prec))


def sin_interval(x: DyadicInterval) -> DyadicInterval:
    prec = x.prec
    plo, phi = pi_bounds(prec + 8)
    if x.width >= 2 * plo:
        return DyadicInterval(-1, 1, prec)
    a_lo, a_hi = _sin_point(x.lo, prec)
    b_lo, b_hi = _sin_point(x.hi, prec)
    lo, hi = min(a_lo, b_lo), max(a_hi, b_hi)
    # extrema at pi/2 + j*pi: maxima for even j, minima for odd j
    j0 = math.floor((x.lo - 2) / plo) - 1
    j1 = math.ceil((x.hi + 2) / plo) + 1
    for j in range(j0, j1 + 1):
        c = Fraction(2 * j + 1, 2)
        c_lo, c_hi = (c * plo, c * phi) if c > 0 else (c * phi, c * plo)
        if c_hi >= x.lo and c_lo <= x.hi:
            if j % 2 == 0:
                hi = Fraction(1)
            else:
                lo = Fraction(-1)
    return DyadicInterval(lo, hi, prec)


def cos_interval(x: DyadicInterval) -> DyadicInterval:
    plo, phi = pi_bounds(x.prec + 8)
    shifted = DyadicInterval(x.lo + plo / 2, x.hi + phi / 2, x.prec + 8)
    return sin_interval(shifted).with_prec(x.prec)


def exp_interval(x: DyadicInterval) -> DyadicInterval:
    lo, _ = exp_bounds(x.lo, x.prec)
    _, hi = exp_bounds(x.hi, x.prec)
    return DyadicInterval(lo, hi, x.prec)


def ln_interval(x: DyadicInterval) -> DyadicInterval:
    if x.hi <= 0:
        raise EmptyIntersection("logarithm of a non-positive interval")
    if x.lo <= 0:
        raise UnboundedEnclosure("logarithm near zero")
    lo, _ = ln_bounds(x.lo, x.prec)
    _, hi = ln_bounds(x.hi, x.prec)
    return DyadicInterval(lo, hi, x.prec)


def _root_bounds(q: Fraction, n: int, prec: int) -> tuple[Fraction, Fraction]:
    from .poly import integer_nth_root

    if q == 0:
        return Fraction(0), Fraction(0)
    if q < 0:
        lo, hi = _root_bounds(-q, n, prec)
        return -hi, -lo
    mag = (q.numerator.bit_length() - q.denominator.bit_length()) // n
    f = max(0, prec - mag + 4)
    scaled = q * (1 << (n * f))
    big = scaled.numerator // scaled.denominator
    r = integer_nth_root(big, n)
    lo = Fraction(r, 1 << f)
    if r**n == big and scaled.denominator == 1:
        return lo, lo
    return lo, Fraction(r + 1, 1 << f)


def root_interval(x: DyadicInterval, n: int) -> DyadicInterval:
    lo, hi = x.lo, x.hi
    if n % 2 == 0:
        if hi < 0:
            raise EmptyIntersection("even root of a negative interval")
        lo = max(lo, Fraction(0))
    a, _ = _root_bounds(lo, n, x.prec)
    _, b = _root_bounds(hi, n, x.prec)
    return DyadicInterval(a, b, x.prec)


# ---------------------------------------------------------------------------
# expression evaluation
# ---------------------------------------------------------------------------


def eval_interval(e: ex.Expr, x: DyadicInterval, precision: Optional[int] = None) -> DyadicInterval:
    """Enclosure of {e(t) : t in x, t in natural_domain(e)}."""
    prec = precision or x.prec
    if x.prec != prec:
        x = x.with_prec(prec)
    return _ev(e, x, prec)


def _ev(e: ex.Expr, x: DyadicInterval, prec: int) -> DyadicInterval:
    if isinstance(e, ex.Var):
        return x
    if isinstance(e, ex.RationalLit):
        return DyadicInterval.point(e.value, prec)
    if isinstance(e, ex.ConstE):
        lo, hi = exp_bounds(Fraction(1), prec)
        return DyadicInterval(lo, hi, prec)
    if isinstance(e, ex.ConstPi):
        lo, hi = pi_bounds(prec)
        return DyadicInterval(lo, hi, prec)
    if isinstance(e, ex.Neg):
        return -_ev(e.arg, x, prec)
    if isinstance(e, ex.Add):
        return _ev(e.left, x, prec) + _ev(e.right, x, prec)
    if isinstance(e, ex.Sub):
        return _ev(e.left, x, prec) - _ev(e.right, x, prec)
    if isinstance(e, ex.Mul):
        return _ev(e.left, x, prec) * _ev(e.right, x, prec)
    if isinstance(e, ex.Div):
        d = _ev(e.right, x, prec)
        if d.lo == d.hi == 0:
            raise EmptyIntersection("division by zero")
        return _ev(e.left, x, prec) / d
    if isinstance(e, ex.IntPow):
        b = _ev(e.base, x, prec)
        if e.exponent < 0 and b.lo == b.hi == 0:
            raise EmptyIntersection("zero to a negative power")
        return b**e.exponent
    if isinstance(e, ex.Root):
        return root_interval(_ev(e.arg, x, prec), e.index)
    if isinstance(e, ex.Exp):
        return exp_interval(_ev(e.arg, x, prec))
    if isinstance(e, ex.Ln):
        return ln_interval(_ev(e.arg, x, prec))
    if isinstance(e, ex.Sin):
        return sin_interval(_ev(e.arg, x, prec))
    if isinstance(e, ex.Cos):
        return cos_interval(_ev(e.arg, x, prec))
    if isinstance(e, ex.LambertW):
        from .special import lambert_w

        return lambert_w(e.branch, _ev(e.arg, x, prec), prec)
    raise ex.UnsupportedNode(type(e).__name__)


def eval_const(e: ex.Expr, prec: int = DEFAULT_PRECISION) -> DyadicInterval:
    return eval_interval(e, DyadicInterval.point(0, prec), prec)


def certified_sign(
    e: ex.Expr, x: DyadicInterval, max_precision: int = MAX_PRECISION, start_precision: int = DEFAULT_PRECISION
) -> Sign:
    """Positive/Negative only when a refined enclosure excludes zero.

    ContainsZero is returned when an exact rational evaluation at a point of
    ``x`` yields 0; Unknown when the precision budget runs out.
    """
    p = start_precision
    while p <= max_precision:
        try:
            s = eval_interval(e, x.with_prec(p), p).sign()
        except (UnboundedEnclosure, EmptyIntersection):
            s = Sign.UNKNOWN
        if s in (Sign.POSITIVE, Sign.NEGATIVE):
            return s
        if s == Sign.ZERO:
            return Sign.CONTAINS_ZERO
        p *= 2
    for t in (x.mid, x.lo, x.hi):
        if ex.try_exact(e, t) == 0:
            return Sign.CONTAINS_ZERO
    return Sign.UNKNOWN


def certified_sign_const(e: ex.Expr, max_precision: int = 1024) -> Sign:
    """Sign of an x-free expression."""
    v = ex.try_exact(e, 0)
    if v is not None:
        return Sign.ZERO if v == 0 else (Sign.POSITIVE if v > 0 else Sign.NEGATIVE)
    s = certified_sign(e, DyadicInterval.point(0), max_precision)
    # on a point, ContainsZero is only reached through an exact zero
    return Sign.ZERO if s == Sign.CONTAINS_ZERO else s


def sign_at(e: ex.Expr, t: Fraction, max_precision: int = MAX_PRECISION) -> Sign:
    """Certified sign of e at a rational point (exact when possible)."""
    v = ex.try_exact(e, t)
    if v is not None:
        return Sign.ZERO if v == 0 else (Sign.POSITIVE if v > 0 else Sign.NEGATIVE)
    prec = max(DEFAULT_PRECISION, 2 * max(t.numerator.bit_length(), t.denominator.bit_length()))
    s = certified_sign(e, DyadicInterval.point(t, 2 * prec), max_precision, prec)
    return Sign.ZERO if s == Sign.CONTAINS_ZERO else s


# ---------------------------------------------------------------------------
# structural sign facts (no arithmetic)
# ---------------------------------------------------------------------------


def structural_sign(e: ex.Expr) -> Optional[str]:
    """'>0', '>=0', '<0', '<=0' when a syntactic rule proves it on the natural domain."""
    if isinstance(e, ex.RationalLit):
        v = e.value
        return ">0" if v > 0 else "<0" if v < 0 else ">=0"
    if isinstance(e, (ex.ConstE, ex.ConstPi, ex.Exp)):
        return ">0"
    if isinstance(e, ex.Root):
        inner = structural_sign(e.arg)
        if e.index % 2 == 0:
            return ">0" if inner == ">0" else ">=0"
        return inner
    if isinstance(e, ex.IntPow):
        k = e.exponent
        inner = structural_sign(e.base)
        if k % 2 == 0:
            return ">0" if k < 0 or inner in (">0", "<0") else ">=0"
        if k < 0 and inner in (">=0", "<=0"):
            return inner[0] + "0"
        return inner
    if isinstance(e, ex.Neg):
        return _flip(structural_sign(e.arg))
    if isinstance(e, ex.Add):
        return _sum_sign(structural_sign(e.left), structural_sign(e.right))
    if isinstance(e, ex.Sub):
        return _sum_sign(structural_sign(e.left), _flip(structural_sign(e.right)))
    if isinstance(e, (ex.Mul, ex.Div)):
        a, b = structural_sign(e.left), structural_sign(e.right)
        if a is None or b is None:
            return None
        neg = (a[0] == "<") != (b[0] == "<")
        strict = (a in (">0", "<0")) and (b in (">0", "<0"))
        if isinstance(e, ex.Div):
            # denominator is nonzero on the natural domain
            strict = a in (">0", "<0")
        return ("<" if neg else ">") + ("0" if strict else "=0")
    if isinstance(e, ex.LambertW) and e.branch == -1:
        return "<0"
    return None


def _flip(s: Optional[str]) -> Optional[str]:
    if s is None:
        return None
    return {">0": "<0", "<0": ">0", ">=0": "<=0", "<=0": ">=0"}[s]


def _sum_sign(a: Optional[str], b: Optional[str]) -> Optional[str]:
    if a is None or b is None:
        return None
    if a[0] != b[0]:
        return None
    strict = a in (">0", "<0") or b in (">0", "<0")
    return a[0] + ("0" if strict else "=0")


# ---------------------------------------------------------------------------
# bracket refinement
# ---------------------------------------------------------------------------


def _dyadic_between(t: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    """A short dyadic close to t, strictly inside (lo, hi)."""
    w = hi - lo
    bits = max(8, (w.denominator.bit_length() - w.numerator.bit_length()) + 12)
    cand = Fraction(round(t * (1 << bits)), 1 << bits)
    if lo < cand < hi:
        return cand
    return (lo + hi) / 2


def refine_bracket(probe, lo: Fraction, hi: Fraction, lo_sign: Sign, width: Fraction, max_steps: int = 20000):
    """Shrink a sign-change bracket [lo, hi] of a continuous function.

    ``probe(t)`` returns ``(sign, approx)`` at a rational t: a certified Sign
    and an approximate value (or None) used for regula falsi steps. Bisection
    guarantees progress; the Illinois variant of regula falsi supplies fast
    convergence. Returns the final ``(lo, hi)``; ``lo == hi`` means an exact root.
    """
    f_lo = f_hi = None
    last_side = 0
    stalls = 0
    for _ in range(max_steps):
        w = hi - lo
        if w <= width:
            break
        t = None
        if f_lo is not None and f_hi is not None and f_lo != f_hi and stalls < 3:
            cand = lo - f_lo * w / (f_hi - f_lo)
            if lo + w / 64 < cand < hi - w / 64:
                t = cand
        if t is None:
            t = (lo + hi) / 2
            stalls = 0
        t = _dyadic_between(t, lo, hi)
        s, approx = probe(t)
        if s == Sign.UNKNOWN:
            t = _dyadic_between(lo + w * Fraction(3, 7), lo, hi)
            s, approx = probe(t)
            if s == Sign.UNKNOWN:
                break
        if s == Sign.ZERO:
            return t, t
        if s == lo_sign:
            lo, f_lo = t, approx
            if last_side == -1 and f_hi is not None:
                f_hi /= 2
            last_side = -1
        else:
            hi, f_hi = t, approx
            if last_side == 1 and f_lo is not None:
                f_lo /= 2
            last_side = 1
        stalls = stalls + 1 if (hi - lo) > w / 2 else 0
    return lo, hi
