"""Certified Lambert W and inverse-function values."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from . import expr as ex
from .interval import (
    MAX_PRECISION,
    DyadicInterval,
    Sign,
    UnboundedEnclosure,
    eval_interval,
    exp_bounds,
    inv_e_bounds,
    ln_bounds,
    refine_bracket,
    round_down,
    round_up,
    sign_at,
)


class OutOfBranchDomain(ValueError):
    pass


class TargetOutsideRange(ValueError):
    pass


# ---------------------------------------------------------------------------
# Lambert W
# ---------------------------------------------------------------------------


def _g_sign(w: Fraction, t: Fraction, prec: int) -> tuple[Sign, float]:
    """Certified sign of w*e^w - t."""
    if w == 0:
        return (Sign.ZERO if t == 0 else Sign.NEGATIVE if t > 0 else Sign.POSITIVE), float(-t)
    p = prec
    while p <= 4 * MAX_PRECISION:
        lo, hi = exp_bounds(w, p)
        a, b = (w * lo, w * hi) if w > 0 else (w * hi, w * lo)
        a, b = a - t, b - t
        if a > 0:
            return Sign.POSITIVE, float((a + b) / 2)
        if b < 0:
            return Sign.NEGATIVE, float((a + b) / 2)
        p *= 2
    return Sign.UNKNOWN, 0.0


def _side_of_branch_point(t: Fraction, prec: int) -> int:
    """Sign of t + 1/e; 0 when undecided at the precision budget."""
    p = max(prec, 64)
    while p <= 4 * MAX_PRECISION:
        lo, hi = inv_e_bounds(p)
        if t + lo > 0:
            return 1
        if t + hi < 0:
            return -1
        p *= 2
    return 0


def _float_guess(branch: int, t: Fraction) -> float:
    if t == 0:
        return 0.0
    # distance to the branch point drives the series guess
    p2 = 2.0 * (math.e * float(t) + 1.0)
    if p2 < 0.25:
        p = math.sqrt(max(p2, 0.0))
        if branch == -1:
            p = -p
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    if branch == 0:
        if t < 3:
            w = math.log1p(float(t)) if t > -0.3 else -0.5
        else:
            lt = math.log(t.numerator) - math.log(t.denominator)
            w = lt - math.log(lt)
    else:
        lt = math.log(-t.numerator) - math.log(t.denominator)
        w = lt - math.log(-lt)
    tf = float(t) if abs(t) < 1e300 else None
    if tf is None:
        return w
    for _ in range(60):
        try:
            ew = math.exp(w)
        except OverflowError:
            break
        f = w * ew - tf
        d = ew * (w + 1.0)
        if d == 0.0:
            break
        denom = d - (w + 2.0) * f / (2.0 * (w + 1.0))
        step = f / denom if denom != 0.0 else f / d
        w -= step
        if abs(step) <= 1e-15 * (1.0 + abs(w)):
            break
    return w


def _newton(t: Fraction, w: Fraction, target_bits: int) -> Fraction:
    bits = 50
    while bits < target_bits:
        bits = min(2 * bits, target_bits)
        lo, hi = exp_bounds(w, bits + 16)
        ew = (lo + hi) / 2
        den = ew * (w + 1)
        if den == 0:
            break
        w = w - (w * ew - t) / den
        w = Fraction(round(w * (1 << (bits + 8))), 1 << (bits + 8))
    return w


def _upper_bound_w0(t: Fraction) -> Fraction:
    if t <= 3:
        return Fraction(1)
    _, hi = ln_bounds(t, 32)
    return Fraction(math.ceil(hi))


def _lower_bound_wm1(t: Fraction) -> Fraction:
    # W_{-1}(t) >= -1 - sqrt(2u) - u with u = -1 - ln(-t)
    lo, _ = ln_bounds(-t, 32)
    u = -1 - lo
    return Fraction(math.floor(-1 - math.sqrt(2 * float(max(u, 0))) - float(u) - 1))


def lambert_w_point(branch: int, t: Fraction, prec: int) -> tuple[Fraction, Fraction]:
    """Rational bracket [lo, hi] of W_branch(t), width at most 2^-prec.

    ``t`` must already be known to lie in the branch domain (up to the
    uncertain band around -1/e, which is clipped to the branch point).
    """
    t = Fraction(t)
    if t == 0 and branch == 0:
        return Fraction(0), Fraction(0)
    side = _side_of_branch_point(t, prec + 64)
    if side <= 0:
        # at (or indistinguishably close to) -1/e: W is -1 up to sqrt of the gap
        p = max(prec + 64, 256)
        lo_e, hi_e = inv_e_bounds(p)
        gap = max(abs(t + lo_e), abs(t + hi_e))
        r = round_up(Fraction(math.isqrt(math.ceil(6 * gap * (1 << (2 * p)))) + 1, 1 << p), p)
        return (Fraction(-1), -1 + r) if branch == 0 else (-1 - 2 * r, Fraction(-1))
    width = Fraction(1, 1 << prec)
    w = Fraction(_float_guess(branch, t))
    w = _newton(t, w, prec + 24)
    inc = branch == 0
    want_lo = Sign.NEGATIVE if inc else Sign.POSITIVE
    delta = width / 4
    lo, hi = w - delta, w + delta
    if inc:
        lo = max(lo, Fraction(-1))
    else:
        hi = min(hi, Fraction(-1))
    s_lo, _ = _g_sign(lo, t, prec + 32)
    s_hi, _ = _g_sign(hi, t, prec + 32)
    if s_lo == Sign.ZERO:
        return lo, lo
    if s_hi == Sign.ZERO:
        return hi, hi
    if s_lo == want_lo and s_hi not in (want_lo, Sign.UNKNOWN):
        return lo, hi
    # Newton was not good enough (near the branch point): certified bisection
    if inc:
        lo, hi = Fraction(-1), _upper_bound_w0(t)
    else:
        lo, hi = _lower_bound_wm1(t), Fraction(-1)
        while _g_sign(lo, t, prec + 32)[0] != Sign.POSITIVE:
            lo *= 2
    lo, hi = refine_bracket(lambda v: _g_sign(v, t, prec + 32), lo, hi, want_lo, width)
    return lo, hi


def lambert_w(branch: int, z: DyadicInterval, precision: Optional[int] = None) -> DyadicInterval:
    """Enclosure of W_branch over z intersected with the branch domain."""
    if branch not in (0, -1):
        raise ValueError("branch must be 0 or -1")
    prec = precision or z.prec
    inv_lo, inv_hi = inv_e_bounds(prec + 8)
    if z.hi < -inv_hi:
        raise OutOfBranchDomain(f"W_{branch} undefined below -1/e")
    if branch == -1 and z.lo >= 0:
        raise OutOfBranchDomain("W_-1 is defined only for -1/e <= z < 0")
    if branch == -1 and z.hi >= 0:
        raise UnboundedEnclosure("W_-1 diverges as z -> 0-")
    bits = prec + 8 + max(0, z.hi.numerator.bit_length() - z.hi.denominator.bit_length())
    a_lo, a_hi = lambert_w_point(branch, z.lo, bits)
    if z.is_point():
        b_lo, b_hi = a_lo, a_hi
    else:
        b_lo, b_hi = lambert_w_point(branch, z.hi, bits)
    if branch == 0:
        return DyadicInterval(a_lo, b_hi, prec + 16)
    return DyadicInterval(b_lo, a_hi, prec + 16)


# ---------------------------------------------------------------------------
# inverse-function values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InverseFunctionValue:
    """The unique t in ``branch_domain`` with ``function(t) = target``.

    ``direction`` is +1 (strictly increasing) or -1 (strictly decreasing) on
    the branch domain; it is certified by the caller (solver.prove_monotone)
    or, when omitted, certified here.
    """

    function: ex.Expr
    branch_domain: ex.Interval
    target: Union[Fraction, ex.Expr]
    direction: int = 0
    seed: Optional[tuple[Fraction, Fraction]] = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.target, ex.Expr):
            object.__setattr__(self, "target", Fraction(self.target))
        if self.direction == 0:
            from .solver import Monotonicity, prove_monotone

            m = prove_monotone(self.function, ex.Domain((self.branch_domain,)))
            if m == Monotonicity.UNKNOWN:
                raise ValueError("function is not certified monotone on the branch domain")
            object.__setattr__(self, "direction", 1 if m == Monotonicity.INCREASING else -1)

    @property
    def target_expr(self) -> ex.Expr:
        return self.target if isinstance(self.target, ex.Expr) else ex.RationalLit(self.target)

    def residual(self) -> ex.Expr:
        return ex.Sub(self.function, self.target_expr)

    def __str__(self) -> str:
        return f"inverse of ({ex.to_text(self.function)}) on {self.branch_domain} at {ex.to_text(self.target_expr)}"


_INV_CACHE: dict = {}


def _probe_for(v: InverseFunctionValue):
    g = v.residual()
    flip = v.direction < 0

    def probe(t: Fraction):
        s = sign_at(g, t)
        if flip and s in (Sign.POSITIVE, Sign.NEGATIVE):
            s = Sign.NEGATIVE if s == Sign.POSITIVE else Sign.POSITIVE
        # approximate residual for the secant step
        v_exact = ex.try_exact(g, t)
        if v_exact is not None:
            approx = float(v_exact)
        else:
            try:
                approx = float(eval_interval(g, DyadicInterval(t, t, 64), 64).mid)
            except (ArithmeticError, ValueError):
                approx = None
        if approx is not None and flip:
            approx = -approx
        return s, approx

    return probe


def _bracket(v: InverseFunctionValue, probe) -> tuple[Fraction, Fraction]:
    iv = v.branch_domain
    if v.seed is not None:
        return v.seed
    lo, hi = iv.lo, iv.hi
    if lo is not None and hi is not None:
        base = (lo + hi) / 2
    elif lo is not None:
        base = lo + 1
    elif hi is not None:
        base = hi - 1
    else:
        base = Fraction(0)
    s, _ = probe(base)
    if s == Sign.ZERO:
        return base, base
    if s == Sign.UNKNOWN:
        raise TargetOutsideRange("cannot certify the sign at the starting point")
    # the root lies left of base when the (orientation-corrected) residual is positive
    go_left = s == Sign.POSITIVE
    end, closed = (lo, iv.lo_closed) if go_left else (hi, iv.hi_closed)
    want = Sign.NEGATIVE if go_left else Sign.POSITIVE
    if end is not None and closed:
        se, _ = probe(end)
        if se == Sign.ZERO:
            return end, end
        if se == want:
            return (end, base) if go_left else (base, end)
        raise TargetOutsideRange("target outside the range of the branch")
    for k in range(1, 400):
        if end is None:
            t = base - (1 << k) if go_left else base + (1 << k)
        else:
            t = end + (base - end) / (1 << k)
        se, _ = probe(t)
        if se == Sign.ZERO:
            return t, t
        if se == want:
            return (t, base) if go_left else (base, t)
    raise TargetOutsideRange("no sign change found inside the branch domain")


def inverse_bracket(v: InverseFunctionValue, width: Fraction) -> tuple[Fraction, Fraction]:
    """Rational bracket of the inverse value, width at most ``width``."""
    probe = _probe_for(v)
    cached = _INV_CACHE.get(v)
    if cached is None:
        cached = _bracket(v, probe)
    lo, hi = cached
    if hi - lo > width:
        lo, hi = refine_bracket(probe, lo, hi, Sign.NEGATIVE, width)
    _INV_CACHE[v] = (lo, hi)
    return lo, hi


def inverse_value(v: InverseFunctionValue, precision: int = 64) -> DyadicInterval:
    lo, hi = inverse_bracket(v, Fraction(1, 1 << precision))
    return DyadicInterval(lo, hi, precision + 16)
