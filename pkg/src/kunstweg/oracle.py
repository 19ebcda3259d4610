"""Independent high-precision ground truth for the Kunstweg engine.

Everything here is deliberately self-contained: pi and the trigonometric
series are computed from scratch on top of ``decimal``, so the oracle shares
no code path with the fast operator apply or with the power iteration it is
used to judge.

Angles are exact rationals measured in turns (1 turn = 360°).  A sine is
evaluated by exact range reduction on the turn count - period 1, the
half-turn flip sin(x + 180°) = -sin(x), the mirror sin(180° - x) = sin(x),
and the quarter-turn complement - down to a series argument of at most one
eighth of a turn, followed by a truncated Taylor series whose length comes
from the alternating-series remainder bound at |x| <= pi/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Context, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

from .errors import DimensionMismatchError, PrecisionCeilingError
from .operator import (
    DENSE_SIZE_LIMIT,
    GridSpec,
    NumericMode,
    SineVector,
    build_dense,
)

#: Extra working digits carried by every oracle computation before the final
#: rounding back to the requested precision.
GUARD_DIGITS = 10

DEFAULT_DIGIT_CEILING = 200

#: log10 of an upper bound on the reduced series argument (pi/4 < 0.78539817).
_LOG10_ARG_BOUND = math.log10(0.78539817)

_QUARTER = Fraction(1, 4)
_HALF_TURN = Fraction(1, 2)
_EIGHTH = Fraction(1, 8)


@dataclass(frozen=True)
class PrecisionContext:
    """Requested count of significant decimal digits, bounded by a ceiling."""

    digits: int
    ceiling: int = DEFAULT_DIGIT_CEILING

    def __post_init__(self):
        if not isinstance(self.digits, int) or isinstance(self.digits, bool):
            raise PrecisionCeilingError(f"digits must be an int, got {self.digits!r}")
        if self.digits < 2 or self.digits > self.ceiling:
            raise PrecisionCeilingError(
                f"digits must lie in [2, {self.ceiling}], got {self.digits}")


def _round_to(value: Decimal, digits: int) -> Decimal:
    return Context(prec=digits).plus(value)


def _arctan_recip(q: int) -> Decimal:
    """arctan(1/q) for integer q >= 2 at the ambient precision.

    Alternating series sum_k (-1)^k / ((2k+1) q^(2k+1)); terms decrease
    monotonically, so stopping once a term vanishes at working precision
    bounds the remainder by that term.
    """
    qq = q * q
    power = Decimal(1) / q
    total = power
    k = 0
    sign = 1
    while True:
        k += 1
        sign = -sign
        power /= qq
        term = power / (2 * k + 1)
        if not term:
            return total
        total = total + term if sign > 0 else total - term


def _pi_from_arctans(terms: tuple[tuple[int, int], ...], prec: int) -> Decimal:
    """pi from a Machin-like identity pi/4 = sum coeff * arctan(1/q)."""
    with localcontext() as c:
        c.prec = prec + 8
        quarter = sum(coeff * _arctan_recip(q) for coeff, q in terms)
        value = 4 * quarter
    return _round_to(value, prec)


@lru_cache(maxsize=None)
def ref_pi(prec: int) -> Decimal:
    """pi to ``prec`` significant digits (Machin: pi/4 = 4 at(1/5) - at(1/239))."""
    return _pi_from_arctans(((4, 5), (-1, 239)), prec)


def _pi_second_opinion(prec: int) -> Decimal:
    """pi via the independent identity pi/4 = arctan(1/2) + arctan(1/3)."""
    return _pi_from_arctans(((1, 2), (1, 3)), prec)


def reduce_turns(t: Fraction) -> tuple[int, str, Fraction]:
    """Exact range reduction of a rational turn count.

    Returns (sign, kind, r) with r in [0, 1/8] turns such that
    sin(t) = sign * sin(2 pi r) when kind == "sin" and
    sin(t) = sign * cos(2 pi r) when kind == "cos".

    The reduction is purely rational, so arguments related by the mirror
    identity sin(x) = sin(180° - x) collapse to the same triple and thus to
    bit-identical results.
    """
    t = t % 1
    sign = 1
    if t >= _HALF_TURN:
        t -= _HALF_TURN
        sign = -1
    if t > _QUARTER:
        t = _HALF_TURN - t
    if t > _EIGHTH:
        return sign, "cos", _QUARTER - t
    return sign, "sin", t


def _taylor_terms(prec: int, kind: str) -> int:
    """Series length so the first omitted term stays below 10**-prec.

    For |x| <= pi/4 the sin series truncated after K terms has remainder at
    most x^(2K+1)/(2K+1)! (cos: x^(2K)/(2K)!); the smallest adequate K is
    found through float logarithms with one digit of slack.
    """
    k = 1
    while True:
        m = 2 * k + 1 if kind == "sin" else 2 * k
        bound = m * _LOG10_ARG_BOUND - math.lgamma(m + 1) / math.log(10)
        if bound < -(prec + 1):
            return k
        k += 1


def _sin_series(x: Decimal, terms: int) -> Decimal:
    xx = x * x
    term = x
    total = x
    negative = False
    for k in range(1, terms):
        term = term * xx / ((2 * k) * (2 * k + 1))
        negative = not negative
        total = total - term if negative else total + term
    return total


def _cos_series(x: Decimal, terms: int) -> Decimal:
    xx = x * x
    term = Decimal(1)
    total = term
    negative = False
    for k in range(1, terms):
        term = term * xx / ((2 * k - 1) * (2 * k))
        negative = not negative
        total = total - term if negative else total + term
    return total


def sin_turns(t: Fraction, prec: int) -> Decimal:
    """sin of an exact rational turn count, to ``prec`` significant digits."""
    sign, kind, r = reduce_turns(t)
    with localcontext() as c:
        c.prec = prec + 6
        if kind == "sin" and r == 0:
            value = Decimal(0)
        elif kind == "cos" and r == 0:
            value = Decimal(1)
        else:
            x = 2 * ref_pi(c.prec) * r.numerator / r.denominator
            terms = _taylor_terms(c.prec, kind)
            value = _sin_series(x, terms) if kind == "sin" else _cos_series(x, terms)
        if sign < 0:
            value = -value
        if not value:
            value = Decimal(0)  # never hand back a negative zero
    return _round_to(value, prec)


def ref_sin(angle, ctx: PrecisionContext) -> Decimal:
    """Reference sine of ``angle`` (rational, in turns), correct to ctx.digits.

    Computed at guard precision and rounded once; one unit in the last place
    of slack is the contract, not correct rounding.
    """
    t = Fraction(angle)
    raw = sin_turns(t, ctx.digits + GUARD_DIGITS)
    return _round_to(raw, ctx.digits)


def ref_cos(angle, ctx: PrecisionContext) -> Decimal:
    """Reference cosine via the quarter-turn shift cos(x) = sin(x + 90°)."""
    return ref_sin(Fraction(angle) + _QUARTER, ctx)


def lambda_at_precision(spec: GridSpec, prec: int) -> Decimal:
    """lambda = 1 / (4 sin^2(alpha/2)) at ``prec`` working digits, unrounded.

    alpha/2 is the exact turn fraction 1/(8n); the half-angle form avoids the
    leading-digit cancellation of 1 - cos(alpha) at large n.
    """
    half_alpha = Fraction(1, 8 * spec.n)
    with localcontext() as c:
        c.prec = prec
        s = sin_turns(half_alpha, prec)
        return 1 / (4 * s * s)


def eigen_lambda_decimal(spec: GridSpec, digits: int) -> Decimal:
    """Closed-form dominant eigenvalue rounded to ``digits`` digits."""
    if digits < 1:
        raise ValueError(f"digits must be positive, got {digits}")
    value = lambda_at_precision(spec, digits + GUARD_DIGITS)
    return _round_to(value, digits)


def reference_sine_vector(spec: GridSpec, ctx: PrecisionContext) -> SineVector:
    """The vector (sin(alpha), sin(2 alpha), ..., sin((n-1) alpha), 1).

    Entry n is the exact integer 1: n * alpha is a quarter turn by
    construction, so no series evaluation is involved.
    """
    n = spec.n
    values = [ref_sin(spec.angle_turns(j), ctx) for j in range(1, n)]
    values.append(Decimal(1))
    return SineVector(tuple(values), NumericMode.DECIMAL)


@dataclass(frozen=True)
class StarReport:
    """Outcome of checking the n chained difference equations

        lambda (sin(j a) - sin((j-1) a)) = sin(j a) + ... + sin((n-1) a) + 1/2

    (a = alpha; the j = n row degenerates to lambda (1 - cos(a)) = 1/2).
    ``gaps[j-1]`` is the absolute difference of the two sides of row j.
    """

    n: int
    digits: int
    lam: Decimal
    gaps: tuple[Decimal, ...]
    max_gap: Decimal
    tolerance: Decimal
    passed: bool


def verify_star(spec: GridSpec, ctx: PrecisionContext) -> StarReport:
    """Evaluate both sides of every difference equation with oracle sines.

    All arithmetic runs at ctx.digits + guard; the report passes when the
    worst gap is at most 10**(3 - digits) * lambda.
    """
    n = spec.n
    prec = ctx.digits + GUARD_DIGITS
    with localcontext() as c:
        c.prec = prec
        sines = [Decimal(0)]
        sines += [sin_turns(spec.angle_turns(j), prec) for j in range(1, n)]
        sines.append(Decimal(1))
        lam = lambda_at_precision(spec, prec)

        half = Decimal(1) / 2
        gaps: list[Decimal] = [None] * n  # type: ignore[list-item]
        rhs = half  # row n has no sine terms
        for j in range(n, 0, -1):
            lhs = lam * (sines[j] - sines[j - 1])
            gaps[j - 1] = abs(lhs - rhs)
            if j > 1:
                rhs += sines[j - 1]
        max_gap = max(gaps)
        tolerance = Decimal(10) ** (3 - ctx.digits) * lam
        passed = max_gap <= tolerance
    return StarReport(
        n=n,
        digits=ctx.digits,
        lam=_round_to(lam, ctx.digits),
        gaps=tuple(_round_to(g, 6) for g in gaps),
        max_gap=_round_to(max_gap, 6),
        tolerance=_round_to(tolerance, 6),
        passed=passed,
    )


def dense_product(spec: GridSpec, x, ctx: PrecisionContext | None = None) -> SineVector:
    """Literal row-by-row dense product: the O(n^2) oracle for the fast apply.

    Decimal input is evaluated at ctx.digits + guard when a context is given;
    exact input gives exact results.  Size-gated with the dense build.
    """
    vec = x if isinstance(x, SineVector) else SineVector.of(x)
    n = spec.n
    if n > DENSE_SIZE_LIMIT:
        raise ValueError(
            f"dense product is gated to n <= {DENSE_SIZE_LIMIT}, got {n}")
    if len(vec) != n:
        raise DimensionMismatchError(expected=n, actual=len(vec))

    matrix_mode = vec.mode if vec.mode is not None else NumericMode.EXACT
    rows = build_dense(spec, matrix_mode)

    def product() -> tuple:
        out = []
        for row in rows:
            total = row[0] * vec.values[0]
            for i in range(1, n):
                total = total + row[i] * vec.values[i]
            out.append(total)
        return tuple(out)

    if vec.mode is NumericMode.DECIMAL and ctx is not None:
        with localcontext() as c:
            c.prec = ctx.digits + GUARD_DIGITS
            return SineVector(product(), vec.mode)
    return SineVector(product(), vec.mode)
