"""Structured operator behind Bürgi's Kunstweg sine iteration.

For the angle step alpha = 90°/n the Kunstweg matrix M is the n x n matrix
(1-based indices)

    M[j][i] = min(i, j)   for i = 1..n-1,        M[j][n] = j / 2,

whose dominant eigenvector is (sin(alpha), sin(2 alpha), ..., sin((n-1) alpha), 1)
with eigenvalue

    lambda = 1 / (2 (1 - cos(alpha))).

The closed form follows from the last row of the eigen equations,
lambda (1 - sin((n-1) alpha)) = 1/2, because (n-1) alpha = 90° - alpha makes
sin((n-1) alpha) = cos(alpha).

Differencing consecutive rows of the product gives

    (M x)[j] - (M x)[j-1] = x[j] + x[j+1] + ... + x[n-1] + x[n] / 2,

so M x is a suffix sum followed by a prefix sum: Theta(n) scalar additions
instead of the Theta(n^2) dense product.  `apply` implements that route; the
dense realization exists only for verification and is size-gated.

All operations are generic over the scalar: exact rationals (int / Fraction),
binary doubles, or Decimal at a caller-scoped precision.  Formulas in
docstrings are 1-based; storage is 0-based (row 1 is ``dense[0]``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DimensionMismatchError

#: Dense realizations are for testing only; refuse to allocate beyond this.
DENSE_SIZE_LIMIT = 4096

#: Digits used when the double-precision eigenvalue is derived from the
#: decimal evaluation (25 significant digits round correctly to a double).
_FLOAT_VIA_DECIMAL_DIGITS = 25

_HALF = Fraction(1, 2)


class NumericMode(enum.Enum):
    """Scalar families the engine is generic over."""

    EXACT = "exact"      # int / fractions.Fraction, no rounding anywhere
    FLOAT = "float"      # IEEE-754 binary double
    DECIMAL = "decimal"  # decimal.Decimal at the ambient (scoped) precision


def infer_mode(values: Sequence) -> NumericMode | None:
    """Classify a scalar sequence; ``None`` for foreign numeric-like types.

    Decimal and float entries must not be mixed; ints are at home in any
    mode and alone mean exact mode.
    """
    has_decimal = False
    has_float = False
    known = True
    for v in values:
        if isinstance(v, Decimal):
            has_decimal = True
        elif isinstance(v, float):
            has_float = True
        elif not isinstance(v, (int, Fraction)):
            known = False
    if has_decimal and has_float:
        raise TypeError("mixed Decimal and float entries in one vector")
    if not known:
        return None
    if has_decimal:
        return NumericMode.DECIMAL
    if has_float:
        return NumericMode.FLOAT
    return NumericMode.EXACT


@dataclass(frozen=True)
class GridSpec:
    """Problem size n with the exact quarter-angle step alpha = 90°/n.

    The step is kept as the rational fraction 1/(4n) of a full turn, so
    n * alpha == 1/4 turn is an identity of integers, never a float
    comparison.
    """

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    @property
    def alpha_turns(self) -> Fraction:
        """alpha as an exact fraction of a full turn: 1/(4n)."""
        return Fraction(1, 4 * self.n)

    @property
    def alpha_degrees(self) -> Fraction:
        return Fraction(90, self.n)

    @property
    def alpha_radians(self) -> float:
        return math.pi / (2 * self.n)

    def angle_turns(self, j: int) -> Fraction:
        """The j-th grid angle j*alpha, in turns."""
        return Fraction(j, 4 * self.n)


@dataclass(frozen=True)
class SineVector:
    """A length-n scalar vector tagged with its numeric mode.

    Normalized instances (as produced by the iteration) have last entry
    exactly 1; `apply` returns unnormalized images.
    """

    values: tuple
    mode: NumericMode | None

    @classmethod
    def of(cls, values: Sequence) -> "SineVector":
        vals = tuple(values)
        return cls(vals, infer_mode(vals))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator:
        return iter(self.values)

    def __getitem__(self, idx):
        return self.values[idx]


@dataclass(frozen=True)
class KunstwegOperator:
    """The Kunstweg matrix for one grid, represented implicitly."""

    spec: GridSpec

    def apply(self, x) -> SineVector:
        return apply(self, x)

    def dense(self, mode: NumericMode = NumericMode.EXACT) -> list[list]:
        return build_dense(self.spec, mode)


def _as_vector(x) -> SineVector:
    return x if isinstance(x, SineVector) else SineVector.of(x)


def build_dense(spec: GridSpec, mode: NumericMode = NumericMode.EXACT) -> list[list]:
    """Materialize M row by row: min(i, j) in columns 1..n-1, j/2 in column n.

    O(n^2) memory; gated to n <= DENSE_SIZE_LIMIT because it exists only to
    cross-check the implicit fast form.
    """
    n = spec.n
    if n > DENSE_SIZE_LIMIT:
        raise ValueError(
            f"dense realization is gated to n <= {DENSE_SIZE_LIMIT}, got {n}")
    rows: list[list] = []
    for j in range(1, n + 1):
        if mode is NumericMode.EXACT:
            row = [min(i, j) for i in range(1, n)] + [Fraction(j, 2)]
        elif mode is NumericMode.FLOAT:
            row = [float(min(i, j)) for i in range(1, n)] + [j / 2]
        elif mode is NumericMode.DECIMAL:
            row = [Decimal(min(i, j)) for i in range(1, n)] + [Decimal(j) / 2]
        else:
            raise ValueError(f"unsupported mode {mode!r}")
        rows.append(row)
    return rows


def apply(op: KunstwegOperator, x) -> SineVector:
    """Evaluate M x through the row-difference identity in Theta(n) additions.

    Internally works with the doubled matrix 2M, whose entries are all
    integers (2 min(i,j) and j), and halves once at the end; integer input
    therefore stays in integer arithmetic until the final division, and the
    result is exact in exact mode.

        u[j] = 2 (x[j] + ... + x[n-1]) + x[n]          (suffix pass)
        (2 M x)[j] = u[1] + ... + u[j]                 (prefix pass)

    Costs 2(n-1) additions, n-1 doublings and n halvings.
    """
    vec = _as_vector(x)
    n = op.spec.n
    if len(vec) != n:
        raise DimensionMismatchError(expected=n, actual=len(vec))
    v = vec.values

    u = [None] * n
    u[n - 1] = v[n - 1]
    for j in range(n - 2, -1, -1):
        u[j] = u[j + 1] + 2 * v[j]

    acc = u[0]
    out = [acc]
    for j in range(1, n):
        acc = acc + u[j]
        out.append(acc)

    if vec.mode is NumericMode.EXACT:
        halved = tuple(t * _HALF for t in out)
    else:
        halved = tuple(t / 2 for t in out)
    return SineVector(halved, vec.mode)


def eigen_lambda(spec: GridSpec, mode: NumericMode = NumericMode.FLOAT,
                 digits: int | None = None):
    """Dominant eigenvalue lambda = 1 / (2 (1 - cos(alpha))), alpha = 90°/n.

    Evaluated in the cancellation-free half-angle form
    1 / (4 sin^2(alpha / 2)) with the package's own reference sine, never the
    platform's trig:

    * decimal mode: correct to ``digits`` significant digits;
    * float mode: the double rounding of the 25-digit decimal value;
    * exact mode: only n = 1 has a rational eigenvalue (1/2).
    """
    if mode is NumericMode.FLOAT:
        return float(eigen_lambda(spec, NumericMode.DECIMAL,
                                  digits=_FLOAT_VIA_DECIMAL_DIGITS))
    if mode is NumericMode.EXACT:
        if spec.n == 1:
            return Fraction(1, 2)
        raise ValueError(
            "eigen_lambda is irrational for n >= 2; use float or decimal mode")
    if mode is not NumericMode.DECIMAL:
        raise ValueError(f"unsupported mode {mode!r}")
    if digits is None:
        raise ValueError("decimal mode requires an explicit digit count")
    from . import oracle
    return oracle.eigen_lambda_decimal(spec, digits)


def eigen_residual(op: KunstwegOperator, x, digits: int | None = None,
                   lam=None):
    """max_j |(M x)[j] - lambda x[j]| using the fast apply.

    ``lam`` defaults to the closed-form eigenvalue in the vector's own mode;
    decimal vectors need ``digits`` (the comparison runs at digits plus guard
    precision).  Exact mode is only meaningful for n = 1, where lambda is
    rational.
    """
    vec = _as_vector(x)
    n = op.spec.n
    if len(vec) != n:
        raise DimensionMismatchError(expected=n, actual=len(vec))

    if vec.mode is NumericMode.DECIMAL:
        from . import oracle
        if digits is None and lam is None:
            raise ValueError("decimal mode requires digits (or an explicit lam)")
        working = (digits or 28) + oracle.GUARD_DIGITS
        with localcontext() as c:
            c.prec = working
            if lam is None:
                lam = oracle.lambda_at_precision(op.spec, working)
            y = apply(op, vec)
            res = max(abs(yi - lam * xi) for yi, xi in zip(y.values, vec.values))
        return +res

    if vec.mode is NumericMode.EXACT:
        if lam is None:
            lam = eigen_lambda(op.spec, NumericMode.EXACT)
        y = apply(op, vec)
        return max(abs(yi - lam * xi) for yi, xi in zip(y.values, vec.values))

    if lam is None:
        lam = eigen_lambda(op.spec)
    y = apply(op, vec)
    return max(abs(yi - lam * xi) for yi, xi in zip(y.values, vec.values))
