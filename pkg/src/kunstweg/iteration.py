"""Power iteration driving the Kunstweg operator to its sine fixed point.

Each step applies the operator and renormalizes by the last component, so
the normalization factor itself estimates the dominant eigenvalue (the
geometric picture: lambda = R / (2 l), circumradius over twice the polygon
side).  Iterates therefore always carry last entry 1 and converge to
(sin(alpha), sin(2 alpha), ..., 1).
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

from .errors import ConvergenceError, NumericOverflowError, ZeroVectorError
from .operator import (
    GridSpec,
    KunstwegOperator,
    NumericMode,
    SineVector,
    apply,
    eigen_lambda,
    eigen_residual,
)
from .oracle import GUARD_DIGITS, PrecisionContext

START_PRESETS = ("ones", "ramp", "last-only")

#: Rational bit-length grows with every exact step; exact mode is an oracle,
#: not a production path, so its step count is capped.
EXACT_STEP_CAP = 64


@dataclass(frozen=True)
class IterationConfig:
    """Everything one run needs: grid, start, stop rule and numeric mode.

    ``start`` is a preset name ("ones", "ramp", "last-only") or an explicit
    nonnegative vector with at least one positive entry.  The stopping rule
    is the max-norm distance of successive normalized iterates falling to
    ``tolerance`` (cheap and monotone near the fixed point; the eigen
    residual is reported in the trace as a diagnostic, not used to stop).
    """

    spec: GridSpec
    start: object = "ones"
    tolerance: object = 1e-12
    max_steps: int = 1000
    mode: NumericMode = NumericMode.FLOAT
    digits: int | None = None
    exact_step_cap: int = EXACT_STEP_CAP

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if not isinstance(self.tolerance, (int, float, Fraction, Decimal)) \
                or not self.tolerance > 0:
            raise ValueError(f"tolerance must be a positive number, got {self.tolerance!r}")
        if self.mode is NumericMode.DECIMAL and self.digits is None:
            raise ValueError("decimal mode requires a digit count")
        if isinstance(self.start, str):
            if self.start not in START_PRESETS:
                raise ValueError(
                    f"unknown start preset {self.start!r}; expected one of {START_PRESETS}")
        else:
            values = tuple(self.start)
            if len(values) != self.spec.n:
                raise ValueError(
                    f"start vector has length {len(values)}, expected {self.spec.n}")
            if any(v < 0 for v in values):
                raise ValueError("start entries must be nonnegative")
            if not any(v > 0 for v in values):
                raise ValueError("start vector must have a positive entry")


@dataclass
class IterationTrace:
    """Per-step diagnostics of one run.

    ``lambda_estimates[k-1]`` is the pre-normalization last component of step
    k; ``deltas[k-1]`` the max-norm distance between the normalized iterates
    of steps k and k-1 (None when the start could not be normalized, i.e.
    its last entry was zero).  Deltas are not promised to be monotone; only
    the final convergence is.
    """

    lambda_estimates: list = field(default_factory=list)
    deltas: list = field(default_factory=list)
    steps: int = 0
    converged: bool = False
    reason: str = ""
    final_residual: object = None


def _to_mode(value, mode: NumericMode):
    if mode is NumericMode.EXACT:
        return value if isinstance(value, Fraction) else Fraction(value)
    if mode is NumericMode.FLOAT:
        return float(value)
    if isinstance(value, Decimal):
        return value
    if isinstance(value, Fraction):
        return Decimal(value.numerator) / Decimal(value.denominator)
    return Decimal(value)


def _start_values(cfg: IterationConfig) -> list:
    n = cfg.spec.n
    if isinstance(cfg.start, str):
        if cfg.start == "ones":
            raw = [1] * n
        elif cfg.start == "ramp":
            raw = list(range(1, n + 1))
        else:  # "last-only"
            raw = [0] * (n - 1) + [1]
    else:
        raw = list(cfg.start)
    return [_to_mode(v, cfg.mode) for v in raw]


def _tolerance_in_mode(cfg: IterationConfig):
    return _to_mode(cfg.tolerance, cfg.mode)


def _check_finite(values, mode: NumericMode):
    if mode is NumericMode.FLOAT:
        if not all(math.isfinite(v) for v in values):
            raise NumericOverflowError("non-finite value during float iteration")
    elif mode is NumericMode.DECIMAL:
        if not all(v.is_finite() for v in values):
            raise NumericOverflowError("non-finite value during decimal iteration")


def _run(cfg: IterationConfig) -> tuple[SineVector, IterationTrace]:
    mode = cfg.mode
    op = KunstwegOperator(cfg.spec)
    tol = _tolerance_in_mode(cfg)

    x = _start_values(cfg)
    if x[-1] > 0:
        last = x[-1]
        x = [v / last for v in x]
        prev = x
    else:
        prev = None

    max_steps = cfg.max_steps
    if mode is NumericMode.EXACT:
        max_steps = min(max_steps, cfg.exact_step_cap)

    trace = IterationTrace()
    try:
        for step in range(1, max_steps + 1):
            y = apply(op, SineVector(tuple(x), mode)).values
            _check_finite(y, mode)
            lam = y[-1]
            if lam <= 0:
                raise ZeroVectorError(
                    "operator application produced a non-positive last component")
            x = [v / lam for v in y]
            trace.lambda_estimates.append(lam)
            delta = max(abs(a - b) for a, b in zip(x, prev)) if prev is not None else None
            trace.deltas.append(delta)
            trace.steps = step
            prev = x
            if delta is not None and delta <= tol:
                trace.converged = True
                trace.reason = "tolerance"
                break
        else:
            trace.reason = "max_steps"
    except decimal.Overflow as exc:
        raise NumericOverflowError("decimal overflow during iteration") from exc

    result = SineVector(tuple(x), mode)
    trace.final_residual = _final_residual(op, result, cfg)
    return result, trace


def _final_residual(op: KunstwegOperator, vec: SineVector, cfg: IterationConfig):
    if cfg.mode is NumericMode.DECIMAL:
        return eigen_residual(op, vec, digits=cfg.digits)
    if cfg.mode is NumericMode.EXACT:
        # lambda is irrational for n >= 2: report the diagnostic in doubles.
        as_float = SineVector(tuple(float(v) for v in vec.values), NumericMode.FLOAT)
        return eigen_residual(op, as_float)
    return eigen_residual(op, vec)


def iterate(cfg: IterationConfig) -> tuple[SineVector, IterationTrace]:
    """Run the normalized power iteration described by ``cfg``.

    Returns the last normalized iterate (last entry exactly 1) and its
    trace; whether the tolerance was met is ``trace.converged`` with the
    stopping cause in ``trace.reason``.
    """
    if cfg.mode is NumericMode.DECIMAL:
        with localcontext() as c:
            c.prec = cfg.digits + GUARD_DIGITS
            return _run(cfg)
    return _run(cfg)


def sine_table(spec: GridSpec, digits: int,
               max_steps: int = 1000) -> list[tuple[int, float, Decimal]]:
    """Rows (j, degrees, sine of j*alpha) accurate to ``digits`` digits.

    Runs the iteration in decimal mode at tolerance 10**-(digits+2) and
    rounds every entry to ``digits`` significant digits; the last row is
    exactly 1.  Raises ConvergenceError when max_steps is hit first and
    PrecisionCeilingError for digit counts outside the configured range.
    """
    ctx = PrecisionContext(digits)
    cfg = IterationConfig(
        spec,
        start="ones",
        tolerance=Decimal(10) ** -(digits + 2),
        max_steps=max_steps,
        mode=NumericMode.DECIMAL,
        digits=digits + 2,
    )
    vec, trace = iterate(cfg)
    if not trace.converged:
        raise ConvergenceError(
            f"no convergence to 1e-{digits + 2} within {max_steps} steps (n={spec.n})")
    quantizer = decimal.Context(prec=ctx.digits)
    rows = []
    for j in range(1, spec.n + 1):
        degrees = float(spec.alpha_degrees * j)
        rows.append((j, degrees, quantizer.plus(vec.values[j - 1])))
    return rows


def lambda_estimates(trace: IterationTrace) -> tuple:
    """The per-step normalization factors (dominant-eigenvalue estimates)."""
    if not trace.lambda_estimates:
        raise ValueError("trace is empty")
    return tuple(trace.lambda_estimates)
