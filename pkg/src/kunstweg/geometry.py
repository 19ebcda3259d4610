"""Chained regular 4n-gon construction certifying the sine equations.

n regular 4n-gons are laid edge to edge, each rotated one angle step alpha =
90°/n further, so their joint points P_0 ... P_n sit on a circle of radius R
about the common center C (the origin).  Walking half a circumference of
polygon j from P_{j-1} - the 2n sides with direction angles j alpha,
(j+1) alpha, ..., (j+2n-1) alpha - raises the y-coordinate by

    l sin(j a) + l sin((j+1) a) + ... + l sin((j+2n-1) a)
      = 2 l (sin(j a) + ... + sin((n-1) a)) + l        (j < n; just l at j = n)

using sin(90°) = 1, sin(180°) = 0 and sin(x) = sin(180° - x).  Since the
same rise is R sin(j a) - R sin((j-1) a) in coordinates, the chain is a
purely geometric witness of the operator's eigen equations with
lambda = R / (2 l), i.e. R = 2 l lambda.

The default numeric mode is double precision with a scale-aware tolerance;
for n in {1, 2, 3, 4, 6} a symbolic mode (sympy) certifies the same
identities with zero tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ChainValidationError
from .operator import GridSpec, NumericMode, eigen_lambda

#: Grid sizes whose sines are constructible radicals that sympy simplifies
#: reliably; symbolic chains are gated to these.
SYMBOLIC_SIZES = (1, 2, 3, 4, 6)

#: Default tolerance, as a fraction of R, for double-precision chains.
TAU_RELATIVE = 1e-9

Point = tuple  # (x, y)


@dataclass(frozen=True)
class PolygonChain:
    """The assembled figure: points, per-polygon half-circumference paths.

    ``paths[j-1]`` holds the 2n side vectors (each of length ``side``)
    leading from ``points[j-1]`` to ``points[j]``; vector k of that path has
    direction angle (j+k) alpha.  ``tau`` is the absolute tolerance all
    geometric identities were validated against at build time.
    """

    spec: GridSpec
    side: object
    radius: object
    center: Point
    points: tuple
    paths: tuple
    tau: object
    mode: str = "float"

    @property
    def n(self) -> int:
        return self.spec.n


@dataclass(frozen=True)
class StarCertificate:
    """One per-index comparison of coordinates against the folded sine sum."""

    j: int
    geometric: object  # P_j.y - P_{j-1}.y, pure coordinates
    algebraic: object  # folded path sum
    gap: object
    passed: bool


@dataclass(frozen=True)
class SvgOptions:
    """Rendering switches for `render_svg`."""

    width: int = 720
    show_path_vectors: bool = False
    show_cancellations: bool = False


def _symbolic_modules():
    try:
        import sympy
    except ImportError as exc:  # pragma: no cover - environment-dependent
        raise ImportError(
            "symbolic chains need sympy; install the 'symbolic' extra") from exc
    return sympy


def build_chain(spec: GridSpec, side=1.0, mode: str = "float",
                tau=None) -> PolygonChain:
    """Construct the chain with P_0 = (R, 0) and validate its invariants.

    R is 2 * side * lambda.  The anchoring of P_0 on the positive x-axis is
    a choice (only the center is forced); it makes the polar angle of P_j
    exactly j alpha.  Raises ChainValidationError when any point strays from
    the circle, or P_n from the y-axis, by more than ``tau`` (default
    1e-9 * R in float mode, exactly 0 in symbolic mode).
    """
    if mode == "float":
        return _build_float(spec, float(side), tau)
    if mode == "symbolic":
        return _build_symbolic(spec, side, tau)
    raise ValueError(f"unknown chain mode {mode!r}")


def _build_float(spec: GridSpec, side: float, tau) -> PolygonChain:
    if not side > 0:
        raise ValueError(f"side length must be positive, got {side}")
    n = spec.n
    alpha = spec.alpha_radians
    radius = 2 * side * eigen_lambda(spec)
    tau = TAU_RELATIVE * radius if tau is None else float(tau)

    paths = []
    points = [(radius, 0.0)]
    for j in range(1, n + 1):
        vectors = tuple(
            (side * math.cos((j + k) * alpha), side * math.sin((j + k) * alpha))
            for k in range(2 * n)
        )
        paths.append(vectors)
        px, py = points[-1]
        points.append((px + math.fsum(v[0] for v in vectors),
                       py + math.fsum(v[1] for v in vectors)))

    chain = PolygonChain(spec, side, radius, (0.0, 0.0), tuple(points),
                         tuple(paths), tau, "float")
    _validate_float(chain)
    return chain


def _validate_float(chain: PolygonChain) -> None:
    radius = chain.radius
    worst_j, worst_dev = None, 0.0
    for j, (px, py) in enumerate(chain.points):
        dev = abs(math.hypot(px, py) - radius)
        if dev > worst_dev:
            worst_j, worst_dev = j, dev
    axis_dev = abs(chain.points[-1][0])
    if axis_dev > worst_dev:
        worst_j, worst_dev = chain.n, axis_dev
    if worst_dev > chain.tau:
        raise ChainValidationError(
            f"chain invariant violated at P_{worst_j}: deviation {worst_dev:.3e} "
            f"exceeds tau {chain.tau:.3e}",
            worst_index=worst_j, deviation=worst_dev)


def _build_symbolic(spec: GridSpec, side, tau) -> PolygonChain:
    sp = _symbolic_modules()
    n = spec.n
    if n not in SYMBOLIC_SIZES:
        raise ValueError(
            f"symbolic chains are supported for n in {SYMBOLIC_SIZES}, got {n}")
    if isinstance(side, float):
        raise ValueError("symbolic mode expects an exact side length (int or Fraction)")
    length = sp.Rational(side)
    if not length > 0:
        raise ValueError(f"side length must be positive, got {side}")
    alpha = sp.pi / (2 * n)
    lam = 1 / (2 * (1 - sp.cos(alpha)))
    radius = sp.simplify(2 * length * lam)

    paths = []
    points = [(radius, sp.Integer(0))]
    for j in range(1, n + 1):
        vectors = tuple(
            (length * sp.cos((j + k) * alpha), length * sp.sin((j + k) * alpha))
            for k in range(2 * n)
        )
        paths.append(vectors)
        px, py = points[-1]
        points.append((sp.simplify(px + sum(v[0] for v in vectors)),
                       sp.simplify(py + sum(v[1] for v in vectors))))

    chain = PolygonChain(spec, length, radius, (sp.Integer(0), sp.Integer(0)),
                         tuple(points), tuple(paths), sp.Integer(0), "symbolic")
    for j, (px, py) in enumerate(chain.points):
        if sp.simplify(px * px + py * py - radius * radius) != 0:
            raise ChainValidationError(
                f"symbolic circle identity failed at P_{j}", worst_index=j)
    if sp.simplify(chain.points[-1][0]) != 0:
        raise ChainValidationError("symbolic P_n is off the y-axis", worst_index=n)
    return chain


def path_y_displacement(spec: GridSpec, j: int, side: float = 1.0) -> float:
    """Direct 2n-term sum of the vertical components of path j (no folding)."""
    n = spec.n
    if not 1 <= j <= n:
        raise IndexError(f"path index must lie in 1..{n}, got {j}")
    alpha = spec.alpha_radians
    return math.fsum(side * math.sin((j + k) * alpha) for k in range(2 * n))


def folded_path_sum(spec: GridSpec, j: int, side=1.0):
    """The folded closed form of the same rise.

    2 * side * (sin(j a) + ... + sin((n-1) a)) + side for j < n; at j = n the
    input ``side`` is returned unchanged, so the value is exact whenever the
    scalar is.
    """
    n = spec.n
    if not 1 <= j <= n:
        raise IndexError(f"path index must lie in 1..{n}, got {j}")
    if j == n:
        return side
    alpha = spec.alpha_radians
    tail = math.fsum(math.sin(i * alpha) for i in range(j, n))
    return 2 * side * tail + side


def certify_star(chain: PolygonChain) -> list[StarCertificate]:
    """Compare each coordinate rise P_j.y - P_{j-1}.y with the folded sum.

    Certificates carry pass/fail rather than raising; a chain built by
    `build_chain` is expected to pass every one within ``chain.tau``.
    """
    if chain.mode == "symbolic":
        return _certify_symbolic(chain)
    certificates = []
    for j in range(1, chain.n + 1):
        geometric = chain.points[j][1] - chain.points[j - 1][1]
        algebraic = folded_path_sum(chain.spec, j, chain.side)
        gap = abs(geometric - algebraic)
        certificates.append(StarCertificate(j, geometric, algebraic, gap,
                                            gap <= chain.tau))
    return certificates


def _certify_symbolic(chain: PolygonChain) -> list[StarCertificate]:
    sp = _symbolic_modules()
    n = chain.n
    alpha = sp.pi / (2 * n)
    certificates = []
    for j in range(1, n + 1):
        geometric = chain.points[j][1] - chain.points[j - 1][1]
        if j == n:
            algebraic = chain.side
        else:
            algebraic = 2 * chain.side * sum(sp.sin(i * alpha)
                                             for i in range(j, n)) + chain.side
        gap = sp.simplify(geometric - algebraic)
        certificates.append(StarCertificate(j, sp.simplify(geometric),
                                            sp.simplify(algebraic), gap, gap == 0))
    return certificates


def polygon_outline(chain: PolygonChain, j: int) -> list[Point]:
    """All 4n vertices of polygon j, starting at P_{j-1}.

    The half-circumference path supplies the first 2n sides; continuing
    through the remaining direction angles closes the polygon (the full set
    of 4n unit directions sums to zero).  One side is always parallel to the
    x-axis.
    """
    n = chain.n
    if not 1 <= j <= n:
        raise IndexError(f"polygon index must lie in 1..{n}, got {j}")
    if chain.mode == "symbolic":
        x, y = (float(chain.points[j - 1][0]), float(chain.points[j - 1][1]))
        side = float(chain.side)
    else:
        x, y = chain.points[j - 1]
        side = chain.side
    alpha = chain.spec.alpha_radians
    vertices = [(x, y)]
    for k in range(4 * n - 1):
        x += side * math.cos((j + k) * alpha)
        y += side * math.sin((j + k) * alpha)
        vertices.append((x, y))
    return vertices


def cancelling_indices(spec: GridSpec, j: int) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...]]:
    """Which vectors of path j drop out of the folded sum.

    Vector k has direction angle (j+k) alpha.  Its sine vanishes iff
    j+k == 0 (mod 2n); two sines cancel iff the angle multiples p, q satisfy
    p + q == 0 (mod 4n) or p - q == 2n (mod 4n).  Returns (horizontal ks,
    greedily matched cancelling pairs); both are exact integer tests.
    """
    n = spec.n
    if not 1 <= j <= n:
        raise IndexError(f"path index must lie in 1..{n}, got {j}")
    two_n, four_n = 2 * n, 4 * n
    horizontals = tuple(k for k in range(two_n) if (j + k) % two_n == 0)
    unmatched = [k for k in range(two_n) if (j + k) % two_n != 0]
    pairs = []
    while unmatched:
        k1 = unmatched.pop(0)
        p = j + k1
        partner = None
        for k2 in unmatched:
            q = j + k2
            if (p + q) % four_n == 0 or (p - q) % four_n == two_n:
                partner = k2
                break
        if partner is not None:
            unmatched.remove(partner)
            pairs.append((k1, partner))
    return horizontals, tuple(pairs)


def _fmt(value: float) -> str:
    return format(value, ".8g")


#: Muted outline colors, one per polygon, cycled deterministically.
_POLYGON_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b",
                   "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#ff7f0e")


def render_svg(chain: PolygonChain, options: SvgOptions | None = None) -> str:
    """An SVG 1.1 document of the figure: polygons, points, circle and rays.

    The viewBox contains the circle with a 5% margin and the y-axis points
    up; stroke widths are relative to R.  Options add the per-path side
    vectors as arrows and dash the vectors whose vertical components cancel.
    """
    opt = options or SvgOptions()
    n = chain.n
    radius = float(chain.radius)
    half = 1.05 * radius
    stroke = radius / 300.0

    parts = ['<?xml version="1.0" encoding="UTF-8"?>']
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{opt.width}" height="{opt.width}" '
        f'viewBox="{_fmt(-half)} {_fmt(-half)} {_fmt(2 * half)} {_fmt(2 * half)}">'
    )
    if opt.show_path_vectors:
        parts.append(
            '<defs><marker id="arrow" viewBox="0 0 10 10" refX="8" refY="5" '
            'markerWidth="5" markerHeight="5" orient="auto">'
            '<path d="M 0 0 L 10 5 L 0 10 z" fill="#444444"/></marker></defs>'
        )
    parts.append('<g transform="scale(1,-1)" fill="none" stroke-linejoin="round">')

    parts.append(
        f'<circle class="ring" cx="0" cy="0" r="{_fmt(radius)}" '
        f'stroke="#888888" stroke-width="{_fmt(stroke)}"/>'
    )

    points = [(float(p[0]), float(p[1])) for p in chain.points]
    for px, py in points:
        parts.append(
            f'<line class="ray" x1="0" y1="0" x2="{_fmt(px)}" y2="{_fmt(py)}" '
            f'stroke="#bbbbbb" stroke-width="{_fmt(stroke / 2)}"/>'
        )

    for j in range(1, n + 1):
        color = _POLYGON_COLORS[(j - 1) % len(_POLYGON_COLORS)]
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in polygon_outline(chain, j))
        parts.append(
            f'<polygon class="gon" points="{pts}" '
            f'stroke="{color}" stroke-width="{_fmt(stroke)}"/>'
        )

    if opt.show_path_vectors:
        for j in range(1, n + 1):
            dashed: set[int] = set()
            if opt.show_cancellations:
                horizontals, pairs = cancelling_indices(chain.spec, j)
                dashed.update(horizontals)
                for k1, k2 in pairs:
                    dashed.update((k1, k2))
            x, y = points[j - 1]
            for k, vec in enumerate(chain.paths[j - 1]):
                dx, dy = float(vec[0]), float(vec[1])
                dash = f' stroke-dasharray="{_fmt(4 * stroke)}"' if k in dashed else ""
                parts.append(
                    f'<line class="vec" x1="{_fmt(x)}" y1="{_fmt(y)}" '
                    f'x2="{_fmt(x + dx)}" y2="{_fmt(y + dy)}" stroke="#444444" '
                    f'stroke-width="{_fmt(stroke)}" marker-end="url(#arrow)"{dash}/>'
                )
                x += dx
                y += dy

    for px, py in points:
        parts.append(
            f'<circle class="point" cx="{_fmt(px)}" cy="{_fmt(py)}" '
            f'r="{_fmt(radius / 70)}" fill="#222222" stroke="none"/>'
        )

    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
