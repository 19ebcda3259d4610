"""Bürgi's Kunstweg: sine tables from a structured-matrix power iteration.

The package builds the min(i, j)-structured operator whose dominant
eigenvector lists the sines of j * (90°/n), applies it in O(n) through a
suffix/prefix-sum identity, iterates it to convergence, and certifies the
defining equations twice over: algebraically against a self-contained
high-precision decimal oracle, and geometrically by reconstructing the
chained regular 4n-gon figure (rendered to SVG on request).
"""

from .errors import (
    ChainValidationError,
    ConvergenceError,
    DimensionMismatchError,
    KunstwegError,
    NumericOverflowError,
    PrecisionCeilingError,
    ZeroVectorError,
)
from .geometry import (
    PolygonChain,
    StarCertificate,
    SvgOptions,
    build_chain,
    cancelling_indices,
    certify_star,
    folded_path_sum,
    path_y_displacement,
    polygon_outline,
    render_svg,
)
from .iteration import (
    EXACT_STEP_CAP,
    START_PRESETS,
    IterationConfig,
    IterationTrace,
    iterate,
    lambda_estimates,
    sine_table,
)
from .operator import (
    DENSE_SIZE_LIMIT,
    GridSpec,
    KunstwegOperator,
    NumericMode,
    SineVector,
    apply,
    build_dense,
    eigen_lambda,
    eigen_residual,
)
from .oracle import (
    GUARD_DIGITS,
    PrecisionContext,
    StarReport,
    dense_product,
    ref_cos,
    ref_pi,
    ref_sin,
    reference_sine_vector,
    verify_star,
)

__version__ = "0.1.0"

__all__ = [
    "ChainValidationError",
    "ConvergenceError",
    "DimensionMismatchError",
    "KunstwegError",
    "NumericOverflowError",
    "PrecisionCeilingError",
    "ZeroVectorError",
    "PolygonChain",
    "StarCertificate",
    "SvgOptions",
    "build_chain",
    "cancelling_indices",
    "certify_star",
    "folded_path_sum",
    "path_y_displacement",
    "polygon_outline",
    "render_svg",
    "EXACT_STEP_CAP",
    "START_PRESETS",
    "IterationConfig",
    "IterationTrace",
    "iterate",
    "lambda_estimates",
    "sine_table",
    "DENSE_SIZE_LIMIT",
    "GridSpec",
    "KunstwegOperator",
    "NumericMode",
    "SineVector",
    "apply",
    "build_dense",
    "eigen_lambda",
    "eigen_residual",
    "GUARD_DIGITS",
    "PrecisionContext",
    "StarReport",
    "dense_product",
    "ref_cos",
    "ref_pi",
    "ref_sin",
    "reference_sine_vector",
    "verify_star",
    "__version__",
]
