"""Exact total variation, perimeters, Cheeger cuts and 1-Laplacian eigenpairs on metric graphs."""

__version__ = "0.1.0"

from .bv import (  # noqa: E402
    GraphSubset,
    PiecewiseFunction,
    VectorField,
    coarea_residual,
    complement,
    du_total,
    green_residual,
    jv,
    length,
    median_set,
    perimeter,
    superlevel,
    tv,
)
from .cheeger import (  # noqa: E402
    CheegerResult,
    cheeger_cut,
    cheeger_within,
    is_calibrable,
    path_convexity_probe,
    ratio,
    rayleigh_tv,
)
from .duality import (  # noqa: E402
    CheegerCertificate,
    Eigenpair,
    construct_eigenpair_from_cut,
    dual_flow,
    dual_norm,
    verify_eigenpair,
)
from .graph import MetricGraph, classify_vertex, parse_graph  # noqa: E402
from .lp import LinearProgram, solve_lp  # noqa: E402
from .spectral import cheeger_inequality_check, fem_gap, secular_gap  # noqa: E402

__all__ = [
    "__version__",
    "cheeger_cut",
    "cheeger_inequality_check",
    "cheeger_within",
    "CheegerCertificate",
    "CheegerResult",
    "classify_vertex",
    "coarea_residual",
    "complement",
    "construct_eigenpair_from_cut",
    "du_total",
    "dual_flow",
    "dual_norm",
    "Eigenpair",
    "fem_gap",
    "GraphSubset",
    "green_residual",
    "is_calibrable",
    "jv",
    "length",
    "LinearProgram",
    "median_set",
    "MetricGraph",
    "parse_graph",
    "path_convexity_probe",
    "perimeter",
    "PiecewiseFunction",
    "ratio",
    "rayleigh_tv",
    "secular_gap",
    "solve_lp",
    "superlevel",
    "tv",
    "VectorField",
    "verify_eigenpair",
]
