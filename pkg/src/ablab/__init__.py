"""ablab: exact-arithmetic toolkit for alpha-beta orbits on the circle.

Construct irrationals of prescribed Diophantine type from their partial
quotients, generate two-step rotation orbits, extract pigeonhole-
separated orbit subsets with certified gaps, and compute box-dimension
lower-bound datapoints.  All certified paths run in exact rational
arithmetic.
"""

__version__ = "0.1.0"

from .cf import (
    CertifiedValue,
    CFNumber,
    Convergent,
    TAU_INF,
    best_approx_verify,
    cf_from_json,
    convergents,
    default_depth_cap,
    dist_to_nearest_int,
    evaluate,
    nearest_int_dist,
)
from .dimension import (
    BoundParams,
    BoxCountSample,
    DimensionEstimate,
    SeparationWitness,
    box_count,
    embed_threshold,
    extract_separated_subset,
    theorem_bound,
    upper_box_dim_estimate,
)
from .dioph import (
    ApproximationWitness,
    DiophantineSpec,
    exact_order_estimate,
    find_convergent_in_window,
    find_witnesses,
    make_number,
)
from .errors import (
    AblabError,
    AmbiguousFold,
    AmbiguousMembership,
    ConfigError,
    DegenerateSample,
    DepthExceeded,
    InadmissibleParams,
    InvalidPattern,
    NotEnoughAlphas,
    PrecisionExhausted,
    SeparationFailed,
    WindowEmpty,
    WordTooShort,
)
from .orbit import (
    BalanceReport,
    OmegaWord,
    OrbitPoint,
    balance_classify,
    gen_omega,
    k_sequence,
    orbit_points,
)

__all__ = [
    "__version__",
    "AblabError",
    "AmbiguousFold",
    "AmbiguousMembership",
    "ApproximationWitness",
    "BalanceReport",
    "BoundParams",
    "BoxCountSample",
    "CFNumber",
    "CertifiedValue",
    "ConfigError",
    "Convergent",
    "DegenerateSample",
    "DepthExceeded",
    "DimensionEstimate",
    "DiophantineSpec",
    "InadmissibleParams",
    "InvalidPattern",
    "NotEnoughAlphas",
    "OmegaWord",
    "OrbitPoint",
    "PrecisionExhausted",
    "SeparationFailed",
    "SeparationWitness",
    "TAU_INF",
    "WindowEmpty",
    "WordTooShort",
    "balance_classify",
    "best_approx_verify",
    "box_count",
    "cf_from_json",
    "convergents",
    "default_depth_cap",
    "dist_to_nearest_int",
    "embed_threshold",
    "evaluate",
    "exact_order_estimate",
    "extract_separated_subset",
    "find_convergent_in_window",
    "find_witnesses",
    "gen_omega",
    "k_sequence",
    "make_number",
    "nearest_int_dist",
    "orbit_points",
    "theorem_bound",
    "upper_box_dim_estimate",
]
