"""eqloc: exact evaluation of symplectic and hyperkahler quotient integrals
from fixed-point data, cross-checked by a mollified-integral floating oracle.
"""

from .atlas import (
    FixedPointAtlas,
    FixedPointDatum,
    GroupSpec,
    RootSystemData,
    SubmanifoldRestriction,
    builtin_atlas,
    parse_atlas,
    permute_atlas_variables,
    serialize_atlas,
    validate_atlas,
    validate_respected,
)
from .engines import (
    ConventionProfile,
    ReductionReport,
    reduce_hk_circle,
    reduce_hk_circle_viaP,
    reduce_hk_torus,
    reduce_symplectic_circle,
    reduce_symplectic_torus,
    resolve_profile,
    weyl_wrap,
)
from .errors import (
    EqlocError,
    InternalError,
    QuadratureError,
    SeriesError,
    ValidationError,
)
from .exact import (
    ComplexRational,
    LaurentSeries,
    SymbolicConstant,
    coeff_extract,
    even_projector,
    exp_series,
    invert_series,
    series_mul,
    substitute_sqrt,
)
from .localize import euler_class, localize, phase_factory, restriction_factory
from .oracle import (
    MollifierConfig,
    OracleResult,
    atlas_integrand,
    contour_coeff,
    mollified_oint,
    oracle_comparison,
    shift_smoothness_check,
    suptsq_check,
)
from .roots import group_spec, known_groups, root_system

__version__ = "0.1.0"

__all__ = [
    "ComplexRational",
    "ConventionProfile",
    "EqlocError",
    "FixedPointAtlas",
    "FixedPointDatum",
    "GroupSpec",
    "InternalError",
    "LaurentSeries",
    "MollifierConfig",
    "OracleResult",
    "QuadratureError",
    "ReductionReport",
    "RootSystemData",
    "SeriesError",
    "SubmanifoldRestriction",
    "SymbolicConstant",
    "ValidationError",
    "atlas_integrand",
    "builtin_atlas",
    "coeff_extract",
    "contour_coeff",
    "euler_class",
    "even_projector",
    "exp_series",
    "group_spec",
    "invert_series",
    "known_groups",
    "localize",
    "mollified_oint",
    "oracle_comparison",
    "parse_atlas",
    "permute_atlas_variables",
    "phase_factory",
    "reduce_hk_circle",
    "reduce_hk_circle_viaP",
    "reduce_hk_torus",
    "reduce_symplectic_circle",
    "reduce_symplectic_torus",
    "resolve_profile",
    "restriction_factory",
    "root_system",
    "serialize_atlas",
    "series_mul",
    "shift_smoothness_check",
    "substitute_sqrt",
    "suptsq_check",
    "validate_atlas",
    "validate_respected",
    "weyl_wrap",
    "__version__",
]
