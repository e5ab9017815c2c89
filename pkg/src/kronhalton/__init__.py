"""Digital Kronecker, polynomial-base Halton and hybrid sequences over F_p.

The package is layered: :mod:`.poly` (F_p and F_p[X]), :mod:`.laurent`
(Laurent series and continued fractions), :mod:`.sequences` (point
generation), :mod:`.quality` (nets, t-values, discrepancy) and
:mod:`.theorems` (experiments). :mod:`.cli` is the command-line front end.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import (
    CapExceededError,
    CardinalityError,
    CoprimalityError,
    DegreeError,
    FieldMismatchError,
    InvalidBaseError,
    KronHaltonError,
    OutOfScopeError,
    ParseError,
    PrecisionExhaustedError,
    RankConditionError,
    ResolutionError,
    ResourceError,
    ZeroSeriesError,
)
from .laurent import (
    CFExpansion,
    CFSpec,
    Gap2Series,
    LaurentSeries,
    RandomSeries,
    RationalSeries,
    TruncatedSeries,
    K_of,
    cf_expand,
    convergent,
    frac_part,
    parse_series,
    poly_times_series,
    sample_haar,
    series_from_cf,
)
from .poly import (
    NEG_INF,
    FieldChar,
    Poly,
    base_digits,
    int_to_poly,
    parse_poly,
    poly_divmod,
    poly_eval_int,
    poly_gcd,
)
from .quality import (
    Box,
    NetReport,
    count_in_box,
    extreme_disc_lower_bound,
    is_net,
    rank_fp,
    star_disc_1d,
    star_disc_exact,
    t_param,
)
from .sequences import (
    DigitPoint,
    GeneratingMatrix,
    HybridSpec,
    PointSet,
    generate,
    halton_point,
    hybrid_point,
    kronecker_matrix,
    kronecker_point,
    residue_block_indices,
)
