"""Exact counting of rooted spanning forests in circulant graphs."""

from .errors import (
    CapExceeded,
    CircForestError,
    FactorizationIncomplete,
    IndexOutOfRange,
    InternalInconsistency,
    InvalidStepSet,
    NotMonicizable,
    OnCircleRoot,
    PrecisionExhausted,
    ToleranceNotReached,
    TooSmall,
)
from .forests import (
    CirculantSpec,
    ForestCount,
    count_by_chebyshev,
    count_by_determinant,
    count_by_resultant,
    counts_by_size,
    eigenvalue,
    laplacian_plus_identity,
    validate_spec,
)
from .mahler import (
    MahlerEstimate,
    asymptotic_constant,
    convergence_report,
    mahler_quadrature,
    mahler_root_product,
)
from .polynomial import (
    IntPoly,
    LaurentPoly,
    associated_polynomial,
    chebyshev_T,
    find_roots,
    monicize,
    product_over_unity_roots,
)
from .structure import (
    fibonacci_lucas,
    odd_step_count,
    predicted_multiplier,
    squarefree_part,
    verify_square_structure,
)

__version__ = "0.1.0"
