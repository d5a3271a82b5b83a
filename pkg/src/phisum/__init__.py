"""Exact totient-summatory function Phi(n) = sum of Euler phi(k) for k <= n.

Three interchangeable evaluators: a segmented totient-sieve oracle (to 10^9),
a sqrt-space hyperbola algorithm, and the production cube-root-space
algorithm, plus the Mobius/Mertens machinery they share.
"""

from .baseline import (
    PhiResult,
    phi_mertens_first,
    phi_oracle,
    phi_oracle_at_points,
    phi_oracle_prefix,
    phi_oracle_report,
)
from .cbrt import (
    ContributionLog,
    MertensBatch,
    PhaseState,
    SmallTable,
    phase1_accumulate,
    phase1_flush,
    phase2_collect,
    phase2_flush,
    phase3_finalize,
    phi_space_saving,
)
from .core import (
    FALLBACK_THRESHOLD,
    FAST_PATH_MAX_N,
    MAX_N,
    TuningConfig,
    WideInt,
    default_split,
    floor_div,
    isqrt,
    make_config,
    triangular,
)
from .mertens import (
    ORACLE_MAX_N,
    LargeMertensMap,
    MertensTable,
    large_mertens_map,
    mertens_hyperbola,
    mertens_oracle,
    mertens_table,
)
from .sieve import (
    PrimeTable,
    SieveSegment,
    SieveStats,
    default_block_size,
    mobius_prefix,
    mobius_segment,
    primes_upto,
    stream_mobius,
)

__version__ = "0.1.0"

__all__ = [
    "FALLBACK_THRESHOLD",
    "FAST_PATH_MAX_N",
    "MAX_N",
    "ORACLE_MAX_N",
    "ContributionLog",
    "LargeMertensMap",
    "MertensBatch",
    "MertensTable",
    "PhaseState",
    "PhiResult",
    "PrimeTable",
    "SieveSegment",
    "SieveStats",
    "SmallTable",
    "TuningConfig",
    "WideInt",
    "default_block_size",
    "default_split",
    "floor_div",
    "isqrt",
    "large_mertens_map",
    "make_config",
    "mertens_hyperbola",
    "mertens_oracle",
    "mertens_table",
    "mobius_prefix",
    "mobius_segment",
    "phase1_accumulate",
    "phase1_flush",
    "phase2_collect",
    "phase2_flush",
    "phase3_finalize",
    "phi_mertens_first",
    "phi_oracle",
    "phi_oracle_at_points",
    "phi_oracle_prefix",
    "phi_oracle_report",
    "phi_space_saving",
    "primes_upto",
    "stream_mobius",
    "triangular",
    "__version__",
]
