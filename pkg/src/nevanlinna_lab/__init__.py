"""Numerical lab for growth bounds of the Riemann zeta function via Nevanlinna theory."""

from .census import CensusConfig, census, winding_count
from .errors import (
    BoundaryZero,
    BudgetExceeded,
    DepthExceeded,
    DomainError,
    LabError,
    PoleAtOne,
    PreconditionViolated,
    QuadratureStalled,
    UnstableWinding,
    ZeroOnPath,
)
from .lab import (
    BoundFit,
    LemmaReport,
    ScanGrid,
    lemma4_tail,
    lemma5_scan,
    lemma6_ratio_scan,
    lemma8_scan,
    lemma9_count,
    lemma9_sweep,
    log_spaced,
    theorem_scan,
)
from .nevanlinna import (
    CharTriple,
    Disk,
    Divisor,
    DivisorList,
    FunctionHandle,
    borel_caratheodory_gap,
    characteristic_T,
    counting_n,
    integrated_N,
    jensen_residual,
    lemma1_check,
    log_plus,
    max_modulus_M,
    proximity_m,
    sft_gap,
)
from .quadrature import QuadratureSpec
from .registry import builtin_registry, resolve
from .zeta import (
    EvalBudget,
    RegionD,
    log_zeta_series,
    log_zeta_tracked,
    region_d_contains,
    zeta,
    zeta_derivative,
)

__version__ = "0.1.0"
