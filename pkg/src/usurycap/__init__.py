"""Exact usury-cap decisions for loan cash-flow streams."""

from .cashflow import (
    ZERO,
    CashFlowStream,
    Sign,
    atom,
    combine,
    cumulative_at,
    cumulative_balances,
    dominates,
    earliest_sign,
    latest_sign,
    maturity,
    negate,
    normalize,
    scale,
    total,
)
from .discounting import (
    BenchmarkPath,
    Effective,
    LogFloat,
    compound_factor,
    discounted_partials_float,
    discounted_stream,
    effective,
    float_transform,
    npv_float,
    parse_percent,
)
from .expoly import (
    AlgebraicCutoff,
    AlgebraicNumber,
    ExpPoly,
    Ordering,
    Parity,
    RootBracket,
    RootReport,
    cauchy_root_bound,
    compare_root_to_cutoff,
    cutoff_for,
    encode,
    isolate_roots,
    positive_roots,
    sign_at_algebraic,
    sign_at_cutoff,
    sign_at_rational,
    squarefree_decompose,
    sturm_count,
)
from .irr import (
    IrrKind,
    IrrValue,
    StreamClass,
    classify_stream,
    clear_cache,
    irr,
    pure_rate,
    refinement_minus,
    refinement_plus,
)
from .caps import (
    Decision,
    DominatingPureLoan,
    Fault,
    JointDecision,
    Mode,
    Rule,
    Side,
    ViolatingRateBracket,
    in_cap_minus,
    in_cap_plus,
    in_floor,
    in_weak_cap,
    joint_classify,
    pure_dominator_witness,
    relative_classify,
)
from .errors import *  # noqa: F401,F403
from . import kernels, oracle

__version__ = "0.1.0"
