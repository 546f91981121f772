"""Derivative-free univariate minimization of piecewise-smooth functions.

Bracketing solvers built around a pair of one-sided quadratic
underestimators (fixed-constant, closed-form extremal and dynamically
escalated variants), the classic reference solvers they are benchmarked
against, a registry of scaled test functions, and a reproducible
benchmark harness.
"""

from .brackets import (
    Bracket3,
    BracketError,
    ExtendedBracket5,
    ExtendedBracket7,
    GapVector,
    NonPositiveGapError,
    NotABracketError,
    NotAscendingError,
    from_gaps,
    inner3,
    inner5,
    inner_length,
    make_extended5,
    make_extended7,
    outer_length,
    reflect,
    to_gaps,
)
from .models import (
    CoincidentPointsError,
    QuadModel,
    build_model,
    divided_diff1,
    divided_diff2,
    eval_model,
    scaling_h,
)
from .result import SolverResult, Status
from .supm import (
    BracketTooSmallError,
    InvariantBrokenError,
    SupmConfig,
    TrialAtCenterError,
    apply_update,
    classify_branch,
    supm_minimize,
    supm_step,
)
from .eupm import (
    InfeasibleSequenceError,
    MINIMAL_SEQUENCES,
    apply_sequence,
    bracket_check,
    contraction_ratio,
    eupm_minimize,
    eupm_step,
)
from .dupm import (
    ChiConditionError,
    DupmConfig,
    DupmState,
    alpha_floor,
    alpha_plus,
    chi,
    dupm_minimize,
    dupm_step,
    dupm_update,
    intersection_condition,
)
from .baselines import (
    BaselineConfig,
    brent_minimize,
    golden_section_minimize,
    mifflin_strodiot_minimize,
)
from .testfuncs import (
    Category,
    CountingOracle,
    OutOfDomainError,
    TestFunction,
    UnknownFunctionError,
    get_function,
    list_functions,
)
from .harness import (
    BenchmarkReport,
    TrialConfig,
    convergence_rate,
    generate_bracket,
    minimize_once,
    run_benchmark,
    run_sequence_experiment,
)

__version__ = "0.1.0"
