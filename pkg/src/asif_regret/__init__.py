"""Maximum regret of as-if treatment choice using estimated illness probabilities."""

__version__ = "0.1.0"

from .analytic import (
    BoundResult,
    crossover_thresholds,
    hoeffding_bound,
    maxregret_n1,
    maxregret_n1_bv,
    mmr_no_data,
    mmr_randomized,
    pooled_bound,
)
from .engine import (
    EngineConfig,
    RegretReport,
    binom_pmf,
    expected_regret_exact,
    expected_regret_mc,
    max_regret,
    optimal_weight,
)
from .estimators import (
    Constant,
    ConstrainedLS,
    Pooled,
    Randomized,
    SampleRate,
    SamplingDesign,
    Weighted2,
    WeightedK,
    cls_objective,
    cls_solution,
    cls_theta0,
    estimate,
    randomized_q,
)
from .exceptions import (
    EnumerationCapError,
    InfeasibleSpaceError,
    RegretError,
    TrivialProblemError,
    UndefinedEstimatorError,
    ValidationError,
)
from .scenario import Scenario, parse_scenario
from .spaces import (
    BoundedVariationFamily,
    BoundedVariationSpace,
    EcologicalSpace,
    IntervalSpace,
    StateGrid,
    duncan_davis,
    grid_bv2,
    grid_bv_family,
    grid_eco,
    grid_interval,
)
from .welfare import (
    FullWelfare,
    Treatment,
    WelfareSpec,
    decide,
    error_indicator,
    normalize,
    optimal_welfare,
    regret,
    threshold_general,
)
