"""Security budgeting for QKD sources with unbounded pulse correlations."""

from .budget_planner import (
    BudgetPlan,
    BudgetRequest,
    Fig2Curve,
    UnsupportedModeError,
    adjust_security_parameter,
    effective_length_real,
    fig2_curve,
    plan,
    solve_effective_length,
    trace_distance_budget,
)
from .corr_model import (
    CharacterizationRangeError,
    CorrelationModel,
    ExponentialModel,
    TabulatedModel,
    epsilon_at,
    load_tabulated_csv,
    sqrt_delta,
)
from .model_fit import FitResult, SampleSet, fit_exponential

__version__ = "0.1.0"
