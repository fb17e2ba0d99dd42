"""Interactive polling of correlated informants: league protocols, ambiguity
bounds, and schedule costs for a base station collecting sensor readings."""

from .ambiguity import (
    AmbiguityReport,
    SupportRelation,
    ambiguity_set,
    build_league_supports,
    league_joint_support,
    max_ambiguity,
)
from .field import (
    CorrelationModel,
    CostBreakdown,
    FieldError,
    Schedule,
    SensorField,
    build_field,
    conditional_bits,
    load_field,
    pairwise_bits,
    query_cost,
)
from .league import (
    LeagueConfig,
    MatchInstance,
    Team,
    Transcript,
    compare_orders,
    run_no_interaction,
    run_y_first,
    run_z_first,
)
from .scheduling import (
    OptimizationResult,
    ScheduleEvaluation,
    average_case_complexity,
    brute_force_optimum,
    evaluate_schedule,
    greedy_schedule,
)
from .simulator import (
    FieldData,
    SimulationReport,
    generate_field_data,
    run_average_poll,
    run_poll,
)

__version__ = "0.1.0"
