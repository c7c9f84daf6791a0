"""Artificial bee colony optimizers with full- and random multi-dimensional
search, plus an ETV freight-station scheduling model."""

from .colony import (
    Bounds,
    ColonyConfig,
    ConfigError,
    DegeneratePopulationError,
    EvaluationError,
    FoodSource,
    RunResult,
    Strategy,
    Swarm,
    run,
)
from .kinematics import KinematicParams, Position, TimeMatrix, build_time_matrix, travel_time
from .benchmarks import FUNCTIONS, TrialStats, get_function, run_campaign
from .scheduling import (
    ScheduleReport,
    default_layout,
    default_tasks,
    evaluate_schedule,
    format_report,
    make_objective,
    smc_decode,
)

__version__ = "0.1.0"

__all__ = [
    "Bounds",
    "ColonyConfig",
    "ConfigError",
    "DegeneratePopulationError",
    "EvaluationError",
    "FoodSource",
    "RunResult",
    "Strategy",
    "Swarm",
    "run",
    "KinematicParams",
    "Position",
    "TimeMatrix",
    "build_time_matrix",
    "travel_time",
    "FUNCTIONS",
    "TrialStats",
    "get_function",
    "run_campaign",
    "ScheduleReport",
    "default_layout",
    "default_tasks",
    "evaluate_schedule",
    "format_report",
    "make_objective",
    "smc_decode",
]
