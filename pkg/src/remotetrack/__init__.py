"""Average-cost sensor command policies for tracking a binary Markov source."""

from .belief import (
    BeliefGrid,
    BeliefKernel,
    BeliefTransitionEntry,
    InfeasibleObservation,
    build_kernel,
    observation_distribution,
    phi,
    quantize,
    update_belief,
)
from .model import (
    D1,
    D2,
    Action,
    ConfigError,
    ModelConfig,
    Observation,
    SourceState,
    ValidatedModel,
    expected_stage_cost,
    load_config,
    md_estimate,
    validate,
)
from .policies import (
    expected_greedy_policy,
    make_rule,
    map_policy,
    uniform_random_policy,
)
from .simulator import SimulationSummary, TrajectoryRecord, run, step
from .solver import (
    NonConvergenceError,
    Policy,
    SolveResult,
    evaluate_policy,
    rvia,
    solve,
    stage_costs,
)

__version__ = "0.1.0"
