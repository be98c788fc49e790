"""Active-inference agents with homeostatic physiology and allostatic cortisol.

The package simulates a small creature that infers its own motivation state
from noisy interoceptive and exteroceptive cues, picks actions by one-step
expected free energy, and either starves or keeps itself viable. Four model
presets ablate the regulatory machinery: cortisol-driven set-point
adjustment, transition learning, and cortisol modulation of the learning
rate.
"""

from .allostasis import CortisolState, adjust_set_point, modulated_learning_rate, secrete
from .config import ExperimentConfig, build_model, load_config
from .environment import ActionOutcome, WorldState, execute_action, step_generate
from .errors import (
    AbsoluteContinuity,
    ConfigError,
    DeadAgent,
    DomainError,
    EmptyTrace,
    FilterExhausted,
    NegativeEntry,
    SimulationError,
    ZeroEvidence,
    ZeroMass,
)
from .generative import (
    Action,
    BeliefState,
    EfeBreakdown,
    GenerativeModel,
    ObservationBundle,
    action_posterior,
    default_model,
    expected_free_energy,
    infer_state,
    learned_model,
    marginal_obs_likelihood,
    predictive_state,
    select_action,
    update_transitions,
)
from .harness import (
    ExperimentResult,
    RunSummary,
    compute_metrics,
    filter_valid_run,
    mean_and_sem,
    run_experiment,
    write_experiment,
    write_trace_csv,
)
from .physiology import (
    InternalVariable,
    PhysiologyState,
    apply_consumption,
    decay_step,
    initial_physiology,
    interoceptive_signals,
)
from .probability import (
    Categorical,
    bayes_posterior,
    entropy,
    kl_divergence,
    normalize,
    softmax,
    surprisal,
)
from .simulation import (
    PRESETS,
    ModelVariant,
    RunState,
    StepRecord,
    TRACE_COLUMNS,
    initial_run_state,
    run_episode,
    run_step,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ActionOutcome",
    "AbsoluteContinuity",
    "BeliefState",
    "Categorical",
    "ConfigError",
    "CortisolState",
    "DeadAgent",
    "DomainError",
    "EfeBreakdown",
    "EmptyTrace",
    "ExperimentConfig",
    "ExperimentResult",
    "FilterExhausted",
    "GenerativeModel",
    "InternalVariable",
    "ModelVariant",
    "NegativeEntry",
    "ObservationBundle",
    "PRESETS",
    "PhysiologyState",
    "RunState",
    "RunSummary",
    "SimulationError",
    "StepRecord",
    "TRACE_COLUMNS",
    "WorldState",
    "ZeroEvidence",
    "ZeroMass",
    "action_posterior",
    "adjust_set_point",
    "apply_consumption",
    "bayes_posterior",
    "build_model",
    "compute_metrics",
    "decay_step",
    "default_model",
    "entropy",
    "execute_action",
    "expected_free_energy",
    "filter_valid_run",
    "infer_state",
    "initial_physiology",
    "initial_run_state",
    "interoceptive_signals",
    "kl_divergence",
    "learned_model",
    "load_config",
    "marginal_obs_likelihood",
    "mean_and_sem",
    "modulated_learning_rate",
    "normalize",
    "predictive_state",
    "run_episode",
    "run_experiment",
    "run_step",
    "secrete",
    "select_action",
    "softmax",
    "step_generate",
    "surprisal",
    "update_transitions",
    "write_experiment",
    "write_trace_csv",
]
