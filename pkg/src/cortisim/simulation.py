"""Per-step orchestration of brain, body, hormone, and world.

The four ablation variants are feature gates over one shared step sequence:

  1. the world rolls resources        6. action selection (argmax)
  2. the agent observes               7. execution + consumption
  3. inference, EFE, action posterior 8. decay + death check
  4. cortisol secretion               9. transition learning
  5. set-point adjustment (gated)        (gated, modulated when enabled)

Stage 4 runs in every variant so the hormone trace is always logged; only
its effectors (stages 5 and the learning-rate modulation in 9) are gated.
Stage 9 credits the transition observed from t-1 to t to the action taken
at t-1, so the first step never learns.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .allostasis import (
    CortisolState,
    adjust_set_point,
    modulated_learning_rate,
    secrete,
)
from .config import ExperimentConfig, build_model
from .environment import WorldState, execute_action, step_generate
from .errors import ConfigError, DeadAgent
from .generative import (
    Action,
    BeliefState,
    Categorical,
    GenerativeModel,
    ObservationBundle,
    action_posterior,
    expected_free_energy,
    infer_state,
    learned_model,
    marginal_obs_likelihood,
    predictive_state,
    select_action,
)
from .physiology import (
    PhysiologyState,
    apply_consumption,
    decay_step,
    initial_physiology,
    interoceptive_signals,
    with_energy_set_point,
)
from .probability import surprisal

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelVariant:
    """Feature gates for the four ablations."""

    allostatic_setpoint: bool
    learning: bool
    cortisol_modulates_learning: bool

    def __post_init__(self) -> None:
        if self.cortisol_modulates_learning and not self.learning:
            raise ConfigError("cortisol cannot modulate a learning path that is disabled")


PRESETS: dict[str, ModelVariant] = {
    "A": ModelVariant(allostatic_setpoint=False, learning=False, cortisol_modulates_learning=False),
    "B": ModelVariant(allostatic_setpoint=False, learning=True, cortisol_modulates_learning=False),
    "C": ModelVariant(allostatic_setpoint=True, learning=False, cortisol_modulates_learning=False),
    "D": ModelVariant(allostatic_setpoint=True, learning=True, cortisol_modulates_learning=True),
}


@dataclass(frozen=True, eq=False)
class StepRecord:
    """One trace row; the CSV column order is TRACE_COLUMNS."""

    t: int
    energy: float
    socialness: float
    d_energy: float
    cortisol: float
    lr_effective: float
    surprisal: float
    surprisal_delta: float
    q_s: Categorical
    q_u: Categorical
    action: Action
    action_succeeded: bool
    obs: ObservationBundle
    alive: bool


TRACE_COLUMNS = (
    "t", "energy", "socialness", "d_energy", "cortisol", "lr_effective",
    "surprisal", "surprisal_delta",
    "q_hungry", "q_playful", "q_satisfied",
    "qu_eat", "qu_play", "qu_explore",
    "action", "action_succeeded", "food", "friend", "tummy", "lonely", "alive",
)


def record_to_row(r: StepRecord) -> list:
    """Flatten a StepRecord into TRACE_COLUMNS order (bools as 0/1)."""
    return [
        r.t,
        repr(r.energy), repr(r.socialness), repr(r.d_energy), repr(r.cortisol),
        repr(r.lr_effective), repr(r.surprisal), repr(r.surprisal_delta),
        repr(float(r.q_s.probs[0])), repr(float(r.q_s.probs[1])), repr(float(r.q_s.probs[2])),
        repr(float(r.q_u.probs[0])), repr(float(r.q_u.probs[1])), repr(float(r.q_u.probs[2])),
        r.action.name.lower(), int(r.action_succeeded),
        r.obs.food, r.obs.friend, r.obs.tummy, r.obs.lonely, int(r.alive),
    ]


@dataclass
class RunState:
    """Everything one episode mutates while stepping."""

    model: GenerativeModel
    physiology: PhysiologyState
    cortisol: CortisolState
    world: WorldState
    env_rng: np.random.Generator
    agent_rng: np.random.Generator
    belief: BeliefState | None = None
    last_action: Action | None = None
    t: int = 0


def initial_run_state(config: ExperimentConfig, seed: int) -> RunState:
    """Build a fresh state with split RNG substreams (world vs agent)."""
    env_seq, agent_seq = np.random.SeedSequence(seed).spawn(2)
    return RunState(
        model=build_model(config),
        physiology=initial_physiology(
            set_point_energy=config.set_point_energy,
            set_point_social=config.set_point_social,
            decay=config.decay,
        ),
        cortisol=CortisolState(),
        world=WorldState(),
        env_rng=np.random.default_rng(env_seq),
        agent_rng=np.random.default_rng(agent_seq),
    )


def run_step(run: RunState, variant: ModelVariant, config: ExperimentConfig) -> StepRecord:
    """Advance one timestep and return its trace row."""
    if not run.physiology.alive:
        raise DeadAgent(f"run_step at t={run.t} after death")

    # 1. The world rolls fresh resources (explore guarantee may override).
    run.world = step_generate(run.world, run.env_rng, config.resource_probability)
    log.debug("t=%d stage1 world food=%s friend=%s", run.t, run.world.food_present,
              run.world.friend_present)

    # 2. Observe: interoception from the body, exteroception pre-consumption.
    tummy, lonely = interoceptive_signals(run.physiology)
    obs = ObservationBundle(
        tummy=tummy, lonely=lonely,
        food=int(run.world.food_present), friend=int(run.world.friend_present),
    )
    log.debug("t=%d stage2 obs %s", run.t, obs)

    # 3. Infer the motivation state and score the three actions.
    if run.belief is None:
        prior_pred = Categorical(run.model.initial_prior)
    else:
        prior_pred = predictive_state(run.belief, run.last_action, run.model)
    posterior = infer_state(obs, prior_pred, run.model)
    s_t = surprisal(marginal_obs_likelihood(obs, prior_pred, run.model))
    efes = [expected_free_energy(posterior, action, run.model) for action in Action]
    q_u = action_posterior(efes, precision=config.policy_precision)
    log.debug("t=%d stage3 q_s=%s q_u=%s surprisal=%.6f", run.t, posterior.probs, q_u.probs, s_t)

    # 4. Cortisol secretion (every variant; effectors below are gated).
    if run.t == 0:
        # First observation seeds the surprisal memory: no spike at t=0.
        run.cortisol = replace(run.cortisol, prev_surprisal=s_t)
    surprisal_delta = s_t - run.cortisol.prev_surprisal
    run.cortisol = secrete(run.cortisol, s_t, q_u)
    log.debug("t=%d stage4 cortisol=%.6f", run.t, run.cortisol.level)

    # 5. Allostatic set-point adjustment (variants C and D).
    if variant.allostatic_setpoint:
        new_d = adjust_set_point(run.physiology.energy.set_point, run.cortisol)
        run.physiology = with_energy_set_point(run.physiology, new_d)
        log.debug("t=%d stage5 d_energy=%.6f", run.t, new_d)

    # 6. Select the action.
    if config.forced_action is not None:
        action = Action[config.forced_action.upper()]
    else:
        action = select_action(q_u, run.agent_rng)
    log.debug("t=%d stage6 action=%s", run.t, action.name.lower())

    # 7. Execute it in the world and feed the body.
    run.world, outcome = execute_action(run.world, action)
    run.physiology = apply_consumption(run.physiology, outcome, config.consumption_gain)
    log.debug("t=%d stage7 outcome=%s", run.t, outcome)

    # 8. Decay both variables; zero energy ends the run.
    run.physiology = decay_step(run.physiology)
    log.debug("t=%d stage8 energy=%.6f socialness=%.6f alive=%s", run.t,
              run.physiology.energy.value, run.physiology.socialness.value,
              run.physiology.alive)

    # 9. Learn the transition that t-1's action produced (variants B and D).
    lr_effective = 0.0
    if variant.learning and run.belief is not None:
        if variant.cortisol_modulates_learning:
            lr_effective = modulated_learning_rate(config.learning_rate, run.cortisol)
        else:
            lr_effective = config.learning_rate
        run.model = learned_model(
            run.model, run.belief.q_s, posterior, run.last_action, lr_effective
        )
        log.debug("t=%d stage9 lr=%.6f", run.t, lr_effective)

    record = StepRecord(
        t=run.t,
        energy=run.physiology.energy.value,
        socialness=run.physiology.socialness.value,
        d_energy=run.physiology.energy.set_point,
        cortisol=run.cortisol.level,
        lr_effective=lr_effective,
        surprisal=s_t,
        surprisal_delta=surprisal_delta,
        q_s=posterior,
        q_u=q_u,
        action=action,
        action_succeeded=outcome.succeeded,
        obs=obs,
        alive=run.physiology.alive,
    )
    run.belief = BeliefState(q_s=posterior, prior_pred=prior_pred)
    run.last_action = action
    run.t += 1
    return record


def run_episode(config: ExperimentConfig, variant: ModelVariant, seed: int) -> list[StepRecord]:
    """Run up to config.steps steps or until death; deterministic in (config, seed)."""
    config.validate()
    run = initial_run_state(config, seed)
    trace: list[StepRecord] = []
    for _ in range(config.steps):
        record = run_step(run, variant, config)
        trace.append(record)
        if not record.alive:
            break
    return trace
