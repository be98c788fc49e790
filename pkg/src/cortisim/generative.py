"""The agent's generative model.

Three hidden motivation states, four binary observation modalities, three
actions. Holds the likelihood (A), transition (B), preference (C) and prior
(D) arrays plus the Dirichlet counts behind B, and implements state
inference, one-step expected free energy, the action posterior, and
transition learning.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Sequence

import numpy as np

from .errors import DomainError
from .probability import (
    NORM_TOL,
    PROB_FLOOR,
    Categorical,
    bayes_posterior,
    entropy,
    kl_divergence,
    softmax,
)

# Hidden motivation states.
N_STATES = 3
HUNGRY, PLAYFUL, SATISFIED = range(N_STATES)
STATE_NAMES = ("hungry", "playful", "satisfied")

# Observation modalities, each binary with 1 = signal/resource present.
N_MODALITIES = 4
TUMMY, LONELY, FOOD, FRIEND = range(N_MODALITIES)
MODALITY_NAMES = ("tummy", "lonely", "food", "friend")
N_OUTCOMES = 2


class Action(IntEnum):
    EAT = 0
    PLAY = 1
    EXPLORE = 2


ACTION_NAMES = ("eat", "play", "explore")
N_ACTIONS = len(ACTION_NAMES)


@dataclass(frozen=True)
class ObservationBundle:
    """One step's sensory snapshot; each field is 0 or 1."""

    tummy: int
    lonely: int
    food: int
    friend: int

    def __post_init__(self) -> None:
        for name, bit in zip(MODALITY_NAMES, self.as_tuple()):
            if bit not in (0, 1):
                raise DomainError(f"observation {name} must be 0 or 1, got {bit!r}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.tummy, self.lonely, self.food, self.friend)


@dataclass(frozen=True, eq=False)
class BeliefState:
    """Posterior over motivation states plus the propagated prior it came from."""

    q_s: Categorical
    prior_pred: Categorical


@dataclass(frozen=True)
class EfeBreakdown:
    """Expected free energy of one action, split into its two terms.

    total = risk + ambiguity exactly; lower is better.
    """

    risk: float
    ambiguity: float

    def __post_init__(self) -> None:
        if self.ambiguity < 0:
            raise DomainError(f"ambiguity must be >= 0, got {self.ambiguity!r}")

    @property
    def total(self) -> float:
        return self.risk + self.ambiguity


@dataclass(eq=False)
class GenerativeModel:
    """A/B/C/D arrays plus the Dirichlet counts behind B.

    likelihood        (4, 2, 3)  P(outcome | state) per modality; columns stochastic
    transitions       (3, 3, 3)  [action, next, prev]; columns stochastic
    preferences       (4, 2)     log-preferences over each modality's outcomes
    initial_prior     (3,)       state prior for the first step
    transition_counts (3, 3, 3)  Dirichlet concentrations; column-normalizing
                                 each action's matrix reproduces `transitions`
    """

    likelihood: np.ndarray
    transitions: np.ndarray
    preferences: np.ndarray
    initial_prior: np.ndarray
    transition_counts: np.ndarray = field(default=None)  # defaults to transitions * 1.0

    def __post_init__(self) -> None:
        self.likelihood = np.asarray(self.likelihood, dtype=np.float64)
        self.transitions = np.asarray(self.transitions, dtype=np.float64)
        self.preferences = np.asarray(self.preferences, dtype=np.float64)
        self.initial_prior = np.asarray(self.initial_prior, dtype=np.float64)
        if self.transition_counts is None:
            self.transition_counts = self.transitions.copy()
        self.transition_counts = np.asarray(self.transition_counts, dtype=np.float64)
        self.validate()

    def validate(self) -> None:
        if self.likelihood.shape != (N_MODALITIES, N_OUTCOMES, N_STATES):
            raise DomainError(f"likelihood shape {self.likelihood.shape}")
        if self.transitions.shape != (N_ACTIONS, N_STATES, N_STATES):
            raise DomainError(f"transitions shape {self.transitions.shape}")
        if self.preferences.shape != (N_MODALITIES, N_OUTCOMES):
            raise DomainError(f"preferences shape {self.preferences.shape}")
        if self.initial_prior.shape != (N_STATES,):
            raise DomainError(f"initial prior shape {self.initial_prior.shape}")
        if self.transition_counts.shape != self.transitions.shape:
            raise DomainError("transition counts must match the transition shape")
        if np.any(self.likelihood < 0) or np.any(self.transitions < 0):
            raise DomainError("negative probability entry")
        if not np.all(np.isfinite(self.preferences)):
            raise DomainError("preferences must be finite")
        if np.any(self.transition_counts <= 0):
            raise DomainError("Dirichlet concentrations must be strictly positive")
        # Column stochasticity for every conditional distribution.
        col_sums_a = self.likelihood.sum(axis=1)
        col_sums_b = self.transitions.sum(axis=1)
        if np.any(np.abs(col_sums_a - 1.0) > NORM_TOL):
            raise DomainError("a likelihood column does not sum to 1")
        if np.any(np.abs(col_sums_b - 1.0) > NORM_TOL):
            raise DomainError("a transition column does not sum to 1")
        Categorical(self.initial_prior)
        # Counts must stay consistent with the normalized transitions.
        implied = self.transition_counts / self.transition_counts.sum(axis=1, keepdims=True)
        if np.any(np.abs(implied - self.transitions) > NORM_TOL):
            raise DomainError("transition counts drifted from the transition matrix")

    def copy(self) -> "GenerativeModel":
        return GenerativeModel(
            likelihood=self.likelihood.copy(),
            transitions=self.transitions.copy(),
            preferences=self.preferences.copy(),
            initial_prior=self.initial_prior.copy(),
            transition_counts=self.transition_counts.copy(),
        )


# Prior probability that a consummatory action lands the agent in the wrong
# deficit state instead; kept tiny and fixed so the reliability knobs below
# stay the single source of asymmetry between eating and playing.
_CONSUME_SLIP = 0.05


def default_model(
    likelihood_strength: float = 0.88,
    exteroceptive_strength: float = 0.8,
    eat_reliability: float = 0.7,
    play_reliability: float = 0.8,
    transition_persistence: float = 0.8,
    explore_persistence: float = 0.77,
    cross_relief: float = 0.0,
    preference_tummy: float = 8.0,
    preference_lonely: float = 7.8,
    preference_food: float = 0.0,
    preference_friend: float = 0.0,
    dirichlet_scale: float = 0.25,
) -> GenerativeModel:
    """Build the stock model from its calibration knobs.

    Each deficit state predicts its own interoceptive signal with
    probability `likelihood_strength` and its own resource with the weaker
    `exteroceptive_strength`; satisfied predicts the absence of both
    signals; every other modality/state pair is uninformative (0.5/0.5).
    A consummatory action moves its reliability's worth of mass from its
    deficit state to satisfied (the agent treats playing as dependable and
    eating as chancy); on any other state it mostly keeps the state in
    place. `cross_relief` lets each consummatory action claim that much
    mass for soothing the *other* deficit too, which softens the contest
    between them whenever beliefs are mixed. Explore keeps whatever state
    the agent is in, a notch less confidently than the consummatory
    actions do, so it starts out strictly dominated everywhere but stays
    within reach of learned revisions.

    Preferences reward quiet interoceptive signals; the exteroceptive
    channels carry no preference by default (knobs exist for both).
    """
    if not 0.5 <= likelihood_strength < 1.0:
        raise DomainError(f"likelihood_strength must be in [0.5, 1), got {likelihood_strength!r}")
    if not 0.5 <= exteroceptive_strength < 1.0:
        raise DomainError(
            f"exteroceptive_strength must be in [0.5, 1), got {exteroceptive_strength!r}")
    for name, value in (("eat_reliability", eat_reliability),
                        ("play_reliability", play_reliability)):
        if not 0.0 < value < 1.0 - _CONSUME_SLIP:
            raise DomainError(
                f"{name} must be in (0, {1.0 - _CONSUME_SLIP}), got {value!r}")
    if not 0.0 < transition_persistence < 1.0:
        raise DomainError(
            f"transition_persistence must be in (0, 1), got {transition_persistence!r}"
        )
    if not 0.0 < explore_persistence < 1.0:
        raise DomainError(
            f"explore_persistence must be in (0, 1), got {explore_persistence!r}"
        )
    if not 0.0 <= cross_relief < transition_persistence:
        raise DomainError(
            f"cross_relief must be in [0, transition_persistence), got {cross_relief!r}"
        )
    if dirichlet_scale <= 0:
        raise DomainError(f"dirichlet_scale must be > 0, got {dirichlet_scale!r}")

    hi = likelihood_strength
    lo = 1.0 - likelihood_strength
    ex = exteroceptive_strength
    a = np.full((N_MODALITIES, N_OUTCOMES, N_STATES), 0.5)
    a[TUMMY, :, HUNGRY] = (lo, hi)       # hungry -> tummy rumble
    a[TUMMY, :, SATISFIED] = (hi, lo)    # satisfied -> quiet tummy
    a[LONELY, :, PLAYFUL] = (lo, hi)     # playful -> loneliness
    a[LONELY, :, SATISFIED] = (hi, lo)   # satisfied -> no loneliness
    a[FOOD, :, HUNGRY] = (1.0 - ex, ex)  # hungry loosely expects food to show
    a[FRIEND, :, PLAYFUL] = (1.0 - ex, ex)

    leak = (1.0 - transition_persistence) / 2.0
    # A consummatory action's own deficit is the one it expects to relapse
    # into after satiety; the other deficit returns more rarely. The split
    # breaks what would otherwise be an exact eat/play tie whenever the
    # agent believes it is satisfied.
    relapse_own = (1.0 - transition_persistence) * 0.75
    relapse_other = (1.0 - transition_persistence) * 0.25
    b = np.empty((N_ACTIONS, N_STATES, N_STATES))
    # Columns are "from" states in (hungry, playful, satisfied) order.
    b[Action.EAT] = np.array([
        [1.0 - eat_reliability - _CONSUME_SLIP, leak, relapse_own],
        [_CONSUME_SLIP, transition_persistence - cross_relief, relapse_other],
        [eat_reliability, leak + cross_relief, transition_persistence],
    ])
    b[Action.PLAY] = np.array([
        [transition_persistence - cross_relief, _CONSUME_SLIP, relapse_other],
        [leak, 1.0 - play_reliability - _CONSUME_SLIP, relapse_own],
        [leak + cross_relief, play_reliability, transition_persistence],
    ])
    drift = (1.0 - explore_persistence) / 2.0
    b[Action.EXPLORE] = np.full((N_STATES, N_STATES), drift)
    np.fill_diagonal(b[Action.EXPLORE], explore_persistence)

    c = np.zeros((N_MODALITIES, N_OUTCOMES))
    c[TUMMY] = (preference_tummy, 0.0)   # quiet tummy strongly preferred
    c[LONELY] = (preference_lonely, 0.0)
    c[FOOD] = (0.0, preference_food)     # resources in view are welcome
    c[FRIEND] = (0.0, preference_friend)

    d = np.full(N_STATES, 1.0 / N_STATES)

    return GenerativeModel(
        likelihood=a,
        transitions=b,
        preferences=c,
        initial_prior=d,
        transition_counts=b * dirichlet_scale,
    )


def predictive_state(q_prev: BeliefState, action: Action, model: GenerativeModel) -> Categorical:
    """One-step state prediction: B_action applied to the previous posterior."""
    return Categorical(model.transitions[action] @ q_prev.q_s.probs)


def joint_likelihood(obs: ObservationBundle, model: GenerativeModel) -> np.ndarray:
    """L(s) = product over modalities of A_m[obs_m, s]; entries may be 0."""
    bits = obs.as_tuple()
    lik = np.ones(N_STATES)
    for m in range(N_MODALITIES):
        lik *= model.likelihood[m, bits[m], :]
    return lik


def infer_state(
    obs: ObservationBundle, prior_pred: Categorical, model: GenerativeModel
) -> Categorical:
    """Exact single-factor Bayes update of the state belief."""
    return bayes_posterior(prior_pred, joint_likelihood(obs, model))


def marginal_obs_likelihood(
    obs: ObservationBundle, prior_pred: Categorical, model: GenerativeModel
) -> float:
    """p(o) under the predictive prior, floored to keep surprisal finite."""
    evidence = float(joint_likelihood(obs, model) @ prior_pred.probs)
    return max(evidence, PROB_FLOOR)


def expected_free_energy(
    q_s: Categorical, action: Action, model: GenerativeModel
) -> EfeBreakdown:
    """Risk + ambiguity of taking `action` from the current belief.

    risk_m      = KL(A_m q' || softmax(C_m)) with q' the predicted next state
    ambiguity_m = sum_s q'(s) H(A_m[:, s])
    """
    q_next = model.transitions[action] @ q_s.probs
    risk = 0.0
    ambiguity = 0.0
    for m in range(N_MODALITIES):
        a_m = model.likelihood[m]
        predicted = Categorical(a_m @ q_next)
        goal = softmax(model.preferences[m])
        risk += kl_divergence(predicted, goal)
        for s in range(N_STATES):
            ambiguity += q_next[s] * entropy(Categorical(a_m[:, s]))
    return EfeBreakdown(risk=risk, ambiguity=float(ambiguity))


def action_posterior(
    efes: Sequence[EfeBreakdown], precision: float = 1.0
) -> Categorical:
    """softmax(-precision * G) over the per-action expected free energies.

    Precision sharpens the posterior without moving the argmax; it matters
    downstream because cortisol secretion reads indecision off this
    distribution.
    """
    if precision <= 0:
        raise DomainError(f"precision must be > 0, got {precision!r}")
    return softmax([-precision * e.total for e in efes])


def select_action(q_u: Categorical, rng: np.random.Generator) -> Action:
    """Argmax of the action posterior; exact ties resolved uniformly at random."""
    best = np.flatnonzero(q_u.probs == q_u.probs.max())
    if best.size == 1:
        return Action(int(best[0]))
    return Action(int(rng.choice(best)))


def update_transitions(
    counts: np.ndarray,
    transitions: np.ndarray,
    q_prev: Categorical,
    q_curr: Categorical,
    action: Action,
    lr: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Dirichlet learning of the taken action's transition matrix.

    counts[action][i, j] += lr * q_curr(i) * q_prev(j); that action's matrix
    is re-derived by column normalization. Other actions are copied bitwise,
    and lr = 0 leaves everything unchanged.
    """
    if lr < 0:
        raise DomainError(f"learning rate must be >= 0, got {lr!r}")
    new_counts = counts.copy()
    new_transitions = transitions.copy()
    if lr > 0:
        new_counts[action] = counts[action] + lr * np.outer(q_curr.probs, q_prev.probs)
        col_sums = new_counts[action].sum(axis=0, keepdims=True)
        new_transitions[action] = new_counts[action] / col_sums
    return new_counts, new_transitions


def learned_model(
    model: GenerativeModel,
    q_prev: Categorical,
    q_curr: Categorical,
    action: Action,
    lr: float,
) -> GenerativeModel:
    """Return the model with one transition-learning step applied."""
    counts, transitions = update_transitions(
        model.transition_counts, model.transitions, q_prev, q_curr, action, lr
    )
    return replace(model, transition_counts=counts, transitions=transitions)
