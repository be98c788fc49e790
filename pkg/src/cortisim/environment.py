"""The external world: random resources, the explore guarantee, action execution.

Resources are regenerated fresh each step and do not persist. Exploring at
step t forces both resources to be present at step t+1, overriding (not
supplementing) that step's random draw. The generator always consumes two
uniforms per step so the environment stream advances identically no matter
what the agent does.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError
from .generative import Action


@dataclass(frozen=True)
class WorldState:
    food_present: bool = False
    friend_present: bool = False
    explore_pending: bool = False


@dataclass(frozen=True)
class ActionOutcome:
    action: Action
    consumed_food: bool = False
    consumed_friend: bool = False

    def __post_init__(self) -> None:
        if self.consumed_food and self.action != Action.EAT:
            raise DomainError("only eat can consume food")
        if self.consumed_friend and self.action != Action.PLAY:
            raise DomainError("only play can consume a friend visit")

    @property
    def succeeded(self) -> bool:
        """Explore always goes through; eat/play need their resource."""
        return self.consumed_food or self.consumed_friend or self.action == Action.EXPLORE


def step_generate(
    w: WorldState, rng: np.random.Generator, resource_probability: float = 0.2
) -> WorldState:
    """Roll fresh resources; an armed explore guarantee trumps the dice."""
    if not 0.0 <= resource_probability <= 1.0:
        raise DomainError(f"resource probability must be in [0, 1], got {resource_probability!r}")
    # Drawn unconditionally: the stream must not depend on agent behaviour.
    food_draw, friend_draw = rng.random(2)
    if w.explore_pending:
        return WorldState(food_present=True, friend_present=True, explore_pending=False)
    return WorldState(
        food_present=bool(food_draw < resource_probability),
        friend_present=bool(friend_draw < resource_probability),
        explore_pending=False,
    )


def execute_action(w: WorldState, action: Action) -> tuple[WorldState, ActionOutcome]:
    """Consume a present resource, or arm the explore guarantee for t+1."""
    if action == Action.EAT and w.food_present:
        return replace(w, food_present=False), ActionOutcome(action, consumed_food=True)
    if action == Action.PLAY and w.friend_present:
        return replace(w, friend_present=False), ActionOutcome(action, consumed_friend=True)
    if action == Action.EXPLORE:
        return replace(w, explore_pending=True), ActionOutcome(action)
    return w, ActionOutcome(action)
