"""The agent's body: two decaying internal variables, consumption, death.

Energy is lethal at zero; socialness only drives loneliness signals and the
comfort metric. Values live in [0, 1]; set points in [0.05, 0.99].
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .environment import ActionOutcome
from .errors import DeadAgent, DomainError

SET_POINT_MIN = 0.05
SET_POINT_MAX = 0.99


@dataclass(frozen=True)
class InternalVariable:
    value: float
    set_point: float
    decay: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise DomainError(f"value must be in [0, 1], got {self.value!r}")
        if not SET_POINT_MIN <= self.set_point <= SET_POINT_MAX:
            raise DomainError(f"set point must be in [0.05, 0.99], got {self.set_point!r}")
        if self.decay < 0:
            raise DomainError(f"decay must be >= 0, got {self.decay!r}")


@dataclass(frozen=True)
class PhysiologyState:
    energy: InternalVariable
    socialness: InternalVariable
    alive: bool = True


def initial_physiology(
    set_point_energy: float = 0.7,
    set_point_social: float = 0.7,
    decay: float = 0.03,
) -> PhysiologyState:
    """Both variables start at their set points."""
    return PhysiologyState(
        energy=InternalVariable(value=set_point_energy, set_point=set_point_energy, decay=decay),
        socialness=InternalVariable(value=set_point_social, set_point=set_point_social, decay=decay),
    )


def decay_step(p: PhysiologyState) -> PhysiologyState:
    """Subtract each variable's decay, floor at 0; zero energy kills."""
    if not p.alive:
        raise DeadAgent("decay_step on a dead agent")
    energy_value = max(p.energy.value - p.energy.decay, 0.0)
    social_value = max(p.socialness.value - p.socialness.decay, 0.0)
    return PhysiologyState(
        energy=replace(p.energy, value=energy_value),
        socialness=replace(p.socialness, value=social_value),
        alive=energy_value > 0.0,
    )


def apply_consumption(
    p: PhysiologyState, outcome: ActionOutcome, gain: float = 0.4
) -> PhysiologyState:
    """Successful eat/play adds `gain` to its variable, capped at 1.0."""
    if not p.alive:
        raise DeadAgent("apply_consumption on a dead agent")
    energy = p.energy
    socialness = p.socialness
    if outcome.consumed_food:
        energy = replace(energy, value=min(energy.value + gain, 1.0))
    if outcome.consumed_friend:
        socialness = replace(socialness, value=min(socialness.value + gain, 1.0))
    return PhysiologyState(energy=energy, socialness=socialness, alive=p.alive)


def interoceptive_signals(p: PhysiologyState) -> tuple[int, int]:
    """(tummy, lonely) deficit bits; strict below-set-point comparison."""
    tummy = int(p.energy.value < p.energy.set_point)
    lonely = int(p.socialness.value < p.socialness.set_point)
    return tummy, lonely


def with_energy_set_point(p: PhysiologyState, set_point: float) -> PhysiologyState:
    """Allostasis effector: only energy's set point ever moves."""
    return replace(p, energy=replace(p.energy, set_point=set_point))
