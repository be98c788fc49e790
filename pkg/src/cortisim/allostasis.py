"""Cortisol dynamics and its two allostatic effectors.

The level integrates surprisal increases and action indecision, clamped to
[0, 1]. Its effectors divide energy's set point by (1 + delta CT) and scale
the transition learning rate by (1 - CT). The level is tracked in every
model variant; the variant gates only decide whether the effectors act.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .physiology import SET_POINT_MAX, SET_POINT_MIN
from .probability import Categorical

# Keeps the set-point denominator strictly positive even at the clamp edges.
DELTA_FLOOR = -0.999


@dataclass(frozen=True)
class CortisolState:
    level: float = 0.0
    prev_surprisal: float = 0.0
    prev_level: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.level <= 1.0:
            raise DomainError(f"cortisol level must be in [0, 1], got {self.level!r}")
        if self.prev_surprisal < 0:
            raise DomainError(f"surprisal must be >= 0, got {self.prev_surprisal!r}")
        if not 0.0 <= self.prev_level <= 1.0:
            raise DomainError(f"cortisol level must be in [0, 1], got {self.prev_level!r}")


def secrete(c: CortisolState, s_t: float, q_u: Categorical) -> CortisolState:
    """One secretion step.

    level += (surprisal rise since last step) + (1 - spread of the action
    posterior), then clamp to [0, 1]. A torn posterior (small spread) and
    rising surprisal both push the level up.
    """
    if s_t < 0:
        raise DomainError(f"surprisal must be >= 0, got {s_t!r}")
    increment = (s_t - c.prev_surprisal) + (1.0 - q_u.spread())
    level = min(max(c.level + increment, 0.0), 1.0)
    return CortisolState(level=level, prev_surprisal=s_t, prev_level=c.level)


def adjust_set_point(d_prev: float, c: CortisolState) -> float:
    """Divide the energy set point by (1 + delta CT), clamped to [0.05, 0.99].

    Rising cortisol lowers the target; falling cortisol raises it. The delta
    is floored at -0.999 so the denominator stays positive.
    """
    delta = max(c.level - c.prev_level, DELTA_FLOOR)
    adjusted = d_prev / (1.0 + delta)
    return min(max(adjusted, SET_POINT_MIN), SET_POINT_MAX)


def modulated_learning_rate(lambda_base: float, c: CortisolState) -> float:
    """lambda_base * (1 - level): full rate at zero cortisol, zero at saturation."""
    if lambda_base < 0:
        raise DomainError(f"lambda_base must be >= 0, got {lambda_base!r}")
    return lambda_base * (1.0 - c.level)
