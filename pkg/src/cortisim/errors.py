"""Exception types shared across the engine.

Names mirror the failure they signal, not where they are raised.
"""


class SimulationError(Exception):
    """Base class for every error raised by this package."""


class ZeroMass(SimulationError):
    """A vector with zero total mass cannot be normalized."""


class NegativeEntry(SimulationError):
    """Probability-like input contained a negative entry."""


class ZeroEvidence(SimulationError):
    """Bayes update where likelihood and prior share no support."""


class AbsoluteContinuity(SimulationError):
    """KL(p || q) requested where q(i) = 0 but p(i) > 0."""


class DomainError(SimulationError):
    """Scalar input outside an operation's domain (e.g. surprisal of p <= 0)."""


class DeadAgent(SimulationError):
    """A step was requested for an agent whose energy already hit zero."""


class ConfigError(SimulationError):
    """Invalid experiment configuration value or file."""


class EmptyTrace(SimulationError):
    """Metrics requested for a trace with no steps."""


class FilterExhausted(SimulationError):
    """Seed attempts hit the cap before enough runs passed the validity filter."""
