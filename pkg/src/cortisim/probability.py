"""Categorical probability primitives.

Normalization, softmax, Bayes updates, KL divergence, entropy, and
surprisal over plain float64 vectors. Everything here is a pure function;
the only state is the `Categorical` value type.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AbsoluteContinuity,
    DomainError,
    NegativeEntry,
    ZeroEvidence,
    ZeroMass,
)

# Floor applied to any probability entering a logarithm.
PROB_FLOOR = 1e-16
# Absolute tolerance for "sums to one" checks.
NORM_TOL = 1e-9
# Absolute tolerance for algebraic identities in tests.
ALGEBRA_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Categorical:
    """A normalized probability vector.

    Invariants (checked on construction): every entry >= 0 and the entries
    sum to 1 within ``NORM_TOL``.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", probs)
        if probs.ndim != 1 or probs.size < 1:
            raise DomainError("Categorical requires a 1-d vector with at least one entry")
        if np.any(probs < 0):
            raise NegativeEntry(f"negative probability in {probs!r}")
        total = float(probs.sum())
        if abs(total - 1.0) > NORM_TOL:
            raise DomainError(f"probabilities sum to {total!r}, expected 1")

    @property
    def dim(self) -> int:
        return int(self.probs.size)

    def spread(self) -> float:
        """max - min of the entries; 1 means fully decided, 0 fully torn."""
        return float(self.probs.max() - self.probs.min())


def normalize(v) -> Categorical:
    """Scale a nonnegative vector to sum to one."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise DomainError("normalize requires a 1-d vector with at least one entry")
    if np.any(arr < 0):
        raise NegativeEntry(f"negative entry in {arr!r}")
    total = float(arr.sum())
    if total == 0.0:
        raise ZeroMass("cannot normalize a zero-mass vector")
    return Categorical(arr / total)


def softmax(w) -> Categorical:
    """exp(w) normalized, computed stably via max-subtraction."""
    arr = np.asarray(w, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise DomainError("softmax requires a 1-d vector with at least one entry")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"softmax requires finite scores, got {arr!r}")
    shifted = np.exp(arr - arr.max())
    return Categorical(shifted / shifted.sum())


def bayes_posterior(prior: Categorical, likelihood) -> Categorical:
    """posterior(s) proportional to likelihood(s) * prior(s)."""
    lik = np.asarray(likelihood, dtype=np.float64)
    if lik.shape != prior.probs.shape:
        raise DomainError("prior and likelihood dimensions differ")
    if np.any(lik < 0):
        raise NegativeEntry(f"negative likelihood in {lik!r}")
    joint = lik * prior.probs
    evidence = float(joint.sum())
    if evidence == 0.0:
        raise ZeroEvidence("likelihood and prior share no support")
    return Categorical(joint / evidence)


def kl_divergence(p: Categorical, q: Categorical) -> float:
    """KL(p || q) in nats, with the 0 * ln(0/q) := 0 convention."""
    if p.dim != q.dim:
        raise DomainError("KL divergence requires equal dimensions")
    support = p.probs > 0
    if np.any(q.probs[support] == 0):
        raise AbsoluteContinuity("q has zero mass where p has support")
    ps = p.probs[support]
    return float(np.sum(ps * np.log(ps / q.probs[support])))


def entropy(p: Categorical) -> float:
    """Shannon entropy in nats, with 0 * ln 0 := 0."""
    ps = p.probs[p.probs > 0]
    return float(-np.sum(ps * np.log(ps)))


def surprisal(p_obs: float) -> float:
    """-ln(p_obs) for p_obs in (0, 1]. Callers floor probabilities first."""
    if not 0.0 < p_obs <= 1.0:
        raise DomainError(f"surprisal domain is (0, 1], got {p_obs!r}")
    return float(-np.log(p_obs))
