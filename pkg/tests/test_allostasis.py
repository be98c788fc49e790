"""Unit tests for cortisol secretion and its two effectors."""
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cortisim import (
    Categorical,
    CortisolState,
    DomainError,
    adjust_set_point,
    modulated_learning_rate,
    secrete,
)


def q_u(*probs):
    return Categorical(np.asarray(probs, dtype=float))


class TestCortisolState:
    def test_defaults(self):
        c = CortisolState()
        assert c.level == 0.0 and c.prev_surprisal == 0.0 and c.prev_level == 0.0

    def test_ranges_enforced(self):
        with pytest.raises(DomainError):
            CortisolState(level=1.2)
        with pytest.raises(DomainError):
            CortisolState(prev_surprisal=-0.1)
        with pytest.raises(DomainError):
            CortisolState(prev_level=-0.2)


class TestSecretion:
    def test_confident_and_unsurprised_holds_level(self):
        c = CortisolState(level=0.3, prev_surprisal=1.0)
        after = secrete(c, 1.0, q_u(1.0, 0.0, 0.0))
        assert after.level == 0.3
        assert after.prev_level == 0.3
        assert after.prev_surprisal == 1.0

    def test_arithmetic_with_upper_clamp(self):
        # 0.1 + (1.5 - 1.0) + (1 - 0.45) = 1.15, clamped to 1.
        c = CortisolState(level=0.1, prev_surprisal=1.0)
        after = secrete(c, 1.5, q_u(0.6, 0.25, 0.15))
        assert after.level == 1.0
        assert after.prev_level == 0.1

    def test_maximal_indecision_saturates(self):
        c = CortisolState(level=0.0, prev_surprisal=2.0)
        after = secrete(c, 2.0, q_u(1 / 3, 1 / 3, 1 / 3))
        assert after.level == 1.0

    def test_falling_surprisal_lowers_level(self):
        c = CortisolState(level=0.8, prev_surprisal=3.0)
        after = secrete(c, 1.0, q_u(1.0, 0.0, 0.0))
        # increment = -2.0 + 0, clamped at the floor.
        assert after.level == 0.0

    def test_exact_increment_formula(self):
        c = CortisolState(level=0.1, prev_surprisal=0.7)
        after = secrete(c, 0.8, q_u(0.5, 0.3, 0.2))
        assert after.level == 0.1 + (0.8 - 0.7) + (1.0 - 0.3)

    def test_negative_surprisal_rejected(self):
        with pytest.raises(DomainError):
            secrete(CortisolState(), -0.1, q_u(1.0, 0.0, 0.0))

    def test_monotone_in_posterior_spread(self):
        # Holding the surprisal delta fixed, a wider spread secretes less.
        base = CortisolState(level=0.2, prev_surprisal=1.0)
        levels = [
            secrete(base, 1.0, q).level
            for q in (q_u(1 / 3, 1 / 3, 1 / 3), q_u(0.5, 0.3, 0.2), q_u(0.9, 0.05, 0.05), q_u(1.0, 0.0, 0.0))
        ]
        assert all(a >= b for a, b in zip(levels, levels[1:]))

    @given(
        st.lists(st.floats(0.0, 6.0), min_size=1, max_size=60),
        st.integers(0, 2**31 - 1),
    )
    def test_level_bounded_under_random_streams(self, surprisals, seed):
        rng = np.random.default_rng(seed)
        c = CortisolState()
        for s in surprisals:
            probs = rng.random(3) + 1e-9
            c = secrete(c, s, Categorical(probs / probs.sum()))
            assert 0.0 <= c.level <= 1.0


class TestSetPointAdjustment:
    def test_flat_level_is_identity(self):
        c = CortisolState(level=0.4, prev_level=0.4)
        assert adjust_set_point(0.7, c) == 0.7

    def test_rising_level_lowers_target(self):
        c = CortisolState(level=0.5, prev_level=0.4)
        assert adjust_set_point(0.7, c) == pytest.approx(0.7 / 1.1)

    def test_falling_level_raises_target(self):
        c = CortisolState(level=0.3, prev_level=0.4)
        assert adjust_set_point(0.7, c) == pytest.approx(0.7 / 0.9)

    def test_clamped_to_set_point_range(self):
        rising = CortisolState(level=1.0, prev_level=0.0)
        falling = CortisolState(level=0.0, prev_level=1.0)
        assert adjust_set_point(0.05, rising) == 0.05
        assert adjust_set_point(0.99, falling) == 0.99

    def test_full_negative_swing_stays_finite(self):
        # Delta -1 is floored at -0.999, so the denominator stays positive.
        c = CortisolState(level=0.0, prev_level=1.0)
        assert adjust_set_point(0.0005 * 100, c) == 0.99

    @given(st.floats(0.05, 0.99), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_output_always_in_range(self, d_prev, level, prev_level):
        c = CortisolState(level=level, prev_level=prev_level)
        out = adjust_set_point(d_prev, c)
        assert 0.05 <= out <= 0.99


class TestLearningRateModulation:
    def test_zero_level_passes_base_rate(self):
        assert modulated_learning_rate(0.05, CortisolState(level=0.0)) == 0.05

    def test_saturated_level_silences_learning(self):
        assert modulated_learning_rate(0.05, CortisolState(level=1.0)) == 0.0

    def test_arithmetic(self):
        out = modulated_learning_rate(0.05, CortisolState(level=0.4))
        assert out == 0.05 * (1.0 - 0.4)
        assert out == pytest.approx(0.03)

    def test_negative_base_rejected(self):
        with pytest.raises(DomainError):
            modulated_learning_rate(-0.05, CortisolState())

    def test_frozen_cortisol_is_ablation_consistent(self):
        # At level 0 the two effectors reduce to identity and the base rate.
        c = CortisolState(level=0.0, prev_level=0.0)
        assert adjust_set_point(0.7, c) == 0.7
        assert modulated_learning_rate(0.05, c) == 0.05
