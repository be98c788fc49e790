"""Unit tests for the step loop: gating, determinism, the hand-stepped oracle."""
import numpy as np
import pytest

from cortisim import (
    Action,
    ConfigError,
    DeadAgent,
    ExperimentConfig,
    ModelVariant,
    PRESETS,
    run_episode,
    run_step,
)
from cortisim.simulation import initial_run_state, record_to_row

ORACLE_TOL = 1e-12


def episode(variant="D", seed=0, **kwargs):
    config = ExperimentConfig(variant=variant, **kwargs)
    return run_episode(config, PRESETS[variant], seed)


class TestVariants:
    def test_preset_gates(self):
        assert PRESETS["A"] == ModelVariant(False, False, False)
        assert PRESETS["B"] == ModelVariant(False, True, False)
        assert PRESETS["C"] == ModelVariant(True, False, False)
        assert PRESETS["D"] == ModelVariant(True, True, True)

    def test_modulation_requires_learning(self):
        with pytest.raises(ConfigError):
            ModelVariant(allostatic_setpoint=True, learning=False,
                         cortisol_modulates_learning=True)


class TestDeterminism:
    def test_same_seed_same_trace(self):
        a = episode("D", seed=3, steps=150)
        b = episode("D", seed=3, steps=150)
        assert len(a) == len(b)
        for ra, rb in zip(a, b):
            assert record_to_row(ra) == record_to_row(rb)

    def test_different_seeds_differ(self):
        a = episode("D", seed=3, steps=150)
        b = episode("D", seed=4, steps=150)
        assert [record_to_row(r) for r in a] != [record_to_row(r) for r in b]

    def test_matched_environment_across_variants(self):
        # Same seed gives every variant the same resource dice; presence can
        # still differ where exploration forces resources in.
        traces = {v: episode(v, seed=2, steps=80) for v in "ABCD"}
        explore_free = set(range(80))
        for trace in traces.values():
            for r in trace:
                if r.action == Action.EXPLORE and r.t + 1 in explore_free:
                    explore_free.discard(r.t + 1)
        for t in sorted(explore_free)[:40]:
            bits = {
                (trace[t].obs.food, trace[t].obs.friend)
                for trace in traces.values()
                if len(trace) > t
            }
            assert len(bits) <= 1


class TestGateSoundness:
    def test_variant_a_never_moves_set_point_or_model(self):
        config = ExperimentConfig(variant="A", steps=200)
        run = initial_run_state(config, 5)
        b_before = run.model.transitions.copy()
        records = []
        for _ in range(200):
            r = run_step(run, PRESETS["A"], config)
            records.append(r)
            if not r.alive:
                break
        assert all(r.d_energy == 0.7 for r in records)
        assert all(r.lr_effective == 0.0 for r in records)
        assert np.array_equal(run.model.transitions, b_before)
        # The hormone is still tracked for the log.
        assert any(r.cortisol > 0 for r in records)

    def test_variant_b_learns_at_base_rate(self):
        config = ExperimentConfig(variant="B", steps=120)
        run = initial_run_state(config, 5)
        b_before = run.model.transitions.copy()
        records = []
        for _ in range(120):
            r = run_step(run, PRESETS["B"], config)
            records.append(r)
            if not r.alive:
                break
        assert records[0].lr_effective == 0.0  # nothing to credit at t=0
        assert all(r.lr_effective == config.learning_rate for r in records[1:])
        assert all(r.d_energy == 0.7 for r in records)
        assert not np.array_equal(run.model.transitions, b_before)

    def test_variant_c_moves_set_point_but_not_model(self):
        config = ExperimentConfig(variant="C", steps=120)
        run = initial_run_state(config, 5)
        b_before = run.model.transitions.copy()
        records = []
        for _ in range(120):
            r = run_step(run, PRESETS["C"], config)
            records.append(r)
            if not r.alive:
                break
        assert any(r.d_energy != 0.7 for r in records)
        assert all(r.lr_effective == 0.0 for r in records)
        assert np.array_equal(run.model.transitions, b_before)

    def test_variant_d_throttles_learning_by_cortisol(self):
        trace = episode("D", seed=5, steps=120)
        assert trace[0].lr_effective == 0.0
        for r in trace[1:]:
            assert r.lr_effective == pytest.approx(0.05 * (1.0 - r.cortisol), abs=1e-12)


class TestForcedActions:
    def test_explore_only_starves_on_schedule(self):
        # 0.70 at decay 0.03: 23 survivable decrements, floor on the 24th.
        for variant in "ABCD":
            trace = episode(variant, seed=9, forced_action="explore")
            assert len(trace) == 24
            assert all(r.energy > 0 for r in trace[:-1])
            assert trace[-1].energy == 0.0
            assert not trace[-1].alive
            assert all(r.action == Action.EXPLORE for r in trace)

    def test_explore_guarantee_visible_in_next_observation(self):
        trace = episode("A", seed=9, forced_action="explore")
        for r in trace[1:]:
            assert r.obs.food == 1 and r.obs.friend == 1

    def test_forced_eat_consumes_exactly_when_food_shows(self):
        trace = episode("A", seed=1, steps=100, forced_action="eat")
        for r in trace:
            assert r.action == Action.EAT
            assert r.action_succeeded == bool(r.obs.food)

    def test_dead_agent_rejected(self):
        config = ExperimentConfig(variant="A", forced_action="explore")
        run = initial_run_state(config, 0)
        for _ in range(24):
            run_step(run, PRESETS["A"], config)
        with pytest.raises(DeadAgent):
            run_step(run, PRESETS["A"], config)


class TestRecordContracts:
    def test_surprisal_delta_definition(self):
        trace = episode("D", seed=7, steps=150)
        assert trace[0].surprisal_delta == 0.0
        for prev, curr in zip(trace, trace[1:]):
            assert curr.surprisal_delta == pytest.approx(
                curr.surprisal - prev.surprisal, abs=1e-12
            )

    def test_composite_invariants_hold_everywhere(self):
        for variant in "ABCD":
            for seed in (0, 1, 2):
                for r in episode(variant, seed=seed, steps=150):
                    assert 0.0 <= r.cortisol <= 1.0
                    assert 0.05 <= r.d_energy <= 0.99
                    assert 0.0 <= r.energy <= 1.0
                    assert 0.0 <= r.socialness <= 1.0
                    assert r.surprisal >= 0.0
                    assert r.lr_effective >= 0.0
                    assert r.alive == (r.energy > 0.0)
                    assert abs(float(np.sum(r.q_s.probs)) - 1.0) <= 1e-9
                    assert abs(float(np.sum(r.q_u.probs)) - 1.0) <= 1e-9

    def test_trace_row_shape(self):
        trace = episode("D", seed=0, steps=5)
        row = record_to_row(trace[0])
        assert len(row) == 21
        assert row[0] == 0
        assert row[14] in ("eat", "play", "explore")


class TestHandSteppedOracle:
    """Two variant-C steps at seed 11, checked stage by stage.

    The expected values restate the default arrays numerically and walk the
    nine stages with raw numpy, independently of the engine's code paths.
    Spot digits were additionally frozen from a separate script run.
    """

    def _oracle_two_steps(self):
        hi, lo, ex = 0.88, 0.12, 0.8
        a = np.full((4, 2, 3), 0.5)
        a[0, :, 0] = (lo, hi)
        a[0, :, 2] = (hi, lo)
        a[1, :, 1] = (lo, hi)
        a[1, :, 2] = (hi, lo)
        a[2, :, 0] = (1 - ex, ex)
        a[3, :, 1] = (1 - ex, ex)
        b = np.array([
            [[0.25, 0.10, 0.15], [0.05, 0.80, 0.05], [0.70, 0.10, 0.80]],
            [[0.80, 0.05, 0.05], [0.10, 0.15, 0.15], [0.10, 0.80, 0.80]],
            [[0.77, 0.115, 0.115], [0.115, 0.77, 0.115], [0.115, 0.115, 0.77]],
        ])
        c = np.array([[8.0, 0.0], [7.8, 0.0], [0.0, 0.0], [0.0, 0.0]])

        def softmax(w):
            e = np.exp(w - np.max(w))
            return e / e.sum()

        def g_of(q, u):
            qn = b[u] @ q
            risk = amb = 0.0
            for m in range(4):
                pred = a[m] @ qn
                goal = softmax(c[m])
                risk += sum(p * np.log(p / g) for p, g in zip(pred, goal) if p > 0)
                for s in range(3):
                    col = a[m][:, s]
                    amb += qn[s] * -sum(x * np.log(x) for x in col if x > 0)
            return risk + amb

        env = np.random.default_rng(np.random.SeedSequence(11).spawn(2)[0])
        energy = social = d_energy = 0.7
        ct = prev_s = 0.0
        belief = None
        last_action = None
        out = []
        for t in range(2):
            food_draw, friend_draw = env.random(2)
            obs = (
                int(energy < d_energy), int(social < 0.7),
                int(food_draw < 0.2), int(friend_draw < 0.2),
            )
            prior = np.full(3, 1 / 3) if belief is None else b[last_action] @ belief
            lik = np.ones(3)
            for m, bit in enumerate(obs):
                lik *= a[m, bit, :]
            evidence = float(lik @ prior)
            post = lik * prior / evidence
            s_t = -np.log(max(evidence, 1e-16))
            q_u = softmax(-12.0 * np.array([g_of(post, u) for u in range(3)]))
            if t == 0:
                prev_s = s_t
            delta_s = s_t - prev_s
            new_ct = min(max(ct + delta_s + (1.0 - (q_u.max() - q_u.min())), 0.0), 1.0)
            d_energy = min(max(d_energy / (1.0 + (new_ct - ct)), 0.05), 0.99)
            ct, prev_s = new_ct, s_t
            action = int(np.argmax(q_u))
            if action == 0 and obs[2]:
                energy = min(energy + 0.4, 1.0)
            if action == 1 and obs[3]:
                social = min(social + 0.4, 1.0)
            energy = max(energy - 0.03, 0.0)
            social = max(social - 0.03, 0.0)
            out.append(dict(
                obs=obs, q_s=post, s_t=s_t, delta_s=delta_s, q_u=q_u,
                ct=ct, d_energy=d_energy, action=action,
                energy=energy, social=social,
            ))
            belief, last_action = post, action
        return out

    def test_engine_matches_oracle(self):
        trace = episode("C", seed=11, steps=2)
        for record, expected in zip(trace, self._oracle_two_steps()):
            assert record.obs.as_tuple() == expected["obs"]
            assert np.allclose(record.q_s.probs, expected["q_s"], atol=ORACLE_TOL)
            assert record.surprisal == pytest.approx(expected["s_t"], abs=ORACLE_TOL)
            assert record.surprisal_delta == pytest.approx(expected["delta_s"], abs=ORACLE_TOL)
            assert np.allclose(record.q_u.probs, expected["q_u"], atol=ORACLE_TOL)
            assert record.cortisol == pytest.approx(expected["ct"], abs=ORACLE_TOL)
            assert record.d_energy == pytest.approx(expected["d_energy"], abs=ORACLE_TOL)
            assert int(record.action) == expected["action"]
            assert record.energy == pytest.approx(expected["energy"], abs=ORACLE_TOL)
            assert record.socialness == pytest.approx(expected["social"], abs=ORACLE_TOL)

    def test_frozen_spot_digits(self):
        trace = episode("C", seed=11, steps=2)
        assert trace[0].surprisal == pytest.approx(2.680435034069237, abs=1e-12)
        assert trace[0].cortisol == pytest.approx(0.42282013662533346, abs=1e-12)
        assert trace[0].d_energy == pytest.approx(0.49198066711388455, abs=1e-12)
        assert trace[1].obs.as_tuple() == (0, 1, 0, 0)
        assert trace[1].cortisol == 1.0
        assert trace[1].d_energy == pytest.approx(0.31193694425010055, abs=1e-12)
        assert trace[1].action == Action.PLAY
