import numpy as np
import pytest

from rewardlab.environments import (ChainEnv, GridWorldEnv, PointMassEnv, build_chain, chain_from_preset,
                                    list_presets, make_env, preset_settings, rollout_values, step, true_values)
from rewardlab.environments.chain import RIGHT
from rewardlab.errors import InvalidParameterError, TerminalStepError, UnknownPresetError


class TestChain:
    def test_build_chain_topology(self, chain3):
        assert chain3.num_states == 4
        assert chain3.terminal_state == 3
        assert chain3.expected_reward == pytest.approx(0.5)

    def test_ten_state_variant(self):
        chain = build_chain(10, 5.0, 0.5, 1.0)
        assert chain.num_states == 11
        assert chain.reward_variance == pytest.approx(6.25)

    @pytest.mark.parametrize("steps,prob", [(0, 0.5), (-2, 0.5), (3, 1.5), (3, -0.1)])
    def test_build_chain_rejects_bad_arguments(self, steps, prob):
        with pytest.raises(InvalidParameterError):
            build_chain(steps, 1.0, prob, 1.0)

    def test_zero_probability_chain_pays_nothing(self, rng):
        env = ChainEnv(build_chain(3, 1.0, 0.0, 1.0), rng)
        rewards = []
        for _ in range(50):
            env.reset()
            while not env.done:
                rewards.append(env.step(RIGHT).reward_true)
        assert rewards == [0.0] * 150

    def test_true_values_closed_form(self, chain3):
        np.testing.assert_allclose(true_values(chain3), [1.5, 1.0, 0.5, 0.0])
        np.testing.assert_allclose(true_values(build_chain(3, 1.0, 0.0, 1.0)), [0, 0, 0, 0])
        np.testing.assert_allclose(true_values(build_chain(2, 2.0, 0.5, 0.5)), [1.5, 1.0, 0.0])

    def test_true_values_agree_with_rollout_oracle(self):
        chain = build_chain(5, 5.0, 0.5, 0.9)
        means, errors = rollout_values(chain, 200_000, np.random.default_rng(7))
        truth = true_values(chain)
        assert np.all(np.abs(means - truth)[:-1] <= 3 * errors[:-1])

    def test_step_with_certain_reward(self):
        env = ChainEnv(build_chain(3, 1.0, 1.0, 1.0), np.random.default_rng(0))
        t = step(env, RIGHT, env.rng)
        assert (t.state, t.next_state, t.reward_true, t.terminal) == (0, 1, 1.0, False)
        assert t.reward_observed == t.reward_true

    def test_last_step_is_terminal_and_episode_length_is_fixed(self, chain5_plus5):
        for seed in range(5):
            env = ChainEnv(chain5_plus5, np.random.default_rng(seed))
            transitions = []
            while not env.done:
                transitions.append(env.step(RIGHT))
            assert len(transitions) == 5
            assert transitions[-1].terminal
            assert [t.state for t in transitions] == [0, 1, 2, 3, 4]
            assert all(t.reward_true in (0.0, 5.0) for t in transitions)

    def test_stepping_terminal_env_is_an_error(self, chain3, rng):
        env = ChainEnv(chain3, rng)
        while not env.done:
            env.step(RIGHT)
        with pytest.raises(TerminalStepError):
            env.step(RIGHT)

    def test_per_state_reward_mean_converges(self, chain5_plus5):
        env = ChainEnv(chain5_plus5, np.random.default_rng(3))
        episodes = 20_000
        totals = np.zeros(5)
        for _ in range(episodes):
            env.reset()
            while not env.done:
                t = env.step(RIGHT)
                totals[t.state] += t.reward_true
        se = np.sqrt(chain5_plus5.reward_variance / episodes)
        assert np.all(np.abs(totals / episodes - 2.5) <= 4 * se)


class TestGridWorld:
    def test_goal_is_terminal_with_reward(self):
        env = GridWorldEnv(size=2, max_steps=10, rng=np.random.default_rng(0))
        env.step(3)  # right
        t = env.step(1)  # down
        assert t.terminal and t.reward_true == 1.0 and env.done

    def test_walls_keep_agent_in_place(self):
        env = GridWorldEnv(size=3, rng=np.random.default_rng(0))
        t = env.step(0)  # up from the top-left corner
        assert t.next_state == 0 and t.reward_true == 0.0

    def test_truncation_is_not_terminal(self):
        env = GridWorldEnv(size=5, max_steps=3, rng=np.random.default_rng(0))
        transitions = [env.step(2) for _ in range(3)]
        assert transitions[-1].truncated and not transitions[-1].terminal
        assert env.done

    def test_encode_is_one_hot(self):
        env = GridWorldEnv(size=3)
        np.testing.assert_array_equal(env.encode(4), np.eye(9)[4])


class TestPointMass:
    def test_origin_with_zero_action_pays_nothing(self):
        env = PointMassEnv(rng=np.random.default_rng(0))
        env.reset(position=0.0)
        t = env.step(np.array([0.0]))
        assert t.reward_true == 0.0

    def test_reward_depends_on_action(self):
        env = PointMassEnv(action_cost_coeff=0.5, rng=np.random.default_rng(0))
        env.reset(position=0.5)
        still = env.step(np.array([0.0])).reward_true
        env.reset(position=0.5)
        pushed = env.step(np.array([1.0])).reward_true
        assert still == pytest.approx(-0.25)
        assert pushed == pytest.approx(-0.25 - 0.5)

    def test_dynamics_clip_the_force(self):
        env = PointMassEnv(rng=np.random.default_rng(0))
        env.reset(position=0.0)
        t = env.step(np.array([3.0]))
        np.testing.assert_allclose(t.next_state, [0.1, 0.1])
        np.testing.assert_allclose(t.action, [1.0])

    def test_horizon_truncates(self):
        env = PointMassEnv(horizon=4, rng=np.random.default_rng(0))
        env.reset()
        flags = [env.step(np.array([0.0])).truncated for _ in range(4)]
        assert flags == [False, False, False, True]


class TestPresets:
    def test_known_presets(self):
        assert list_presets() == ["chain10", "chain5", "grid5", "pointmass"]

    def test_unknown_preset(self):
        with pytest.raises(UnknownPresetError):
            make_env("cartpole")

    def test_overrides_and_aliases(self):
        chain = chain_from_preset("chain5", reward=2.0, prob=0.25)
        assert (chain.reward_value, chain.reward_prob) == (2.0, 0.25)
        assert preset_settings("chain5", reward_value=None)["reward_value"] == 1.0

    def test_unknown_override_is_rejected(self):
        with pytest.raises(InvalidParameterError):
            make_env("grid5", horizon=10)

    def test_make_env_kinds(self):
        assert isinstance(make_env("chain10"), ChainEnv)
        assert isinstance(make_env("grid5"), GridWorldEnv)
        assert isinstance(make_env("pointmass", action_cost=0.0), PointMassEnv)
