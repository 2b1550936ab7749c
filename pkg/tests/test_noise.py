import numpy as np
import pytest

from rewardlab.environments import ChainEnv, PointMassEnv, build_chain
from rewardlab.environments.chain import RIGHT
from rewardlab.errors import ConfigError, InvalidParameterError
from rewardlab.noise import (NoiseKind, NoiseModel, NoisyEnvironment, corrupt, corrupt_many, corrupted_variance,
                             expected_corrupted, parse_noise)


class TestParse:
    @pytest.mark.parametrize("text", [None, "", "none", "identity"])
    def test_identity_spellings(self, text):
        assert parse_noise(text).is_identity

    def test_kinds_and_levels(self):
        assert parse_noise("gaussian:0.3") == NoiseModel.gaussian(0.3)
        assert parse_noise("sparse:0.9") == NoiseModel.sparse(0.9)
        model = parse_noise("uniform:0.3:-2:2")
        assert (model.kind, model.epsilon, model.uniform_low, model.uniform_high) == (NoiseKind.UNIFORM, 0.3, -2.0, 2.0)

    def test_label(self):
        assert NoiseModel.identity().label() == "none"
        assert NoiseModel.uniform(0.0).label() == "uniform:0"
        assert NoiseModel.gaussian(0.3).label() == "gaussian:0.3"
        assert NoiseModel.uniform(0.3).label() == "uniform:0.3"
        assert NoiseModel.uniform(0.3, 0.0, 2.0).label() == "uniform:0.3:0:2"

    @pytest.mark.parametrize("text", ["laplace:0.3", "sparse:1.5", "gaussian:-1", "uniform:abc", "uniform:0.5:3",
                                      "gaussian:0.1:2", "sparse:0.5:0:1", "uniform:0.1:-1:1:2"])
    def test_bad_specs(self, text):
        with pytest.raises(InvalidParameterError):
            parse_noise(text)

    def test_extra_parts_are_a_config_error(self):
        with pytest.raises(ConfigError, match="3 parts"):
            parse_noise("uniform:0.5:3")

    def test_reversed_uniform_bounds(self):
        with pytest.raises(InvalidParameterError):
            NoiseModel.uniform(0.2, 1.0, -1.0)


class TestCorrupt:
    def test_gaussian_zero_is_identity(self, rng):
        assert corrupt(NoiseModel.gaussian(0.0), 3.2, rng) == 3.2

    def test_certain_sparsification(self, rng):
        assert corrupt(NoiseModel.sparse(1.0), 7.0, rng) == 0.0

    def test_zero_epsilon_keeps_reward(self, rng):
        np.testing.assert_array_equal(corrupt_many(NoiseModel.uniform(0.0), [1.0, -4.0, 2.5], rng), [1.0, -4.0, 2.5])

    def test_uniform_replacement_mean(self, rng):
        draws = corrupt_many(NoiseModel.uniform(0.3), np.ones(1_000_000), rng)
        se = draws.std(ddof=1) / np.sqrt(draws.size)
        assert abs(draws.mean() - 0.7) <= 3 * se

    def test_scalar_and_vector_paths_agree_in_distribution(self, rng):
        model = NoiseModel.sparse(0.4)
        scalar = np.array([corrupt(model, 2.0, rng) for _ in range(20_000)])
        vector = corrupt_many(model, np.full(20_000, 2.0), rng)
        assert scalar.mean() == pytest.approx(vector.mean(), abs=0.06)


class TestMoments:
    def test_expected_corrupted(self):
        assert expected_corrupted(NoiseModel.sparse(0.9), 2.0) == pytest.approx(0.2)
        assert expected_corrupted(NoiseModel.gaussian(0.4), 5.0) == 5.0
        assert expected_corrupted(NoiseModel.uniform(0.5), 1.0) == pytest.approx(0.5)

    def test_corrupted_variance(self):
        assert corrupted_variance(NoiseModel.gaussian(0.4), 3.0, 1.0) == pytest.approx(1.16)
        assert corrupted_variance(NoiseModel.sparse(0.0), 1.0, 0.7) == pytest.approx(0.7)
        assert corrupted_variance(NoiseModel.sparse(0.5), 1.0, 0.0) == pytest.approx(0.25)

    def test_negative_variance_is_rejected(self):
        with pytest.raises(InvalidParameterError):
            corrupted_variance(NoiseModel.gaussian(0.1), 0.0, -1.0)

    @pytest.mark.parametrize("model", [NoiseModel.gaussian(0.4), NoiseModel.uniform(0.3), NoiseModel.sparse(0.9),
                                       NoiseModel.uniform(0.6, -2.0, 3.0)])
    def test_moments_match_monte_carlo(self, model):
        rng = np.random.default_rng(99)
        rewards = (rng.random(1_000_000) < 0.5) * 5.0
        observed = corrupt_many(model, rewards, rng)
        mean = expected_corrupted(model, 2.5)
        var = corrupted_variance(model, 2.5, 6.25)
        assert abs(observed.mean() - mean) <= 4 * np.sqrt(var / observed.size)
        assert observed.var(ddof=1) == pytest.approx(var, rel=0.01)


class TestNoisyEnvironment:
    def test_identity_wrapper_is_transparent(self):
        env = NoisyEnvironment(ChainEnv(build_chain(3, 1.0, 0.5), np.random.default_rng(0)))
        while not env.done:
            t = env.step(RIGHT)
            assert t.reward_observed == t.reward_true

    def test_noise_leaves_trajectories_unchanged(self):
        chain = build_chain(5, 5.0, 0.5)
        clean = ChainEnv(chain, np.random.default_rng(4))
        noisy = NoisyEnvironment(ChainEnv(chain, np.random.default_rng(4)), NoiseModel.gaussian(1.0),
                                 np.random.default_rng(5))
        for _ in range(20):
            clean.reset()
            noisy.reset()
            while not clean.done:
                a, b = clean.step(RIGHT), noisy.step(RIGHT)
                assert (a.state, a.next_state, a.reward_true) == (b.state, b.next_state, b.reward_true)
            assert noisy.done

    def test_same_seeds_reproduce_observations(self):
        def observed(seed):
            env = NoisyEnvironment(PointMassEnv(rng=np.random.default_rng(seed)), NoiseModel.uniform(0.3),
                                   np.random.default_rng(seed + 1))
            env.reset()
            return [env.step(np.array([0.5])).reward_observed for _ in range(10)]

        assert observed(7) == observed(7)
        assert observed(7) != observed(8)

    def test_delegates_attributes(self):
        env = NoisyEnvironment(PointMassEnv(horizon=7), NoiseModel.sparse(0.5))
        assert env.horizon == 7
        assert env.observation_size == 2
        assert env.model.label() == "sparse:0.5"
