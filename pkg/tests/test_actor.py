import numpy as np
import pytest

from spinsyn.actor import (
    ActorConfig,
    ActorNetwork,
    BiasUpdate,
    GradientProbability,
    UpdateRule,
    sigmoid,
    threshold_power_update,
)


def make_net(config=None, **overrides):
    config = config or ActorConfig(**overrides)
    return ActorNetwork.initialize(config, np.random.default_rng(0))


class TestSigmoid:
    def test_zero(self):
        assert sigmoid(0.0) == 0.5

    def test_symmetry(self):
        for z in (-3.7, -1.0, 0.2, 5.5):
            assert sigmoid(z) + sigmoid(-z) == pytest.approx(1.0, abs=1e-15)

    def test_reference_value(self):
        # high-precision oracle: 1/(1+exp(-2))
        assert sigmoid(2.0) == pytest.approx(0.8807970779778823, rel=1e-15)

    def test_extreme_arguments_do_not_overflow(self):
        with np.errstate(over="raise"):
            assert sigmoid(1e4) == 1.0
            assert 0.0 <= sigmoid(-1e4) < 1e-300

    def test_vectorized(self):
        z = np.array([-1.0, 0.0, 1.0])
        out = sigmoid(z)
        assert out.shape == (3,)
        assert np.all(np.diff(out) > 0)


class TestThresholdPowerUpdate:
    def test_dead_zone_inclusive(self):
        assert threshold_power_update(0.4, 0.4, 1.75) == 0.0
        assert threshold_power_update(-0.4, 0.4, 1.75) == 0.0
        assert threshold_power_update(0.1, 0.4, 1.75) == 0.0

    def test_unit_magnitudes_pass_through(self):
        assert threshold_power_update(1.0, 0.4, 1.75) == 1.0
        assert threshold_power_update(-1.0, 0.4, 1.75) == -1.0

    def test_reference_value(self):
        # oracle: 0.5**1.75 evaluated in extended precision
        assert threshold_power_update(0.5, 0.4, 1.75) == pytest.approx(
            0.29730177875068026, abs=1e-12
        )

    def test_odd_symmetry_exact(self):
        grid = np.linspace(-3.0, 3.0, 20_001)
        f = threshold_power_update(grid, 0.4, 1.75)
        f_neg = threshold_power_update(-grid, 0.4, 1.75)
        assert np.array_equal(f_neg, -f)

    def test_monotone_and_contractive_below_one(self):
        grid = np.linspace(-3.0, 3.0, 100_001)
        f = threshold_power_update(grid, 0.4, 1.75)
        assert np.all(np.diff(f) >= 0)
        inside = np.abs(grid) <= 1.0
        assert np.all(np.abs(f[inside]) <= np.abs(grid[inside]))


class TestConfig:
    def test_lr_out_defaults_to_half(self):
        assert ActorConfig(lr_hidden=0.8).lr_out == 0.4

    def test_explicit_lr_out_kept(self):
        assert ActorConfig(lr_hidden=0.8, lr_out=0.1).lr_out == 0.1

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"alpha_flip": -0.1},
            {"alpha_flip": 1.5},
            {"lr_hidden": 0.0},
            {"batch_size": 0},
            {"dw_min": -0.2},
            {"power_exponent": 0.0},
            {"n_hidden": 0},
        ],
    )
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            ActorConfig(**kwargs)


class TestInitialize:
    def test_bounds_and_zero_biases(self):
        net = make_net()
        assert np.all(np.abs(net.w_hidden) <= 1 / np.sqrt(2))
        assert np.all(np.abs(net.w_out) <= 1 / np.sqrt(10))
        assert np.all(net.b_hidden == 0.0)
        assert np.all(net.b_out == 0.0)
        for acc in (net.acc_w_hidden, net.acc_b_hidden, net.acc_w_out, net.acc_b_out):
            assert np.all(acc == 0.0)

    def test_uniform_symmetry_monte_carlo(self):
        # 1e5 hidden weights in one network; mean should vanish within 3 SE
        config = ActorConfig(n_hidden=50_000)
        net = ActorNetwork.initialize(config, np.random.default_rng(42))
        samples = net.w_hidden.ravel()
        bound = 1 / np.sqrt(2)
        se = bound / np.sqrt(3) / np.sqrt(samples.size)
        assert abs(samples.mean()) < 3 * se


class TestForward:
    def test_zero_net_gives_half_probabilities(self):
        net = make_net()
        net.w_hidden[:] = 0.0
        net.w_out[:] = 0.0
        _, trace = net.forward(np.array([1.0, 0.0]), 0.5, np.random.default_rng(1))
        assert np.all(trace.p_hidden == 0.5)
        assert np.all(trace.p_out == 0.5)

    def test_full_reward_disables_flips(self):
        net = make_net()
        rng = np.random.default_rng(2)
        for _ in range(200):
            _, trace = net.forward(np.array([1.0, 1.0]), 1.0, rng)
            assert trace.flip_prob == 0.0
            assert np.array_equal(trace.proposed_hidden, trace.y_hidden)
            assert np.array_equal(trace.proposed_out, trace.y_out)

    def test_rbar_clamped(self):
        net = make_net()
        _, trace = net.forward(np.array([0.0, 1.0]), 7.5, np.random.default_rng(3))
        assert trace.flip_prob == 0.0
        _, trace = net.forward(np.array([0.0, 1.0]), -3.0, np.random.default_rng(3))
        assert trace.flip_prob == pytest.approx(0.1)

    def test_dimension_mismatch_rejected(self):
        net = make_net()
        with pytest.raises(ValueError):
            net.forward(np.array([1.0, 0.0, 1.0]), 0.5, np.random.default_rng(0))

    def test_single_neuron_flip_arithmetic(self):
        # P(y=1) = p*(1-f) + (1-p)*f with p = 0.9, f = alpha*(1-0) = 0.1
        config = ActorConfig(n_in=1, n_hidden=1, n_out=1, alpha_flip=0.1)
        net = ActorNetwork.initialize(config, np.random.default_rng(0))
        p = 0.9
        net.w_hidden[:] = 0.0
        net.b_hidden[:] = np.log(p / (1 - p))
        rng = np.random.default_rng(123)
        n = 100_000
        ones = 0
        for _ in range(n):
            _, trace = net.forward(np.array([1.0]), 0.0, rng)
            ones += trace.y_hidden[0]
        expected = 0.9 * 0.9 + 0.1 * 0.1  # 0.82
        se = np.sqrt(expected * (1 - expected) / n)
        assert abs(ones / n - expected) < 3.5 * se

    def test_no_flip_distribution_matches_bernoulli(self):
        # alpha_flip = 0: output bit is Bernoulli(p_out) exactly
        config = ActorConfig(n_in=1, n_hidden=1, n_out=1, alpha_flip=0.0)
        net = ActorNetwork.initialize(config, np.random.default_rng(0))
        net.w_hidden[:] = 0.0
        net.b_hidden[:] = 50.0  # hidden always fires
        net.w_out[:] = 0.31
        net.b_out[:] = 0.4
        p = float(sigmoid(0.71))
        rng = np.random.default_rng(5)
        n = 100_000
        ones = sum(net.forward(np.array([1.0]), 0.5, rng)[0] for _ in range(n))
        se = np.sqrt(p * (1 - p) / n)
        assert abs(ones / n - p) < 3.5 * se


class TestAccumulate:
    def test_zero_prediction_error_gives_zero(self):
        net = make_net()
        _, trace = net.forward(np.array([1.0, 1.0]), 0.5, np.random.default_rng(4))
        net.accumulate(trace, 0.5, 0.5)
        assert np.all(net.acc_w_hidden == 0.0)
        assert np.all(net.acc_w_out == 0.0)

    def test_zero_presynaptic_value_gives_zero_weight_increment(self):
        net = make_net()
        _, trace = net.forward(np.array([0.0, 1.0]), 0.5, np.random.default_rng(4))
        net.accumulate(trace, 1.0, 0.5)
        assert np.all(net.acc_w_hidden[:, 0] == 0.0)  # x_0 = 0
        assert np.any(net.acc_w_hidden[:, 1] != 0.0)

    def test_reference_increment(self):
        # eta=1, R=1, r_bar=0.5, y=1, p=0.8, y_j=1 -> +0.1 (no flips, so the
        # emission probability equals the sigmoid value)
        config = ActorConfig(n_in=1, n_hidden=1, n_out=1, alpha_flip=0.0, lr_hidden=1.0, lr_out=1.0)
        net = ActorNetwork.initialize(config, np.random.default_rng(0))
        net.w_hidden[:] = 0.0
        net.b_hidden[:] = np.log(0.8 / 0.2)
        rng = np.random.default_rng(9)
        while True:  # draw until the hidden proposal comes out 1
            net.acc_w_hidden[:] = 0.0
            _, trace = net.forward(np.array([1.0]), 0.5, rng)
            if trace.y_hidden[0] == 1.0:
                break
        net.acc_w_hidden[:] = 0.0
        net.accumulate(trace, 1.0, 0.5)
        assert net.acc_w_hidden[0, 0] == pytest.approx(0.1, rel=1e-12)

    def test_emission_probability_is_flip_adjusted(self):
        config = ActorConfig(n_in=1, n_hidden=1, n_out=1, alpha_flip=0.1, lr_hidden=1.0, lr_out=1.0)
        net = ActorNetwork.initialize(config, np.random.default_rng(0))
        net.w_hidden[:] = 0.0
        net.b_hidden[:] = np.log(0.8 / 0.2)
        _, trace = net.forward(np.array([1.0]), 0.0, np.random.default_rng(1))
        q = 0.8 * 0.9 + 0.2 * 0.1
        net.acc_w_hidden[:] = 0.0
        net.acc_b_hidden[:] = 0.0
        net.accumulate(trace, 1.0, 0.0)
        expected = (1.0 - 0.0) * (trace.y_hidden[0] - q) * 1.0
        assert net.acc_w_hidden[0, 0] == pytest.approx(expected, rel=1e-12)

    def test_sigmoid_gradient_mode_uses_raw_probability(self):
        config = ActorConfig(
            n_in=1, n_hidden=1, n_out=1, alpha_flip=0.1, lr_hidden=1.0, lr_out=1.0,
            gradient_probability=GradientProbability.SIGMOID,
        )
        net = ActorNetwork.initialize(config, np.random.default_rng(0))
        net.w_hidden[:] = 0.0
        net.b_hidden[:] = np.log(0.8 / 0.2)
        _, trace = net.forward(np.array([1.0]), 0.0, np.random.default_rng(1))
        net.acc_w_hidden[:] = 0.0
        net.accumulate(trace, 1.0, 0.0)
        expected = (trace.y_hidden[0] - 0.8) * 1.0
        assert net.acc_w_hidden[0, 0] == pytest.approx(expected, rel=1e-12)

    def test_policy_gradient_expectation(self):
        # single Bernoulli neuron, x=1, no flips, R=y, baseline 0.5, eta=1:
        # E[increment] = p(1-p); Monte-Carlo mean within 3 SE
        config = ActorConfig(
            n_in=1, n_hidden=1, n_out=1, alpha_flip=0.0, lr_hidden=1.0, lr_out=1.0
        )
        net = ActorNetwork.initialize(config, np.random.default_rng(0))
        w = 0.8
        net.w_hidden[:] = w
        net.b_hidden[:] = 0.0
        p = float(sigmoid(w))
        rng = np.random.default_rng(77)
        x = np.array([1.0])
        n = 100_000
        increments = np.empty(n)
        for i in range(n):
            net.acc_w_hidden[0, 0] = 0.0
            _, trace = net.forward(x, 0.5, rng)
            net.accumulate(trace, float(trace.y_hidden[0]), 0.5)
            increments[i] = net.acc_w_hidden[0, 0]
        expected = p * (1 - p)
        se = increments.std(ddof=1) / np.sqrt(n)
        assert abs(increments.mean() - expected) < 3 * se


class TestApplyBatchUpdate:
    def _loaded_net(self, acc_value, **overrides):
        net = make_net(**overrides)
        net.w_hidden[:] = 0.0
        net.acc_w_hidden[0, 0] = acc_value
        return net

    def test_powerlaw_at_threshold_leaves_weight_unchanged(self):
        net = self._loaded_net(0.4)
        net.apply_batch_update()
        assert net.w_hidden[0, 0] == 0.0

    def test_powerlaw_unit_accumulator(self):
        net = self._loaded_net(1.0)
        net.apply_batch_update()
        assert net.w_hidden[0, 0] == 1.0
        net = self._loaded_net(-1.0)
        net.apply_batch_update()
        assert net.w_hidden[0, 0] == -1.0

    def test_powerlaw_reference_value(self):
        net = self._loaded_net(0.5)
        net.apply_batch_update()
        assert net.w_hidden[0, 0] == pytest.approx(0.29730177875068026, abs=1e-10)
        assert net.acc_w_hidden[0, 0] == 0.0  # fired component resets

    def test_linear_applies_verbatim(self):
        net = self._loaded_net(0.3, update_rule=UpdateRule.LINEAR)
        net.apply_batch_update()
        assert net.w_hidden[0, 0] == pytest.approx(0.3)
        for acc in (net.acc_w_hidden, net.acc_b_hidden, net.acc_w_out, net.acc_b_out):
            assert np.all(acc == 0.0)

    def test_subthreshold_accumulator_carries_over(self):
        net = self._loaded_net(0.3)
        net.apply_batch_update()
        assert net.w_hidden[0, 0] == 0.0
        assert net.acc_w_hidden[0, 0] == 0.3  # keeps integrating
        net.acc_w_hidden[0, 0] += 0.3
        net.apply_batch_update()
        assert net.w_hidden[0, 0] == pytest.approx(0.6**1.75)
        assert net.acc_w_hidden[0, 0] == 0.0

    def test_subthreshold_reset_mode_zeroes_everything(self):
        net = self._loaded_net(0.3, carry_subthreshold=False)
        net.apply_batch_update()
        assert net.w_hidden[0, 0] == 0.0
        assert np.all(net.acc_w_hidden == 0.0)

    def test_bias_update_linear_by_default(self):
        net = make_net()
        net.b_hidden[:] = 0.0
        net.acc_b_hidden[0] = 0.3  # below dw_min, applied anyway
        net.apply_batch_update()
        assert net.b_hidden[0] == pytest.approx(0.3)
        assert net.acc_b_hidden[0] == 0.0

    def test_bias_update_thresholded_mode(self):
        net = make_net(bias_update=BiasUpdate.THRESHOLDED)
        net.b_hidden[:] = 0.0
        net.acc_b_hidden[0] = 0.3
        net.apply_batch_update()
        assert net.b_hidden[0] == 0.0
        assert net.acc_b_hidden[0] == 0.3
