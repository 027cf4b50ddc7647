import numpy as np
import pytest
from scipy.signal import lfilter

from difflink.signals import (INPUT, NOISE, GroundTruth, NodeSignalState, evolve_truth,
                              generate_path, measure, stream)


class TestInputStep:
    def test_white_when_uncorrelated(self, rng):
        s = NodeSignalState(0.0, 4)
        u = np.array([s.input_step(rng) for _ in range(20000)])
        assert abs(np.mean(np.abs(u) ** 2) - 1.0) < 0.05
        assert abs(np.mean(u[1:] * np.conj(u[:-1]))) < 0.03

    def test_stationary_variance_and_lag_one(self):
        # vectorised draw from the same stream layout as input_step
        a = 0.5
        rng = np.random.default_rng(3)
        g = rng.standard_normal((10**6, 2))
        w = np.sqrt((1 - a**2) / 2) * (g[:, 0] + 1j * g[:, 1])
        u = lfilter([1.0], [1.0, -a], w)[1000:]
        var = np.mean(np.abs(u) ** 2)
        assert abs(var - 1.0) < 0.01
        lag1 = np.mean(u[1:] * np.conj(u[:-1])).real / var
        assert abs(lag1 - a) < 0.02

    def test_streaming_matches_lfilter_oracle(self):
        a = 0.4
        s = NodeSignalState(a, 3)
        rng = np.random.default_rng(9)
        u = np.array([s.input_step(rng) for _ in range(500)])
        g = np.random.default_rng(9).standard_normal((500, 2))
        w = np.sqrt((1 - a**2) / 2) * (g[:, 0] + 1j * g[:, 1])
        np.testing.assert_allclose(u, lfilter([1.0], [1.0, -a], w), rtol=1e-12, atol=1e-14)

    @pytest.mark.parametrize("a", [0.0, 0.3, 0.9])
    def test_unit_power_over_range(self, a):
        s = NodeSignalState(a, 1)
        rng = np.random.default_rng(1)
        u = np.array([s.input_step(rng) for _ in range(40000)])[200:]
        # AR(1) sample-variance error grows like (1+a^2)/(1-a^2)/sqrt(n)
        assert abs(np.mean(np.abs(u) ** 2) - 1.0) < 0.1

    def test_bad_coefficient(self):
        with pytest.raises(ValueError):
            NodeSignalState(1.0, 3)


class TestRegressor:
    def test_zero_padded_after_one_step(self, rng):
        s = NodeSignalState(0.2, 4)
        u = s.input_step(rng)
        np.testing.assert_array_equal(s.regressor(), [u, 0, 0, 0])

    def test_reverse_chronological(self, rng):
        s = NodeSignalState(0.2, 4)
        u = [s.input_step(rng) for _ in range(4)]
        np.testing.assert_array_equal(s.regressor(), u[::-1])

    def test_replay_oracle(self, rng):
        s = NodeSignalState(0.7, 5)
        history = []
        for _ in range(37):
            history.append(s.input_step(rng))
            padded = [0j] * 5 + history
            expected = [padded[-1 - j] for j in range(5)]
            np.testing.assert_array_equal(s.regressor(), expected)


class TestMeasure:
    def test_noiseless(self, rng):
        truth = GroundTruth(np.array([1 + 2j, -0.5j]))
        x = np.array([0.3 - 1j, 2.0 + 0j])
        assert measure(truth, x, 0.0, rng) == np.sum(np.conj(truth.omega0) * x)

    def test_scalar(self, rng):
        assert measure(GroundTruth(np.array([2.0])), np.array([3.0]), 0.0, rng) == 6

    def test_basis_vector_gives_conjugate(self, rng):
        w0 = np.array([1 + 1j, 2 - 3j, -1j])
        for m in range(3):
            e = np.zeros(3, dtype=complex)
            e[m] = 1
            assert measure(GroundTruth(w0), e, 0.0, rng) == np.conj(w0[m])

    def test_noise_variance(self):
        rng = np.random.default_rng(5)
        truth = GroundTruth(np.zeros(2))
        d = np.array([measure(truth, np.ones(2), 0.1, rng) for _ in range(10**5)])
        # 10^5 draws: relative std of the variance estimate is ~0.3%
        assert abs(np.var(d) / 0.01 - 1) < 0.02
        assert abs(np.mean(d)) < 3 * 0.1 / np.sqrt(10**5) * 2

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValueError):
            measure(GroundTruth(np.zeros(3)), np.zeros(2), 0.0, rng)


class TestTruth:
    def test_random_is_unit_norm(self, rng):
        assert np.isclose(np.linalg.norm(GroundTruth.random(10, rng).omega0), 1.0)

    def test_static_unchanged(self, rng):
        t = GroundTruth.random(4, rng)
        assert evolve_truth(t, rng) is t

    def test_zero_innovation(self, rng):
        t = GroundTruth.random(4, rng, mode="markov", markov_std=0.0)
        np.testing.assert_array_equal(evolve_truth(t, rng).omega0, t.omega0)

    def test_random_walk_variance(self):
        rng = np.random.default_rng(8)
        m, steps, std, trials = 4, 25, 0.1, 4000
        sq = []
        for _ in range(trials):
            t0 = GroundTruth(np.zeros(m), "markov", std)
            t = t0
            for _ in range(steps):
                t = evolve_truth(t, rng)
            sq.append(np.sum(np.abs(t.omega0) ** 2))
        expected = steps * m * std**2
        # chi-square with 2*m*steps/... dof; 4000 trials keep the mean within ~1%
        assert abs(np.mean(sq) / expected - 1) < 0.03


class TestSamplePath:
    def test_matches_streaming_state(self):
        seed, run, n, m, t = 3, 2, 3, 4, 30
        path = generate_path(seed, run, n_nodes=n, filter_len=m, iterations=t,
                             noise_var=[0.01, 0.02, 0.0])
        noise_std = np.sqrt([0.01, 0.02, 0.0])
        truth = GroundTruth(path.truth[0, 0])
        for k in range(n):
            s = NodeSignalState(path.ar_coeffs[0, k], m)
            rin, rnoise = stream(seed, run, INPUT, k), stream(seed, run, NOISE, k)
            for i in range(t):
                s.input_step(rin)
                np.testing.assert_array_equal(path.regressors(i)[0, k], s.regressor())
                d = measure(truth, s.regressor(), noise_std[k], rnoise)
                # 1-D vs batched reduction order may differ in the last bit
                np.testing.assert_allclose(d, path.measurements[0, i, k], rtol=1e-14)

    def test_static_truth_constant(self):
        path = generate_path(1, 0, n_nodes=2, filter_len=3, iterations=10, noise_var=0.0)
        assert (path.truth[0] == path.truth[0, 0]).all()

    def test_markov_truth_moves(self):
        path = generate_path(1, 0, n_nodes=2, filter_len=3, iterations=10, noise_var=0.0,
                             mode="markov", markov_std=1e-3)
        assert not (path.truth[0, 1] == path.truth[0, 0]).all()

    def test_reproducible_and_run_dependent(self):
        kw = dict(n_nodes=3, filter_len=2, iterations=20, noise_var=1e-3)
        a = generate_path(4, 1, **kw)
        b = generate_path(4, 1, **kw)
        c = generate_path(4, 2, **kw)
        np.testing.assert_array_equal(a.measurements, b.measurements)
        assert not np.array_equal(a.measurements, c.measurements)

    def test_real_mode(self):
        p = generate_path(4, 0, n_nodes=2, filter_len=3, iterations=20, noise_var=1e-2,
                          complex_valued=False)
        assert (p.measurements.imag == 0).all() and (p.inputs.imag == 0).all()

    def test_ar_coefficients_in_range(self):
        p = generate_path(4, 0, n_nodes=50, filter_len=1, iterations=1, noise_var=0.0,
                          ar_range=(0.1, 0.3))
        assert ((p.ar_coeffs >= 0.1) & (p.ar_coeffs <= 0.3)).all()
