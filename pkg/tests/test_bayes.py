"""Tests for scene sampling, posterior inference and the Monte-Carlo engine."""
import numpy as np
import pytest

from src.bayes import (
    MonteCarloEngine,
    SceneSample,
    mc_mse,
    posterior,
    posterior_trace,
    sample_scene,
    scene_mse,
    simulate_measurements,
    synthesize_scene,
    trial_stream,
)
from src.core.errors import ConfigError
from src.model import CandidateGrid, build_model, build_prior
from src.objective import mutual_information
from src.optimizer import greedy

TARGET_SNRS = [30.0, 12.0, 10.0, 5.0, 0.0]


@pytest.fixture(scope='module')
def prior():
    return build_prior(1, 1.0, 450)


@pytest.fixture(scope='module')
def model(prior):
    """Experimental-section model at 5 dB."""
    grid = CandidateGrid.from_aperture(-3.5, 3.5, 0.0625)
    return build_model(1.0, 5.0, 11, grid, prior)


@pytest.fixture(scope='module')
def design(model):
    return greedy(model, 11)


@pytest.fixture(scope='module')
def sweep(model):
    """Greedy designs for every target SNR."""
    return [greedy(model.with_snr(snr), 11) for snr in TARGET_SNRS]


def indicator(prior, m):
    beta = np.zeros(prior.size, dtype=complex)
    beta[m + prior.M_half] = 1.0
    return SceneSample(beta=beta, indices=prior.indices)


class TestSampling:
    """Tests for scene sampling and measurement simulation."""

    def test_streams_are_deterministic(self, prior):
        a = sample_scene(prior, trial_stream(5, 3))
        b = sample_scene(prior, trial_stream(5, 3))
        c = sample_scene(prior, trial_stream(5, 4))
        np.testing.assert_array_equal(a.beta, b.beta)
        assert not np.array_equal(a.beta, c.beta)

    def test_empirical_variance(self, prior):
        rng = trial_stream(0, 0)
        draws = np.stack([sample_scene(prior, rng).beta for _ in range(10000)])
        for m in (0, 1, -1, 10, -10):
            col = draws[:, m + prior.M_half]
            assert np.mean(np.abs(col) ** 2) == pytest.approx(prior.variance(m), rel=0.05)
            assert np.var(col.real) == pytest.approx(prior.variance(m) / 2, rel=0.05)

    def test_noiseless_indicator_measurement(self, model, prior):
        origin = model.grid.index_of(0.0)
        scene = indicator(prior, 0)
        f = simulate_measurements(model, [origin], scene, unit_noise=np.zeros(model.n_candidates))
        assert f[0] == pytest.approx(1.0)

    def test_measurement_covariance(self, model, prior):
        S = [10, 40, 56, 70, 100]
        rng = trial_stream(1, 0)
        samples = np.stack([
            simulate_measurements(model, S, sample_scene(prior, rng), rng) for _ in range(10000)
        ])
        empirical = samples.T @ samples.conj() / samples.shape[0]
        expected = model.signal_cov[np.ix_(S, S)] + model.noise_var * np.eye(len(S))
        assert np.linalg.norm(empirical - expected) <= 0.05 * np.linalg.norm(expected)

    def test_requires_nonempty_set(self, model, prior):
        with pytest.raises(ConfigError):
            simulate_measurements(model, [], indicator(prior, 0), trial_stream(0, 0))


class TestPosterior:
    """Tests for closed-form Gaussian conditioning."""

    def test_zero_measurements(self, model, design):
        result = posterior(model, design.indices, np.zeros(len(design), dtype=complex))
        np.testing.assert_array_equal(result.mean, 0)

    def test_scalar_conditioning(self, model, prior):
        origin = model.grid.index_of(0.0)
        f = np.array([0.7 - 0.2j])
        result = posterior(model, [origin], f)
        s0 = prior.variance(0)
        assert result.mean[prior.M_half] == pytest.approx(s0 * f[0] / (s0 + model.noise_var), rel=1e-12)
        others = np.delete(result.mean, prior.M_half)
        assert np.max(np.abs(others)) < 1e-15

    def test_consistent_with_objective(self, model):
        rng = np.random.default_rng(9)
        for _ in range(20):
            S = rng.choice(model.n_candidates, size=int(rng.integers(1, 12)), replace=False)
            result = posterior(model, S, np.zeros(S.size))
            information = result.logdet_ff - S.size * np.log(model.noise_var)
            assert information == pytest.approx(mutual_information(model, S), rel=1e-8)

    def test_covariance_shrinks(self, model, prior, design):
        result = posterior(model, design.indices, np.zeros(len(design)))
        assert np.all(np.diag(result.cov) <= prior.variances + 1e-10)
        np.testing.assert_allclose(result.cov, result.cov.T, atol=1e-15)
        assert np.min(np.linalg.eigvalsh(result.cov)) >= -1e-10
        assert result.trace == pytest.approx(posterior_trace(model, design.indices), rel=1e-10)

    def test_trace_non_increasing_along_greedy_path(self, model, design):
        traces = [posterior_trace(model, design.indices[:k]) for k in range(1, len(design) + 1)]
        assert all(b <= a + 1e-12 for a, b in zip(traces, traces[1:]))

    def test_empirical_mse_matches_trace(self, model, prior, design):
        rng = trial_stream(2, 0)
        errors = []
        for _ in range(500):
            scene = sample_scene(prior, rng)
            f = simulate_measurements(model, design.indices, scene, rng)
            errors.append(scene_mse(scene, posterior(model, design.indices, f).mean))
        assert np.mean(errors) == pytest.approx(posterior_trace(model, design.indices), rel=0.05)

    def test_measurement_shape_checked(self, model, design):
        with pytest.raises(ConfigError):
            posterior(model, design.indices, np.zeros(3))


class TestSceneMSE:
    """Tests for the coefficient-domain error and scene synthesis."""

    def test_identity_and_zero_estimate(self, prior):
        scene = sample_scene(prior, trial_stream(3, 0))
        assert scene_mse(scene, scene.beta) == 0.0
        assert scene_mse(scene, np.zeros_like(scene.beta)) == pytest.approx(np.sum(np.abs(scene.beta) ** 2))

    def test_zero_estimator_expectation(self, prior):
        rng = trial_stream(4, 0)
        errors = [scene_mse(s, np.zeros(prior.size)) for s in (sample_scene(prior, rng) for _ in range(2000))]
        assert np.mean(errors) == pytest.approx(prior.retained_power, rel=0.05)

    def test_dimension_mismatch(self, prior):
        with pytest.raises(ConfigError):
            scene_mse(sample_scene(prior, trial_stream(0, 0)), np.zeros(3))

    def test_synthesis_of_indicators(self, prior):
        psi = np.linspace(-0.5, 0.5, 33)
        np.testing.assert_allclose(synthesize_scene(indicator(prior, 0), psi), np.ones(33), atol=1e-14)
        np.testing.assert_allclose(synthesize_scene(indicator(prior, 1), psi), np.exp(2j * np.pi * psi), atol=1e-14)

    def test_parseval(self, prior):
        psi = np.arange(4096) / 4096 - 0.5
        truth = sample_scene(prior, trial_stream(6, 0))
        estimate = sample_scene(prior, trial_stream(6, 1))
        diff = synthesize_scene(truth, psi) - synthesize_scene(estimate, psi)
        assert np.mean(np.abs(diff) ** 2) == pytest.approx(scene_mse(truth, estimate.beta), rel=1e-3)

    def test_psi_range(self, prior):
        with pytest.raises(ConfigError):
            synthesize_scene(indicator(prior, 0), np.array([0.75]))


class TestMonteCarlo:
    """Tests for the paired Monte-Carlo engine."""

    def test_deterministic_across_workers(self, model, sweep):
        single = mc_mse(model, sweep[:2], [5.0, 10.0], trials=6, seed=17, workers=1).to_frame()
        pooled = mc_mse(model, sweep[:2], [5.0, 10.0], trials=6, seed=17, workers=3).to_frame()
        assert single.equals(pooled)

    def test_single_trial(self, model, design):
        metrics = mc_mse(model, [design], [5.0], trials=1, seed=0)
        cell = metrics.cells[0]
        assert cell.trials == 1
        assert cell.stderr_mse == 0.0

    def test_better_than_prior(self, model, sweep):
        metrics = mc_mse(model, sweep, TARGET_SNRS, trials=200, seed=1)
        for cell in metrics.cells:
            assert cell.mean_mse <= metrics.prior_mse + 3 * cell.stderr_mse
            assert cell.trace_posterior_cov <= metrics.prior_mse

    def test_table_layout(self, model, sweep):
        metrics = mc_mse(model, sweep, TARGET_SNRS, trials=3, seed=2)
        frame = metrics.to_frame()
        assert len(frame) == 25
        assert list(frame.columns) == [
            'design_label', 'design_target_snr_db', 'eval_snr_db', 'trials',
            'mean_mse', 'stderr_mse', 'trace_posterior_cov',
        ]

    def test_matched_snr_designs_win(self, model, sweep):
        metrics = mc_mse(model, sweep, TARGET_SNRS, trials=1000, seed=0, workers=2)
        assert metrics.matched_wins() >= 4

    def test_report(self, model, sweep):
        engine = MonteCarloEngine(model, sweep[:2], [5.0], trials=2, seed=0)
        report = engine.generate_report(engine.run())
        assert 'MONTE-CARLO MSE REPORT' in report
        assert 'greedy@30dB' in report

    def test_rejects_zero_trials(self, model, design):
        with pytest.raises(ConfigError):
            MonteCarloEngine(model, [design], [5.0], trials=0)
