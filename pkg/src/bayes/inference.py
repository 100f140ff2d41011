"""
Scene sampling, measurement simulation and Gaussian posterior inference.

Coefficients beta_m ~ CN(0, sigma_m^2), measurements f = K_S beta + w with
w ~ CN(0, sigma_w^2 I). The kernel is real, so the posterior solves apply the
real factor of Sigma_ff = C_SS + sigma_w^2 I to the real and imaginary parts
separately.
"""
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ..core.errors import ConfigError, NumericalFailure
from ..model.sensing_model import PriorSpec, SensingModel
from ..utils.logger import setup_logger

logger = setup_logger(__name__)


def trial_stream(seed: int, *keys: int) -> np.random.Generator:
    """
    Counter-based random stream for (seed, trial[, noise level]).

    Args:
        seed: Run seed
        *keys: Stream coordinates, e.g. trial index and eval-SNR index

    Returns:
        Independent Philox generator determined only by the arguments
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, keys)])))


def circular_normal(rng: np.random.Generator, size: int) -> np.ndarray:
    """Unit-variance circular complex normal samples."""
    a = rng.standard_normal(size)
    b = rng.standard_normal(size)
    return (a + 1j * b) / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class SceneSample:
    """One draw of the truncated Fourier coefficients."""
    beta: np.ndarray
    indices: np.ndarray


@dataclass(frozen=True, eq=False)
class PosteriorResult:
    """Gaussian posterior of the coefficients given measurements."""
    mean: np.ndarray
    cov: np.ndarray
    logdet_cov: float
    logdet_ff: float

    @property
    def trace(self) -> float:
        return float(np.trace(self.cov))


@dataclass(frozen=True, eq=False)
class PosteriorOperator:
    """Measurement-independent part of the posterior for a fixed design."""
    gain: np.ndarray         # Sigma_bf Sigma_ff^{-1}, shape (|M|, |S|)
    cross: np.ndarray        # Sigma_bf = diag(sigma^2) K_S^T
    trace: float             # trace of the posterior covariance
    logdet_ff: float
    noise_var: float


def sample_scene(prior: PriorSpec, rng: np.random.Generator) -> SceneSample:
    """
    Draw coefficients beta_m = (a + ib) sigma_m / sqrt(2).

    Args:
        prior: Coefficient prior
        rng: Seeded generator

    Returns:
        SceneSample over the prior's retained indices
    """
    beta = circular_normal(rng, prior.size) * np.sqrt(prior.variances)
    return SceneSample(beta=beta, indices=prior.indices)


def _as_sensor_indices(model: SensingModel, S: Iterable[int]) -> np.ndarray:
    idx = np.asarray(list(S), dtype=int)
    if idx.size == 0:
        raise ConfigError("Sensor set must be nonempty")
    if np.any((idx < 0) | (idx >= model.n_candidates)):
        raise ConfigError("Sensor index outside the candidate grid")
    if np.unique(idx).size != idx.size:
        raise ConfigError("Sensor set contains duplicates")
    return idx


def simulate_measurements(
    model: SensingModel,
    S: Sequence[int],
    scene: SceneSample,
    rng: Optional[np.random.Generator] = None,
    unit_noise: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Noisy measurements f = K_S beta + w.

    Noise is drawn for every candidate position and then restricted to S,
    so designs sharing a stream see the same noise at shared positions.

    Args:
        model: Sensing model (noise variance taken from it)
        S: Sensor indices
        scene: Coefficient draw
        rng: Generator for the noise (ignored when unit_noise is given)
        unit_noise: Pre-drawn unit circular noise over all candidates

    Returns:
        Complex measurement vector aligned with S
    """
    idx = _as_sensor_indices(model, S)
    if unit_noise is None:
        if rng is None:
            raise ConfigError("Either rng or unit_noise is required")
        unit_noise = circular_normal(rng, model.n_candidates)
    clean = model.kernel[idx] @ scene.beta
    return clean + np.sqrt(model.noise_var) * unit_noise[idx]


def posterior_operator(model: SensingModel, S: Sequence[int]) -> PosteriorOperator:
    """
    Factor Sigma_ff once and precompute the posterior-mean gain.

    Args:
        model: Sensing model
        S: Sensor indices

    Returns:
        PosteriorOperator for the design
    """
    idx = _as_sensor_indices(model, S)
    variances = model.prior.variances
    sigma_ff = model.signal_cov[np.ix_(idx, idx)] + model.noise_var * np.eye(idx.size)
    try:
        factor = cho_factor(sigma_ff, lower=True, check_finite=True)
    except np.linalg.LinAlgError as e:
        raise NumericalFailure(f"Cholesky of Sigma_ff failed: {e}") from e

    cross = variances[:, None] * model.kernel[idx].T
    solved = cho_solve(factor, cross.T)
    gain = solved.T
    trace = float(np.sum(variances) - np.einsum('ij,ji->', cross, solved))
    logdet_ff = float(2.0 * np.sum(np.log(np.diag(factor[0]))))
    return PosteriorOperator(gain=gain, cross=cross, trace=trace, logdet_ff=logdet_ff, noise_var=model.noise_var)


def posterior_trace(model: SensingModel, S: Sequence[int]) -> float:
    """Expected coefficient-domain MSE of the posterior mean for design S."""
    return posterior_operator(model, S).trace


def posterior(model: SensingModel, S: Sequence[int], measurements: np.ndarray) -> PosteriorResult:
    """
    Closed-form Gaussian conditional of beta given f_S.

    Args:
        model: Sensing model
        S: Sensor indices
        measurements: Complex measurements aligned with S

    Returns:
        PosteriorResult with mean, covariance and log-determinants
    """
    idx = _as_sensor_indices(model, S)
    f = np.asarray(measurements)
    if f.shape != (idx.size,):
        raise ConfigError(f"Expected {idx.size} measurements, got shape {f.shape}")

    op = posterior_operator(model, idx)
    mean = op.gain @ f.real + 1j * (op.gain @ f.imag)
    cov = np.diag(model.prior.variances) - op.gain @ op.cross.T
    cov = 0.5 * (cov + cov.T)

    # log det of the posterior = log det of the prior minus the information gained.
    information = op.logdet_ff - idx.size * np.log(model.noise_var)
    logdet_cov = float(np.sum(np.log(model.prior.variances)) - information)

    return PosteriorResult(mean=mean, cov=cov, logdet_cov=logdet_cov, logdet_ff=op.logdet_ff)


def scene_mse(truth: SceneSample, estimate: np.ndarray) -> float:
    """
    Coefficient-domain squared error, equal to the scene-domain error by Parseval.

    Args:
        truth: True coefficients
        estimate: Estimated coefficients on the same index set

    Returns:
        Sum of |beta_m - estimate_m|^2
    """
    estimate = np.asarray(estimate)
    if estimate.shape != truth.beta.shape:
        raise ConfigError(f"Estimate shape {estimate.shape} does not match scene shape {truth.beta.shape}")
    return float(np.sum(np.abs(truth.beta - estimate) ** 2))


def synthesize_scene(scene: SceneSample, psi_grid: np.ndarray) -> np.ndarray:
    """
    Evaluate beta(psi) = sum_m beta_m exp(j 2 pi m psi).

    Args:
        scene: Coefficients
        psi_grid: Points in [-1/2, 1/2]

    Returns:
        Complex scene values on the grid
    """
    psi = np.asarray(psi_grid, dtype=float)
    if np.any(np.abs(psi) > 0.5):
        raise ConfigError("psi must lie in [-1/2, 1/2]")
    phases = np.exp(2j * np.pi * psi[:, None] * scene.indices[None, :])
    return phases @ scene.beta
