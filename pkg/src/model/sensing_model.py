"""
Far-field observation model
===========================

A sensor at position x (in units of the wavelength) observes the scene's
Fourier coefficients through the real kernel

    K(x, m) = sinc(m + 2x / lambda),   sinc(u) = sin(pi u) / (pi u)

plus circular complex Gaussian noise of variance sigma_w^2. The coefficients
carry a zero-mean Gaussian prior with polynomially decaying variances

    sigma_0^2 = c,   sigma_m^2 = c / |m|^(2r),   c = P / (1 + 2 zeta(2r)),

normalized over the infinite sequence, then truncated to |m| <= M_half.
The candidate-candidate signal covariance C = K diag(sigma^2) K^T is built
once per model and shared by every objective evaluation.
"""
import math
from dataclasses import dataclass, field, replace
from typing import Dict, Tuple, Union

import numpy as np
from scipy.special import zeta

from ..core.errors import ConfigError
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

ArrayLike = Union[float, np.ndarray]

# Partial tail sums run to TAIL_SUM_FACTOR * M_half before the integral bracket.
TAIL_SUM_FACTOR = 10


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.ascontiguousarray(values, dtype=float)
    values.flags.writeable = False
    return values


def sinc(x: ArrayLike) -> ArrayLike:
    """
    Normalized sinc, sin(pi x) / (pi x).

    Exact at integers: 1 at the origin and 0 at every other integer.

    Args:
        x: Scalar or array of finite reals

    Returns:
        sinc values with the shape of x (a float for scalar input)
    """
    arr = np.asarray(x, dtype=float)
    out = np.sinc(arr)
    at_integer = arr == np.rint(arr)
    out = np.where(at_integer, (arr == 0).astype(float), out)
    if out.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True, eq=False)
class PriorSpec:
    """Gaussian prior on the truncated Fourier coefficients."""
    r: int
    P: float
    M_half: int
    normalization: float
    variances: np.ndarray  # sigma_m^2 ordered by m = -M_half..M_half
    tail_epsilon: float
    tail_halfwidth: float

    @property
    def indices(self) -> np.ndarray:
        """Coefficient indices m = -M_half..+M_half."""
        return np.arange(-self.M_half, self.M_half + 1)

    @property
    def size(self) -> int:
        return 2 * self.M_half + 1

    @property
    def retained_power(self) -> float:
        """Sum of the variances kept in the truncation set."""
        return float(np.sum(self.variances))

    def variance(self, m: int) -> float:
        """Prior variance sigma_m^2 for a retained index m."""
        if abs(m) > self.M_half:
            raise ConfigError(f"Index {m} outside truncation set |m| <= {self.M_half}")
        return float(self.variances[m + self.M_half])

    def as_dict(self) -> Dict[int, float]:
        return {int(m): float(v) for m, v in zip(self.indices, self.variances)}


def build_prior(r: int, P: float, M_half: int) -> PriorSpec:
    """
    Build the polynomial-decay prior.

    Args:
        r: Smoothness order (>= 1)
        P: Expected scene power over the untruncated sequence
        M_half: Truncation half-width

    Returns:
        PriorSpec with the truncated variances and the excluded tail mass
    """
    if int(r) != r or r < 1:
        raise ConfigError(f"Smoothness order r must be a positive integer (series diverges), got {r}")
    if not (P > 0 and math.isfinite(P)):
        raise ConfigError(f"Scene power P must be positive and finite, got {P}")
    if int(M_half) != M_half or M_half < 1:
        raise ConfigError(f"M_half must be a positive integer, got {M_half}")
    r = int(r)
    M_half = int(M_half)

    c = P / (1.0 + 2.0 * float(zeta(2 * r, 1)))

    m = np.arange(-M_half, M_half + 1)
    variances = np.empty(m.size, dtype=float)
    nonzero = m != 0
    variances[nonzero] = c / np.abs(m[nonzero]).astype(float) ** (2 * r)
    variances[~nonzero] = c

    # One-sided tail: explicit sum to K, then the remainder sits between
    # the integrals of x^(-2r) from K+1 and from K.
    K = TAIL_SUM_FACTOR * M_half
    tail_terms = np.arange(M_half + 1, K + 1, dtype=float) ** (-2 * r)
    partial = float(np.sum(tail_terms[::-1]))
    remainder_lo = (K + 1.0) ** (1 - 2 * r) / (2 * r - 1)
    remainder_hi = float(K) ** (1 - 2 * r) / (2 * r - 1)
    midpoint = 0.5 * (remainder_lo + remainder_hi)
    halfwidth = 0.5 * (remainder_hi - remainder_lo)

    tail_epsilon = 2.0 * c * (partial + midpoint)
    tail_halfwidth = 2.0 * c * halfwidth

    if not 0.0 < tail_epsilon < P:
        raise ConfigError(f"Tail mass {tail_epsilon} outside (0, P)")

    logger.debug(
        f"Prior built: r={r}, P={P}, M_half={M_half}, sigma_0^2={c:.6f}, "
        f"epsilon={tail_epsilon:.6e} +/- {tail_halfwidth:.1e}"
    )

    return PriorSpec(
        r=r,
        P=float(P),
        M_half=M_half,
        normalization=c,
        variances=_frozen(variances),
        tail_epsilon=tail_epsilon,
        tail_halfwidth=tail_halfwidth,
    )


@dataclass(frozen=True, eq=False)
class CandidateGrid:
    """Uniform delta-spaced candidate positions inside the aperture."""
    positions: np.ndarray
    delta: float
    aperture: Tuple[float, float]

    def __post_init__(self):
        positions = self.positions
        a_min, a_max = self.aperture
        if self.delta <= 0:
            raise ConfigError(f"Grid spacing must be positive, got {self.delta}")
        if positions.size == 0:
            raise ConfigError("Candidate grid is empty")
        if positions.size > 1:
            steps = np.diff(positions)
            if np.any(steps <= 0):
                raise ConfigError("Grid positions must be strictly increasing")
            if not np.allclose(steps, self.delta, rtol=1e-9, atol=1e-12):
                raise ConfigError("Grid positions must be uniformly delta-spaced")
        tol = 1e-9 * max(1.0, abs(a_min), abs(a_max))
        if positions[0] < a_min - tol or positions[-1] > a_max + tol:
            raise ConfigError("Grid positions must lie inside the aperture")

    @classmethod
    def from_aperture(cls, a_min: float, a_max: float, delta: float) -> 'CandidateGrid':
        """
        Construct positions a_min + k * delta for k = 0..floor(span / delta).

        Args:
            a_min: Left aperture edge
            a_max: Right aperture edge
            delta: Grid spacing

        Returns:
            CandidateGrid including both endpoints when the span is a multiple of delta
        """
        if not a_min < a_max:
            raise ConfigError(f"Aperture must satisfy min < max, got [{a_min}, {a_max}]")
        if not delta > 0:
            raise ConfigError(f"Grid spacing must be positive, got {delta}")
        count = int(math.floor((a_max - a_min) / delta + 1e-9)) + 1
        positions = a_min + delta * np.arange(count, dtype=float)
        return cls(positions=_frozen(positions), delta=float(delta), aperture=(float(a_min), float(a_max)))

    def __len__(self) -> int:
        return int(self.positions.size)

    def index_of(self, position: float, tol: float = 1e-9) -> int:
        """Grid index of a position (must be on the grid)."""
        k = int(np.argmin(np.abs(self.positions - position)))
        if abs(self.positions[k] - position) > tol * max(1.0, abs(position)):
            raise ConfigError(f"Position {position} is not on the candidate grid")
        return k

    def subgrid(self, indices) -> 'CandidateGrid':
        """Contiguous sub-grid (used for small oracle instances)."""
        idx = np.asarray(sorted(indices), dtype=int)
        if idx.size > 1 and np.any(np.diff(idx) != 1):
            raise ConfigError("Sub-grid indices must be contiguous")
        positions = self.positions[idx]
        return CandidateGrid(
            positions=_frozen(positions),
            delta=self.delta,
            aperture=(float(positions[0]), float(positions[-1])),
        )

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.positions, -self.positions[::-1], atol=tol, rtol=0))


def kernel_row(x: float, prior: PriorSpec, lam: float) -> np.ndarray:
    """
    Kernel row of a sensor at x over the retained indices.

    Args:
        x: Sensor position
        prior: Prior carrying the truncation set
        lam: Wavelength

    Returns:
        Vector with entry sinc(m + 2x / lambda) at index m
    """
    if not math.isfinite(x):
        raise ConfigError(f"Sensor position must be finite, got {x}")
    return sinc(prior.indices + 2.0 * x / lam)


def kernel_matrix(positions: np.ndarray, prior: PriorSpec, lam: float) -> np.ndarray:
    """Stacked kernel rows, shape (len(positions), prior.size)."""
    positions = np.asarray(positions, dtype=float)
    return sinc(prior.indices[None, :] + 2.0 * positions[:, None] / lam)


def noise_variance(P: float, n_ref: int, snr_db: float) -> float:
    """sigma_w^2 = P / (N_ref * 10^(SNR/10))."""
    if not math.isfinite(snr_db):
        raise ConfigError(
            f"SNR must be finite (got {snr_db} dB): zero noise makes mutual information unbounded"
        )
    return P / (n_ref * 10.0 ** (snr_db / 10.0))


@dataclass(frozen=True, eq=False)
class SensingModel:
    """Immutable discretized sensing model."""
    lam: float
    noise_var: float
    grid: CandidateGrid
    prior: PriorSpec
    kernel: np.ndarray = field(repr=False)
    signal_cov: np.ndarray = field(repr=False)
    snr_db: float
    n_ref: int

    @property
    def positions(self) -> np.ndarray:
        return self.grid.positions

    @property
    def n_candidates(self) -> int:
        return len(self.grid)

    @property
    def epsilon(self) -> float:
        return self.prior.tail_epsilon

    def with_snr(self, snr_db: float) -> 'SensingModel':
        """Sibling model at another SNR sharing the kernel and covariance."""
        return replace(
            self,
            noise_var=noise_variance(self.prior.P, self.n_ref, snr_db),
            snr_db=float(snr_db),
        )


def build_model(
    lam: float,
    snr_db: float,
    N_ref: int,
    grid: CandidateGrid,
    prior: PriorSpec
) -> SensingModel:
    """
    Assemble the sensing model.

    Args:
        lam: Wavelength
        snr_db: SNR in dB, defined as P / (N_ref * sigma_w^2)
        N_ref: Sensor count used in the SNR definition
        grid: Candidate grid
        prior: Coefficient prior

    Returns:
        SensingModel with the precomputed signal covariance
    """
    if not (lam > 0 and math.isfinite(lam)):
        raise ConfigError(f"Wavelength must be positive, got {lam}")
    if N_ref < 1:
        raise ConfigError(f"N_ref must be at least 1, got {N_ref}")
    noise_var = noise_variance(prior.P, N_ref, snr_db)

    kernel = kernel_matrix(grid.positions, prior, lam)
    signal_cov = (kernel * prior.variances[None, :]) @ kernel.T
    signal_cov = 0.5 * (signal_cov + signal_cov.T)

    logger.info(
        f"Sensing model built: |V|={len(grid)}, |M|={prior.size}, "
        f"SNR={snr_db} dB, sigma_w^2={noise_var:.6e}"
    )

    return SensingModel(
        lam=float(lam),
        noise_var=noise_var,
        grid=grid,
        prior=prior,
        kernel=_frozen(kernel),
        signal_cov=_frozen(signal_cov),
        snr_db=float(snr_db),
        n_ref=int(N_ref),
    )
