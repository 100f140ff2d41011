"""
Mutual-information objective
============================

G(S) = I(f_S; beta) = log det(I + C_SS / sigma_w^2), in nats.

Greedy loops carry a SelectionState holding the lower Cholesky factor of
Sigma_SS = sigma_w^2 I + C_SS, grown by one row per selection. The marginal
gain of a candidate x is log(sigma^2_{x|S} / sigma_w^2), where

    sigma^2_{x|S} = sigma_w^2 + C_xx - c_xS^T Sigma_SS^{-1} c_xS

needs one triangular solve against the stored factor.
"""
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Tuple

import numpy as np
from scipy.linalg import solve_triangular

from ..core.errors import ConfigError, NumericalFailure
from ..core.resilience import PivotBreakdown, RetryableOperation
from ..model.sensing_model import SensingModel
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

# Appended pivots below PIVOT_FLOOR * sigma_w^2 trigger a full refactorization.
PIVOT_FLOOR = 1e-14


def _as_index_set(model: SensingModel, S: Iterable[int]) -> Tuple[int, ...]:
    indices = tuple(int(i) for i in S)
    n = model.n_candidates
    for i in indices:
        if not 0 <= i < n:
            raise ConfigError(f"Candidate index {i} outside 0..{n - 1}")
    if len(set(indices)) != len(indices):
        raise ConfigError(f"Index set contains duplicates: {indices}")
    return indices


def _measurement_cov(model: SensingModel, S: Sequence[int]) -> np.ndarray:
    idx = np.asarray(S, dtype=int)
    return model.signal_cov[np.ix_(idx, idx)] + model.noise_var * np.eye(idx.size)


def mutual_information(model: SensingModel, S: Iterable[int]) -> float:
    """
    Evaluate G(S) from scratch.

    Args:
        model: Sensing model
        S: Candidate indices (set semantics)

    Returns:
        Mutual information in nats
    """
    indices = _as_index_set(model, S)
    if not indices:
        return 0.0
    idx = np.asarray(sorted(indices), dtype=int)
    scaled = np.eye(idx.size) + model.signal_cov[np.ix_(idx, idx)] / model.noise_var
    try:
        chol = np.linalg.cholesky(scaled)
    except np.linalg.LinAlgError as e:
        raise NumericalFailure(f"Cholesky of the measurement covariance failed: {e}") from e
    return float(2.0 * np.sum(np.log(np.diag(chol))))


@dataclass(frozen=True, eq=False)
class SelectionState:
    """Incrementally extended design."""
    model: SensingModel = field(repr=False)
    chosen: Tuple[int, ...] = ()
    chol: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)), repr=False)
    mi_nats: float = 0.0
    gains: Tuple[float, ...] = ()

    @classmethod
    def empty(cls, model: SensingModel) -> 'SelectionState':
        return cls(model=model)

    def __len__(self) -> int:
        return len(self.chosen)

    def __contains__(self, x: int) -> bool:
        return int(x) in self.chosen

    @property
    def positions(self) -> np.ndarray:
        return self.model.positions[list(self.chosen)]


def _cross_solve(state: SelectionState, candidates: np.ndarray) -> np.ndarray:
    """L^{-1} C_{S,x} for every candidate column."""
    cross = state.model.signal_cov[np.ix_(np.asarray(state.chosen, dtype=int), candidates)]
    return solve_triangular(state.chol, cross, lower=True, check_finite=False)


def marginal_gains(state: SelectionState, candidates: Iterable[int]) -> np.ndarray:
    """
    Vectorized marginal gains G(S + x) - G(S) for many candidates.

    Args:
        state: Current selection
        candidates: Candidate indices, none of them already chosen

    Returns:
        Array of gains in nats, aligned with candidates
    """
    model = state.model
    cand = np.asarray(list(candidates), dtype=int)
    if cand.size == 0:
        return np.zeros(0)
    if np.any((cand < 0) | (cand >= model.n_candidates)):
        raise ConfigError("Candidate index outside the ground set")
    if state.chosen and np.isin(cand, state.chosen).any():
        raise ConfigError("Marginal gain requested for an already chosen candidate")

    explained = np.diag(model.signal_cov)[cand].copy()
    if state.chosen:
        solved = _cross_solve(state, cand)
        explained -= np.einsum('ij,ij->j', solved, solved)
    return np.log1p(explained / model.noise_var)


def marginal_gain(state: SelectionState, x: int) -> float:
    """
    Marginal gain of adding candidate x to the state.

    Args:
        state: Current selection
        x: Candidate index not yet chosen

    Returns:
        G(S + x) - G(S) in nats
    """
    if int(x) in state.chosen:
        raise ConfigError(f"Candidate {x} is already chosen")
    return float(marginal_gains(state, [x])[0])


def _append_row(state: SelectionState, x: int) -> Tuple[np.ndarray, float]:
    model = state.model
    floor = PIVOT_FLOOR * model.noise_var
    k = len(state.chosen)
    c_xx = model.signal_cov[x, x]
    if k:
        v = _cross_solve(state, np.asarray([x]))[:, 0]
        explained = c_xx - float(v @ v)
    else:
        v = np.zeros(0)
        explained = c_xx
    pivot_sq = model.noise_var + explained
    if not pivot_sq > floor:
        raise PivotBreakdown(pivot_sq, floor)

    chol = np.zeros((k + 1, k + 1))
    chol[:k, :k] = state.chol
    chol[k, :k] = v
    chol[k, k] = np.sqrt(pivot_sq)
    return chol, float(np.log1p(explained / model.noise_var))


def _refactorize(state: SelectionState, x: int) -> Tuple[np.ndarray, float]:
    model = state.model
    floor = PIVOT_FLOOR * model.noise_var
    logger.warning(f"Refactorizing measurement covariance for |S|={len(state.chosen) + 1}")
    try:
        chol = np.linalg.cholesky(_measurement_cov(model, state.chosen + (x,)))
    except np.linalg.LinAlgError as e:
        raise PivotBreakdown(float('nan'), floor) from e
    pivot_sq = chol[-1, -1] ** 2
    if not pivot_sq > floor:
        raise PivotBreakdown(pivot_sq, floor)
    return chol, float(np.log(pivot_sq / model.noise_var))


def extend(state: SelectionState, x: int) -> SelectionState:
    """
    Append candidate x, growing the Cholesky factor by one row.

    Args:
        state: Current selection
        x: Candidate index not yet chosen

    Returns:
        New SelectionState; the input state is left untouched
    """
    x = int(x)
    if x in state.chosen:
        raise ConfigError(f"Candidate {x} is already chosen")
    if not 0 <= x < state.model.n_candidates:
        raise ConfigError(f"Candidate index {x} outside the ground set")

    try:
        for attempt in RetryableOperation.with_refactorization():
            with attempt:
                if attempt.retry_state.attempt_number == 1:
                    chol, gain = _append_row(state, x)
                else:
                    chol, gain = _refactorize(state, x)
    except PivotBreakdown as e:
        raise NumericalFailure(f"Cannot extend selection with candidate {x}: {e}") from e

    return SelectionState(
        model=state.model,
        chosen=state.chosen + (x,),
        chol=chol,
        mi_nats=state.mi_nats + gain,
        gains=state.gains + (gain,),
    )


def state_from_indices(model: SensingModel, S: Iterable[int]) -> SelectionState:
    """Build a state by extending the empty state in the given order."""
    state = SelectionState.empty(model)
    for x in _as_index_set(model, S):
        state = extend(state, x)
    return state
