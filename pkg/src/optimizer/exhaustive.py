"""Brute-force optimum by subset enumeration (validation oracle)."""
import itertools
import math
from typing import Iterator, Optional, Tuple

import numpy as np

from ..core.errors import InstanceTooLarge
from ..matroids.constraints import MatroidSpec
from ..model.sensing_model import SensingModel
from ..objective.mutual_information import state_from_indices
from ..utils.config import Config
from ..utils.logger import setup_logger
from .base_solver import BaseSolver, Design, design_from_state

logger = setup_logger(__name__)

BATCH_SIZE = 4096


def _batches(n: int, k: int, matroid: Optional[MatroidSpec]) -> Iterator[np.ndarray]:
    batch = []
    for subset in itertools.combinations(range(n), k):
        if matroid is not None and not matroid.is_independent(subset):
            continue
        batch.append(subset)
        if len(batch) == BATCH_SIZE:
            yield np.asarray(batch, dtype=int)
            batch = []
    if batch:
        yield np.asarray(batch, dtype=int)


def _batch_mi(model: SensingModel, subsets: np.ndarray) -> np.ndarray:
    """log det(I + C_SS / sigma_w^2) for a stack of equal-size subsets."""
    k = subsets.shape[1]
    blocks = model.signal_cov[subsets[:, :, None], subsets[:, None, :]] / model.noise_var
    blocks += np.eye(k)[None, :, :]
    chol = np.linalg.cholesky(blocks)
    return 2.0 * np.sum(np.log(np.diagonal(chol, axis1=1, axis2=2)), axis=1)


class ExhaustiveSolver(BaseSolver):
    """Enumerate every feasible subset of the target size."""

    def __init__(self, limit: Optional[int] = None):
        super().__init__("exhaustive")
        self.limit = int(limit if limit is not None else Config.EXHAUSTIVE_LIMIT)

    def solve(self, model: SensingModel, N: int, matroid: Optional[MatroidSpec] = None) -> Design:
        """
        Find the global optimum.

        Args:
            model: Sensing model
            N: Budget (ignored when a matroid is given; its rank is used)
            matroid: Optional constraint restricting the enumeration

        Returns:
            Optimal design; its indices are listed in ascending order
        """
        n = model.n_candidates
        # Monotone objective: an optimum always has maximal size.
        k = matroid.rank if matroid is not None else min(int(N), n)
        total = math.comb(n, k)
        if total > self.limit:
            raise InstanceTooLarge(
                f"Exhaustive search over C({n}, {k}) = {total} subsets exceeds limit {self.limit}"
            )

        best_value = -math.inf
        best_subset: Tuple[int, ...] = ()
        self.evaluations = 0
        for subsets in _batches(n, k, matroid):
            values = _batch_mi(model, subsets) if k else np.zeros(len(subsets))
            self.evaluations += len(subsets)
            j = int(np.argmax(values))
            if values[j] > best_value:
                best_value = float(values[j])
                best_subset = tuple(int(i) for i in subsets[j])

        state = state_from_indices(model, best_subset)
        logger.info(
            f"Exhaustive optimum over {self.evaluations} subsets of size {k}: "
            f"MI={state.mi_nats:.4f} nats"
        )
        return design_from_state(
            state,
            budget=k if matroid is not None else int(N),
            constraint=matroid.descriptor if matroid is not None else f"uniform(N={int(N)})",
            solver=self.name,
            evaluations=self.evaluations,
        )


def exhaustive_opt(model: SensingModel, N: int, matroid: Optional[MatroidSpec] = None) -> Design:
    """Globally optimal design by enumeration."""
    return ExhaustiveSolver().solve(model, N, matroid)
