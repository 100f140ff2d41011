"""Optimality certificates for greedy designs."""
import math
from typing import Optional

import numpy as np

from ..model.sensing_model import SensingModel
from ..objective.mutual_information import marginal_gains, state_from_indices
from .base_solver import Design

GREEDY_FACTOR = 1.0 - math.exp(-1.0)
MATROID_FACTOR = 0.5


def nemhauser_factor(N: Optional[int] = None) -> float:
    """1 - (1 - 1/N)^N, or its limit 1 - 1/e when N is None."""
    if N is None:
        return GREEDY_FACTOR
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    return 1.0 - (1.0 - 1.0 / N) ** N


def nemhauser_bound(mi_nats: float, N: Optional[int] = None) -> float:
    """
    Upper bound on the optimum implied by the greedy guarantee.

    Args:
        mi_nats: Greedy mutual information (>= 0)
        N: Budget for the finite-N factor; None uses 1 - 1/e

    Returns:
        mi_nats / factor
    """
    if mi_nats < 0:
        raise ValueError(f"Mutual information must be nonnegative, got {mi_nats}")
    return mi_nats / nemhauser_factor(N)


def online_bound(model: SensingModel, design: Design) -> float:
    """
    Data-dependent upper bound on the optimum of budget design.budget.

    G(S) plus the sum of the budget largest marginal gains at S over the
    unchosen candidates.

    Args:
        model: Model the design was computed on
        design: Greedy design under a cardinality budget

    Returns:
        Bound in nats, never below design.mi_nats
    """
    state = state_from_indices(model, design.indices)
    chosen = set(design.indices)
    remaining = [i for i in range(model.n_candidates) if i not in chosen]
    gains = marginal_gains(state, remaining)
    top = np.sort(np.maximum(gains, 0.0))[::-1][:design.budget]
    return float(design.mi_nats + np.sum(top))


def is_cardinality_constraint(constraint: str) -> bool:
    """True for a plain budget, False for a partition (or other matroid) descriptor."""
    return constraint.startswith('uniform')


def guarantee_factor(constraint: str) -> float:
    """Worst-case greedy/OPT ratio for a design's constraint: 1 - 1/e under a budget, 1/2 under a matroid."""
    return GREEDY_FACTOR if is_cardinality_constraint(constraint) else MATROID_FACTOR


def matroid_half_bound(mi_nats: float) -> float:
    """Upper bound 2 G(S) on the matroid optimum implied by the 1/2 guarantee."""
    if mi_nats < 0:
        raise ValueError(f"Mutual information must be nonnegative, got {mi_nats}")
    return mi_nats / MATROID_FACTOR
