"""Greedy submodular maximization under a cardinality budget."""
import numpy as np

from ..model.sensing_model import SensingModel
from ..objective.mutual_information import SelectionState, extend, marginal_gains
from ..utils.logger import setup_logger
from .base_solver import BaseSolver, Design, design_from_state, select_best

logger = setup_logger(__name__)


class GreedySolver(BaseSolver):
    """Add the maximal-gain candidate, N times."""

    def __init__(self):
        super().__init__("greedy")

    def solve(self, model: SensingModel, N: int) -> Design:
        """
        Run the greedy algorithm.

        Args:
            model: Sensing model
            N: Budget (clamped to the number of candidates)

        Returns:
            Design with per-step gains
        """
        if N < 1:
            raise ValueError(f"Budget must be at least 1, got {N}")
        n = model.n_candidates
        budget = min(int(N), n)
        self.evaluations = 0

        state = SelectionState.empty(model)
        available = np.ones(n, dtype=bool)

        for step in range(budget):
            candidates = np.flatnonzero(available)
            gains = marginal_gains(state, candidates)
            self.evaluations += candidates.size

            winner = int(candidates[select_best(gains, candidates, model.positions)])
            state = extend(state, winner)
            available[winner] = False

            logger.debug(
                f"Greedy step {step + 1}: x={model.positions[winner]:.4f} "
                f"gain={state.gains[-1]:.6f} nats"
            )

        logger.info(
            f"Greedy finished: {len(state)} sensors, MI={state.mi_nats:.4f} nats, "
            f"{self.evaluations} gain evaluations"
        )
        return design_from_state(
            state,
            budget=int(N),
            constraint=f"uniform(N={int(N)})",
            solver=self.name,
            evaluations=self.evaluations,
        )


def greedy(model: SensingModel, N: int) -> Design:
    """Greedy design with budget N."""
    return GreedySolver().solve(model, N)
