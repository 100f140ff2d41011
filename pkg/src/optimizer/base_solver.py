"""Base solver class, design record and the deterministic tie-break."""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any, Dict, Optional, Sequence, Tuple

import numpy as np

from ..model.sensing_model import SensingModel
from ..objective.mutual_information import SelectionState
from ..utils.logger import setup_logger

if TYPE_CHECKING:
    from ..bounds.error_bounds import BoundsReport

logger = setup_logger(__name__)

# Gains within TIE_RTOL (relative) of the round maximum count as tied.
TIE_RTOL = 1e-12
TIE_ATOL = 1e-15
TIE_BREAK_RULE = "smallest |position|; then negative; then smallest index"


@dataclass(frozen=True)
class Design:
    """Result of a placement solver."""
    indices: Tuple[int, ...]
    positions: Tuple[float, ...]
    gains: Tuple[float, ...]
    mi_nats: float
    budget: int
    constraint: str
    solver: str
    snr_db: float
    evaluations: int = 0
    diagnostics: Dict[str, float] = field(default_factory=dict, compare=False)
    certificate: Optional['BoundsReport'] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def index_set(self) -> frozenset:
        return frozenset(self.indices)

    def with_certificate(self, report: 'BoundsReport') -> 'Design':
        return replace(self, certificate=report)


def tie_tolerance(best: float) -> float:
    return TIE_RTOL * abs(best) + TIE_ATOL


def select_best(gains: np.ndarray, candidates: Sequence[int], positions: np.ndarray) -> int:
    """
    Pick the maximal-gain candidate with the deterministic tie-break.

    Args:
        gains: Marginal gains aligned with candidates
        candidates: Candidate indices
        positions: Grid positions indexed by candidate index

    Returns:
        Offset into candidates of the winner
    """
    gains = np.asarray(gains, dtype=float)
    best = float(np.max(gains))
    tied = np.flatnonzero(gains >= best - tie_tolerance(best))
    return int(min(
        tied,
        key=lambda j: (abs(positions[candidates[j]]), positions[candidates[j]], candidates[j])
    ))


def design_from_state(
    state: SelectionState,
    budget: int,
    constraint: str,
    solver: str,
    evaluations: int = 0,
    diagnostics: Optional[Dict[str, float]] = None
) -> Design:
    """Freeze a selection state into a Design."""
    return Design(
        indices=tuple(int(i) for i in state.chosen),
        positions=tuple(float(p) for p in state.positions),
        gains=tuple(float(g) for g in state.gains),
        mi_nats=float(state.mi_nats),
        budget=int(budget),
        constraint=constraint,
        solver=solver,
        snr_db=state.model.snr_db,
        evaluations=int(evaluations),
        diagnostics=dict(diagnostics or {}),
    )


class BaseSolver(ABC):
    """Abstract base class for placement solvers."""

    def __init__(self, name: str):
        """
        Initialize base solver.

        Args:
            name: Solver name used in reports
        """
        self.name = name
        self.evaluations = 0
        logger.debug(f"Initialized solver: {name}")

    @abstractmethod
    def solve(self, model: SensingModel, *args: Any, **kwargs: Any) -> Design:
        """
        Compute a design on the model.

        Returns:
            Design with the chosen indices in selection order
        """
        pass

    def validate_design(self, design: Design, model: SensingModel) -> bool:
        """
        Check a design's structural invariants.

        Args:
            design: Design produced by this solver
            model: Model it was computed on

        Returns:
            True if valid, False otherwise
        """
        if len(set(design.indices)) != len(design.indices):
            logger.warning(f"Design repeats candidates: {design.indices}")
            return False

        if len(design.indices) > design.budget:
            logger.warning(f"Design exceeds budget {design.budget}: {len(design.indices)} sensors")
            return False

        if any(not 0 <= i < model.n_candidates for i in design.indices):
            logger.warning("Design references indices outside the grid")
            return False

        if abs(sum(design.gains) - design.mi_nats) > 1e-9:
            logger.warning("Design gains do not sum to its mutual information")
            return False

        return True
