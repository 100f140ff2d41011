"""Retry policies for numerical factorizations."""
from tenacity import (
    Retrying,
    stop_after_attempt,
    retry_if_exception_type,
    before_sleep_log
)
import logging

from ..utils.logger import setup_logger

logger = setup_logger(__name__)


class PivotBreakdown(ArithmeticError):
    """A Cholesky pivot fell below the configured floor."""

    def __init__(self, pivot: float, floor: float):
        super().__init__(f"Cholesky pivot {pivot:.3e} below floor {floor:.3e}")
        self.pivot = pivot
        self.floor = floor


class RetryableOperation:
    """Configurable retry logic for numerical operations."""

    @staticmethod
    def with_refactorization(max_attempts: int = 2) -> Retrying:
        """
        Retry controller for factor updates.

        The first attempt is the cheap incremental update; each further
        attempt is expected to recompute the factor from scratch. The last
        PivotBreakdown is re-raised once attempts are exhausted.

        Args:
            max_attempts: Total attempts including the first

        Returns:
            tenacity.Retrying iterator
        """
        return Retrying(
            stop=stop_after_attempt(max_attempts),
            retry=retry_if_exception_type(PivotBreakdown),
            before_sleep=before_sleep_log(logger, logging.WARNING),
            reraise=True
        )
