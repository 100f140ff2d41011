"""Mutual-information set function and incremental selection state."""
from .mutual_information import (
    SelectionState,
    extend,
    marginal_gain,
    marginal_gains,
    mutual_information,
    state_from_indices,
)

__all__ = [
    'SelectionState',
    'extend',
    'marginal_gain',
    'marginal_gains',
    'mutual_information',
    'state_from_indices',
]
