"""Truncation, discretization and combined accuracy bounds."""
from .error_bounds import (
    BoundsReport,
    CorollaryBound,
    Inapplicable,
    TruncationBounds,
    bounds_report,
    corollary_bound,
    discretization_bound,
    truncation_bounds,
)

__all__ = [
    'BoundsReport',
    'CorollaryBound',
    'Inapplicable',
    'TruncationBounds',
    'bounds_report',
    'corollary_bound',
    'discretization_bound',
    'truncation_bounds',
]
