"""Matroid placement constraints."""
from .constraints import (
    MatroidSpec,
    PartitionMatroid,
    UniformMatroid,
    bin_edges,
    can_extend,
    is_independent,
    partition_from_bins,
)

__all__ = [
    'MatroidSpec',
    'PartitionMatroid',
    'UniformMatroid',
    'bin_edges',
    'can_extend',
    'is_independent',
    'partition_from_bins',
]
