"""
Placement constraints as matroids.

Two variants over the ground set {0, ..., n-1} of candidate indices:

- UniformMatroid: |S| <= N.
- PartitionMatroid: the ground set is split into disjoint bins V_j and
  S is independent iff |S| <= N and |S & V_j| <= n_j for every bin.

Bins built from positions use half-open intervals [left, right): a grid point
sitting exactly on an edge belongs to the bin on its right. Bins without grid
points are dropped.
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple, Union

import numpy as np

from ..core.errors import ConfigError
from ..model.sensing_model import CandidateGrid
from ..utils.logger import setup_logger

logger = setup_logger(__name__)


class MatroidSpec(ABC):
    """Independence oracle over candidate indices 0..ground_size-1."""

    ground_size: int

    @property
    @abstractmethod
    def rank(self) -> int:
        """Size of the largest independent set."""

    @property
    @abstractmethod
    def descriptor(self) -> str:
        """Short text label used in reports."""

    @abstractmethod
    def _respects_caps(self, S: FrozenSet[int]) -> bool:
        pass

    def _check_ground(self, S: Iterable[int]) -> FrozenSet[int]:
        members = frozenset(int(i) for i in S)
        for i in members:
            if not 0 <= i < self.ground_size:
                raise ConfigError(f"Index {i} outside the ground set 0..{self.ground_size - 1}")
        return members

    def is_independent(self, S: Iterable[int]) -> bool:
        return self._respects_caps(self._check_ground(S))

    def can_extend(self, S: Iterable[int], x: int) -> bool:
        members = self._check_ground(S)
        x = int(x)
        if x in members:
            raise ConfigError(f"Element {x} already in the set")
        return self._respects_caps(self._check_ground(members | {x}))


@dataclass(frozen=True)
class UniformMatroid(MatroidSpec):
    """Cardinality constraint |S| <= N."""
    N: int
    ground_size: int

    def __post_init__(self):
        if self.N < 0 or self.ground_size < 0:
            raise ConfigError("Uniform matroid needs N >= 0 and a nonnegative ground size")

    @property
    def rank(self) -> int:
        return min(self.N, self.ground_size)

    @property
    def descriptor(self) -> str:
        return f"uniform(N={self.N})"

    def _respects_caps(self, S: FrozenSet[int]) -> bool:
        return len(S) <= self.N


@dataclass(frozen=True)
class PartitionMatroid(MatroidSpec):
    """Cardinality-constrained partition matroid."""
    bins: Tuple[Tuple[int, ...], ...]
    caps: Tuple[int, ...]
    global_cap: int
    ground_size: int

    def __post_init__(self):
        if len(self.bins) != len(self.caps):
            raise ConfigError(f"Got {len(self.caps)} caps for {len(self.bins)} bins")
        if any(c < 0 for c in self.caps) or self.global_cap < 0:
            raise ConfigError("Partition caps must be nonnegative")
        covered = [i for b in self.bins for i in b]
        if len(covered) != len(set(covered)):
            raise ConfigError("Partition bins overlap")
        if sorted(covered) != list(range(self.ground_size)):
            raise ConfigError("Partition bins must cover the ground set exactly")
        lookup = {i: j for j, b in enumerate(self.bins) for i in b}
        object.__setattr__(self, '_bin_of', lookup)

    @property
    def rank(self) -> int:
        per_bin = sum(min(c, len(b)) for b, c in zip(self.bins, self.caps))
        return min(self.global_cap, per_bin)

    @property
    def descriptor(self) -> str:
        return f"partition(bins={len(self.bins)},N={self.global_cap})"

    def bin_of(self, i: int) -> int:
        return self._bin_of[int(i)]

    def bin_counts(self, S: Iterable[int]) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for i in S:
            j = self._bin_of[int(i)]
            counts[j] = counts.get(j, 0) + 1
        return counts

    def _respects_caps(self, S: FrozenSet[int]) -> bool:
        if len(S) > self.global_cap:
            return False
        return all(n <= self.caps[j] for j, n in self.bin_counts(S).items())


def is_independent(spec: MatroidSpec, S: Iterable[int]) -> bool:
    """True iff S respects every cap of the constraint."""
    return spec.is_independent(S)


def can_extend(spec: MatroidSpec, S: Iterable[int], x: int) -> bool:
    """True iff S + {x} is independent."""
    return spec.can_extend(S, x)


def partition_from_bins(
    grid: CandidateGrid,
    bin_width: float,
    offset: float,
    caps: Union[int, Sequence[int]],
    global_cap: int
) -> PartitionMatroid:
    """
    Partition the grid into half-open bins [offset + k w, offset + (k+1) w).

    Args:
        grid: Candidate grid (the ground set)
        bin_width: Bin width w > 0
        offset: Left edge of bin k = 0
        caps: One cap for all bins, or one cap per nonempty bin (left to right)
        global_cap: Global cardinality cap N

    Returns:
        PartitionMatroid over the grid indices
    """
    if not bin_width > 0:
        raise ConfigError(f"Bin width must be positive, got {bin_width}")

    # Rounding snaps points lying on an edge up to floating error onto the edge.
    bin_keys = np.floor(np.round((grid.positions - offset) / bin_width, 9)).astype(int)
    grouped: Dict[int, List[int]] = {}
    for i, key in enumerate(bin_keys):
        grouped.setdefault(int(key), []).append(i)
    bins = tuple(tuple(grouped[key]) for key in sorted(grouped))

    if isinstance(caps, (int, np.integer)):
        cap_tuple = tuple(int(caps) for _ in bins)
    else:
        cap_tuple = tuple(int(c) for c in caps)
        if len(cap_tuple) != len(bins):
            raise ConfigError(f"Expected {len(bins)} per-bin caps, got {len(cap_tuple)}")

    logger.debug(
        f"Partition: {len(bins)} nonempty bins of width {bin_width} "
        f"(offset {offset}), global cap {global_cap}"
    )
    return PartitionMatroid(
        bins=bins,
        caps=cap_tuple,
        global_cap=int(global_cap),
        ground_size=len(grid),
    )


def bin_edges(matroid: PartitionMatroid, grid: CandidateGrid, bin_width: float, offset: float) -> List[Tuple[float, float]]:
    """Half-open interval of each nonempty bin, for reporting."""
    edges = []
    for b in matroid.bins:
        k = math.floor(round((grid.positions[b[0]] - offset) / bin_width, 9))
        edges.append((offset + k * bin_width, offset + (k + 1) * bin_width))
    return edges
