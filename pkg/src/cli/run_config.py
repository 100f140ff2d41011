"""Run configuration document (YAML) and its domain-object builders."""
import hashlib
import math
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import orjson
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..core.errors import ConfigError
from ..matroids import MatroidSpec, partition_from_bins
from ..model import CandidateGrid, PriorSpec, SensingModel, build_model, build_prior
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

DEFAULT_SNRS_DB = [30.0, 12.0, 10.0, 5.0, 0.0]


class _Section(BaseModel):
    model_config = ConfigDict(extra='forbid', populate_by_name=True, frozen=True)


class ApertureConfig(_Section):
    a_min: float = Field(-3.5, alias='min')
    a_max: float = Field(3.5, alias='max')

    @model_validator(mode='after')
    def _ordered(self) -> 'ApertureConfig':
        if not (math.isfinite(self.a_min) and math.isfinite(self.a_max) and self.a_min < self.a_max):
            raise ValueError(f"aperture.min must be below aperture.max, got [{self.a_min}, {self.a_max}]")
        return self


class PriorConfig(_Section):
    r: int = Field(1, ge=1)
    P: float = Field(1.0, gt=0)
    M_half: int = Field(450, ge=1)


class PartitionConfig(_Section):
    bin_width: float = Field(0.5, gt=0)
    offset: float = -0.25
    caps: Union[int, List[int]] = 1
    global_cap: Optional[int] = Field(None, ge=0)

    @field_validator('caps')
    @classmethod
    def _nonnegative(cls, caps):
        values = caps if isinstance(caps, list) else [caps]
        if any(c < 0 for c in values):
            raise ValueError("caps must be nonnegative")
        return caps


class PartitionConstraint(_Section):
    partition: PartitionConfig


def _check_finite(values: List[float], name: str) -> List[float]:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v}")
    return values


class RunConfig(_Section):
    """
    Complete experiment description.

    Every key defaults to the experimental-section setup: lambda = 1,
    aperture [-3.5, 3.5], spacing 0.0625 (113 candidates), N = 11,
    r = 1, P = 1, M_half = 450 and target SNRs {30, 12, 10, 5, 0} dB.
    """
    lambda_: float = Field(1.0, alias='lambda', gt=0)
    aperture: ApertureConfig = Field(default_factory=ApertureConfig)
    grid_delta: float = Field(0.0625, gt=0)
    budget: int = Field(11, ge=1)
    prior: PriorConfig = Field(default_factory=PriorConfig)
    snr_db: Union[float, List[float]] = Field(default_factory=lambda: list(DEFAULT_SNRS_DB))
    constraint: Union[Literal['uniform'], PartitionConstraint] = 'uniform'
    solver: Literal['greedy', 'lazy', 'exhaustive'] = 'greedy'
    seed: int = Field(0, ge=0)
    trials: int = Field(1000, ge=1)
    eval_snrs_db: List[float] = Field(default_factory=lambda: list(DEFAULT_SNRS_DB))
    inject_epsilon: Optional[float] = Field(None, gt=0)
    output_dir: str = 'results'

    @field_validator('snr_db')
    @classmethod
    def _snr_finite(cls, value):
        values = value if isinstance(value, list) else [value]
        if not values:
            raise ValueError("snr_db must name at least one SNR")
        _check_finite(values, 'snr_db')
        return value

    @field_validator('eval_snrs_db')
    @classmethod
    def _eval_finite(cls, value):
        if not value:
            raise ValueError("eval_snrs_db must name at least one SNR")
        return _check_finite(value, 'eval_snrs_db')

    # ------------------------------------------------------------------

    @classmethod
    def from_yaml(cls, path: Union[str, Path]) -> 'RunConfig':
        """
        Load and validate a YAML run configuration.

        Args:
            path: Path to the document

        Returns:
            RunConfig

        Raises:
            ConfigError: Missing file, malformed YAML, unknown keys or invalid values
        """
        path = Path(path)
        try:
            data = yaml.safe_load(path.read_text(encoding='utf-8'))
        except OSError as e:
            raise ConfigError(f"Cannot read config {path}: {e}") from e
        except yaml.YAMLError as e:
            raise ConfigError(f"Malformed YAML in {path}: {e}") from e
        config = cls.from_mapping(data or {})
        logger.info(f"Run configuration loaded from {path} (hash {config.config_hash()})")
        return config

    @classmethod
    def from_mapping(cls, data: Dict[str, Any]) -> 'RunConfig':
        """Validate a plain mapping, raising ConfigError on failure."""
        if not isinstance(data, dict):
            raise ConfigError(f"Config document must be a mapping, got {type(data).__name__}")
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"Invalid run configuration:\n{e}") from e

    def with_overrides(self, **changes: Any) -> 'RunConfig':
        """Copy with command-line overrides applied (None values are ignored)."""
        data = self.canonical()
        for key, value in changes.items():
            if value is not None:
                data[key] = value
        return RunConfig.from_mapping(data)

    def canonical(self) -> Dict[str, Any]:
        """JSON-compatible dict using the document's key names."""
        return self.model_dump(mode='json', by_alias=True)

    def config_hash(self) -> str:
        """First 16 hex digits of SHA-256 over the sorted-key JSON form."""
        payload = orjson.dumps(self.canonical(), option=orjson.OPT_SORT_KEYS)
        return hashlib.sha256(payload).hexdigest()[:16]

    # ------------------------------------------------------------------

    @property
    def snr_list(self) -> List[float]:
        return list(self.snr_db) if isinstance(self.snr_db, list) else [float(self.snr_db)]

    @property
    def partition(self) -> Optional[PartitionConfig]:
        return self.constraint.partition if isinstance(self.constraint, PartitionConstraint) else None

    def grid(self) -> CandidateGrid:
        return CandidateGrid.from_aperture(self.aperture.a_min, self.aperture.a_max, self.grid_delta)

    def prior_spec(self) -> PriorSpec:
        return build_prior(self.prior.r, self.prior.P, self.prior.M_half)

    def model(self, snr_db: Optional[float] = None) -> SensingModel:
        """
        Build the sensing model.

        Args:
            snr_db: SNR in dB; defaults to the first configured target

        Returns:
            SensingModel with N_ref = budget
        """
        snr_db = self.snr_list[0] if snr_db is None else float(snr_db)
        return build_model(self.lambda_, snr_db, self.budget, self.grid(), self.prior_spec())

    def matroid(self, grid: CandidateGrid) -> Optional[MatroidSpec]:
        """Partition matroid for a partition constraint, None for a plain budget."""
        part = self.partition
        if part is None:
            return None
        global_cap = self.budget if part.global_cap is None else part.global_cap
        return partition_from_bins(grid, part.bin_width, part.offset, part.caps, global_cap)
