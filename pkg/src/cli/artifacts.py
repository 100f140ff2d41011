"""
CSV artifacts: design tables, bound tables and MSE tables.

Every file is a header row plus data rows written by pandas, followed by
footer rows of the form '# key,value'. Readers skip footers with
comment='#' and recover them separately. Files are written to a temporary
sibling and renamed into place, so a failed run never leaves a partial file.
"""
import os
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from .. import __version__
from ..bounds import BoundsReport, Inapplicable, bounds_report
from ..core.errors import ConfigError
from ..matroids import PartitionMatroid, bin_edges
from ..model import CandidateGrid, SensingModel
from ..optimizer import TIE_BREAK_RULE, Design
from ..optimizer.certificates import nemhauser_factor
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

DESIGN_COLUMNS = ['step', 'index', 'position', 'gain_nats', 'cumulative_mi_nats']
BOUNDS_COLUMNS = ['name', 'value_nats', 'hypothesis_ok', 'epsilon_source', 'epsilon', 'delta', 'N', 'noise_var']
INAPPLICABLE = 'inapplicable'

PathLike = Union[str, Path]


def format_value(value) -> str:
    """Shortest round-trip text for floats, 'inapplicable' for markers."""
    if isinstance(value, Inapplicable):
        return INAPPLICABLE
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def atomic_write_text(path: PathLike, text: str) -> Path:
    """Write text to a temporary sibling and rename it over path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_name(path.name + '.tmp')
    try:
        with open(tmp_path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
        os.replace(tmp_path, path)
    finally:
        if tmp_path.exists():
            tmp_path.unlink()
    return path


def write_csv(frame: pd.DataFrame, path: PathLike, metadata: Dict[str, object]) -> Path:
    """
    Write a table with '# key,value' footer rows.

    Args:
        frame: Table; float cells are written with their shortest round-trip repr
        path: Destination
        metadata: Footer rows in insertion order

    Returns:
        Path written
    """
    body = frame.copy()
    for column in body.columns:
        if pd.api.types.is_float_dtype(body[column]):
            body[column] = body[column].map(format_value)
    text = body.to_csv(index=False, lineterminator='\n')
    for key, value in metadata.items():
        text += f"# {key},{format_value(value)}\n"
    written = atomic_write_text(path, text)
    logger.info(f"Wrote {len(frame)} rows to {written}")
    return written


def read_csv(path: PathLike) -> Tuple[pd.DataFrame, Dict[str, str]]:
    """
    Read a table written by write_csv.

    Returns:
        (frame, metadata) with metadata values as strings
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Artifact not found: {path}")
    metadata: Dict[str, str] = {}
    with open(path, encoding='utf-8') as f:
        for line in f:
            if line.startswith('# '):
                key, _, value = line[2:].rstrip('\n').partition(',')
                metadata[key] = value
    frame = pd.read_csv(path, comment='#', keep_default_na=False)
    return frame, metadata


def base_metadata(config_hash: str) -> Dict[str, object]:
    return {'tool_version': __version__, 'config_hash': config_hash}


# ---------------------------------------------------------------------------
# Designs
# ---------------------------------------------------------------------------

def design_filename(design: Design) -> str:
    return f"design_{design.solver}_{design.snr_db:g}dB.csv"


def design_frame(design: Design) -> pd.DataFrame:
    return pd.DataFrame({
        'step': np.arange(1, len(design) + 1, dtype=int),
        'index': np.asarray(design.indices, dtype=int),
        'position': np.asarray(design.positions, dtype=float),
        'gain_nats': np.asarray(design.gains, dtype=float),
        'cumulative_mi_nats': np.cumsum(np.asarray(design.gains, dtype=float)),
    }, columns=DESIGN_COLUMNS)


def design_metadata(
    design: Design,
    report: BoundsReport,
    config_hash: str,
    extra: Optional[Dict[str, object]] = None
) -> Dict[str, object]:
    """Footer rows of a design file."""
    cardinality = not isinstance(report.nemhauser_hi, Inapplicable)
    metadata = base_metadata(config_hash)
    metadata.update({
        'solver': design.solver,
        'constraint': design.constraint,
        'budget': design.budget,
        'snr_db': float(design.snr_db),
        'total_mi_nats': design.mi_nats,
        'guarantee_factor': report.guarantee_factor,
        'nemhauser_bound': report.nemhauser_hi,
        'nemhauser_bound_finite': report.nemhauser_hi_finite,
        'nemhauser_factor_finite': nemhauser_factor(report.N) if cardinality else report.nemhauser_hi_finite,
        'matroid_half_bound': report.matroid_half_hi,
        'online_bound': report.online_hi,
        'epsilon': report.epsilon,
        'epsilon_halfwidth': report.epsilon_halfwidth,
        'epsilon_note': 'computed from the normalized prior tail; a tail near 1e-4 can be injected for comparison',
        'lemma1_lo': report.lemma1_lo,
        'lemma1_hi': report.lemma1_hi,
        'lemma2_hi': report.lemma2_hi,
        'corollary_lo': report.corollary_lo,
        'corollary_opt_hi': report.corollary_opt_hi,
        'tie_break': TIE_BREAK_RULE,
        'evaluations': design.evaluations,
    })
    for key, value in sorted(design.diagnostics.items()):
        metadata[key] = value
    metadata.update(extra or {})
    return metadata


def partition_metadata(
    matroid: PartitionMatroid,
    grid: CandidateGrid,
    bin_width: float,
    offset: float
) -> Dict[str, object]:
    """Footer rows describing a partition: one lo:hi interval and one cap per nonempty bin."""
    edges = bin_edges(matroid, grid, bin_width, offset)
    return {
        'bin_edges': ';'.join(f"{format_value(lo)}:{format_value(hi)}" for lo, hi in edges),
        'bin_caps': ';'.join(str(c) for c in matroid.caps),
        'global_cap': matroid.global_cap,
    }


def write_design(
    design: Design,
    model: SensingModel,
    out_dir: PathLike,
    config_hash: str,
    extra: Optional[Dict[str, object]] = None
) -> Path:
    """Write a design file with its certificate footer; extra rows are appended last."""
    report = design.certificate if design.certificate is not None else bounds_report(model, design)
    path = Path(out_dir) / design_filename(design)
    return write_csv(design_frame(design), path, design_metadata(design, report, config_hash, extra))


def load_design(path: PathLike, model: SensingModel) -> Design:
    """
    Rebuild a Design from a design file and check it against the model grid.

    Args:
        path: File written by write_design
        model: Model the design should belong to

    Returns:
        Design

    Raises:
        ConfigError: Missing file, missing columns or positions off the grid
    """
    frame, metadata = read_csv(path)
    missing = [c for c in DESIGN_COLUMNS if c not in frame.columns]
    if missing:
        raise ConfigError(f"{path} is not a design file (missing columns {missing})")
    for key in ('solver', 'constraint', 'budget', 'snr_db', 'total_mi_nats'):
        if key not in metadata:
            raise ConfigError(f"{path} is missing footer key {key!r}")

    indices = tuple(int(i) for i in frame['index'])
    positions = tuple(float(p) for p in frame['position'])
    for i, x in zip(indices, positions):
        if not 0 <= i < model.n_candidates or abs(model.positions[i] - x) > 1e-9 * max(1.0, abs(x)):
            raise ConfigError(f"{path} is incompatible with the configured grid (index {i}, position {x})")

    return Design(
        indices=indices,
        positions=positions,
        gains=tuple(float(g) for g in frame['gain_nats']),
        mi_nats=float(metadata['total_mi_nats']),
        budget=int(metadata['budget']),
        constraint=metadata['constraint'],
        solver=metadata['solver'],
        snr_db=float(metadata['snr_db']),
        evaluations=int(metadata.get('evaluations', 0)),
    )


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

def bounds_frame(reports: List[Tuple[str, BoundsReport]]) -> pd.DataFrame:
    """One row per (bound, epsilon source)."""
    rows = []
    for source, report in reports:
        entries = [
            ('lemma1_lo', report.lemma1_lo),
            ('lemma1_hi', report.lemma1_hi),
            ('lemma2_hi', report.lemma2_hi),
            ('corollary_greedy_lo', report.corollary_lo),
            ('corollary_opt_hi', report.corollary_opt_hi),
            ('nemhauser', report.nemhauser_hi),
            ('nemhauser_finite', report.nemhauser_hi_finite),
            ('matroid_half', report.matroid_half_hi),
            ('online', report.online_hi),
        ]
        for name, value in entries:
            rows.append({
                'name': name,
                'value_nats': format_value(value),
                'hypothesis_ok': format_value(not isinstance(value, Inapplicable)),
                'epsilon_source': source,
                'epsilon': report.epsilon,
                'delta': report.delta,
                'N': report.N,
                'noise_var': report.noise_var,
            })
    return pd.DataFrame(rows, columns=BOUNDS_COLUMNS)


def bounds_filename(design_path: PathLike) -> str:
    stem = Path(design_path).stem
    stem = stem[len('design_'):] if stem.startswith('design_') else stem
    return f"bounds_{stem}.csv"


def write_bounds(
    design: Design,
    model: SensingModel,
    design_path: PathLike,
    out_dir: PathLike,
    config_hash: str,
    inject_epsilon: Optional[float] = None
) -> Path:
    """Write the bound table for a design, with an extra block for an injected epsilon."""
    reports = [('computed', bounds_report(model, design))]
    if inject_epsilon is not None:
        reports.append(('injected', bounds_report(model, design, epsilon=inject_epsilon)))
    metadata = base_metadata(config_hash)
    metadata.update({
        'design_file': Path(design_path).name,
        'achieved_mi_nats': design.mi_nats,
        'epsilon_halfwidth': reports[0][1].epsilon_halfwidth,
    })
    path = Path(out_dir) / bounds_filename(design_path)
    return write_csv(bounds_frame(reports), path, metadata)


def read_bounds(path: PathLike) -> Dict[Tuple[str, str], Union[float, str]]:
    """Map (epsilon_source, name) to a float value or 'inapplicable'."""
    frame, _ = read_csv(path)
    values: Dict[Tuple[str, str], Union[float, str]] = {}
    for row in frame.itertuples(index=False):
        raw = str(row.value_nats)
        values[(row.epsilon_source, row.name)] = raw if raw == INAPPLICABLE else float(raw)
    return values
