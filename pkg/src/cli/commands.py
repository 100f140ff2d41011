"""Subcommand implementations: design, bounds, mc and verify."""
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import orjson

from .. import __version__
from ..bayes import MonteCarloEngine, design_label
from ..bounds import bounds_report
from ..core.errors import ConfigError, NumericalFailure, VerificationFailure
from ..core.verification import default_suite
from ..optimizer import SOLVERS, Design, ExhaustiveSolver, MatroidGreedySolver
from ..utils.config import Config
from ..utils.logger import setup_logger
from .artifacts import (
    atomic_write_text,
    base_metadata,
    load_design,
    partition_metadata,
    write_bounds,
    write_csv,
    write_design,
)
from .run_config import RunConfig

logger = setup_logger(__name__)


def _out_dir(config: RunConfig, out_dir: Optional[Path]) -> Path:
    return Path(out_dir) if out_dir is not None else Path(config.output_dir)


def design_for(config: RunConfig, snr_db: float) -> Design:
    """
    Solve one design at a target SNR under the configured constraint.

    Args:
        config: Run configuration
        snr_db: Target SNR in dB

    Returns:
        Design with its certificate attached
    """
    model = config.model(snr_db)
    matroid = config.matroid(model.grid)

    if matroid is None:
        solver = SOLVERS[config.solver]()
        design = solver.solve(model, config.budget)
    elif config.solver == 'exhaustive':
        solver = ExhaustiveSolver()
        design = solver.solve(model, config.budget, matroid=matroid)
    else:
        solver = MatroidGreedySolver()
        design = solver.solve(model, matroid)

    if not solver.validate_design(design, model):
        raise NumericalFailure(f"{solver.name} produced an inconsistent design at {snr_db:g} dB")
    return design.with_certificate(bounds_report(model, design))


def cmd_design(config: RunConfig, out_dir: Optional[Path] = None) -> List[Path]:
    """
    Compute and write one design file per configured SNR.

    Args:
        config: Run configuration
        out_dir: Output directory overriding config.output_dir

    Returns:
        Paths of the written design files
    """
    out = _out_dir(config, out_dir)
    config_hash = config.config_hash()
    base = config.model(config.snr_list[0])
    logger.info(
        f"Design sweep: {len(base.grid)} candidates, budget {config.budget}, "
        f"solver {config.solver}, SNRs {config.snr_list} dB, epsilon={base.epsilon:.3e}"
    )

    matroid = config.matroid(base.grid)
    extra = None
    if matroid is not None:
        part = config.partition
        extra = partition_metadata(matroid, base.grid, part.bin_width, part.offset)

    paths = []
    for snr in config.snr_list:
        design = design_for(config, snr)
        paths.append(write_design(design, base.with_snr(snr), out, config_hash, extra))
        logger.info(
            f"{design.solver} @ {snr:g} dB: MI={design.mi_nats:.4f} nats, "
            f"positions={[round(p, 4) for p in sorted(design.positions)]}"
        )
    return paths


def cmd_bounds(config: RunConfig, design_file: Path, out_dir: Optional[Path] = None) -> Path:
    """
    Evaluate every bound for a design file.

    Args:
        config: Run configuration the design was produced with
        design_file: Path to a design file
        out_dir: Output directory overriding config.output_dir

    Returns:
        Path of the bounds file
    """
    base = config.model()
    design = load_design(design_file, base)
    model = base.with_snr(design.snr_db)
    return write_bounds(
        design, model, design_file, _out_dir(config, out_dir),
        config.config_hash(), inject_epsilon=config.inject_epsilon,
    )


def _labels(designs: Sequence[Design], files: Sequence[Path]) -> List[str]:
    labels = [design_label(d) for d in designs]
    if len(set(labels)) != len(labels):
        labels = [Path(f).stem for f in files]
    return labels


def cmd_mc(
    config: RunConfig,
    design_files: Sequence[Path],
    out_dir: Optional[Path] = None,
    threads: Optional[int] = None
) -> Path:
    """
    Monte-Carlo MSE of every design at every evaluation SNR.

    Args:
        config: Run configuration (seed, trials, eval_snrs_db)
        design_files: Design files to compare
        out_dir: Output directory overriding config.output_dir
        threads: Worker threads; affects speed only

    Returns:
        Path of mse.csv
    """
    if not design_files:
        raise ConfigError("mc needs at least one design file")
    model = config.model()
    designs = [load_design(f, model) for f in design_files]
    engine = MonteCarloEngine(
        model, designs, config.eval_snrs_db, config.trials,
        seed=config.seed,
        workers=threads or Config.THREADS,
        labels=_labels(designs, design_files),
    )
    metrics = engine.run()

    out = _out_dir(config, out_dir)
    metadata = base_metadata(config.config_hash())
    metadata.update({
        'seed': config.seed,
        'trials': config.trials,
        'estimator': 'posterior_mean',
        'prior_mse': metrics.prior_mse,
    })
    path = write_csv(metrics.to_frame(), out / 'mse.csv', metadata)
    report = engine.generate_report(metrics, provenance=base_metadata(config.config_hash()))
    atomic_write_text(out / 'mse_report.txt', report)
    return path


def cmd_verify(
    config: RunConfig,
    out_dir: Optional[Path] = None,
    trials: Optional[int] = None,
    instances: Optional[int] = None
) -> Dict[str, Any]:
    """
    Run the property suites and write verify.json.

    Args:
        config: Run configuration (the model at its first SNR is the test bed)
        out_dir: Output directory overriding config.output_dir
        trials: Random triples per objective suite
        instances: Small instances per oracle suite

    Returns:
        Suite report

    Raises:
        VerificationFailure: Any critical suite failed (after the report is written)
    """
    suite = default_suite(config.model(), seed=config.seed, trials=trials, instances=instances)
    report = suite.check_all()
    report['config_hash'] = config.config_hash()
    report['tool_version'] = __version__

    path = _out_dir(config, out_dir) / 'verify.json'
    atomic_write_text(path, orjson.dumps(report, option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2).decode() + '\n')
    logger.info(f"Verification report written to {path}")

    if not report['passed']:
        failed = [name for name, r in report['suites'].items() if not r['passed']]
        raise VerificationFailure(f"Property suites failed: {', '.join(failed)}")
    return report
