"""Monte-Carlo reconstruction-error engine for comparing array designs."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..core.errors import ConfigError
from ..model.sensing_model import SensingModel
from ..optimizer.base_solver import Design
from ..utils.logger import setup_logger
from .inference import PosteriorOperator, circular_normal, posterior_operator, sample_scene, trial_stream

logger = setup_logger(__name__)

MSE_COLUMNS = [
    'design_label', 'design_target_snr_db', 'eval_snr_db', 'trials',
    'mean_mse', 'stderr_mse', 'trace_posterior_cov',
]


def design_label(design: Design) -> str:
    """Default label such as 'greedy@5dB'."""
    return f"{design.solver}@{design.snr_db:g}dB"


@dataclass
class MSECell:
    """Aggregated error for one (design, evaluation SNR) pair."""
    design_label: str
    design_target_snr_db: float
    eval_snr_db: float
    trials: int
    mean_mse: float
    stderr_mse: float
    trace_posterior_cov: float


@dataclass
class MonteCarloMetrics:
    """Result table of a Monte-Carlo run."""
    seed: int
    trials: int
    prior_mse: float
    cells: List[MSECell] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([vars(c) for c in self.cells], columns=MSE_COLUMNS)

    def best_by_snr(self) -> Dict[float, str]:
        """Label of the lowest mean MSE at each evaluation SNR."""
        frame = self.to_frame()
        best = frame.loc[frame.groupby('eval_snr_db', sort=False)['mean_mse'].idxmin()]
        return dict(zip(best['eval_snr_db'], best['design_label']))

    def matched_wins(self) -> int:
        """
        Count evaluation SNRs where the design targeted at that SNR is best or
        within one standard error of best.
        """
        frame = self.to_frame()
        wins = 0
        for snr, group in frame.groupby('eval_snr_db', sort=False):
            matched = group[group['design_target_snr_db'] == snr]
            if matched.empty:
                continue
            row = matched.iloc[0]
            if row['mean_mse'] <= group['mean_mse'].min() + row['stderr_mse']:
                wins += 1
        return wins


class MonteCarloEngine:
    """
    Paired Monte-Carlo evaluation of designs across noise levels.

    Trial t draws its scene from stream(seed, t) and the noise for evaluation
    SNR s from stream(seed, t, s). Every design sees the same scene and the
    same noise at a given trial, and aggregation runs over trial order so the
    table does not depend on the worker count.
    """

    def __init__(
        self,
        model: SensingModel,
        designs: Sequence[Design],
        eval_snrs_db: Sequence[float],
        trials: int,
        seed: int = 0,
        workers: int = 1,
        labels: Optional[Sequence[str]] = None
    ):
        """
        Initialize the engine.

        Args:
            model: Model the designs were computed on (its noise level is replaced per eval SNR)
            designs: Designs to compare
            eval_snrs_db: Noise levels to evaluate at
            trials: Number of scenes
            seed: Run seed
            workers: Thread count; affects speed only
            labels: Optional design labels, defaulting to 'solver@snrdB'
        """
        if trials < 1:
            raise ConfigError(f"trials must be at least 1, got {trials}")
        if not designs:
            raise ConfigError("At least one design is required")
        if not eval_snrs_db:
            raise ConfigError("At least one evaluation SNR is required")
        if labels is not None and len(labels) != len(designs):
            raise ConfigError("labels must match designs one to one")
        if workers < 1:
            raise ConfigError(f"workers must be at least 1, got {workers}")

        self.model = model
        self.designs = list(designs)
        self.eval_snrs_db = [float(s) for s in eval_snrs_db]
        self.trials = int(trials)
        self.seed = int(seed)
        self.workers = int(workers)
        self.labels = list(labels) if labels is not None else [design_label(d) for d in self.designs]

        self.operators: List[List[PosteriorOperator]] = [
            [posterior_operator(model.with_snr(snr), d.indices) for snr in self.eval_snrs_db]
            for d in self.designs
        ]
        self.noise_scales = [np.sqrt(model.with_snr(snr).noise_var) for snr in self.eval_snrs_db]

        logger.info(
            f"Monte-Carlo engine initialized - Designs: {len(self.designs)}, "
            f"SNRs: {self.eval_snrs_db}, Trials: {self.trials}, Workers: {self.workers}"
        )

    def run_trial(self, t: int) -> np.ndarray:
        """
        Squared coefficient error of every (design, eval SNR) pair for trial t.

        Returns:
            Array of shape (designs, eval SNRs)
        """
        scene = sample_scene(self.model.prior, trial_stream(self.seed, t))
        clean = self.model.kernel @ scene.beta
        errors = np.empty((len(self.designs), len(self.eval_snrs_db)))

        for s, scale in enumerate(self.noise_scales):
            noise = circular_normal(trial_stream(self.seed, t, s), self.model.n_candidates)
            measurements = clean + scale * noise
            for d, design in enumerate(self.designs):
                op = self.operators[d][s]
                f = measurements[list(design.indices)]
                estimate = op.gain @ f.real + 1j * (op.gain @ f.imag)
                errors[d, s] = np.sum(np.abs(scene.beta - estimate) ** 2)
        return errors

    def run(self) -> MonteCarloMetrics:
        """
        Run every trial and aggregate.

        Returns:
            MonteCarloMetrics
        """
        logger.info(f"Starting Monte-Carlo run with {self.trials} trials")

        if self.workers == 1:
            results = [self.run_trial(t) for t in range(self.trials)]
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(self.run_trial, range(self.trials)))

        metrics = self.calculate_metrics(np.stack(results))

        logger.info(
            f"Monte-Carlo run completed - Cells: {len(metrics.cells)}, "
            f"matched-SNR wins: {metrics.matched_wins()}/{len(self.eval_snrs_db)}"
        )
        return metrics

    def calculate_metrics(self, errors: np.ndarray) -> MonteCarloMetrics:
        """
        Reduce per-trial errors to mean and standard error per cell.

        Args:
            errors: Array of shape (trials, designs, eval SNRs) in trial order

        Returns:
            MonteCarloMetrics
        """
        T = errors.shape[0]
        means = errors.mean(axis=0)
        stderr = errors.std(axis=0, ddof=1) / np.sqrt(T) if T > 1 else np.zeros_like(means)

        metrics = MonteCarloMetrics(
            seed=self.seed,
            trials=T,
            prior_mse=float(self.model.prior.retained_power)
        )
        for d, design in enumerate(self.designs):
            for s, snr in enumerate(self.eval_snrs_db):
                metrics.cells.append(MSECell(
                    design_label=self.labels[d],
                    design_target_snr_db=float(design.snr_db),
                    eval_snr_db=snr,
                    trials=T,
                    mean_mse=float(means[d, s]),
                    stderr_mse=float(stderr[d, s]),
                    trace_posterior_cov=self.operators[d][s].trace,
                ))
        return metrics

    def generate_report(self, metrics: MonteCarloMetrics, provenance: Optional[Dict[str, object]] = None) -> str:
        """
        Generate a text report of the MSE table.

        Args:
            metrics: Monte-Carlo metrics
            provenance: Header rows (tool version, config hash) printed under the title

        Returns:
            Formatted report string
        """
        frame = metrics.to_frame()
        table = frame.pivot(index='design_label', columns='eval_snr_db', values='mean_mse')
        table = table.reindex(index=list(dict.fromkeys(self.labels)), columns=self.eval_snrs_db)
        best = metrics.best_by_snr()

        best_lines = "\n".join(f"  {snr:>6g} dB: {label}" for snr, label in best.items())
        header = "".join(f"{key}: {value}\n" for key, value in (provenance or {}).items())
        report = f"""
{'='*60}
MONTE-CARLO MSE REPORT
{'='*60}

{header}Seed: {metrics.seed}
Trials: {metrics.trials}
Prior MSE (zero estimator): {metrics.prior_mse:.6f}

MEAN MSE (rows: design, columns: eval SNR dB)
{'-'*60}
{table.to_string(float_format=lambda v: f'{v:.6f}')}

BEST DESIGN PER EVAL SNR
{'-'*60}
{best_lines}

Matched-SNR wins (within one standard error): {metrics.matched_wins()}/{len(self.eval_snrs_db)}
{'='*60}
        """
        return report


def mc_mse(
    model: SensingModel,
    designs: Sequence[Design],
    eval_snrs_db: Sequence[float],
    trials: int,
    seed: int = 0,
    workers: int = 1,
    labels: Optional[Sequence[str]] = None
) -> MonteCarloMetrics:
    """Run a paired Monte-Carlo comparison and return the MSE table."""
    engine = MonteCarloEngine(model, designs, eval_snrs_db, trials, seed=seed, workers=workers, labels=labels)
    return engine.run()
