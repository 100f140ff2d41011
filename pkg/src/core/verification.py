"""
Randomized property suites for the objective, solvers and constraints.

Suites are registered on a VerificationSuite, run in registration order, and
reported as pass/fail with check counts and the worst observed margin. A
suite passes when no check violates its tolerance.
"""
import itertools
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from ..utils.config import Config
from ..utils.logger import setup_logger

logger = setup_logger(__name__)

SUBMODULARITY_TOL = 1e-9
MONOTONICITY_TOL = 1e-12
CONSISTENCY_RTOL = 1e-8
ORACLE_TOL = 1e-9


@dataclass
class SuiteResult:
    """Outcome of one property suite."""
    name: str
    passed: bool
    checks: int
    violations: int
    worst_margin: float
    detail: str = ''
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _result(name: str, margins: List[float], tol: float, detail: str = '') -> SuiteResult:
    margins_arr = np.asarray(margins, dtype=float)
    violations = int(np.sum(margins_arr < -tol)) if margins_arr.size else 0
    return SuiteResult(
        name=name,
        passed=violations == 0,
        checks=int(margins_arr.size),
        violations=violations,
        worst_margin=float(margins_arr.min()) if margins_arr.size else 0.0,
        detail=detail,
    )


class VerificationSuite:
    """Registry of property suites."""

    def __init__(self):
        """Initialize an empty registry."""
        self.suites: Dict[str, Dict[str, Any]] = {}
        self.results: Dict[str, SuiteResult] = {}

    def register(self, name: str, check_func: Callable[[], SuiteResult], critical: bool = True) -> None:
        """
        Register a suite.

        Args:
            name: Suite name
            check_func: Callable returning a SuiteResult
            critical: Whether a failure fails the whole run
        """
        self.suites[name] = {'check': check_func, 'critical': critical}

    def check_suite(self, name: str) -> SuiteResult:
        """
        Run one suite, turning unexpected exceptions into a failed result.

        Args:
            name: Suite name

        Returns:
            SuiteResult
        """
        suite = self.suites[name]
        try:
            result = suite['check']()
        except Exception as e:
            logger.error(f"Suite {name} raised: {e}", exc_info=True)
            result = SuiteResult(name=name, passed=False, checks=0, violations=0,
                                 worst_margin=float('nan'), error=str(e))

        level = 'passed' if result.passed else 'FAILED'
        logger.info(
            f"Suite {name} {level} - checks: {result.checks}, violations: {result.violations}, "
            f"worst margin: {result.worst_margin:.3e}"
        )
        self.results[name] = result
        return result

    def check_all(self) -> Dict[str, Any]:
        """
        Run every registered suite.

        Returns:
            {'passed': bool, 'suites': {name: result dict}}
        """
        suites = {}
        critical_failure = False
        for name, entry in self.suites.items():
            result = self.check_suite(name)
            suites[name] = {**result.to_dict(), 'critical': entry['critical']}
            if not result.passed and entry['critical']:
                critical_failure = True
        return {'passed': not critical_failure, 'suites': suites}


# ---------------------------------------------------------------------------
# Property suites
# ---------------------------------------------------------------------------

def _random_subset(rng: np.random.Generator, pool: np.ndarray, max_size: int) -> np.ndarray:
    size = int(rng.integers(0, min(max_size, pool.size) + 1))
    return rng.choice(pool, size=size, replace=False)


def submodularity_suite(model, trials: int, rng: np.random.Generator) -> SuiteResult:
    """gain(S, x) - gain(T, x) >= -tol for random S within T, x outside T."""
    from ..objective import marginal_gain, state_from_indices

    n = model.n_candidates
    margins = []
    for _ in range(trials):
        x = int(rng.integers(n))
        pool = np.setdiff1d(np.arange(n), [x])
        T = _random_subset(rng, pool, 12)
        S = _random_subset(rng, T, 8) if T.size else T
        g_S = marginal_gain(state_from_indices(model, S), x)
        g_T = marginal_gain(state_from_indices(model, T), x)
        margins.append(g_S - g_T)
    return _result('submodularity', margins, SUBMODULARITY_TOL)


def monotonicity_suite(model, trials: int, rng: np.random.Generator) -> SuiteResult:
    """gain(S, x) >= -tol for random S and x outside S."""
    from ..objective import marginal_gain, state_from_indices

    n = model.n_candidates
    margins = []
    for _ in range(trials):
        x = int(rng.integers(n))
        S = _random_subset(rng, np.setdiff1d(np.arange(n), [x]), 12)
        margins.append(marginal_gain(state_from_indices(model, S), x))
    return _result('monotonicity', margins, MONOTONICITY_TOL)


def consistency_suite(model, trials: int, rng: np.random.Generator) -> SuiteResult:
    """
    Incremental gains sum to the from-scratch log-determinant, and the
    posterior covariance log-determinant is the prior one minus G(S).
    """
    from ..bayes import posterior
    from ..objective import mutual_information, state_from_indices

    prior_logdet = float(np.sum(np.log(model.prior.variances)))

    n = model.n_candidates
    margins = []
    for _ in range(trials):
        S = _random_subset(rng, np.arange(n), 12)
        state = state_from_indices(model, S)
        scratch = mutual_information(model, S)
        error = abs(sum(state.gains) - scratch)
        margins.append(CONSISTENCY_RTOL * max(abs(scratch), 1.0) - error)
        if S.size:
            result = posterior(model, S, np.zeros(S.size, dtype=complex))
            error = abs((prior_logdet - result.logdet_cov) - scratch)
            margins.append(CONSISTENCY_RTOL * max(abs(scratch), 1.0) - error)
    return _result('incremental_consistency', margins, 0.0)


def _small_model(model, rng: np.random.Generator, max_size: int = 14):
    from ..model import build_model

    size = int(rng.integers(6, max_size + 1))
    start = int(rng.integers(0, model.n_candidates - size + 1))
    grid = model.grid.subgrid(range(start, start + size))
    snr_db = float(rng.uniform(0.0, 30.0))
    return build_model(model.lam, snr_db, model.n_ref, grid, model.prior)


def oracle_suite(model, instances: int, rng: np.random.Generator) -> SuiteResult:
    """
    On small instances: greedy >= (1 - 1/e) OPT, OPT <= online bound, and
    lazy greedy selects the same sequence as greedy.
    """
    from ..optimizer import exhaustive_opt, greedy, lazy_greedy, nemhauser_factor, online_bound

    margins = []
    worst_ratio = 1.0
    lazy_mismatches = 0
    for _ in range(instances):
        small = _small_model(model, rng)
        N = int(rng.integers(1, 5))
        design = greedy(small, N)
        opt = exhaustive_opt(small, N)
        margins.append(design.mi_nats - nemhauser_factor() * opt.mi_nats)
        margins.append(online_bound(small, design) - opt.mi_nats)
        if opt.mi_nats > 0:
            worst_ratio = min(worst_ratio, design.mi_nats / opt.mi_nats)
        if lazy_greedy(small, N).indices != design.indices:
            lazy_mismatches += 1
            margins.append(-np.inf)
    return _result(
        'approximation_oracle', margins, ORACLE_TOL,
        detail=f"worst greedy/OPT ratio {worst_ratio:.6f}; lazy mismatches {lazy_mismatches}",
    )


def _random_partition(grid, rng: np.random.Generator, min_cap: int = 0):
    from ..matroids import PartitionMatroid, partition_from_bins

    width = float(rng.choice([2, 3, 4])) * grid.delta
    layout = partition_from_bins(grid, width, float(grid.positions[0]), 1, len(grid))
    return PartitionMatroid(
        bins=layout.bins,
        caps=tuple(int(c) for c in rng.integers(min_cap, 3, size=len(layout.bins))),
        global_cap=int(rng.integers(1, 5)),
        ground_size=len(grid),
    )


def matroid_axioms_suite(model, instances: int, rng: np.random.Generator) -> SuiteResult:
    """Downward closure and exchange over all subsets of small ground sets."""
    from ..matroids import UniformMatroid

    margins = []
    for k in range(instances):
        size = int(rng.integers(4, 9))
        grid = model.grid.subgrid(range(size))
        matroid = _random_partition(grid, rng) if k % 2 == 0 else UniformMatroid(N=int(rng.integers(0, size + 1)), ground_size=size)

        ground = range(size)
        independent = [frozenset(c) for r in range(size + 1) for c in itertools.combinations(ground, r)
                       if matroid.is_independent(c)]
        family = set(independent)
        for X in independent:
            for x in X:
                margins.append(0.0 if X - {x} in family else -1.0)
        for X, Y in itertools.product(independent, repeat=2):
            if len(X) < len(Y):
                ok = any(X | {y} in family for y in Y - X)
                margins.append(0.0 if ok else -1.0)
    return _result('matroid_axioms', margins, 0.0)


def half_approximation_suite(model, instances: int, rng: np.random.Generator) -> SuiteResult:
    """matroid_greedy >= OPT / 2 over random partition matroids of positive rank."""
    from ..optimizer import exhaustive_opt, matroid_greedy
    from ..optimizer.certificates import MATROID_FACTOR

    margins = []
    worst_ratio = 1.0
    for _ in range(instances):
        small = _small_model(model, rng, max_size=12)
        matroid = _random_partition(small.grid, rng, min_cap=1)
        design = matroid_greedy(small, matroid)
        opt = exhaustive_opt(small, matroid.rank, matroid=matroid)
        margins.append(design.mi_nats - MATROID_FACTOR * opt.mi_nats)
        if opt.mi_nats > 0:
            worst_ratio = min(worst_ratio, design.mi_nats / opt.mi_nats)
    return _result(
        'half_approximation', margins, ORACLE_TOL,
        detail=f"worst matroid greedy/OPT ratio {worst_ratio:.6f}",
    )


def default_suite(
    model,
    seed: int = 0,
    trials: Optional[int] = None,
    instances: Optional[int] = None
) -> VerificationSuite:
    """
    Register every property suite against a model.

    Args:
        model: Sensing model the objective suites run on
        seed: Seed for the random instances
        trials: Random triples per objective suite (default Config.VERIFY_TRIALS)
        instances: Small instances per oracle suite (default Config.VERIFY_INSTANCES)

    Returns:
        VerificationSuite ready for check_all()
    """
    trials = Config.VERIFY_TRIALS if trials is None else int(trials)
    instances = Config.VERIFY_INSTANCES if instances is None else int(instances)
    streams = iter(np.random.SeedSequence(seed).spawn(6))

    suite = VerificationSuite()
    for name, func, count in (
        ('submodularity', submodularity_suite, trials),
        ('monotonicity', monotonicity_suite, trials),
        ('incremental_consistency', consistency_suite, min(trials, 200)),
        ('approximation_oracle', oracle_suite, instances),
        ('matroid_axioms', matroid_axioms_suite, max(instances // 4, 2)),
        ('half_approximation', half_approximation_suite, instances),
    ):
        rng = np.random.default_rng(next(streams))
        suite.register(name, lambda f=func, n=count, g=rng: f(model, n, g))
    return suite
