"""
Accuracy bounds for the truncated, discretized design problem.

With eps the prior mass outside the truncation set, delta the grid spacing
and N the number of sensors:

- truncation:      -N log(1 + eps N^1.5 / s2) <= dI <= -N log(1 - eps N^1.5 / s2),
                   valid only while eps < s2 N^-1.5
- discretization:  0 <= I(opt) - I(grid opt) <= N log(1 + 4 delta P (1 + delta) N^1.5 / (lambda s2))
- combined:        g [I* - N log((lambda s2 + 4 delta P (1+delta) N^1.5) /
                                        (lambda s2 - eps lambda N^1.5))] <= I(greedy)

where s2 = sigma_w^2 and g is the greedy guarantee: 1 - 1/e under a budget,
1/2 under a partition matroid. A bound whose hypothesis fails is reported as an
Inapplicable value, never as a number.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

from ..model.sensing_model import SensingModel
from ..optimizer.base_solver import Design
from ..optimizer.certificates import (
    GREEDY_FACTOR,
    guarantee_factor,
    is_cardinality_constraint,
    matroid_half_bound,
    nemhauser_bound,
    online_bound,
)
from ..utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class Inapplicable:
    """Marker for a bound evaluated outside its hypothesis."""
    reason: str

    def __str__(self) -> str:
        return "inapplicable"


class TruncationBounds(NamedTuple):
    lo: float
    hi: float


class CorollaryBound(NamedTuple):
    greedy_lo: float  # implied lower bound on greedy MI, taking the input as I*
    opt_hi: float     # implied upper bound on I*, taking the input as greedy MI
    penalty: float


BoundValue = Union[float, Inapplicable]


def _epsilon(model: SensingModel, epsilon: Optional[float]) -> float:
    return model.epsilon if epsilon is None else float(epsilon)


def truncation_bounds(
    model: SensingModel,
    N: int,
    epsilon: Optional[float] = None
) -> Union[TruncationBounds, Inapplicable]:
    """
    Truncation bounds on I(infinite model) - I(truncated model).

    Args:
        model: Sensing model (supplies sigma_w^2 and the computed epsilon)
        N: Number of sensors
        epsilon: Injected tail mass overriding the model's

    Returns:
        TruncationBounds(lo, hi) in nats, or Inapplicable
    """
    eps = _epsilon(model, epsilon)
    threshold = model.noise_var * N ** -1.5
    if not eps < threshold:
        return Inapplicable(
            f"epsilon={eps:.3e} not below sigma_w^2 N^-1.5={threshold:.3e}"
        )
    ratio = eps * N ** 1.5 / model.noise_var
    return TruncationBounds(lo=-N * math.log1p(ratio), hi=-N * math.log1p(-ratio))


def discretization_bound(model: SensingModel, N: int, delta: Optional[float] = None) -> float:
    """
    Discretization loss bound in nats.

    Args:
        model: Sensing model (supplies delta, P, lambda, sigma_w^2)
        N: Number of sensors
        delta: Grid spacing overriding the model's

    Returns:
        N log(1 + 4 delta P (1 + delta) N^1.5 / (lambda sigma_w^2))
    """
    delta = model.grid.delta if delta is None else float(delta)
    P = model.prior.P
    return N * math.log1p(4.0 * delta * P * (1.0 + delta) * N ** 1.5 / (model.lam * model.noise_var))


def corollary_bound(
    model: SensingModel,
    design_mi: float,
    N: int,
    epsilon: Optional[float] = None,
    delta: Optional[float] = None,
    factor: float = GREEDY_FACTOR
) -> Union[CorollaryBound, Inapplicable]:
    """
    Combined greedy guarantee on the untruncated, continuous problem.

    Args:
        model: Sensing model
        design_mi: Mutual information in nats; read as I* for greedy_lo and
            as the achieved greedy value for opt_hi
        N: Number of sensors
        epsilon: Injected tail mass overriding the model's
        delta: Grid spacing overriding the model's
        factor: Greedy guarantee (1 - 1/e for a budget, 1/2 for a matroid)

    Returns:
        CorollaryBound, or Inapplicable when the denominator is not positive
    """
    eps = _epsilon(model, epsilon)
    delta = model.grid.delta if delta is None else float(delta)
    lam, s2, P = model.lam, model.noise_var, model.prior.P

    denominator = lam * s2 - eps * lam * N ** 1.5
    if not denominator > 0:
        return Inapplicable(f"lambda sigma_w^2 - epsilon lambda N^1.5 = {denominator:.3e} <= 0")
    numerator = lam * s2 + 4.0 * delta * P * (1.0 + delta) * N ** 1.5
    penalty = N * math.log(numerator / denominator)

    return CorollaryBound(
        greedy_lo=factor * (design_mi - penalty),
        opt_hi=design_mi / factor + penalty,
        penalty=penalty,
    )


@dataclass(frozen=True)
class BoundsReport:
    """Certificate values for one design."""
    achieved_mi: float
    N: int
    delta: float
    noise_var: float
    epsilon: float
    epsilon_halfwidth: float
    epsilon_injected: bool
    lemma1_lo: BoundValue
    lemma1_hi: BoundValue
    lemma2_hi: float
    corollary_lo: BoundValue
    corollary_opt_hi: BoundValue
    guarantee_factor: float
    nemhauser_hi: BoundValue
    nemhauser_hi_finite: BoundValue
    matroid_half_hi: BoundValue
    online_hi: float

    @property
    def lemma1_applicable(self) -> bool:
        return not isinstance(self.lemma1_lo, Inapplicable)

    @property
    def corollary_applicable(self) -> bool:
        return not isinstance(self.corollary_lo, Inapplicable)


def bounds_report(model: SensingModel, design: Design, epsilon: Optional[float] = None) -> BoundsReport:
    """
    Evaluate every bound for a design.

    Args:
        model: Model the design was computed on
        design: Design to certify
        epsilon: Injected tail mass; None uses the model's computed value

    Returns:
        BoundsReport
    """
    N = max(len(design), 1)
    eps = _epsilon(model, epsilon)
    factor = guarantee_factor(design.constraint)

    truncation = truncation_bounds(model, N, epsilon)
    corollary = corollary_bound(model, design.mi_nats, N, epsilon, factor=factor)
    if isinstance(truncation, Inapplicable):
        logger.warning(f"Truncation bound inapplicable: {truncation.reason}")
        lemma1_lo = lemma1_hi = truncation
    else:
        lemma1_lo, lemma1_hi = truncation.lo, truncation.hi
    if isinstance(corollary, Inapplicable):
        corollary_lo = corollary_opt_hi = corollary
    else:
        corollary_lo, corollary_opt_hi = corollary.greedy_lo, corollary.opt_hi

    # The 1 - 1/e guarantee covers budget constraints only; matroid greedy is certified at 1/2.
    if is_cardinality_constraint(design.constraint):
        nemhauser = nemhauser_bound(design.mi_nats)
        nemhauser_finite = nemhauser_bound(design.mi_nats, N)
        half = Inapplicable("1/2 certificate applies to matroid designs")
    else:
        not_covered = Inapplicable(f"1 - 1/e guarantee does not cover {design.constraint}")
        nemhauser = nemhauser_finite = not_covered
        half = matroid_half_bound(design.mi_nats)

    return BoundsReport(
        achieved_mi=design.mi_nats,
        N=N,
        delta=model.grid.delta,
        noise_var=model.noise_var,
        epsilon=eps,
        epsilon_halfwidth=0.0 if epsilon is not None else model.prior.tail_halfwidth,
        epsilon_injected=epsilon is not None,
        lemma1_lo=lemma1_lo,
        lemma1_hi=lemma1_hi,
        lemma2_hi=discretization_bound(model, N),
        corollary_lo=corollary_lo,
        corollary_opt_hi=corollary_opt_hi,
        guarantee_factor=factor,
        nemhauser_hi=nemhauser,
        nemhauser_hi_finite=nemhauser_finite,
        matroid_half_hi=half,
        online_hi=online_bound(model, design),
    )
