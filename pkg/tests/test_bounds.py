"""Tests for truncation, discretization and combined bounds."""
import math

import pytest

from src.bounds import (
    CorollaryBound,
    Inapplicable,
    TruncationBounds,
    bounds_report,
    corollary_bound,
    discretization_bound,
    truncation_bounds,
)
from src.matroids import partition_from_bins
from src.model import CandidateGrid, build_model, build_prior
from src.optimizer import greedy, matroid_greedy, nemhauser_bound
from src.optimizer.certificates import GREEDY_FACTOR, MATROID_FACTOR


@pytest.fixture(scope='module')
def model():
    """Experimental-section model at 0 dB."""
    grid = CandidateGrid.from_aperture(-3.5, 3.5, 0.0625)
    return build_model(1.0, 0.0, 11, grid, build_prior(1, 1.0, 450))


class TestTruncationBounds:
    """Tests for the truncation bound."""

    def test_injected_epsilon_reproduces_reference(self, model):
        bounds = truncation_bounds(model, 11, epsilon=1e-4)
        assert isinstance(bounds, TruncationBounds)
        assert bounds.lo == pytest.approx(-0.45, abs=0.02)
        assert bounds.hi == pytest.approx(0.47, abs=0.02)

    def test_vanishing_epsilon(self, model):
        bounds = truncation_bounds(model, 11, epsilon=1e-300)
        assert bounds.lo == pytest.approx(0.0, abs=1e-12)
        assert bounds.hi == pytest.approx(0.0, abs=1e-12)

    def test_computed_epsilon_applicable_at_0db(self, model):
        bounds = truncation_bounds(model, 11)
        assert isinstance(bounds, TruncationBounds)
        assert bounds.lo <= 0 <= bounds.hi

    def test_inapplicable_at_30db(self, model):
        result = truncation_bounds(model.with_snr(30.0), 11)
        assert isinstance(result, Inapplicable)
        assert str(result) == 'inapplicable'
        assert 'epsilon' in result.reason

    def test_monotone_in_epsilon(self, model):
        previous = truncation_bounds(model, 11, epsilon=1e-6)
        for eps in (1e-5, 1e-4, 1e-3):
            current = truncation_bounds(model, 11, epsilon=eps)
            assert current.lo <= previous.lo
            assert current.hi >= previous.hi
            previous = current


class TestDiscretizationBound:
    """Tests for the grid-spacing bound."""

    def test_formula(self, model):
        expected = 11 * math.log(1 + 4 * 0.0625 * 1.0625 * 11 ** 1.5 * 11)
        assert discretization_bound(model, 11) == pytest.approx(expected, rel=1e-12)

    def test_vanishing_spacing(self, model):
        assert discretization_bound(model, 11, delta=0.0) == 0.0

    def test_monotone_in_spacing(self, model):
        values = [discretization_bound(model, 11, delta=d) for d in (1e-4, 1e-3, 1e-2, 0.0625)]
        assert values == sorted(values)
        assert all(v >= 0 for v in values)


class TestCorollaryBound:
    """Tests for the combined bound."""

    def test_reduces_to_nemhauser(self, model):
        result = corollary_bound(model, 12.0, 11, epsilon=0.0, delta=0.0)
        assert isinstance(result, CorollaryBound)
        assert result.penalty == pytest.approx(0.0, abs=1e-12)
        assert result.greedy_lo == pytest.approx(GREEDY_FACTOR * 12.0, rel=1e-12)
        assert result.opt_hi == pytest.approx(nemhauser_bound(12.0), rel=1e-12)

    def test_penalty_recomposes_from_lemmas(self, model):
        result = corollary_bound(model, 10.0, 11)
        lemma1 = truncation_bounds(model, 11)
        lemma2 = discretization_bound(model, 11)
        assert result.penalty == pytest.approx(lemma2 + lemma1.hi, rel=1e-10)

    def test_matroid_factor(self, model):
        result = corollary_bound(model, 12.0, 11, epsilon=0.0, delta=0.0, factor=MATROID_FACTOR)
        assert result.greedy_lo == pytest.approx(6.0, rel=1e-12)
        assert result.opt_hi == pytest.approx(24.0, rel=1e-12)

    def test_inapplicable_at_high_snr(self, model):
        assert isinstance(corollary_bound(model.with_snr(30.0), 10.0, 11), Inapplicable)


class TestBoundsReport:
    """Tests for the packaged report."""

    def test_report_at_0db(self, model):
        design = greedy(model, 11)
        report = bounds_report(model, design)
        assert report.N == 11
        assert report.lemma1_applicable and report.corollary_applicable
        assert report.lemma1_lo <= 0 <= report.lemma1_hi
        assert report.lemma2_hi >= 0
        assert report.online_hi >= report.achieved_mi
        assert report.nemhauser_hi_finite <= report.nemhauser_hi
        assert not report.epsilon_injected
        assert report.epsilon == model.epsilon

    def test_report_marks_inapplicable(self, model):
        loud = model.with_snr(30.0)
        report = bounds_report(loud, greedy(loud, 11))
        assert not report.lemma1_applicable
        assert isinstance(report.lemma1_hi, Inapplicable)
        assert isinstance(report.corollary_lo, Inapplicable)

    def test_injected_epsilon(self, model):
        report = bounds_report(model, greedy(model, 11), epsilon=1e-4)
        assert report.epsilon_injected
        assert report.epsilon_halfwidth == 0.0
        assert report.lemma1_lo == pytest.approx(-0.45, abs=0.02)

    def test_uniform_design_certificates(self, model):
        report = bounds_report(model, greedy(model, 11))
        assert report.guarantee_factor == GREEDY_FACTOR
        assert report.nemhauser_hi == pytest.approx(nemhauser_bound(report.achieved_mi), rel=1e-12)
        assert isinstance(report.matroid_half_hi, Inapplicable)

    def test_partition_design_certificates(self, model):
        design = matroid_greedy(model, partition_from_bins(model.grid, 0.5, -0.25, 1, 11))
        report = bounds_report(model, design)
        assert report.guarantee_factor == MATROID_FACTOR
        assert report.matroid_half_hi == pytest.approx(2.0 * design.mi_nats, rel=1e-12)
        assert isinstance(report.nemhauser_hi, Inapplicable)
        assert isinstance(report.nemhauser_hi_finite, Inapplicable)
        assert report.corollary_applicable
        penalty = corollary_bound(model, design.mi_nats, 11).penalty
        assert report.corollary_opt_hi == pytest.approx(2.0 * design.mi_nats + penalty, rel=1e-10)
        assert report.online_hi >= design.mi_nats
