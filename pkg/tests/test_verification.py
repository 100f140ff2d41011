"""Tests for the property-suite registry and the built-in suites."""
import numpy as np
import pytest

from src.core.verification import (
    SuiteResult,
    VerificationSuite,
    consistency_suite,
    default_suite,
    half_approximation_suite,
    matroid_axioms_suite,
    monotonicity_suite,
    submodularity_suite,
)
from src.model import CandidateGrid, build_model, build_prior
from src.utils.config import Config


@pytest.fixture(scope='module')
def model():
    grid = CandidateGrid.from_aperture(-3.5, 3.5, 0.0625)
    return build_model(1.0, 5.0, 11, grid, build_prior(1, 1.0, 450))


def passing():
    return SuiteResult(name='ok', passed=True, checks=3, violations=0, worst_margin=0.1)


def failing():
    return SuiteResult(name='bad', passed=False, checks=3, violations=1, worst_margin=-0.1)


class TestVerificationSuite:
    """Tests for the registry."""

    def test_all_pass(self):
        suite = VerificationSuite()
        suite.register('ok', passing)
        report = suite.check_all()
        assert report['passed']
        assert report['suites']['ok']['checks'] == 3

    def test_critical_failure(self):
        suite = VerificationSuite()
        suite.register('ok', passing)
        suite.register('bad', failing)
        assert not suite.check_all()['passed']

    def test_non_critical_failure(self):
        suite = VerificationSuite()
        suite.register('bad', failing, critical=False)
        report = suite.check_all()
        assert report['passed']
        assert not report['suites']['bad']['passed']

    def test_exception_becomes_failure(self):
        def explode():
            raise RuntimeError('boom')

        suite = VerificationSuite()
        suite.register('explode', explode)
        result = suite.check_suite('explode')
        assert not result.passed
        assert result.error == 'boom'


class TestPropertySuites:
    """The objective and constraint suites hold on the experimental model."""

    def test_submodularity(self, model):
        result = submodularity_suite(model, 100, np.random.default_rng(0))
        assert result.passed
        assert result.checks == 100

    def test_monotonicity(self, model):
        assert monotonicity_suite(model, 100, np.random.default_rng(1)).passed

    def test_matroid_axioms(self, model):
        assert matroid_axioms_suite(model, 2, np.random.default_rng(2)).passed

    def test_default_suite_is_reproducible(self, model):
        first = default_suite(model, seed=3, trials=20, instances=2).check_all()
        second = default_suite(model, seed=3, trials=20, instances=2).check_all()
        assert first == second
        assert first['passed']

    def test_consistency_includes_posterior_check(self, model):
        result = consistency_suite(model, 20, np.random.default_rng(4))
        assert result.passed
        assert result.checks > 20

    def test_half_approximation_never_vacuous(self, model):
        result = half_approximation_suite(model, 10, np.random.default_rng(6))
        assert result.passed
        assert result.worst_margin > 0

    def test_acceptance_scale(self, model, monkeypatch):
        monkeypatch.setattr(Config, 'VERIFY_TRIALS', 1000)
        report = default_suite(model, seed=0).check_all()
        assert report['passed']
        assert report['suites']['submodularity']['checks'] == 1000
        assert report['suites']['monotonicity']['checks'] == 1000
        assert report['suites']['half_approximation']['worst_margin'] > 0
