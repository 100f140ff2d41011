"""Core infrastructure: error hierarchy, factorization retry and property suites."""
from .errors import ArrayDesignError, ConfigError, InstanceTooLarge, NumericalFailure, VerificationFailure
from .resilience import PivotBreakdown, RetryableOperation
from .verification import SuiteResult, VerificationSuite, default_suite

__all__ = [
    'ArrayDesignError',
    'ConfigError',
    'InstanceTooLarge',
    'NumericalFailure',
    'PivotBreakdown',
    'RetryableOperation',
    'SuiteResult',
    'VerificationFailure',
    'VerificationSuite',
    'default_suite',
]
