"""Exception hierarchy and CLI exit codes."""


class ArrayDesignError(Exception):
    """Base class for errors surfaced by the toolkit."""

    exit_code: int = 2


class ConfigError(ArrayDesignError, ValueError):
    """Invalid configuration or invalid input to a model operation."""

    exit_code = 1


class InstanceTooLarge(ConfigError):
    """Exhaustive enumeration guard violated."""


class NumericalFailure(ArrayDesignError):
    """A factorization or solve broke down on a supposedly well-posed model."""

    exit_code = 2


class VerificationFailure(ArrayDesignError):
    """At least one property suite reported a violation."""

    exit_code = 3
