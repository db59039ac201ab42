"""Error hierarchy shared by the engine, the command line and the HTTP surface."""


class SelfmapChowError(Exception):
    """Base class for every error raised by the engine."""

    exit_code = 1


class InvalidInputError(SelfmapChowError, ValueError):
    """The caller supplied something the engine cannot interpret."""

    exit_code = 2


class InadmissibleWeightsError(InvalidInputError):
    """The weight tuple admits no stable GIT quotient."""


class InvalidLabelError(InvalidInputError):
    """A boundary label, marking index or generator key is out of range."""


class DimensionMismatchError(InvalidInputError):
    """The number of factors does not match the dimension of the space."""


class EmptySpaceError(InvalidInputError):
    """The queried moduli space is empty or its quotient Picard group vanishes."""


class InvariantBreachError(SelfmapChowError, AssertionError):
    """An internal consistency check failed."""

    exit_code = 3


def ensure(condition: bool, message: str) -> None:
    """Raise InvariantBreachError with ``message`` unless ``condition`` holds."""
    if not condition:
        raise InvariantBreachError(message)


class CacheCorruptionError(InvariantBreachError):
    """A cache record is malformed or contradicts another record."""
