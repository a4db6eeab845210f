"""Exception hierarchy shared by every broadlearn module.

Two families matter to callers: :class:`ConfigurationError` covers bad
arguments, bad files and bad schedules, while :class:`NumericalError` covers
failures of the linear algebra itself (loss of positive definiteness,
singular factors, malformed factor structure).  The CLI maps the first family
to exit code 2 and the second to exit code 3.
"""


class BroadLearnError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(BroadLearnError):
    """Invalid arguments, files, or schedules supplied by the caller."""


class NumericalError(BroadLearnError):
    """A numerical operation could not be completed safely."""


# --- configuration family -------------------------------------------------

class DimensionMismatch(ConfigurationError, ValueError):
    """Operands have incompatible shapes."""


class InvalidConfig(ConfigurationError, ValueError):
    """A sizing parameter, option, or configuration file entry is invalid."""


class ScheduleInvalid(ConfigurationError, ValueError):
    """An experiment schedule cannot be executed as written."""


class ParseError(ConfigurationError, ValueError):
    """A dataset file could not be parsed."""


class LabelMismatch(ConfigurationError, ValueError):
    """Image and label files disagree on the number of samples."""


class CorruptFile(ConfigurationError, ValueError):
    """A persisted state file is structurally damaged."""


class VersionMismatch(CorruptFile):
    """A persisted state file uses an unsupported format version."""


class IndexOutOfRange(ConfigurationError, IndexError):
    """A node or sample index falls outside the current dimensions."""


# --- numerical family -----------------------------------------------------

class NotSymmetric(NumericalError):
    """A matrix expected to be symmetric is not, beyond tolerance."""


class NotPositiveDefinite(NumericalError):
    """A matrix expected to be positive definite has a non-positive pivot.

    During sample removal this is the signal that the rows being removed
    were never part of the trained set (or that the ridge parameter is not
    positive), because for valid removals the downdated Gram matrix stays
    positive definite.
    """


class MalformedInput(NumericalError):
    """A matrix does not have the structure the operation requires."""


class SingularFactor(NumericalError):
    """A triangular factor has a zero diagonal entry and cannot be solved."""


class FactorizationFailure(NumericalError):
    """An update's internal factorization failed.

    For node additions this typically means the new columns are rank
    deficient relative to the ridge parameter.
    """


class SingularInnerMatrix(NumericalError):
    """The small inner system of a rank-update is not invertible.

    Cannot occur for a positive ridge parameter; raised defensively.
    """


class SingularTrailingBlock(NumericalError):
    """The trailing triangular block produced by node removal is singular.

    Impossible for a positive ridge parameter; raised defensively.
    """
