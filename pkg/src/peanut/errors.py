"""Exception hierarchy.

Everything raised on bad *data* derives from :class:`DataError`; the CLI maps
those to exit code 2. Configuration problems derive from :class:`ConfigError`.
"""


class PeanutError(Exception):
    """Base class for all errors raised by this package."""


class DataError(PeanutError, ValueError):
    """Input data violates an operation's precondition."""


class LengthMismatch(DataError):
    pass


class UnsortedDates(DataError):
    pass


class DuplicateDate(DataError):
    pass


class DuplicateWeeklyDate(DuplicateDate):
    pass


class UnknownColumn(DataError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class MissingHeaderColumn(DataError):
    pass


class UnparsableNumber(DataError):
    def __init__(self, row, column, text):
        super().__init__(f"row {row}, column {column!r}: cannot parse {text!r}")
        self.row = row
        self.column = column
        self.text = text


class ColumnNameClash(DataError):
    pass


class NoObservedValues(DataError):
    pass


class InsufficientTrainingRows(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class RankDeficient(DataError):
    pass


class TooFewRows(DataError):
    pass


class InvalidDf(DataError):
    pass


class ProbOutOfRange(DataError):
    pass


class EmptyInput(DataError):
    pass


class FeatureCountMismatch(DataError):
    pass


class MissingValuesPresent(DataError):
    def __init__(self, column):
        super().__init__(f"column {column!r} has missing values")
        self.column = column


class BadK(DataError):
    pass


class FrameMismatch(DataError):
    pass


class InvalidSpec(DataError):
    pass


class ConfigError(PeanutError):
    pass


class ParseError(ConfigError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class ValidationError(ConfigError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
