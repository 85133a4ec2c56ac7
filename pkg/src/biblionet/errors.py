"""Exception types raised across the toolkit."""


class BiblionetError(Exception):
    """Base class for every error raised by this package."""


class RecordParseError(BiblionetError):
    """A malformed line in one of the delimited input files."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DuplicateKeyError(BiblionetError):
    """An identifier that must be unique appeared twice."""


class IntegrityError(BiblionetError):
    """A reference to a key that does not resolve (dangling id)."""


class MetricsValidationError(BiblionetError):
    """Journal rank data violating 1 <= rank <= category_size."""


class VariantError(BiblionetError):
    """A researcher name that cannot be split into surname and given parts."""


class OverrideError(BiblionetError):
    """An override row referencing an unknown researcher or publication."""


class ScopeError(BiblionetError):
    """An aggregation scope that is missing its key or cannot be resolved."""


class UnknownCategoryError(BiblionetError):
    """A subject category with no national output."""


class UndefinedMetricError(BiblionetError):
    """A metric that is undefined for the given input (e.g. density on a
    single-node network, growth from a zero baseline)."""


class ConfigError(BiblionetError):
    """A run configuration file that cannot be loaded."""
