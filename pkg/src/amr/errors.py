"""Exception hierarchy shared across the package.

Every failure mode raised by the library derives from :class:`AmrError`,
so callers (CLI, service) can convert any domain error into a diagnostic
without enumerating types.
"""


class AmrError(Exception):
    """Base class for all errors raised by this package."""


# ---- cohort parsing / validation ------------------------------------------

class SchemaError(AmrError):
    """Invalid schema definition (duplicate names, empty level list, ...)."""


class UnknownColumn(AmrError):
    """CSV header contains a column that is not in the schema."""


class MissingColumn(AmrError):
    """CSV header lacks a schema feature or target column."""


class BadNumeric(AmrError):
    def __init__(self, row: int, column: str, value: str):
        super().__init__(f"row {row}, column {column!r}: not a finite number: {value!r}")
        self.row, self.column, self.value = row, column, value


class UnknownLevel(AmrError):
    def __init__(self, row: int, column: str, value: str):
        super().__init__(f"row {row}, column {column!r}: unknown level {value!r}")
        self.row, self.column, self.value = row, column, value


# ---- encoding / folds / synthesis ------------------------------------------

class EmptyFitSet(AmrError):
    """Encoder fit index set is empty, or a numeric feature has no present value in it."""


class TooFewRecords(AmrError):
    """Not enough records to build the requested fold plan."""


class SingleClassFold(AmrError):
    """A training fold contains only one label class; caller should reseed the plan."""


class BadProbabilities(AmrError):
    """Level probabilities do not sum to 1 within tolerance."""


# ---- statistics -------------------------------------------------------------

class LengthMismatch(AmrError):
    """Paired inputs have different lengths."""


class TooFewSamples(AmrError):
    """Fewer samples than the statistic requires."""


class ZeroVariance(AmrError):
    """A vector is constant, so the correlation is undefined."""


class DegenerateTable(AmrError):
    """Contingency table has fewer than two non-empty rows or columns."""


# ---- models -----------------------------------------------------------------

class SingleClassInput(AmrError):
    """Training labels contain a single class."""


class WidthMismatch(AmrError):
    """Row width does not match the model's expected number of columns."""


class NoOobSamples(AmrError):
    """No tree has any out-of-bag sample, so importance cannot be estimated."""


class InputTooShort(AmrError):
    """Input dimension is below the convolution filter size."""


class ShapeMismatch(AmrError):
    """Parameter or input shapes do not chain through the network."""


class Diverged(AmrError):
    """Training loss became non-finite."""


# ---- evaluation -------------------------------------------------------------

class Empty(AmrError):
    """Empty score/label vectors."""


class UndefinedMetric(AmrError):
    """Metric denominator is zero for the given counts."""


class SingleClassLabels(AmrError):
    """AUC requires both classes among the labels."""


class AllFoldsDegenerate(AmrError):
    """Every attempted fold plan produced single-class training folds."""


# ---- bundle / service -------------------------------------------------------

class BundleError(AmrError):
    """Trained-model bundle is malformed or incomplete."""


class NoForestInBundle(AmrError):
    """Importance report requested but the bundle has no random-forest models."""
