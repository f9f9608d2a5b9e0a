"""Exception types shared across the package."""


class WsnEpiError(Exception):
    """Base class for every error raised by this package."""


class ConfigInvalid(WsnEpiError):
    """A configuration value violates its documented constraint."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class StepTooLarge(WsnEpiError):
    """An integration step drove a compartment significantly negative."""


class AlignmentMismatch(WsnEpiError):
    """Aligned sweep factors have level lists of different lengths."""


class RunFailed(WsnEpiError):
    """A sweep run failed; carries the offending run id."""

    def __init__(self, run_id: int, cause: BaseException):
        self.run_id = run_id
        self.cause = cause
        super().__init__(f"run {run_id} failed: {cause}")


class DatasetError(WsnEpiError):
    """A table is malformed: ragged rows, duplicate names, non-finite cells."""


class SchemaMismatch(WsnEpiError):
    """Sheets being merged do not share the same column set."""


class TooFewRows(WsnEpiError):
    """An operation needs more rows than the dataset has."""


class UnknownColumn(WsnEpiError):
    """A referenced column does not exist in the dataset."""


class DegenerateColumn(WsnEpiError):
    """A transform cannot be fitted to a constant column."""


class EmptySplit(WsnEpiError):
    """A train/validation split would leave one side empty."""


class FitFailed(WsnEpiError):
    """A model fit inside grid search failed; carries spec and fold."""

    def __init__(self, spec, fold: int, cause: BaseException):
        self.spec = spec
        self.fold = fold
        self.cause = cause
        super().__init__(f"fit failed for spec {spec} on fold {fold}: {cause}")


class SingularSystem(WsnEpiError):
    """The least-squares system is rank deficient."""


class NonConvergence(WsnEpiError):
    """An iterative solver hit its sweep cap before converging."""


class KTooLarge(WsnEpiError):
    """k exceeds the number of stored training rows."""
