class ContractError(ValueError):
    """A precondition of an operation does not hold."""


class GuardExceeded(ValueError):
    """An exhaustive enumeration would exceed its guard; pass force=True to run it anyway."""


class StorageError(OSError):
    """Reading or writing a result file failed."""


class InconsistencyError(RuntimeError):
    """Two independent computations of the same quantity disagree."""
