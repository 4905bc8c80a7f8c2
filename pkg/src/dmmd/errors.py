"""Exception types shared across the package.

Plain ``ValueError`` is used for garden-variety bad arguments (shape
mismatches, out-of-range sizes).  The types below exist where callers need
to distinguish failure modes programmatically.
"""


class ClassAbsentError(ValueError):
    """A class has no samples in a domain where the requested statistic needs at least one.

    Raised by the math layer; the pipeline layer decides whether to skip the
    class or abort.
    """

    def __init__(self, label: int, where: str):
        self.label = label
        self.where = where
        super().__init__(f"class {label} has no samples in {where}")


class UnusableLabelsError(ValueError):
    """No class is present on both sides, so no class-conditional term can be built."""


class NumericalError(RuntimeError):
    """A factorization or solve failed beyond the configured recovery attempts."""


class DataFormatError(ValueError):
    """A data file failed to parse; the message names the offending row/column."""
