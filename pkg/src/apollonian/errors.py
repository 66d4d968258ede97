"""Error types shared across the package.

Each maps to a distinct CLI exit code (see cli.py): validation errors are
usage mistakes, budget errors mean an enumeration would exceed its
configured work cap, and arithmetic-range errors mean a value left the
domain the compiled kernels (or a tally universe) can represent.
"""


class ValidationError(ValueError):
    """Input violates a documented precondition."""


class BudgetError(RuntimeError):
    """The requested computation exceeds the configured work budget."""


class ArithmeticRangeError(OverflowError):
    """A value falls outside the supported arithmetic range."""
