"""Exception hierarchy shared by all modules."""

from __future__ import annotations

import numpy as np


class DimensionError(ValueError):
    """Shapes are incompatible with the requested operation."""


class PreconditionError(ValueError):
    """An input does not satisfy an operation's stated hypothesis."""


class NotPartialIsometryError(PreconditionError):
    pass


class NotPowerPartialIsometryError(PreconditionError):
    pass


class ReducibleError(PreconditionError):
    """Raised when an operation needs an irreducible semigroup."""

    def __init__(self, message: str, witness: np.ndarray | None = None):
        super().__init__(message)
        self.witness = witness


class DegenerateSemigroupError(PreconditionError):
    """The semigroup has no nonzero element."""


class CommutativityError(PreconditionError):
    """Two projections that were expected to commute do not."""

    def __init__(self, i: int, j: int, norm: float):
        super().__init__(
            f"projections {i} and {j} do not commute: ||PQ - QP|| = {norm:.3e}"
        )
        self.pair = (i, j)
        self.norm = norm


class TheoremViolation(RuntimeError):
    """A structural conclusion failed on inputs that satisfy its hypotheses.

    On exact inputs this cannot happen; when it does, it points at numerical
    breakdown or a tolerance that is too tight. ``witness`` holds the offending
    matrix when there is one.
    """

    def __init__(self, message: str, witness: np.ndarray | None = None):
        super().__init__(message)
        self.witness = witness


class ClaimViolationError(TheoremViolation):
    """``EA = AF`` failed for ``F = A*EA``."""


class BudgetExhausted(RuntimeError):
    """A closure ran out of budget before the answer became conclusive.

    ``partial`` carries whatever was computed.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class SearchExhausted(RuntimeError):
    """No admissible power was found below the search limit."""
