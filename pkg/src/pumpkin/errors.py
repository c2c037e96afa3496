"""Exception types shared across the package."""

from __future__ import annotations


class PumpkinError(Exception):
    """Base class for package-specific failures."""


class BudgetExceeded(PumpkinError):
    """A search ran out of its node-expansion budget.

    Raised instead of ever returning a possibly-wrong answer.  Carries the
    number of expansions performed.
    """

    def __init__(self, message: str, expansions: int = 0):
        super().__init__(message)
        self.expansions = expansions


class SizeLimitExceeded(PumpkinError):
    """An oracle or brute-force routine was handed an instance above its limit."""


class MultiplicityOverflow(PumpkinError):
    """An edge multiplicity went past the configured cap."""


class ModelSizeExceeded(PumpkinError):
    """A produced model violated its size guarantee.

    The ``diagnostics`` dict is JSON-serializable and names the offending
    parameters so a parameter shortfall is loud rather than silent.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
