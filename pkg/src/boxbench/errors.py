"""Exceptions shared across the session engine, registry, and service."""


class BoxbenchError(Exception):
    """Base class for all library errors."""


class NotFound(BoxbenchError):
    """Unknown environment id."""


class StageViolation(BoxbenchError):
    """An operation was called in the wrong session stage."""


class BudgetError(BoxbenchError):
    """Invalid turn/shot budget."""


class UnsupportedFeedbackMode(BoxbenchError):
    """The environment family cannot run under the requested feedback mode."""
