"""boxbench: rule-hidden black-box environments and session tooling."""

from .errors import (
    BoxbenchError,
    BudgetError,
    NotFound,
    StageViolation,
    UnsupportedFeedbackMode,
)
from .protocol import (
    FeedbackMode,
    ScoreReport,
    Session,
    Stage,
    TurnBudget,
    Verdict,
    new_session,
)
from .registry import (
    EnvironmentSpec,
    catalog_json,
    get_spec,
    instantiate,
    list_environments,
)

__all__ = [
    "BoxbenchError",
    "BudgetError",
    "NotFound",
    "StageViolation",
    "UnsupportedFeedbackMode",
    "FeedbackMode",
    "ScoreReport",
    "Session",
    "Stage",
    "TurnBudget",
    "Verdict",
    "new_session",
    "EnvironmentSpec",
    "catalog_json",
    "get_spec",
    "instantiate",
    "list_environments",
]

__version__ = "0.1.0"
