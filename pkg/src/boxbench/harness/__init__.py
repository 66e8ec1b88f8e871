from .drivers import (
    AgentDriver,
    ChatEndpointDriver,
    DriverError,
    ExternalProcessDriver,
    ScriptedDriver,
    make_driver_factory,
)
from .runner import (
    BenchmarkRun,
    SessionRow,
    drive_session,
    export_report,
    import_report,
    replay_file,
    run_benchmark,
)
from .solvers import ORACLE_TARGETS, SOLVERS

__all__ = [
    "AgentDriver",
    "ChatEndpointDriver",
    "DriverError",
    "ExternalProcessDriver",
    "ScriptedDriver",
    "make_driver_factory",
    "BenchmarkRun",
    "SessionRow",
    "drive_session",
    "export_report",
    "import_report",
    "replay_file",
    "run_benchmark",
    "ORACLE_TARGETS",
    "SOLVERS",
]
