import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Type

try:
    from .commands import COMMANDS, BaseCommand, CommandResult
    from .commands.base import jsonable
    from .database import Database
    from .errors import DomainError, MinkowskiError, NonConvergenceError, NormValidationError, OutputError
    from .models import RunConfig, RunStatus
    from .norms import parse_norm_source
except ImportError:
    # Fallback for direct execution
    from app.commands import COMMANDS, BaseCommand, CommandResult
    from app.commands.base import jsonable
    from app.database import Database
    from app.errors import DomainError, MinkowskiError, NonConvergenceError, NormValidationError, OutputError
    from app.models import RunConfig, RunStatus
    from app.norms import parse_norm_source

logger = logging.getLogger(__name__)

REPORT_SCHEMA = 1

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_NONCONVERGED = 3


@dataclass
class RunOutcome:
    exit_code: int
    report: Dict[str, Any]
    table: Optional[str] = None
    logs: List[str] = field(default_factory=list)


def exit_status(error: BaseException) -> Tuple[int, RunStatus]:
    if isinstance(error, NonConvergenceError):
        return EXIT_NONCONVERGED, RunStatus.NONCONVERGED
    if isinstance(error, (NormValidationError, DomainError, OutputError)):
        return EXIT_INVALID, RunStatus.INVALID
    return EXIT_FAILED, RunStatus.FAILED


class CommandRunner:
    def __init__(self, database: Optional[Database] = None):
        self.database = database
        self.commands: Dict[Any, Type[BaseCommand]] = dict(COMMANDS)

    def register_command(self, name, command_class: Type[BaseCommand]):
        """Register a new command type"""
        self.commands[name] = command_class

    def envelope(self, config: RunConfig, norm, status: str, result: Dict[str, Any]) -> Dict[str, Any]:
        resolved = config.model_dump(mode="json")
        if norm is not None:
            resolved["norm"] = {"label": norm.label(), "kind": norm.kind, "digest": norm.digest()}
        return {
            "schema": REPORT_SCHEMA,
            "command": config.command.value,
            "config": resolved,
            "result": result,
            "status": status,
        }

    def execute(self, config: RunConfig) -> RunOutcome:
        """Load the norm, run the command and build the report; never raises for domain errors"""
        logs = [f"Starting {config.command.value}"]
        run_id = None
        if self.database is not None:
            run_id = self.database.create_run(config.command.value).id

        norm = None
        result: Optional[CommandResult] = None
        try:
            command_class = self.commands.get(config.command)
            if command_class is None:
                raise DomainError(f"Unknown command: {config.command.value}")
            command = command_class(config)
            if command.needs_norm:
                if not config.norm_source:
                    raise DomainError(f"{config.command.value} needs --norm")
                norm = parse_norm_source(config.norm_source)
                logs.append(f"Loaded {norm.label()} (digest {norm.digest()})")
            context = {
                "norm": norm,
                "tolerances": config.tolerances,
                "logs": logs,
                "database": self.database,
            }
            result = command.execute(context)
            exit_code = EXIT_OK if result.success else EXIT_FAILED
            run_status = RunStatus.SUCCEEDED if result.success else RunStatus.FAILED
            status = "ok" if result.success else "failed"
            logs.append(f"{config.command.value} {'succeeded' if result.success else 'failed'}: {result.message}")
            payload = jsonable(result.data)
        except MinkowskiError as e:
            exit_code, run_status = exit_status(e)
            status = run_status.value
            logs.append(f"{config.command.value} {status}: {e}")
            payload = {"error": str(e), "error_type": type(e).__name__}
        except Exception as e:
            logger.exception("unexpected failure in %s", config.command.value)
            exit_code, run_status = EXIT_FAILED, RunStatus.FAILED
            status = "failed"
            logs.append(f"{config.command.value} failed: {e}")
            payload = {"error": str(e), "error_type": type(e).__name__}

        report = self.envelope(config, norm, status, payload)
        if run_id is not None:
            value = payload.get("value") if isinstance(payload.get("value"), float) else None
            self.database.update_run(
                run_id,
                run_status,
                logs,
                report=report,
                value=value,
                norm_label=norm.label() if norm is not None else None,
                norm_digest=norm.digest() if norm is not None else None,
            )
        table = result.table if result is not None and exit_code == EXIT_OK else None
        return RunOutcome(exit_code, report, table, logs)
