from typing import Any, Dict

try:
    from .base import BaseCommand, CommandResult
    from ..database import DEFAULT_LEDGER_URL, Database
    from ..models import ReportRunResponse
except ImportError:
    # Fallback for direct execution
    from app.commands.base import BaseCommand, CommandResult
    from app.database import DEFAULT_LEDGER_URL, Database
    from app.models import ReportRunResponse


class RunsCommand(BaseCommand):
    """List recent ledger rows"""

    needs_norm = False

    def execute(self, context: Dict[str, Any]) -> CommandResult:
        database = context.get("database")
        if database is None:
            database = Database(self.config.ledger_url or DEFAULT_LEDGER_URL)
            database.init_db()
        runs = database.list_runs(self.config.limit)
        rows = [ReportRunResponse.model_validate(r).model_dump(mode="json") for r in runs]
        return CommandResult(success=True, message=f"{len(rows)} runs", data={"runs": rows})
