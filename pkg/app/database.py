import json
import logging
from typing import Any, Dict, List, Optional

from sqlalchemy import create_engine, desc, select, text
from sqlalchemy.orm import sessionmaker

try:
    from .models import Base, ReportRun, RunStatus
except ImportError:
    # Fallback for direct execution
    from app.models import Base, ReportRun, RunStatus

logger = logging.getLogger(__name__)

DEFAULT_LEDGER_URL = "sqlite:///./minkowski_runs.db"


class Database:
    """Run ledger: one row per CLI invocation with its report and log lines"""

    def __init__(self, database_url: str = DEFAULT_LEDGER_URL):
        self.engine = create_engine(database_url, echo=False)
        self.session = sessionmaker(self.engine, expire_on_commit=False)

    def init_db(self):
        Base.metadata.create_all(self.engine)
        with self.engine.begin() as conn:
            self._migrate_schema_if_needed(conn)

    def _migrate_schema_if_needed(self, conn):
        """Add columns missing from ledgers written by older versions"""
        if self.engine.dialect.name != "sqlite":
            return
        try:
            result = conn.execute(text("PRAGMA table_info(report_runs)"))
            columns = [row[1] for row in result.fetchall()]

            migrations_needed = []
            if "norm_digest" not in columns:
                migrations_needed.append("ALTER TABLE report_runs ADD COLUMN norm_digest VARCHAR")
            if "value" not in columns:
                migrations_needed.append("ALTER TABLE report_runs ADD COLUMN value FLOAT")

            for migration in migrations_needed:
                conn.execute(text(migration))
                logger.info("✅ Applied migration: %s", migration)

            if migrations_needed:
                logger.info("🔄 Ledger schema updated with %d new columns", len(migrations_needed))

        except Exception as e:
            logger.warning("⚠️  Migration warning: %s", e)

    def create_run(self, command: str, norm_label: Optional[str] = None, norm_digest: Optional[str] = None) -> ReportRun:
        with self.session() as session:
            run = ReportRun(
                command=command,
                norm_label=norm_label,
                norm_digest=norm_digest,
                report=json.dumps({}),
                logs=json.dumps([]),
            )
            session.add(run)
            session.commit()
            session.refresh(run)
            return run

    def update_run(
        self,
        run_id: int,
        status: RunStatus,
        logs: List[str],
        report: Optional[Dict[str, Any]] = None,
        value: Optional[float] = None,
        norm_label: Optional[str] = None,
        norm_digest: Optional[str] = None,
    ):
        with self.session() as session:
            run = session.get(ReportRun, run_id)
            if run:
                run.status = status
                run.logs = json.dumps(logs)
                if report is not None:
                    run.report = json.dumps(report, sort_keys=True)
                if value is not None:
                    run.value = value
                if norm_label is not None:
                    run.norm_label = norm_label
                if norm_digest is not None:
                    run.norm_digest = norm_digest
                session.commit()

    def get_run(self, run_id: int) -> Optional[ReportRun]:
        with self.session() as session:
            return session.get(ReportRun, run_id)

    def list_runs(self, limit: int = 20, command: Optional[str] = None) -> List[ReportRun]:
        with self.session() as session:
            stmt = select(ReportRun).order_by(desc(ReportRun.id)).limit(limit)
            if command is not None:
                stmt = stmt.where(ReportRun.command == command)
            return list(session.execute(stmt).scalars().all())
