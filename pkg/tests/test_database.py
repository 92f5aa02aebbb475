import json

import pytest
from sqlalchemy import create_engine, text

from app.database import Database
from app.models import ReportRunResponse, RunStatus


@pytest.fixture
def ledger(tmp_path):
    db = Database(f"sqlite:///{tmp_path / 'ledger.db'}")
    db.init_db()
    yield db
    db.engine.dispose()


def test_run_lifecycle(ledger):
    run = ledger.create_run("cb", "lp:2", "abc123")
    assert run.status == RunStatus.STARTED

    ledger.update_run(run.id, RunStatus.SUCCEEDED, ["Starting cb", "done"], report={"value": 1.0}, value=1.0)
    stored = ledger.get_run(run.id)
    assert stored.status == RunStatus.SUCCEEDED
    assert stored.value == 1.0
    assert json.loads(stored.logs) == ["Starting cb", "done"]
    assert json.loads(stored.report) == {"value": 1.0}

    response = ReportRunResponse.model_validate(stored)
    assert response.norm_label == "lp:2"


def test_list_runs_is_newest_first_and_filters(ledger):
    ids = [ledger.create_run(cmd).id for cmd in ("sine", "cb", "sine")]
    assert [r.id for r in ledger.list_runs()] == ids[::-1]
    assert [r.id for r in ledger.list_runs(command="sine")] == [ids[2], ids[0]]
    assert len(ledger.list_runs(limit=1)) == 1


def test_update_of_unknown_run_is_ignored(ledger):
    ledger.update_run(999, RunStatus.FAILED, [])
    assert ledger.get_run(999) is None


def test_old_ledger_gains_missing_columns(tmp_path):
    url = f"sqlite:///{tmp_path / 'old.db'}"
    engine = create_engine(url)
    with engine.begin() as conn:
        conn.execute(
            text(
                "CREATE TABLE report_runs (id INTEGER PRIMARY KEY, command VARCHAR, norm_label VARCHAR, "
                "status VARCHAR, report TEXT, logs TEXT, created_at DATETIME, updated_at DATETIME)"
            )
        )
    engine.dispose()

    db = Database(url)
    db.init_db()
    run = db.create_run("norm-info", "euclidean", "ffff")
    assert db.get_run(run.id).norm_digest == "ffff"
    db.engine.dispose()
