import logging
from typing import Any, Dict

try:
    from .base import BaseCommand, CommandResult, jsonable
    from ..constants import estimate_cB, estimate_cS, estimate_D, inner_product_report, search_cB_lower
    from ..figures import emit_figure
    from ..geometry import PlanePoint
    from ..models import FigureKind, RunStatus
    from ..orthogonality import build_reflection
except ImportError:
    # Fallback for direct execution
    from app.commands.base import BaseCommand, CommandResult, jsonable
    from app.constants import estimate_cB, estimate_cS, estimate_D, inner_product_report, search_cB_lower
    from app.figures import emit_figure
    from app.geometry import PlanePoint
    from app.models import FigureKind, RunStatus
    from app.orthogonality import build_reflection

logger = logging.getLogger(__name__)


def _report_result(report) -> CommandResult:
    status = "within" if report.bounds_ok else "OUTSIDE"
    return CommandResult(
        success=True,
        message=f"{report.name} ~ {report.value:.9f} ({status} the proven bounds)",
        data=jsonable(report),
    )


class CBCommand(BaseCommand):
    def execute(self, context: Dict[str, Any]) -> CommandResult:
        report = estimate_cB(
            context["norm"],
            self.config.resolution,
            self.config.inner_resolution,
            context["tolerances"],
            self.config.deterministic,
        )
        return _report_result(report)


class CSCommand(BaseCommand):
    def execute(self, context: Dict[str, Any]) -> CommandResult:
        norm = context["norm"]
        report = estimate_cS(norm, self.config.resolution, context["tolerances"], self.config.deterministic)
        if self.config.svg_path:
            x = PlanePoint(*report.witness["x"])
            y = PlanePoint(*report.witness["y"])
            emit_figure(
                FigureKind.REFLECTED_CIRCLE,
                norm,
                {"reflection": build_reflection(x, y), "witnesses": [x.to_array(), y.to_array()]},
                self.config.svg_path,
            )
            context["logs"].append(f"wrote {self.config.svg_path}")
        return _report_result(report)


class DConstCommand(BaseCommand):
    def execute(self, context: Dict[str, Any]) -> CommandResult:
        report = estimate_D(context["norm"], self.config.resolution, context["tolerances"], self.config.deterministic)
        return _report_result(report)


class InnerProductCommand(BaseCommand):
    def execute(self, context: Dict[str, Any]) -> CommandResult:
        data = inner_product_report(context["norm"], self.config.resolution, self.config.method, context["tolerances"])
        verdict = "is" if data["is_inner_product"] else "is not"
        return CommandResult(success=True, message=f"norm {verdict} induced by an inner product", data=data)


class SearchCommand(BaseCommand):
    """Empirical minimum of c_B over random polygons; improvements go to the ledger"""

    needs_norm = False

    def execute(self, context: Dict[str, Any]) -> CommandResult:
        database = context.get("database")
        records = []
        for record in search_cB_lower(self.config.search, context["tolerances"], self.config.deterministic):
            records.append(record)
            if record["improved"]:
                context["logs"].append(f"search {record['index']}: running minimum {record['running_min']:.9f}")
                if database is not None:
                    run = database.create_run("search-improvement", norm_digest=record["digest"])
                    database.update_run(
                        run.id, RunStatus.SUCCEEDED, [], report=jsonable(record), value=record["value"]
                    )
        best = min(records, key=lambda r: r["value"]) if records else None
        data = {
            "family": self.config.search.family,
            "records": records,
            "best": best,
            "conclusive": False,
        }
        if best is None:
            return CommandResult(success=True, message="search ran zero candidates", data=data)
        return CommandResult(
            success=True, message=f"smallest c_B seen {best['value']:.9f} (not conclusive)", data=data
        )
