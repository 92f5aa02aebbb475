from typing import Any, Dict

import numpy as np

try:
    from .base import BaseCommand, CommandResult, jsonable
    from ..bisector import bisector_line, bisector_on_line, inner_bisector, inner_projection, trace_bisector
    from ..figures import emit_figure
    from ..models import FigureKind
except ImportError:
    # Fallback for direct execution
    from app.commands.base import BaseCommand, CommandResult, jsonable
    from app.bisector import bisector_line, bisector_on_line, inner_bisector, inner_projection, trace_bisector
    from app.figures import emit_figure
    from app.models import FigureKind


def _pair_data(pair) -> Dict[str, Any]:
    data = {"kind": pair.kind.value, "exact": pair.exact}
    if pair.apices is not None:
        data["apices"] = [jsonable(a) for a in pair.apices]
        data["flat_spot"] = [jsonable(pair.witness.segment.a), jsonable(pair.witness.segment.b)]
    return data


class BisectorCommand(BaseCommand):
    def execute(self, context: Dict[str, Any]) -> CommandResult:
        norm, tol = context["norm"], context["tolerances"]
        x, y = self.point("x"), self.point("y")
        if self.config.offset is not None:
            hit = bisector_on_line(norm, x, y, self.config.offset, tol)
            data = {
                "offset": hit.offset,
                "point": jsonable(hit.point),
                "segment_hi": None if hit.segment_hi is None else jsonable(hit.segment_hi),
            }
            kind = "segment" if hit.is_segment else "point"
            return CommandResult(success=True, message=f"line at offset {hit.offset:g} meets bis(x, y) in a {kind}",
                                 data=data)

        trace = trace_bisector(norm, x, y, self.config.offset_max, self.config.n_steps, tol)
        line = bisector_line(norm, x, y, tol)
        data = {
            "pair": _pair_data(trace.pair),
            "truncation": trace.truncation,
            "rows": [list(r) for r in trace.rows()],
            "max_residual": float(np.max(trace.residuals(norm))),
            "line": None if line is None else {"base": jsonable(line[0]), "direction": jsonable(line[1])},
        }
        if self.config.svg_path:
            emit_figure(FigureKind.BISECTOR_TRACE, norm, {"trace": trace}, self.config.svg_path)
            context["logs"].append(f"wrote {self.config.svg_path}")
        return CommandResult(
            success=True,
            message=f"{trace.pair.kind.value} pair, {len(trace)} lines traced",
            data=data,
            table=trace.to_csv(),
        )


class InnerCommand(BaseCommand):
    """bis_I(-x, x) and the inner projection P_I(x) for one x"""

    def execute(self, context: Dict[str, Any]) -> CommandResult:
        norm, tol = context["norm"], context["tolerances"]
        x = self.unit_point(norm)
        trace = inner_bisector(norm, x, self.config.n_steps, tol)
        projection = inner_projection(norm, x, self.config.n_steps, tol)
        data = {
            "x": jsonable(trace.y),
            "pair": _pair_data(trace.pair),
            "truncation": trace.truncation,
            "needs_review": trace.needs_review,
            "exit_points": [jsonable(p) for p in trace.exit_points],
            "rows": [list(r) for r in trace.rows()],
            "projection": {
                "directions": jsonable(projection.to_array()),
                "degenerate": projection.degenerate,
            },
        }
        if trace.needs_review:
            context["logs"].append("inner bisector stopped at an apex inside the unit ball")
        if self.config.svg_path:
            emit_figure(
                FigureKind.INNER_PROJECTION,
                norm,
                {"projection": projection, "x": trace.y.to_array()},
                self.config.svg_path,
            )
            context["logs"].append(f"wrote {self.config.svg_path}")
        return CommandResult(
            success=True,
            message=f"P_I(x) has {len(projection.direction_samples)} samples"
            + (" (a single direction pair)" if projection.degenerate else ""),
            data=data,
            table=trace.to_csv(),
        )
