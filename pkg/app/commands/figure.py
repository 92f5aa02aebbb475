from typing import Any, Dict

try:
    from .base import BaseCommand, CommandResult
    from ..bisector import inner_projection, trace_bisector
    from ..errors import DomainError
    from ..figures import emit_figure
    from ..models import FigureKind
    from ..orthogonality import build_reflection
except ImportError:
    # Fallback for direct execution
    from app.commands.base import BaseCommand, CommandResult
    from app.bisector import inner_projection, trace_bisector
    from app.errors import DomainError
    from app.figures import emit_figure
    from app.models import FigureKind
    from app.orthogonality import build_reflection


class FigureCommand(BaseCommand):
    def execute(self, context: Dict[str, Any]) -> CommandResult:
        norm, tol = context["norm"], context["tolerances"]
        kind = self.config.figure or FigureKind.UNIT_CIRCLE
        if not self.config.svg_path:
            raise DomainError("figure needs --svg PATH")
        data: Dict[str, Any] = {}
        if kind == FigureKind.REFLECTED_CIRCLE:
            x = self.unit_point(norm)
            if self.config.y is not None:
                y = self.point("y")
            else:
                # a Birkhoff partner: the middle of the supporting cone at x
                fan = norm.supporting_directions(x).fan(3)
                y = fan[len(fan) // 2]
            data = {"reflection": build_reflection(x, y), "witnesses": [x.to_array(), norm.normalize(y).to_array()]}
        elif kind == FigureKind.BISECTOR_TRACE:
            data = {
                "trace": trace_bisector(
                    norm, self.point("x"), self.point("y"), self.config.offset_max, self.config.n_steps, tol
                )
            }
        elif kind == FigureKind.INNER_PROJECTION:
            x = self.unit_point(norm)
            data = {"projection": inner_projection(norm, x, self.config.n_steps, tol), "x": x.to_array()}
        path = emit_figure(kind, norm, data, self.config.svg_path)
        context["logs"].append(f"wrote {path}")
        return CommandResult(success=True, message=f"{kind.value} figure written", data={"kind": kind.value, "path": str(path)})
