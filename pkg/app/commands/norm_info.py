from typing import Any, Dict

try:
    from .base import BaseCommand, CommandResult, jsonable
except ImportError:
    # Fallback for direct execution
    from app.commands.base import BaseCommand, CommandResult, jsonable


class NormInfoCommand(BaseCommand):
    def execute(self, context: Dict[str, Any]) -> CommandResult:
        norm = context["norm"]
        flats = norm.flat_spots()
        vertices = norm.vertex_array
        data = {
            "label": norm.label(),
            "kind": norm.kind,
            "digest": norm.digest(),
            "spec": norm.to_spec(),
            "exactness": norm.exactness,
            "strictly_convex": norm.is_strictly_convex,
            "vertex_count": None if vertices is None else len(vertices),
            "flat_spots": [
                {"a": jsonable(f.segment.a), "b": jsonable(f.segment.b), "exact": f.exact} for f in flats
            ],
            "discretization_tol": norm.discretization_tol,
        }
        return CommandResult(
            success=True,
            message=f"{norm.label()}: {len(flats)} flat spots",
            data=data,
        )
