from typing import Any, Dict

try:
    from .base import BaseCommand, CommandResult, jsonable, number
    from ..orthogonality import (
        birkhoff_test,
        build_reflection,
        circle_deviation,
        isosceles_test,
        reflection_distortion,
        roberts_test,
        sine,
    )
except ImportError:
    # Fallback for direct execution
    from app.commands.base import BaseCommand, CommandResult, jsonable, number
    from app.orthogonality import (
        birkhoff_test,
        build_reflection,
        circle_deviation,
        isosceles_test,
        reflection_distortion,
        roberts_test,
        sine,
    )


class SineCommand(BaseCommand):
    def execute(self, context: Dict[str, Any]) -> CommandResult:
        norm, tol = context["norm"], context["tolerances"]
        x, y = self.point("x"), self.point("y")
        result = sine(norm, x, y, tol)
        data = {
            "x": jsonable(x),
            "y": jsonable(y),
            "value": number(result.value),
            "minimizer_t": number(result.minimizer_t),
            "bracket": list(result.bracket),
            "exact": result.exact,
            "birkhoff": birkhoff_test(norm, x, y, tol),
        }
        return CommandResult(success=True, message=f"s(x, y) = {float(result.value):.12g}", data=data)


class OrthoCommand(BaseCommand):
    """All three orthogonality predicates for one pair, plus the reflection's distortion of S"""

    def execute(self, context: Dict[str, Any]) -> CommandResult:
        norm, tol = context["norm"], context["tolerances"]
        x, y = self.point("x"), self.point("y")
        T = build_reflection(x, y)
        distortion = reflection_distortion(norm, T, tol)
        data = {
            "x": jsonable(x),
            "y": jsonable(y),
            "sine": number(sine(norm, x, y, tol).value),
            "birkhoff": birkhoff_test(norm, x, y, tol),
            "birkhoff_reverse": birkhoff_test(norm, y, x, tol),
            "isosceles": isosceles_test(norm, x, y, tol),
            "roberts": roberts_test(norm, x, y, tol),
            "reflection": {
                "matrix": jsonable(T.matrix()),
                "circle_deviation": number(circle_deviation(norm, T, tol)),
                "sup": distortion.sup,
                "inf": distortion.inf,
                "inf_direct": distortion.inf_direct,
                "argmax": jsonable(distortion.argmax),
            },
        }
        flags = [k for k in ("birkhoff", "isosceles", "roberts") if data[k]]
        return CommandResult(success=True, message=f"orthogonal: {', '.join(flags) or 'none'}", data=data)
