"""Standalone SVG drawings of unit circles, reflected circles, bisector traces and inner projections.

Output is byte-deterministic: fixed viewport, fixed number formatting, no
timestamps.
"""

from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import numpy as np

try:
    from .bisector import BisectorTrace, InnerProjectionSet
    from .errors import OutputError
    from .models import FigureKind
    from .norms import Norm
    from .orthogonality import ReflectionMap
except ImportError:
    # Fallback for direct execution
    from app.bisector import BisectorTrace, InnerProjectionSet
    from app.errors import OutputError
    from app.models import FigureKind
    from app.norms import Norm
    from app.orthogonality import ReflectionMap

# ||T z|| <= 3 on S for every Birkhoff pair, so reflected circles fit
VIEW = 3.2
CIRCLE_SAMPLES = 720


def _fmt(value: float) -> str:
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _points_attr(points: Iterable) -> str:
    return " ".join(f"{_fmt(float(u))},{_fmt(float(v))}" for u, v in points)


def polyline(points: np.ndarray, closed: bool = True, dashed: bool = False, stroke: str = "#1f4e79") -> str:
    tag = "polygon" if closed else "polyline"
    dash = ' stroke-dasharray="0.04 0.04"' if dashed else ""
    return (
        f'<{tag} points="{_points_attr(points)}" fill="none" stroke="{stroke}" '
        f'stroke-width="0.015"{dash}/>'
    )


def marker(point, radius: float = 0.05, fill: str = "#c0392b") -> str:
    return f'<circle cx="{_fmt(float(point[0]))}" cy="{_fmt(float(point[1]))}" r="{_fmt(radius)}" fill="{fill}"/>'


def svg_document(elements: List[str], title: str = "") -> str:
    size = 2 * VIEW
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(-VIEW)} {_fmt(-VIEW)} {_fmt(size)} {_fmt(size)}" '
        'width="640" height="640">',
    ]
    if title:
        lines.append(f"<title>{title}</title>")
    lines.append(
        f'<line x1="{_fmt(-VIEW)}" y1="0" x2="{_fmt(VIEW)}" y2="0" stroke="#cccccc" stroke-width="0.005"/>'
    )
    lines.append(
        f'<line x1="0" y1="{_fmt(-VIEW)}" x2="0" y2="{_fmt(VIEW)}" stroke="#cccccc" stroke-width="0.005"/>'
    )
    # SVG y grows downwards
    lines.append('<g transform="scale(1,-1)">')
    lines.extend(elements)
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def circle_outline(norm: Norm) -> np.ndarray:
    V = norm.vertex_array
    if V is not None and len(V) <= CIRCLE_SAMPLES:
        return V
    return norm.boundary_samples(CIRCLE_SAMPLES)


def unit_circle_figure(norm: Norm) -> str:
    return svg_document([polyline(circle_outline(norm))], title=f"unit circle of {norm.label()}")


def reflected_circle_figure(norm: Norm, T: ReflectionMap, witnesses: Optional[List] = None) -> str:
    S = circle_outline(norm)
    elements = [polyline(S), polyline(T.apply_array(S), dashed=True, stroke="#7f8c8d")]
    for w in witnesses or [T.axis_x.to_array(), T.axis_y.to_array()]:
        elements.append(marker(w))
    return svg_document(elements, title=f"S and T(S) for {norm.label()}")


def bisector_trace_figure(norm: Norm, trace: BisectorTrace) -> str:
    elements = [polyline(circle_outline(norm), stroke="#bbbbbb")]
    elements.append(polyline(trace.points, closed=False, stroke="#c0392b"))
    has_hi = ~np.isnan(trace.highs[:, 0])
    if np.any(has_hi):
        for side in (trace.offsets < 0, trace.offsets > 0):
            rows = has_hi & side
            if np.count_nonzero(rows) >= 2:
                elements.append(polyline(trace.highs[rows], closed=False, stroke="#c0392b"))
    elements.append(marker(trace.x.to_array(), fill="#1f4e79"))
    elements.append(marker(trace.y.to_array(), fill="#1f4e79"))
    return svg_document(elements, title=f"bisector trace for {norm.label()}")


def inner_projection_figure(norm: Norm, projection: InnerProjectionSet, x=None) -> str:
    elements = [polyline(circle_outline(norm))]
    for c in projection.direction_samples:
        elements.append(marker(c.to_array(), radius=0.03))
    if x is not None:
        elements.append(marker(np.asarray(x, dtype=float), fill="#1f4e79"))
    return svg_document(elements, title=f"inner projection for {norm.label()}")


FIGURE_BUILDERS = {
    FigureKind.UNIT_CIRCLE: lambda norm, data: unit_circle_figure(norm),
    FigureKind.REFLECTED_CIRCLE: lambda norm, data: reflected_circle_figure(
        norm, data["reflection"], data.get("witnesses")
    ),
    FigureKind.BISECTOR_TRACE: lambda norm, data: bisector_trace_figure(norm, data["trace"]),
    FigureKind.INNER_PROJECTION: lambda norm, data: inner_projection_figure(
        norm, data["projection"], data.get("x")
    ),
}


def emit_figure(kind: Union[FigureKind, str], norm: Norm, data: Dict, svg_path: Union[str, Path]) -> Path:
    """Render the figure and write it to ``svg_path``"""
    kind = FigureKind(kind)
    text = FIGURE_BUILDERS[kind](norm, data)
    path = Path(svg_path)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise OutputError(f"cannot write figure to {path}: {e}") from e
    return path
