import pytest

from app.bisector import inner_projection, trace_bisector
from app.errors import OutputError
from app.figures import emit_figure, reflected_circle_figure, unit_circle_figure
from app.models import FigureKind
from app.orthogonality import build_reflection


def test_unit_circle_of_the_square(square):
    svg = unit_circle_figure(square)
    assert 'viewBox="-3.2 -3.2 6.4 6.4"' in svg
    assert "unit circle of square" in svg
    assert 'points="-1,-1 1,-1 1,1 -1,1"' in svg


def test_reflected_circle_is_dashed(square):
    svg = reflected_circle_figure(square, build_reflection((1, 1), (0, 1)))
    assert svg.count('stroke-dasharray="0.04 0.04"') == 1
    assert "-1,-3" in svg
    assert svg.count("<circle") == 2


def test_figures_are_byte_deterministic(tmp_path, hexagon):
    trace = trace_bisector(hexagon, (-1, 0), (1, 1), 2.0, 9)
    first = emit_figure(FigureKind.BISECTOR_TRACE, hexagon, {"trace": trace}, tmp_path / "a.svg")
    second = emit_figure("bisector-trace", hexagon, {"trace": trace}, tmp_path / "b.svg")
    assert first.read_bytes() == second.read_bytes()


def test_inner_projection_figure(tmp_path, euclidean):
    projection = inner_projection(euclidean, (1.0, 0.0), 8)
    path = emit_figure(
        FigureKind.INNER_PROJECTION, euclidean, {"projection": projection, "x": (1.0, 0.0)}, tmp_path / "p.svg"
    )
    text = path.read_text()
    assert text.startswith('<?xml version="1.0" encoding="UTF-8"?>')
    assert text.count("<circle") == len(projection.direction_samples) + 1


def test_unwritable_target_raises_output_error(tmp_path, square):
    with pytest.raises(OutputError, match="cannot write figure"):
        emit_figure(FigureKind.UNIT_CIRCLE, square, {}, tmp_path / "missing" / "circle.svg")
