from fractions import Fraction

import pytest

from app.errors import DegenerateSegmentError, DomainError
from app.geometry import (
    ConvexPolygon,
    PlanePoint,
    SegmentPP,
    convex_hull,
    convex_quadrilateral_order,
    cross,
    midpoint,
    regular_polygon,
    segments_parallel,
    to_fraction,
)


def test_to_fraction_is_exact_for_decimal_text_and_floats():
    assert to_fraction(0.1) == Fraction(1, 10)
    assert to_fraction("1/3") == Fraction(1, 3)
    assert to_fraction(3) == 3


def test_point_arithmetic_stays_exact():
    p = PlanePoint(Fraction(1, 3), 2)
    q = PlanePoint(1, Fraction(1, 2))
    assert p + q == PlanePoint(Fraction(4, 3), Fraction(5, 2))
    assert (p / 3).is_exact
    assert cross(PlanePoint(1, 0), PlanePoint(0, 1)) == 1
    assert midpoint(PlanePoint(0, 0), PlanePoint(1, 1)) == PlanePoint(Fraction(1, 2), Fraction(1, 2))


def test_non_finite_coordinates_are_rejected():
    with pytest.raises(DomainError):
        PlanePoint(float("nan"), 0.0)


def test_convex_hull_drops_interior_and_collinear_points():
    pts = [PlanePoint(*p) for p in [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0)]]
    hull = convex_hull(pts)
    assert set(hull) == {PlanePoint(0, 0), PlanePoint(2, 0), PlanePoint(2, 2), PlanePoint(0, 2)}
    assert len(hull) == 4


def test_convex_polygon_rejects_clockwise_order():
    with pytest.raises(DomainError):
        ConvexPolygon([PlanePoint(1, 1), PlanePoint(1, -1), PlanePoint(-1, -1), PlanePoint(-1, 1)])


def test_convex_polygon_strictness_is_optional():
    pts = [PlanePoint(*p) for p in [(0, 0), (1, 0), (2, 0), (1, 1)]]
    with pytest.raises(DomainError):
        ConvexPolygon(pts)
    assert len(ConvexPolygon(pts, strict=False)) == 4


def test_segments_parallel_exact_and_degenerate():
    a = SegmentPP(PlanePoint(0, 0), PlanePoint(2, 1))
    b = SegmentPP(PlanePoint(5, 5), PlanePoint(9, 7))
    c = SegmentPP(PlanePoint(0, 0), PlanePoint(1, 1))
    assert segments_parallel(a, b)
    assert not segments_parallel(a, c)
    with pytest.raises(DegenerateSegmentError, match="degenerate segment"):
        segments_parallel(a, SegmentPP(PlanePoint(1, 1), PlanePoint(1, 1)))


def test_segment_contains_exactly():
    s = SegmentPP(PlanePoint(0, 0), PlanePoint(2, 2))
    assert s.contains(PlanePoint(1, 1))
    assert not s.contains(PlanePoint(3, 3))


def test_regular_polygon_is_centrally_symmetric():
    hexagon = regular_polygon(6)
    assert len(hexagon) == 6
    assert hexagon.is_centrally_symmetric()
    assert hexagon.contains_origin()
    with pytest.raises(DomainError):
        regular_polygon(5)


def test_cross_is_antisymmetric():
    a, b = PlanePoint(1, 2), PlanePoint(3, 4)
    assert cross(a, b) == -2
    assert cross(b, a) == 2
    assert cross(PlanePoint(2, 2), PlanePoint(1, 1)) == 0


def test_convex_quadrilateral_order():
    a, b, c, d = (PlanePoint(*p) for p in [(0, 0), (1, 0), (1, 1), (0, 1)])
    assert convex_quadrilateral_order(a, b, c, d) == (a, b, c, d)
    assert convex_quadrilateral_order(a, c, b, d) == (a, b, c, d)
    inside = PlanePoint(Fraction(1, 4), Fraction(1, 4))
    assert convex_quadrilateral_order(a, b, inside, d) is None
    assert convex_quadrilateral_order(a, a, c, d) is None
