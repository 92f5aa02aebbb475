"""Points, segments, lines and convex polygons of the plane.

Coordinates may be ``int``, ``Fraction`` or ``float``. Rational inputs keep
every predicate exact; floating inputs fall back to tolerances.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

try:
    from .errors import DegenerateSegmentError, DomainError
except ImportError:
    # Fallback for direct execution
    from app.errors import DegenerateSegmentError, DomainError

Scalar = Union[int, float, Fraction]

TOL_DIR = 1e-9


def is_rational(value) -> bool:
    return isinstance(value, Rational)


def to_fraction(value) -> Fraction:
    """Exact rational for a coordinate; floats go through their shortest repr (0.1 -> 1/10)"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    return Fraction(repr(float(value)))


@dataclass(frozen=True)
class PlanePoint:
    u: Scalar
    v: Scalar

    def __post_init__(self):
        for c in (self.u, self.v):
            if not is_rational(c) and not math.isfinite(c):
                raise DomainError(f"non-finite coordinate in ({self.u}, {self.v})")

    def __add__(self, other: "PlanePoint") -> "PlanePoint":
        return PlanePoint(self.u + other.u, self.v + other.v)

    def __sub__(self, other: "PlanePoint") -> "PlanePoint":
        return PlanePoint(self.u - other.u, self.v - other.v)

    def __neg__(self) -> "PlanePoint":
        return PlanePoint(-self.u, -self.v)

    def __mul__(self, s: Scalar) -> "PlanePoint":
        return PlanePoint(self.u * s, self.v * s)

    __rmul__ = __mul__

    def __truediv__(self, d: Scalar) -> "PlanePoint":
        if is_rational(d) and self.is_exact:
            return PlanePoint(Fraction(self.u) / d, Fraction(self.v) / d)
        return PlanePoint(self.u / d, self.v / d)

    def __iter__(self):
        yield self.u
        yield self.v

    @property
    def is_exact(self) -> bool:
        return is_rational(self.u) and is_rational(self.v)

    @property
    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def cross(self, other: "PlanePoint") -> Scalar:
        return self.u * other.v - self.v * other.u

    def dot(self, other: "PlanePoint") -> Scalar:
        return self.u * other.u + self.v * other.v

    def rotleft(self) -> "PlanePoint":
        return PlanePoint(-self.v, self.u)

    def euclidean_length(self) -> float:
        return math.hypot(float(self.u), float(self.v))

    def angle(self) -> float:
        return math.atan2(float(self.v), float(self.u))

    def as_float(self) -> "PlanePoint":
        return PlanePoint(float(self.u), float(self.v))

    def as_fraction(self) -> "PlanePoint":
        return PlanePoint(to_fraction(self.u), to_fraction(self.v))

    def to_array(self) -> np.ndarray:
        return np.array([float(self.u), float(self.v)])

    @classmethod
    def from_array(cls, a) -> "PlanePoint":
        return cls(float(a[0]), float(a[1]))

    def __str__(self):
        return f"({self.u}, {self.v})"


def as_point(p) -> PlanePoint:
    if isinstance(p, PlanePoint):
        return p
    if hasattr(p, "point"):
        return p.point
    return PlanePoint(p[0], p[1])


def cross(a: PlanePoint, b: PlanePoint) -> Scalar:
    return a.u * b.v - a.v * b.u


def midpoint(a: PlanePoint, b: PlanePoint) -> PlanePoint:
    if a.is_exact and b.is_exact:
        return PlanePoint(Fraction(a.u + b.u, 2), Fraction(a.v + b.v, 2))
    return PlanePoint((a.u + b.u) / 2, (a.v + b.v) / 2)


@dataclass(frozen=True)
class SegmentPP:
    a: PlanePoint
    b: PlanePoint

    @property
    def direction(self) -> PlanePoint:
        return self.b - self.a

    @property
    def is_degenerate(self) -> bool:
        return self.direction.is_zero

    @property
    def midpoint(self) -> PlanePoint:
        return midpoint(self.a, self.b)

    def reversed(self) -> "SegmentPP":
        return SegmentPP(self.b, self.a)

    def contains(self, p: PlanePoint, tol: float = 1e-9) -> bool:
        """Closed-segment membership; exact for rational data"""
        d = self.direction
        w = p - self.a
        if d.is_exact and w.is_exact:
            return cross(d, w) == 0 and 0 <= w.dot(d) <= d.dot(d)
        length = d.euclidean_length()
        if length == 0:
            return (p - self.a).euclidean_length() <= tol
        if abs(float(cross(d, w))) > tol * length:
            return False
        t = float(w.dot(d)) / (length * length)
        return -tol <= t <= 1 + tol


@dataclass(frozen=True)
class LinePP:
    base: PlanePoint
    dir: PlanePoint
    half: bool = False

    def __post_init__(self):
        if self.dir.is_zero:
            raise DomainError("line direction must be nonzero")

    def point_at(self, s: Scalar) -> PlanePoint:
        if self.half and s < 0:
            raise DomainError("half-line parameter must be non-negative")
        return self.base + self.dir * s

    def distance_euclidean(self, p: PlanePoint) -> float:
        return abs(float(cross(self.dir, p - self.base))) / self.dir.euclidean_length()


def segments_parallel(s1: SegmentPP, s2: SegmentPP, tol_dir: float = TOL_DIR) -> bool:
    if s1.is_degenerate or s2.is_degenerate:
        raise DegenerateSegmentError()
    d1, d2 = s1.direction, s2.direction
    if d1.is_exact and d2.is_exact:
        return cross(d1, d2) == 0
    sine = abs(float(cross(d1, d2))) / (d1.euclidean_length() * d2.euclidean_length())
    return sine <= tol_dir


def convex_hull(points: Iterable[PlanePoint]) -> List[PlanePoint]:
    """Monotone chain; counterclockwise, collinear boundary points dropped."""
    pts = sorted(set(points), key=lambda p: (p.u, p.v))
    if len(pts) <= 2:
        return pts

    def half(seq):
        chain: List[PlanePoint] = []
        for p in seq:
            while len(chain) >= 2 and cross(chain[-1] - chain[-2], p - chain[-2]) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def convex_quadrilateral_order(
    a: PlanePoint, b: PlanePoint, c: PlanePoint, d: PlanePoint
) -> Optional[Tuple[PlanePoint, PlanePoint, PlanePoint, PlanePoint]]:
    """The points in convex-position order starting at a, or None when they are not a convex quadrilateral.

    Repeated points never form one, so they give None as well.
    """
    quad = [a, b, c, d]
    if len(set(quad)) < 4:
        return None
    hull = convex_hull(quad)
    if len(hull) < 4:
        return None
    start = hull.index(a)
    ordered = hull[start:] + hull[:start]
    return tuple(ordered)


def angle_key(p: PlanePoint) -> float:
    """Angle in [0, 2*pi) used to order boundary points counterclockwise"""
    ang = p.angle()
    return ang + 2 * math.pi if ang < 0 else ang


class ConvexPolygon:
    """Counterclockwise convex vertex cycle.

    With ``strict`` (the default) every vertex must be a proper corner; sampled
    boundaries pass ``strict=False`` and may keep collinear runs.
    """

    def __init__(self, vertices: Sequence[PlanePoint], strict: bool = True):
        verts = [as_point(v) for v in vertices]
        if len(verts) < 3:
            raise DomainError("a convex polygon needs at least three vertices")
        n = len(verts)
        for i in range(n):
            e1 = verts[(i + 1) % n] - verts[i]
            e2 = verts[(i + 2) % n] - verts[(i + 1) % n]
            turn = cross(e1, e2)
            # float collinear runs may round to a tiny negative turn
            slack = 0 if strict or verts[i].is_exact else 1e-12 * e1.euclidean_length() * e2.euclidean_length()
            if turn < -slack or (strict and turn == 0):
                raise DomainError(
                    f"vertex {(i + 1) % n} {verts[(i + 1) % n]} breaks strict convexity"
                )
        self.vertices: Tuple[PlanePoint, ...] = tuple(verts)

    @classmethod
    def from_points(cls, points: Iterable[PlanePoint]) -> "ConvexPolygon":
        return cls(convex_hull(points))

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __eq__(self, other):
        return isinstance(other, ConvexPolygon) and self.vertices == other.vertices

    def __repr__(self):
        return f"ConvexPolygon({[tuple(v) for v in self.vertices]!r})"

    @property
    def is_exact(self) -> bool:
        return all(v.is_exact for v in self.vertices)

    def edges(self) -> List[SegmentPP]:
        n = len(self.vertices)
        return [SegmentPP(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def is_centrally_symmetric(self) -> bool:
        vset = set(self.vertices)
        return all(-v in vset for v in self.vertices)

    def contains_origin(self) -> bool:
        return all(cross(e.direction, -e.a) > 0 for e in self.edges())

    def transformed(self, m11, m12, m21, m22) -> "ConvexPolygon":
        images = [PlanePoint(m11 * p.u + m12 * p.v, m21 * p.u + m22 * p.v) for p in self.vertices]
        return ConvexPolygon.from_points(images)

    def to_array(self) -> np.ndarray:
        return np.array([[float(p.u), float(p.v)] for p in self.vertices])


def regular_polygon(sides: int, rotation: float = 0.0) -> ConvexPolygon:
    """Regular polygon with circumradius 1 and exact central symmetry (sides even)."""
    if sides < 4 or sides % 2:
        raise DomainError("a centrally symmetric regular polygon needs an even number of sides >= 4")
    half = []
    for k in range(sides // 2):
        ang = rotation + 2 * math.pi * k / sides
        half.append(PlanePoint(math.cos(ang), math.sin(ang)))
    return ConvexPolygon.from_points(half + [-p for p in half])
