import hashlib
import json
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import ZeroVectorError
from ..geometry import PlanePoint, SegmentPP, as_point, cross


@dataclass(frozen=True)
class CirclePoint:
    theta: float
    point: PlanePoint

    @property
    def u(self):
        return self.point.u

    @property
    def v(self):
        return self.point.v

    def to_array(self) -> np.ndarray:
        return self.point.to_array()


@dataclass(frozen=True)
class FlatSpot:
    segment: SegmentPP
    maximal: bool = True
    exact: bool = True

    def contains(self, p: PlanePoint, tol: float = 1e-9) -> bool:
        return self.segment.contains(p, tol)


@dataclass(frozen=True)
class DirectionRange:
    """Closed cone of directions from ``start`` counterclockwise to ``end``, taken up to sign."""

    start: PlanePoint
    end: PlanePoint

    @property
    def is_single(self) -> bool:
        return self.start == self.end

    def fan(self, n: int) -> List[PlanePoint]:
        """n directions across the cone, both boundary directions included"""
        if self.is_single or n <= 1:
            return [self.start]
        if n == 2:
            return [self.start, self.end]
        out = []
        for k in range(n):
            s = k / (n - 1)
            out.append(self.start * (1 - s) + self.end * s)
        return out

    def contains(self, d: PlanePoint, tol: float = 1e-9) -> bool:
        if self.is_single:
            sine = abs(float(cross(self.start, d))) / (
                self.start.euclidean_length() * d.euclidean_length()
            )
            return sine <= tol
        det = float(cross(self.start, self.end))
        alpha = float(cross(d, self.end)) / det
        beta = float(cross(self.start, d)) / det
        scale = d.euclidean_length()
        return (alpha >= -tol * scale and beta >= -tol * scale) or (
            alpha <= tol * scale and beta <= tol * scale
        )


class Norm(ABC):
    """A norm of the plane given by its unit ball B (convex, compact, B = -B, origin interior)."""

    kind: str = "abstract"

    @abstractmethod
    def gauge_array(self, points: np.ndarray) -> np.ndarray:
        """Vectorized Minkowski functional over an array of shape (..., 2)"""

    @abstractmethod
    def flat_spots(self) -> List[FlatSpot]:
        """Maximal segments contained in the unit circle"""

    @abstractmethod
    def support_point(self, functional: PlanePoint) -> PlanePoint:
        """A point of S maximizing ``functional . z``; ties on a flat spot resolve to its midpoint"""

    @abstractmethod
    def supporting_directions(self, x) -> DirectionRange:
        """Directions d such that the line x + R d supports B at the unit vector x"""

    @abstractmethod
    def to_spec(self) -> Dict[str, Any]:
        """JSON-ready description of the unit ball"""

    def gauge(self, p) -> Any:
        p = as_point(p)
        return float(self.gauge_array(np.array([float(p.u), float(p.v)])))

    def normalize(self, p) -> PlanePoint:
        p = as_point(p)
        if p.is_zero:
            raise ZeroVectorError()
        return p / self.gauge(p)

    def circle_points(self, thetas: np.ndarray) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float)
        dirs = np.stack([np.cos(thetas), np.sin(thetas)], axis=-1)
        return dirs / self.gauge_array(dirs)[..., None]

    def circle_point(self, theta: float) -> CirclePoint:
        p = self.circle_points(np.array([theta]))[0]
        return CirclePoint(float(theta), PlanePoint(float(p[0]), float(p[1])))

    def boundary_samples(self, n: int) -> np.ndarray:
        return self.circle_points(2 * math.pi * np.arange(n) / n)

    def grid_anchors(self) -> List[PlanePoint]:
        """Distinguished points of S (vertices, edge midpoints) that direction grids must hit"""
        return []

    @property
    def exact_polygon(self):
        """Polygon model with exact combinatorics, or None"""
        return None

    @property
    def vertex_array(self) -> Optional[np.ndarray]:
        """Vertices of a polygonal model of S, when S is polygonal"""
        return None

    @property
    def discretization_tol(self) -> float:
        return 0.0

    @property
    def is_strictly_convex(self) -> bool:
        return not self.flat_spots()

    @property
    def exactness(self) -> str:
        return "polygon-exact-combinatorics" if self.exact_polygon is not None else "floating"

    def digest(self) -> str:
        payload = json.dumps(self.to_spec(), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    def label(self) -> str:
        return self.kind

    def __repr__(self):
        return f"{type(self).__name__}({self.label()})"


def fraction_pair(p: PlanePoint) -> List[str]:
    return [str(Fraction(p.u)) if isinstance(p.u, (int, Fraction)) else repr(float(p.u)),
            str(Fraction(p.v)) if isinstance(p.v, (int, Fraction)) else repr(float(p.v))]
