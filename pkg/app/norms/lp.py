import math
from typing import Any, Dict, List, Optional, Union

import numpy as np

from ..errors import NormValidationError, ZeroVectorError
from ..geometry import PlanePoint, as_point
from .base import DirectionRange, FlatSpot, Norm
from .polygon import PolygonNorm


def _polygon_delegate(p: float) -> Optional[PolygonNorm]:
    if p == 1:
        return PolygonNorm.from_vertices([(1, 0), (0, 1), (-1, 0), (0, -1)], symmetrize=False, label="lp:1")
    if math.isinf(p):
        return PolygonNorm.from_vertices([(1, 1), (-1, 1), (-1, -1), (1, -1)], symmetrize=False, label="lp:inf")
    return None


class LpNorm(Norm):
    """(|u|^p + |v|^p)^(1/p); p = 1 and p = inf run through their exact polygon."""

    kind = "lp"

    def __init__(self, p: Union[float, str]):
        p = math.inf if p in ("inf", "infinity") else float(p)
        if not p >= 1:
            raise NormValidationError(f"lp exponent must be >= 1, got {p}")
        self.p = p
        self._delegate = _polygon_delegate(p)

    # dual exponent
    @property
    def q(self) -> float:
        if self.p == 1:
            return math.inf
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1)

    def gauge_array(self, points: np.ndarray) -> np.ndarray:
        if self._delegate is not None:
            return self._delegate.gauge_array(points)
        P = np.abs(np.asarray(points, dtype=float))
        scale = np.max(P, axis=-1)
        safe = np.where(scale > 0, scale, 1.0)
        R = P / safe[..., None]
        return scale * np.sum(R ** self.p, axis=-1) ** (1.0 / self.p)

    def gauge(self, p) -> Any:
        if self._delegate is not None:
            return self._delegate.gauge(p)
        return super().gauge(p)

    def flat_spots(self) -> List[FlatSpot]:
        if self._delegate is not None:
            return self._delegate.flat_spots()
        return []

    def support_point(self, functional: PlanePoint) -> PlanePoint:
        if self._delegate is not None:
            return self._delegate.support_point(functional)
        f = as_point(functional)
        if f.is_zero:
            raise ZeroVectorError()
        fa = f.to_array()
        w = np.sign(fa) * np.abs(fa) ** (self.q - 1)
        return PlanePoint.from_array(w / self.gauge_array(w))

    def supporting_directions(self, x) -> DirectionRange:
        if self._delegate is not None:
            return self._delegate.supporting_directions(x)
        x = as_point(x)
        if x.is_zero:
            raise ZeroVectorError()
        xa = x.to_array()
        grad = PlanePoint.from_array(np.sign(xa) * np.abs(xa) ** (self.p - 1))
        d = self.normalize(grad.rotleft())
        return DirectionRange(d, d)

    def grid_anchors(self) -> List[PlanePoint]:
        return self._delegate.grid_anchors() if self._delegate is not None else []

    @property
    def exact_polygon(self) -> Optional[PolygonNorm]:
        return self._delegate

    @property
    def vertex_array(self) -> Optional[np.ndarray]:
        return self._delegate.vertex_array if self._delegate is not None else None

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "lp", "p": "inf" if math.isinf(self.p) else self.p}

    def label(self) -> str:
        if math.isinf(self.p):
            return "lp:inf"
        return f"lp:{self.p:g}"


class EuclideanNorm(LpNorm):
    kind = "euclidean"

    def __init__(self):
        super().__init__(2.0)

    def gauge_array(self, points: np.ndarray) -> np.ndarray:
        P = np.asarray(points, dtype=float)
        return np.hypot(P[..., 0], P[..., 1])

    def support_point(self, functional: PlanePoint) -> PlanePoint:
        f = as_point(functional)
        if f.is_zero:
            raise ZeroVectorError()
        return f.as_float() / f.euclidean_length()

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "euclidean"}

    def label(self) -> str:
        return "euclidean"
