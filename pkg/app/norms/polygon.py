import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import NormValidationError, ZeroVectorError
from ..geometry import (
    ConvexPolygon,
    PlanePoint,
    SegmentPP,
    as_point,
    convex_hull,
    cross,
    midpoint,
    regular_polygon,
    to_fraction,
)
from .base import DirectionRange, FlatSpot, Norm, fraction_pair

logger = logging.getLogger(__name__)

# above this vertex count the gauge looks up the chord by angle instead of taking a max over facets
DENSE_FACET_LIMIT = 64
BATCH_CHUNK = 4096


def _in_half_plane(points: Sequence[PlanePoint]) -> bool:
    angles = sorted(p.angle() for p in points)
    if len(angles) < 2:
        return True
    gaps = [b - a for a, b in zip(angles, angles[1:])]
    gaps.append(angles[0] + 2 * math.pi - angles[-1])
    return max(gaps) > math.pi


class PolygonNorm(Norm):
    """Unit ball given by a centrally symmetric convex polygon.

    Vertices are kept as exact rationals for the combinatorics (edges, flat
    spots, vertex incidence) and mirrored into float arrays for evaluation.
    """

    kind = "polygon"

    def __init__(self, polygon: ConvexPolygon, exact: bool = True, label: Optional[str] = None):
        self.polygon = polygon
        self.exact = exact
        self._label = label
        self._vertices: Tuple[PlanePoint, ...] = polygon.vertices
        m = len(self._vertices)
        self._V = polygon.to_array()
        E = np.roll(self._V, -1, axis=0) - self._V
        c = self._V[:, 0] * E[:, 1] - self._V[:, 1] * E[:, 0]
        if np.any(c <= 0):
            raise NormValidationError("origin must be an interior point of the unit ball")
        # gauge(p) = max_i <A_i, p>; A_i equals 1 along edge i
        self._A = np.stack([E[:, 1], -E[:, 0]], axis=1) / c[:, None]
        self._E = E
        angles = np.arctan2(self._V[:, 1], self._V[:, 0])
        self._order = np.argsort(angles)
        self._sorted_angles = angles[self._order]
        self._A_exact: Optional[List[Tuple[Fraction, Fraction]]] = None
        if exact:
            self._A_exact = []
            for i in range(m):
                a, b = self._vertices[i], self._vertices[(i + 1) % m]
                e = b - a
                ci = Fraction(cross(a, e))
                self._A_exact.append((Fraction(e.v) / ci, Fraction(-e.u) / ci))

    # construction

    @classmethod
    def from_vertices(
        cls, raw: Sequence[Sequence[Any]], symmetrize: Optional[bool] = None, label: Optional[str] = None
    ) -> "PolygonNorm":
        pts = [PlanePoint(to_fraction(u), to_fraction(v)) for u, v in raw]
        for i, p in enumerate(pts):
            if p.is_zero:
                raise NormValidationError(f"vertex {i} is the origin; the origin must be interior")
        pset = set(pts)
        matched = [p for p in pts if -p in pset]
        if symmetrize is None:
            symmetrize = not matched and _in_half_plane(pts)
        if symmetrize:
            logger.debug("symmetrizing %d given vertices", len(pts))
            pts = pts + [-p for p in pts]
        else:
            for i, p in enumerate(pts):
                if -p not in pset:
                    raise NormValidationError(
                        f"vertex {i} {p} has no antipodal partner {-p}; the unit ball must satisfy B = -B"
                    )
        hull = convex_hull(pts)
        if len(hull) < 4:
            raise NormValidationError("unit ball is degenerate (fewer than four hull vertices)")
        hset = set(hull)
        for i, p in enumerate(pts):
            if p in hset:
                continue
            on_boundary = any(
                cross(hull[(k + 1) % len(hull)] - hull[k], p - hull[k]) == 0 for k in range(len(hull))
            )
            if not on_boundary:
                raise NormValidationError(
                    f"vertex {i % len(raw)} {p} lies inside the hull of the others; the unit ball is not convex"
                )
            logger.debug("merged collinear vertex %s", p)
        return cls(ConvexPolygon(hull), exact=True, label=label)

    @classmethod
    def regular(cls, sides: int, rotation: float = 0.0) -> "PolygonNorm":
        poly = regular_polygon(sides, rotation)
        norm = cls.from_vertices([(p.u, p.v) for p in poly], symmetrize=False)
        norm._label = f"regular:{sides}"
        return norm

    # evaluation

    @property
    def vertices(self) -> Tuple[PlanePoint, ...]:
        return self._vertices

    @property
    def vertex_array(self) -> np.ndarray:
        return self._V

    @property
    def facet_array(self) -> np.ndarray:
        return self._A

    @property
    def exact_polygon(self) -> Optional["PolygonNorm"]:
        return self if self.exact else None

    def gauge_array(self, points: np.ndarray) -> np.ndarray:
        P = np.asarray(points, dtype=float)
        if len(self._V) <= DENSE_FACET_LIMIT:
            return np.max(P @ self._A.T, axis=-1)
        ang = np.arctan2(P[..., 1], P[..., 0])
        idx = np.searchsorted(self._sorted_angles, ang, side="right") - 1
        k = self._order[idx % len(self._order)]
        return np.maximum(np.einsum("...j,...j->...", P, self._A[k]), 0.0)

    def gauge(self, p) -> Any:
        p = as_point(p)
        if self._A_exact is not None and p.is_exact:
            return max(a * p.u + b * p.v for a, b in self._A_exact)
        return float(self.gauge_array(np.array([float(p.u), float(p.v)])))

    def flat_spots(self) -> List[FlatSpot]:
        return [FlatSpot(seg, maximal=True, exact=self.exact) for seg in self.polygon.edges()]

    def support_point(self, functional: PlanePoint) -> PlanePoint:
        functional = as_point(functional)
        if self.exact and functional.is_exact:
            vals = [functional.dot(v) for v in self._vertices]
            best = max(vals)
            tied = [v for v, val in zip(self._vertices, vals) if val == best]
        else:
            vals = self._V @ functional.to_array()
            best = float(np.max(vals))
            slack = 1e-12 * max(1.0, abs(best))
            tied = [self._vertices[i].as_float() for i in np.flatnonzero(vals >= best - slack)]
        if len(tied) == 1:
            return tied[0]
        if len(tied) == 2:
            return midpoint(tied[0], tied[1])
        # three or more ties only happen on nearly collinear sampled chords
        return PlanePoint(
            sum(float(t.u) for t in tied) / len(tied), sum(float(t.v) for t in tied) / len(tied)
        )

    def _vertex_index(self, x: PlanePoint) -> Optional[int]:
        if self.exact and x.is_exact:
            try:
                return self._vertices.index(x)
            except ValueError:
                return None
        d = np.hypot(self._V[:, 0] - float(x.u), self._V[:, 1] - float(x.v))
        i = int(np.argmin(d))
        return i if d[i] <= 1e-9 * max(1.0, float(np.hypot(*self._V[i]))) else None

    def supporting_directions(self, x) -> DirectionRange:
        x = as_point(x)
        if x.is_zero:
            raise ZeroVectorError()
        m = len(self._vertices)
        i = self._vertex_index(x)
        if i is not None:
            incoming = self.normalize(self._vertices[i] - self._vertices[i - 1])
            outgoing = self.normalize(self._vertices[(i + 1) % m] - self._vertices[i])
            if not self.exact:
                turn = abs(float(cross(incoming, outgoing)))
                if turn <= 1e-9 * incoming.euclidean_length() * outgoing.euclidean_length():
                    # sample sitting inside a flat run
                    return DirectionRange(outgoing, outgoing)
            return DirectionRange(incoming, outgoing)
        if self.exact and x.is_exact:
            vals = [a * x.u + b * x.v for a, b in self._A_exact]
            k = vals.index(max(vals))
        else:
            k = int(np.argmax(self._A @ x.to_array()))
        d = self.normalize(self._vertices[(k + 1) % m] - self._vertices[k])
        return DirectionRange(d, d)

    def grid_anchors(self) -> List[PlanePoint]:
        anchors = list(self._vertices)
        anchors += [e.midpoint for e in self.polygon.edges()]
        return anchors

    # piecewise-linear minimization

    def min_along(self, p0: PlanePoint, d: PlanePoint, lo=None, hi=None) -> Tuple[Any, Any]:
        """Minimize the convex piecewise-linear t -> gauge(p0 + t d) over [lo, hi] (or all reals).

        The minimum sits at a breakpoint where p0 + t d crosses a vertex ray,
        at the origin crossing, or at an interval end. Exact for rational data.
        """
        if d.is_zero:
            return (lo if lo is not None else 0), self.gauge(p0)
        exact = self.exact and p0.is_exact and d.is_exact
        verts = self._vertices if exact else [v.as_float() for v in self._vertices]
        candidates = []
        for v in verts:
            den = cross(v, d)
            if den != 0:
                candidates.append(-cross(v, p0) / den if not exact else Fraction(-cross(v, p0)) / den)
        dd = d.dot(d)
        candidates.append(Fraction(-p0.dot(d)) / dd if exact else -p0.dot(d) / dd)
        if lo is not None:
            candidates = [min(max(t, lo), hi) for t in candidates] + [lo, hi]
        best_t, best_val = None, None
        for t in candidates:
            val = self.gauge(p0 + d * t)
            if best_val is None or val < best_val or (val == best_val and abs(t) < abs(best_t)):
                best_t, best_val = t, val
        return best_t, best_val

    def min_along_batch(self, P0: np.ndarray, D: np.ndarray, clip: bool = False) -> Tuple[np.ndarray, np.ndarray]:
        """Vectorized ``min_along`` in floating point for arrays P0, D of shape (N, 2)"""
        P0 = np.asarray(P0, dtype=float)
        D = np.broadcast_to(np.asarray(D, dtype=float), P0.shape)
        if len(P0) > BATCH_CHUNK:
            parts = [
                self._min_along_chunk(P0[i:i + BATCH_CHUNK], D[i:i + BATCH_CHUNK], clip)
                for i in range(0, len(P0), BATCH_CHUNK)
            ]
            return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])
        return self._min_along_chunk(P0, D, clip)

    def _min_along_chunk(self, P0: np.ndarray, D: np.ndarray, clip: bool) -> Tuple[np.ndarray, np.ndarray]:
        V = self._V
        cv0 = V[:, None, 0] * P0[None, :, 1] - V[:, None, 1] * P0[None, :, 0]
        cvd = V[:, None, 0] * D[None, :, 1] - V[:, None, 1] * D[None, :, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            T = np.where(cvd != 0, -cv0 / np.where(cvd != 0, cvd, 1.0), np.nan)
            dd = np.einsum("ij,ij->i", D, D)
            t_dep = -np.einsum("ij,ij->i", P0, D) / dd
        T = np.vstack([T, t_dep[None, :]])
        if clip:
            T = np.clip(T, 0.0, 1.0)
            T = np.vstack([T, np.zeros((1, len(P0))), np.ones((1, len(P0)))])
        finite = np.isfinite(T)
        Tz = np.where(finite, T, 0.0)
        vals = self.gauge_array(P0[None, :, :] + Tz[..., None] * D[None, :, :])
        vals = np.where(finite, vals, np.inf)
        best = np.min(vals, axis=0)
        tie = vals <= best[None, :] + 1e-15 * np.maximum(1.0, best[None, :])
        score = np.where(tie, np.abs(Tz), np.inf)
        j = np.argmin(score, axis=0)
        cols = np.arange(len(P0))
        return Tz[j, cols], vals[j, cols]

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "polygon", "vertices": [fraction_pair(v) for v in self._vertices]}

    def label(self) -> str:
        return self._label or f"polygon[{len(self._vertices)}]"
