"""Sine function, Birkhoff / isosceles / Roberts orthogonality and the reflections T_xy."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Tuple

import numpy as np

try:
    from .errors import CollinearAxesError, ZeroVectorError
    from .geometry import PlanePoint, as_point, cross
    from .models import Tolerances
    from .norms import Norm
    from .norms.polygon import DENSE_FACET_LIMIT
    from .optimize import golden_section
except ImportError:
    # Fallback for direct execution
    from app.errors import CollinearAxesError, ZeroVectorError
    from app.geometry import PlanePoint, as_point, cross
    from app.models import Tolerances
    from app.norms import Norm
    from app.norms.polygon import DENSE_FACET_LIMIT
    from app.optimize import golden_section

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES = Tolerances()

# for unit x, y the minimizer of t -> ||x + t y|| lies in [-2, 2]
SINE_BRACKET = (-2.0, 2.0)


@dataclass(frozen=True)
class SineResult:
    value: Any
    minimizer_t: Any
    bracket: Tuple[float, float] = SINE_BRACKET
    exact: bool = False

    def __float__(self):
        return float(self.value)


def _pl_model(norm: Norm):
    """Polygon whose breakpoints make the sine exactly piecewise linear, if small enough"""
    poly = norm.exact_polygon
    if poly is not None and len(poly.vertices) <= DENSE_FACET_LIMIT:
        return poly
    return None


def _require_nonzero(*points: PlanePoint):
    for p in points:
        if p.is_zero:
            raise ZeroVectorError()


def sine(norm: Norm, x, y, tol: Optional[Tolerances] = None) -> SineResult:
    """s(x, y) = inf_t ||x' + t y'|| for the unit vectors x', y' along x and y.

    ``minimizer_t`` refers to the normalized arguments.
    """
    tol = tol or DEFAULT_TOLERANCES
    x, y = as_point(x), as_point(y)
    _require_nonzero(x, y)
    poly = _pl_model(norm)
    if poly is not None and x.is_exact and y.is_exact:
        xn, yn = poly.normalize(x), poly.normalize(y)
        t, value = poly.min_along(xn, yn)
        return SineResult(value, t, exact=True)
    values, ts = sine_batch(norm, x.to_array()[None, :], y.to_array()[None, :], tol)
    return SineResult(float(values[0]), float(ts[0]))


def sine_batch(
    norm: Norm, X: np.ndarray, Y: np.ndarray, tol: Optional[Tolerances] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized sine over pairs of rows of X and Y (shape (N, 2)); returns (values, minimizers)"""
    tol = tol or DEFAULT_TOLERANCES
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    gx, gy = norm.gauge_array(X), norm.gauge_array(Y)
    if np.any(gx == 0) or np.any(gy == 0):
        raise ZeroVectorError()
    Xn, Yn = X / gx[:, None], Y / gy[:, None]
    poly = _pl_model(norm)
    if poly is not None:
        ts, values = poly.min_along_batch(Xn, Yn)
        return values, ts

    def f(t):
        return norm.gauge_array(Xn + t[:, None] * Yn)

    n = len(Xn)
    ts, values = golden_section(f, np.full(n, SINE_BRACKET[0]), np.full(n, SINE_BRACKET[1]), tol=tol.tol_opt)
    # flat-bottomed minima (Birkhoff pairs) prefer t = 0
    at_zero = f(np.zeros(n))
    zero_wins = at_zero <= values
    return np.where(zero_wins, at_zero, values), np.where(zero_wins, 0.0, ts)


def birkhoff_test(norm: Norm, x, y, tol: Optional[Tolerances] = None) -> bool:
    """x is Birkhoff orthogonal to y: ||x + t y|| >= ||x|| for every t"""
    tol = tol or DEFAULT_TOLERANCES
    result = sine(norm, x, y, tol)
    if result.exact:
        return result.value == 1
    return result.value >= 1 - tol.tol_orth


def isosceles_test(norm: Norm, x, y, tol: Optional[Tolerances] = None) -> bool:
    tol = tol or DEFAULT_TOLERANCES
    x, y = as_point(x), as_point(y)
    _require_nonzero(x, y)
    plus, minus = norm.gauge(x + y), norm.gauge(x - y)
    if isinstance(plus, Fraction) and isinstance(minus, Fraction):
        return plus == minus
    return abs(float(plus) - float(minus)) <= tol.tol_orth


@dataclass(frozen=True)
class ReflectionMap:
    """Linear map with T(axis_x) = axis_x and T(axis_y) = -axis_y"""

    m11: Any
    m12: Any
    m21: Any
    m22: Any
    axis_x: PlanePoint
    axis_y: PlanePoint

    def apply(self, p) -> PlanePoint:
        p = as_point(p)
        return PlanePoint(self.m11 * p.u + self.m12 * p.v, self.m21 * p.u + self.m22 * p.v)

    def __call__(self, p) -> PlanePoint:
        return self.apply(p)

    def matrix(self) -> np.ndarray:
        return np.array([[float(self.m11), float(self.m12)], [float(self.m21), float(self.m22)]])

    def apply_array(self, P: np.ndarray) -> np.ndarray:
        return np.asarray(P, dtype=float) @ self.matrix().T

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in (self.m11, self.m12, self.m21, self.m22))


def build_reflection(x, y) -> ReflectionMap:
    x, y = as_point(x), as_point(y)
    det = cross(x, y)
    if det == 0 or (not (x.is_exact and y.is_exact)
                    and abs(float(det)) <= 1e-15 * x.euclidean_length() * y.euclidean_length()):
        raise CollinearAxesError()
    if x.is_exact and y.is_exact:
        det = Fraction(det)
    return ReflectionMap(
        m11=(y.v * x.u + x.v * y.u) / det,
        m12=-2 * x.u * y.u / det,
        m21=2 * x.v * y.v / det,
        m22=-(y.u * x.v + x.u * y.v) / det,
        axis_x=x,
        axis_y=y,
    )


def circle_deviation(norm: Norm, T: ReflectionMap, tol: Optional[Tolerances] = None) -> float:
    """max over S of | ||T z|| - 1 |, on the polygon vertices or on n_roberts circle samples"""
    tol = tol or DEFAULT_TOLERANCES
    poly = norm.exact_polygon
    if poly is not None and T.is_exact:
        worst = max(abs(poly.gauge(T.apply(v)) - 1) for v in poly.vertices)
        return worst
    V = norm.vertex_array
    if V is None:
        V = norm.boundary_samples(tol.n_roberts)
    return float(np.max(np.abs(norm.gauge_array(T.apply_array(V)) - 1.0)))


def roberts_test(norm: Norm, x, y, tol: Optional[Tolerances] = None) -> bool:
    """||x + t y|| = ||x - t y|| for all t, decided as invariance of S under T_xy.

    Exact on polygons; a semi-decision on n_roberts circle samples otherwise.
    """
    tol = tol or DEFAULT_TOLERANCES
    x, y = as_point(x), as_point(y)
    _require_nonzero(x, y)
    T = build_reflection(x, y)
    dev = circle_deviation(norm, T, tol)
    if norm.exact_polygon is not None and T.is_exact:
        return dev == 0
    return dev <= tol.tol_orth + norm.discretization_tol


@dataclass(frozen=True)
class Distortion:
    sup: float
    inf: float
    inf_direct: float
    argmax: PlanePoint

    @property
    def spread(self) -> float:
        return self.sup - self.inf

    @property
    def reciprocity_gap(self) -> float:
        return abs(self.sup * self.inf_direct - 1.0)


def reflection_distortion(norm: Norm, T: ReflectionMap, tol: Optional[Tolerances] = None) -> Distortion:
    """sup and inf of the norm over T(S); inf is 1/sup, inf_direct an independent minimization"""
    sups, infs, argmax = distortion_batch(norm, T.matrix()[None, :, :], tol)
    return Distortion(float(sups[0]), 1.0 / float(sups[0]), float(infs[0]), PlanePoint.from_array(argmax[0]))


def distortion_batch(
    norm: Norm, maps: np.ndarray, tol: Optional[Tolerances] = None
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(sup, inf_direct, argmax) of the gauge over T(S) for a stack of 2x2 matrices (N, 2, 2)"""
    tol = tol or DEFAULT_TOLERANCES
    maps = np.asarray(maps, dtype=float)
    V = norm.vertex_array
    if V is not None:
        return _polygon_distortion(norm, V, maps)
    return _smooth_distortion(norm, maps, tol)


def _polygon_distortion(norm: Norm, V: np.ndarray, maps: np.ndarray):
    N, m = len(maps), len(V)
    images = np.einsum("nij,mj->nmi", maps, V)  # (N, m, 2)
    g = norm.gauge_array(images)
    k = np.argmax(g, axis=1)
    rows = np.arange(N)
    sup = g[rows, k]
    argmax = V[k]
    edges = np.roll(images, -1, axis=1) - images
    poly = _pl_model(norm)
    if poly is not None:
        _, mins = poly.min_along_batch(images.reshape(-1, 2), edges.reshape(-1, 2), clip=True)
        inf_direct = mins.reshape(N, m).min(axis=1)
    else:
        # dense polygon model: minimize only on the edges next to the smallest vertex images
        K = min(8, m)
        near = np.argsort(g, axis=1)[:, :K]
        idx = np.concatenate([near, (near - 1) % m], axis=1)
        P0 = images[rows[:, None], idx].reshape(-1, 2)
        D = edges[rows[:, None], idx].reshape(-1, 2)
        inf_direct = _segment_minimum(norm, P0, D).reshape(N, -1).min(axis=1)
    return sup, inf_direct, argmax


def _segment_minimum(norm: Norm, P0: np.ndarray, D: np.ndarray) -> np.ndarray:
    # t -> ||P0 + t D|| is convex on [0, 1]
    _, vals = golden_section(lambda t: norm.gauge_array(P0 + t[:, None] * D), np.zeros(len(P0)), np.ones(len(P0)))
    return vals


def _smooth_distortion(norm: Norm, maps: np.ndarray, tol: Tolerances):
    n = tol.n_roberts
    N = len(maps)
    thetas = 2 * math.pi * np.arange(n) / n
    Z = norm.circle_points(thetas)
    g = norm.gauge_array(np.einsum("nij,mj->nmi", maps, Z))
    step = 2 * math.pi / n

    def refine(k: np.ndarray, sign: float):
        lo = thetas[k] - step
        hi = thetas[k] + step

        def f(th):
            z = norm.circle_points(th)
            return sign * norm.gauge_array(np.einsum("nij,nj->ni", maps, z))

        t, val = golden_section(f, lo, hi, tol=1e-12)
        return t, sign * val

    t_max, sup = refine(np.argmax(g, axis=1), -1.0)
    _, inf_direct = refine(np.argmin(g, axis=1), 1.0)
    sup = np.maximum(sup, g.max(axis=1))
    inf_direct = np.minimum(inf_direct, g.min(axis=1))
    return sup, inf_direct, norm.circle_points(t_max)
