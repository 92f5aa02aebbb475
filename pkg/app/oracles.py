"""Slow, independent reference computations for cross-checking the main paths.

Nothing here calls the sine, bisector or estimator code it is compared with;
only the norm's gauge is shared.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

try:
    from .errors import DegeneratePairError, DomainError, ZeroVectorError
    from .geometry import ConvexPolygon, PlanePoint, as_point, convex_hull, to_fraction
    from .models import OracleConfig
    from .norms import Norm, PolygonNorm
except ImportError:
    # Fallback for direct execution
    from app.errors import DegeneratePairError, DomainError, ZeroVectorError
    from app.geometry import ConvexPolygon, PlanePoint, as_point, convex_hull, to_fraction
    from app.models import OracleConfig
    from app.norms import Norm, PolygonNorm

DEFAULT_ORACLE = OracleConfig()


def brute_sine(norm: Norm, x, y, cfg: Optional[OracleConfig] = None) -> float:
    """min of ||x' + t y'|| over a uniform t grid on [-2, 2], refined once around the best node"""
    cfg = cfg or DEFAULT_ORACLE
    xa, ya = as_point(x).to_array(), as_point(y).to_array()
    gx, gy = float(norm.gauge_array(xa)), float(norm.gauge_array(ya))
    if gx == 0 or gy == 0:
        raise ZeroVectorError()
    xa, ya = xa / gx, ya / gy
    ts = np.linspace(-2.0, 2.0, cfg.t_grid_size)
    vals = norm.gauge_array(xa[None, :] + ts[:, None] * ya[None, :])
    k = int(np.argmin(vals))
    lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, len(ts) - 1)]
    fine = np.linspace(lo, hi, cfg.t_grid_size)
    fine_vals = norm.gauge_array(xa[None, :] + fine[:, None] * ya[None, :])
    return float(min(vals[k], fine_vals.min()))


@dataclass
class BisectorScan:
    us: np.ndarray
    vs: np.ndarray
    cells: np.ndarray  # (n-1, n-1) booleans, indexed [i_u, i_v]

    @property
    def cell_size(self) -> float:
        return float(self.us[1] - self.us[0])

    def contains(self, p, slack_cells: int = 1) -> bool:
        """p lies in a flagged cell or within ``slack_cells`` cells of one"""
        p = as_point(p)
        i = int(math.floor((float(p.u) - self.us[0]) / self.cell_size))
        j = int(math.floor((float(p.v) - self.vs[0]) / self.cell_size))
        n = self.cells.shape[0]
        if not (-slack_cells <= i < n + slack_cells and -slack_cells <= j < n + slack_cells):
            return False
        lo_i, hi_i = max(i - slack_cells, 0), min(i + slack_cells + 1, n)
        lo_j, hi_j = max(j - slack_cells, 0), min(j + slack_cells + 1, n)
        return bool(self.cells[lo_i:hi_i, lo_j:hi_j].any())

    def flagged_centers(self) -> np.ndarray:
        iu, iv = np.nonzero(self.cells)
        h = self.cell_size / 2
        return np.stack([self.us[iu] + h, self.vs[iv] + h], axis=1)


def brute_bisector_scan(norm: Norm, x, y, window: float, cfg: Optional[OracleConfig] = None) -> BisectorScan:
    """Cells of a square grid around (x + y)/2 where ||p - x|| - ||p - y|| vanishes or changes sign"""
    cfg = cfg or DEFAULT_ORACLE
    x, y = as_point(x), as_point(y)
    if (x - y).euclidean_length() == 0:
        raise DegeneratePairError()
    c = ((x + y) * 0.5).to_array()
    n = cfg.circle_grid_size
    us = np.linspace(c[0] - window, c[0] + window, n)
    vs = np.linspace(c[1] - window, c[1] + window, n)
    U, V = np.meshgrid(us, vs, indexing="ij")
    P = np.stack([U, V], axis=-1)
    F = norm.gauge_array(P - x.to_array()) - norm.gauge_array(P - y.to_array())
    S = np.sign(np.where(np.abs(F) <= 1e-12, 0.0, F))
    corners = np.stack([S[:-1, :-1], S[1:, :-1], S[:-1, 1:], S[1:, 1:]])
    cells = (corners.min(axis=0) <= 0) & (corners.max(axis=0) >= 0)
    return BisectorScan(us, vs, cells)


def random_symmetric_polygon(n_half: int, seed: int) -> ConvexPolygon:
    """Hull of n_half random rational points and their negations"""
    if n_half < 2:
        raise DomainError("n_half must be at least 2")
    rng = np.random.default_rng(seed)
    angles = np.sort(rng.uniform(0.0, math.pi, n_half))
    radii = rng.uniform(0.5, 1.5, n_half)
    half = [
        PlanePoint(
            Fraction(float(r * math.cos(a))).limit_denominator(10 ** 6),
            Fraction(float(r * math.sin(a))).limit_denominator(10 ** 6),
        )
        for a, r in zip(angles, radii)
    ]
    return ConvexPolygon(convex_hull(half + [-p for p in half]))


def random_polygon_norm(n_half: int, seed: int) -> PolygonNorm:
    poly = random_symmetric_polygon(n_half, seed)
    return PolygonNorm.from_vertices([(p.u, p.v) for p in poly], symmetrize=False, label=f"random:{n_half}:{seed}")


def random_linear_image(norm: PolygonNorm, seed: int, min_det: float = 0.2) -> PolygonNorm:
    """Image of a polygonal unit ball under a random invertible rational linear map"""
    rng = np.random.default_rng(seed)
    while True:
        A = [[Fraction(float(c)).limit_denominator(1000) for c in row] for row in rng.normal(size=(2, 2))]
        det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
        if abs(det) >= min_det:
            break
    images = [(A[0][0] * p.u + A[0][1] * p.v, A[1][0] * p.u + A[1][1] * p.v) for p in norm.vertices]
    return PolygonNorm.from_vertices(images, symmetrize=False, label=f"affine:{seed}")


def _facets(vertices: List[PlanePoint]) -> List[tuple]:
    m = len(vertices)
    out = []
    for i in range(m):
        a, b = vertices[i], vertices[(i + 1) % m]
        e = (b.u - a.u, b.v - a.v)
        c = Fraction(a.u * e[1] - a.v * e[0])
        out.append((Fraction(e[1]) / c, Fraction(-e[0]) / c))
    return out


def exact_polygon_sine(norm: Norm, x, y) -> Fraction:
    """Exact rational s(x, y) on a polygonal norm.

    t -> ||x' + t y'|| is the upper envelope of the lines c_i + t d_i, one per
    facet; its minimum sits where two of them cross.
    """
    poly = norm.exact_polygon
    if poly is None:
        raise DomainError("exact sine needs a polygonal norm with rational vertices")
    x, y = as_point(x), as_point(y)
    x = PlanePoint(to_fraction(x.u), to_fraction(x.v))
    y = PlanePoint(to_fraction(y.u), to_fraction(y.v))
    if x.is_zero or y.is_zero:
        raise ZeroVectorError()
    facets = _facets(list(poly.vertices))
    gx = max(a * x.u + b * x.v for a, b in facets)
    gy = max(a * y.u + b * y.v for a, b in facets)
    lines = [((a * x.u + b * x.v) / gx, (a * y.u + b * y.v) / gy) for a, b in facets]

    def envelope(t):
        return max(c + d * t for c, d in lines)

    candidates = [Fraction(0)]
    for i, (ci, di) in enumerate(lines):
        for cj, dj in lines[i + 1:]:
            if di != dj:
                candidates.append((cj - ci) / (di - dj))
    return min(envelope(t) for t in candidates)
