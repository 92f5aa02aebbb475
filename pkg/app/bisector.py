"""Bisectors bis(x, y) = {z : ||z - x|| = ||z - y||} of a normed plane.

Lines parallel to <xy> are indexed by a signed offset o along a fixed unit
transversal n that is Birkhoff orthogonal to y - x, so o is the norm
distance of the line from <xy>. Along each line the bisector is the zero set
of f(s) = ||p - x|| - ||p - y|| with p = (x + y)/2 + o n + s (y - x).
"""

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

try:
    from .errors import DegeneratePairError, DomainError
    from .geometry import PlanePoint, SegmentPP, as_point, cross, midpoint, segments_parallel
    from .models import Tolerances
    from .norms import CirclePoint, FlatSpot, Norm
    from .optimize import bisect, expand_bracket
    from .orthogonality import build_reflection, circle_deviation
except ImportError:
    # Fallback for direct execution
    from app.errors import DegeneratePairError, DomainError
    from app.geometry import PlanePoint, SegmentPP, as_point, cross, midpoint, segments_parallel
    from app.models import Tolerances
    from app.norms import CirclePoint, FlatSpot, Norm
    from app.optimize import bisect, expand_bracket
    from app.orthogonality import build_reflection, circle_deviation

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES = Tolerances()
SMALL_OFFSETS = (1e-5, 1e-4, 1e-3)
EXIT_SECTIONS = 16


class PairKind(str, Enum):
    STRICT = "Strict"
    NONSTRICT = "NonStrict"


@dataclass(frozen=True)
class PairClass:
    kind: PairKind
    witness: Optional[FlatSpot] = None
    apices: Optional[Tuple[PlanePoint, PlanePoint]] = None
    exact: bool = True

    @property
    def is_strict(self) -> bool:
        return self.kind == PairKind.STRICT


def _check_pair(x: PlanePoint, y: PlanePoint):
    if x == y:
        raise DegeneratePairError()
    if not (x.is_exact and y.is_exact) and (x - y).euclidean_length() <= 1e-15 * max(1.0, x.euclidean_length()):
        raise DegeneratePairError()


def classify_pair(norm: Norm, x, y, tol: Optional[Tolerances] = None) -> PairClass:
    """Strict unless y - x is parallel to a flat spot [ab] of S.

    For a non-strict pair the apices are the centers x - l a and x + l b of the
    two circles of radius l = ||x - y|| / ||a - b|| containing [xy] as a maximal
    segment, with [ab] oriented along y - x; the apex right of y - x comes first.
    """
    tol = tol or DEFAULT_TOLERANCES
    x, y = as_point(x), as_point(y)
    _check_pair(x, y)
    v = y - x
    chord = SegmentPP(x, y)
    for flat in norm.flat_spots():
        if not segments_parallel(flat.segment, chord, tol.tol_dir):
            continue
        a, b = flat.segment.a, flat.segment.b
        if (b - a).dot(v) < 0:
            a, b = b, a
        lam = norm.gauge(v) / norm.gauge(b - a)
        p, q = x - a * lam, x + b * lam
        if cross(v, p - x) > 0:
            p, q = q, p
        exact = flat.exact and v.is_exact
        return PairClass(PairKind.NONSTRICT, witness=flat, apices=(p, q), exact=exact)
    return PairClass(PairKind.STRICT, exact=norm.exact_polygon is not None and v.is_exact)


@dataclass(frozen=True)
class PairFrame:
    x: PlanePoint
    y: PlanePoint
    mid: PlanePoint
    v: PlanePoint
    n: PlanePoint

    def point(self, offset: float, s: float) -> PlanePoint:
        return self.mid.as_float() + self.n.as_float() * offset + self.v.as_float() * s

    def coordinates(self, p: PlanePoint) -> Tuple[float, float]:
        """(offset, s) of a point"""
        w = (p - self.mid).as_float()
        det = float(cross(self.v, self.n))
        return float(cross(self.v, w)) / det, float(cross(w, self.n)) / det


def pair_frame(norm: Norm, x, y) -> PairFrame:
    x, y = as_point(x), as_point(y)
    _check_pair(x, y)
    v = y - x
    # the supporting line at n with normal rotleft(v) is parallel to v
    n = norm.support_point(v.rotleft())
    return PairFrame(x, y, midpoint(x, y), v, n)


def _apex_strip(frame: PairFrame, pair: PairClass) -> Tuple[float, float]:
    if pair.is_strict:
        return -math.inf, math.inf
    offs = sorted(frame.coordinates(a)[0] for a in pair.apices)
    return offs[0], offs[1]


def _solve_lines(
    norm: Norm,
    X: np.ndarray,
    Y: np.ndarray,
    base: np.ndarray,
    V: np.ndarray,
    offsets: np.ndarray,
    band: np.ndarray,
    tol: Tolerances,
) -> Tuple[np.ndarray, np.ndarray]:
    """Leftmost and rightmost zero of f along each row's line.

    ``base`` holds mid + o n per row. Rows without ``band`` have a single sign
    change and both returned parameters coincide; band rows locate the ends of
    the zero set {|f| <= tol_bis}.
    """
    gv = norm.gauge_array(V)

    def f(s):
        P = base + s[:, None] * V
        return norm.gauge_array(P - X) - norm.gauge_array(P - Y)

    thr = np.where(band, tol.tol_bis, 0.0)
    S = expand_bracket(lambda s: f(s) < -thr, lambda s: f(s) > thr, len(offsets))
    s_tol = tol.tol_bis * np.clip(np.abs(offsets), 1e-5, 1.0) / np.maximum(1.0, 2 * gv)
    lo, hi = bisect(lambda s: f(s) > thr, -S, S, s_tol)
    s_hi = (lo + hi) / 2
    s_lo = s_hi.copy()
    if np.any(band):
        idx = np.flatnonzero(band)
        Xb, Yb, Bb, Vb = X[idx], Y[idx], base[idx], V[idx]

        def fb(s):
            P = Bb + s[:, None] * Vb
            return norm.gauge_array(P - Xb) - norm.gauge_array(P - Yb)

        lo2, hi2 = bisect(lambda s: fb(s) >= -tol.tol_bis, -S[idx], S[idx], s_tol[idx])
        s_lo[idx] = (lo2 + hi2) / 2
    return s_lo, s_hi


def _frame_rows(frame: PairFrame, offsets: np.ndarray):
    n = len(offsets)
    X = np.tile(frame.x.to_array(), (n, 1))
    Y = np.tile(frame.y.to_array(), (n, 1))
    V = np.tile(frame.v.to_array(), (n, 1))
    base = frame.mid.to_array()[None, :] + offsets[:, None] * frame.n.to_array()[None, :]
    return X, Y, V, base


@dataclass(frozen=True)
class LineHit:
    offset: float
    point: PlanePoint
    segment_hi: Optional[PlanePoint] = None

    @property
    def is_segment(self) -> bool:
        return self.segment_hi is not None


def bisector_on_line(norm: Norm, x, y, offset: float, tol: Optional[Tolerances] = None) -> LineHit:
    """Intersection of bis(x, y) with the line at signed ``offset``: a point, or a segment for non-strict pairs"""
    tol = tol or DEFAULT_TOLERANCES
    trace = _trace_offsets(norm, x, y, np.array([float(offset)]), tol)
    return trace.hits()[0]


@dataclass
class BisectorTrace:
    x: PlanePoint
    y: PlanePoint
    offsets: np.ndarray
    points: np.ndarray
    highs: np.ndarray  # NaN rows where the line meets the bisector in one point
    truncation: str
    pair: PairClass
    frame: PairFrame
    needs_review: bool = False
    exit_points: List[PlanePoint] = field(default_factory=list)

    def __len__(self):
        return len(self.offsets)

    def hits(self) -> List[LineHit]:
        out = []
        for o, p, h in zip(self.offsets, self.points, self.highs):
            hi = None if np.isnan(h[0]) else PlanePoint.from_array(h)
            out.append(LineHit(float(o), PlanePoint.from_array(p), hi))
        return out

    def samples(self) -> List[Tuple[float, PlanePoint, Optional[PlanePoint]]]:
        return [(h.offset, h.point, h.segment_hi) for h in self.hits()]

    def rows(self) -> List[Tuple[float, float, float, Optional[float], Optional[float]]]:
        """Export rows (offset, u, v, u_hi, v_hi)"""
        out = []
        for o, p, h in zip(self.offsets, self.points, self.highs):
            hi = (None, None) if np.isnan(h[0]) else (float(h[0]), float(h[1]))
            out.append((float(o), float(p[0]), float(p[1])) + hi)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["offset", "u", "v", "u_hi", "v_hi"])
        for row in self.rows():
            writer.writerow(["" if c is None else repr(c) for c in row])
        return buf.getvalue()

    def all_points(self) -> np.ndarray:
        """Sample points together with the far ends of per-line segments"""
        highs = self.highs[~np.isnan(self.highs[:, 0])]
        return np.concatenate([self.points, highs]) if len(highs) else self.points.copy()

    def residuals(self, norm: Norm) -> np.ndarray:
        P = self.all_points()
        return np.abs(norm.gauge_array(P - self.x.to_array()) - norm.gauge_array(P - self.y.to_array()))


def _trace_offsets(norm: Norm, x, y, offsets: np.ndarray, tol: Tolerances, truncation: str = "") -> BisectorTrace:
    x, y = as_point(x), as_point(y)
    pair = classify_pair(norm, x, y, tol)
    frame = pair_frame(norm, x, y)
    lo_strip, hi_strip = _apex_strip(frame, pair)
    band = (offsets < lo_strip) | (offsets > hi_strip)
    X, Y, V, base = _frame_rows(frame, offsets)
    s_lo, s_hi = _solve_lines(norm, X, Y, base, V, offsets, band, tol)
    points = base + s_lo[:, None] * V
    highs = np.full_like(points, np.nan)
    seg = band & (s_hi > s_lo)
    highs[seg] = (base + s_hi[:, None] * V)[seg]
    return BisectorTrace(x, y, offsets, points, highs, truncation, pair, frame)


def trace_bisector(
    norm: Norm, x, y, offset_max: float, n_steps: int, tol: Optional[Tolerances] = None
) -> BisectorTrace:
    """Samples of bis(x, y) on n_steps parallel lines with offsets in [-offset_max, offset_max]"""
    tol = tol or DEFAULT_TOLERANCES
    if n_steps < 2:
        raise DomainError("n_steps must be at least 2")
    offsets = np.linspace(-offset_max, offset_max, n_steps)
    return _trace_offsets(norm, x, y, offsets, tol, truncation=f"offset window [-{offset_max:g}, {offset_max:g}]")


# Inner bisector bis(-x, x) inside the unit ball


@dataclass
class _InnerSide:
    offsets: np.ndarray
    points: np.ndarray
    exit_offset: float
    needs_review: bool
    truncation: str


def _inner_offsets(n_steps: int) -> np.ndarray:
    grid = np.linspace(0.0, 1.0, n_steps + 1)[1:]
    return np.unique(np.concatenate([np.array(SMALL_OFFSETS), grid]))


def _inner_sides(norm: Norm, xs: List[PlanePoint], n_steps: int, tol: Tolerances) -> List[_InnerSide]:
    """Positive-offset half of bis_I(-x, x) for every unit x, solved as one batch"""
    K = len(xs)
    grid = _inner_offsets(n_steps)
    L = len(grid)
    frames, caps, apex_pts, apex_inside = [], np.full(K, math.inf), [None] * K, np.zeros(K, dtype=bool)
    for k, x in enumerate(xs):
        pair = classify_pair(norm, -x, x, tol)
        frame = pair_frame(norm, -x, x)
        frames.append(frame)
        if not pair.is_strict:
            # one-dimensional component only: stop at the apex on the positive side
            apex = max(pair.apices, key=lambda a: frame.coordinates(a)[0])
            caps[k] = frame.coordinates(apex)[0]
            apex_pts[k] = apex.to_array()
            apex_inside[k] = norm.gauge(apex.as_float()) < 1 - tol.tol_norm

    N = np.array([f.n.to_array() for f in frames])
    Vk = np.array([f.v.to_array() for f in frames])
    Xk = np.array([f.x.to_array() for f in frames])
    Yk = np.array([f.y.to_array() for f in frames])

    def solve(rows: np.ndarray, offs: np.ndarray) -> np.ndarray:
        base = offs[:, None] * N[rows]
        band = np.zeros(len(rows), dtype=bool)
        s_lo, _ = _solve_lines(norm, Xk[rows], Yk[rows], base, Vk[rows], offs, band, tol)
        return base + s_lo[:, None] * Vk[rows]

    O = np.tile(grid, (K, 1))
    valid = O < caps[:, None]
    rows_idx = np.repeat(np.arange(K), L)
    flat_valid = valid.ravel()
    P = np.full((K * L, 2), np.nan)
    if np.any(flat_valid):
        P[flat_valid] = solve(rows_idx[flat_valid], O.ravel()[flat_valid])
    P = P.reshape(K, L, 2)
    G = np.where(valid, norm.gauge_array(np.nan_to_num(P)), np.nan)

    # close each row with its apex when the cap falls inside the unit square of offsets
    capped = np.isfinite(caps) & (caps <= 1.0)
    exceed = np.where(valid, G > 1 + tol.tol_norm, False)
    first = np.where(exceed.any(axis=1), exceed.argmax(axis=1), L)
    apex_exceeds = np.zeros(K, dtype=bool)
    for k in np.flatnonzero(capped & (first == L)):
        apex_exceeds[k] = norm.gauge_array(apex_pts[k]) > 1 + tol.tol_norm

    hi_o = np.full(K, math.nan)
    lo_o = np.zeros(K)
    refine = (first < L) | apex_exceeds
    for k in np.flatnonzero(refine):
        j = first[k]
        if j < L:
            hi_o[k] = O[k, j]
            lo_o[k] = O[k, j - 1] if j > 0 else 0.0
        else:
            hi_o[k] = caps[k]
            prev = np.flatnonzero(valid[k])
            lo_o[k] = O[k, prev[-1]] if len(prev) else 0.0

    ref_rows = np.flatnonzero(refine)
    while len(ref_rows) and np.max(hi_o[ref_rows] - lo_o[ref_rows]) > tol.tol_bis:
        frac = np.arange(1, EXIT_SECTIONS) / EXIT_SECTIONS
        offs = lo_o[ref_rows, None] + frac[None, :] * (hi_o - lo_o)[ref_rows, None]
        rr = np.repeat(ref_rows, len(frac))
        g = norm.gauge_array(solve(rr, offs.ravel())).reshape(len(ref_rows), len(frac))
        out = g > 1 + tol.tol_norm
        has = out.any(axis=1)
        j = np.where(has, out.argmax(axis=1), len(frac))
        new_hi = np.where(has, offs[np.arange(len(ref_rows)), np.minimum(j, len(frac) - 1)], hi_o[ref_rows])
        new_lo = np.where(j > 0, offs[np.arange(len(ref_rows)), np.maximum(j - 1, 0)], lo_o[ref_rows])
        hi_o[ref_rows], lo_o[ref_rows] = new_hi, new_lo
    exit_pts = {}
    if len(ref_rows):
        pts = solve(ref_rows, lo_o[ref_rows])
        exit_pts = {int(k): pts[i] for i, k in enumerate(ref_rows)}

    sides = []
    for k in range(K):
        if refine[k]:
            keep = valid[k] & (O[k] < lo_o[k])
            offs = np.append(O[k][keep], lo_o[k])
            pts = np.vstack([P[k][keep], exit_pts[k][None, :]])
            sides.append(_InnerSide(offs, pts, float(lo_o[k]), False, "exit from the unit ball refined by sectioning"))
        elif capped[k]:
            keep = valid[k]
            offs = np.append(O[k][keep], caps[k])
            pts = np.vstack([P[k][keep], apex_pts[k][None, :]])
            review = bool(apex_inside[k])
            why = "stopped at an apex inside the unit ball" if review else "apex on the unit circle"
            if review:
                logger.warning("inner bisector of %s stops at interior apex %s", xs[k], apex_pts[k])
            sides.append(_InnerSide(offs, pts, float(caps[k]), review, why))
        else:
            keep = valid[k]
            sides.append(_InnerSide(O[k][keep], P[k][keep], float(O[k][keep][-1]), False, "reached offset 1"))
    return sides


def _unit(norm: Norm, x) -> PlanePoint:
    x = as_point(x)
    g = norm.gauge(x)
    if abs(float(g) - 1.0) > 1e-9:
        x = norm.normalize(x)
    return x


def inner_bisector(norm: Norm, x, n_steps: int, tol: Optional[Tolerances] = None) -> BisectorTrace:
    """bis(-x, x) inside B, traced from the origin outward in both half-planes"""
    tol = tol or DEFAULT_TOLERANCES
    x = _unit(norm, x)
    side = _inner_sides(norm, [x], n_steps, tol)[0]
    offsets = np.concatenate([-side.offsets[::-1], [0.0], side.offsets])
    points = np.vstack([-side.points[::-1], np.zeros((1, 2)), side.points])
    pair = classify_pair(norm, -x, x, tol)
    frame = pair_frame(norm, -x, x)
    exit_hi = PlanePoint.from_array(side.points[-1])
    return BisectorTrace(
        -x,
        x,
        offsets,
        points,
        np.full_like(points, np.nan),
        side.truncation,
        pair,
        frame,
        needs_review=side.needs_review,
        exit_points=[-exit_hi, exit_hi],
    )


@dataclass
class InnerProjectionSet:
    direction_samples: List[CirclePoint]
    degenerate: bool
    needs_review: bool = False

    def to_array(self) -> np.ndarray:
        return np.array([c.to_array() for c in self.direction_samples]).reshape(-1, 2)


def _directions(norm: Norm, points: np.ndarray) -> np.ndarray:
    g = norm.gauge_array(points)
    keep = g > 0
    return points[keep] / g[keep][:, None]


def _is_degenerate(W: np.ndarray, tol_dir: float) -> bool:
    if len(W) == 0:
        return True
    ref = W[0] / np.hypot(*W[0])
    lens = np.hypot(W[:, 0], W[:, 1])
    sines = np.abs(W[:, 0] * ref[1] - W[:, 1] * ref[0]) / lens
    return bool(np.all(sines <= tol_dir))


def _projection_set(norm: Norm, W: np.ndarray, tol: Tolerances, needs_review: bool) -> InnerProjectionSet:
    W = np.vstack([W, -W])
    samples = [
        CirclePoint(float(math.atan2(w[1], w[0])), PlanePoint(float(w[0]), float(w[1]))) for w in W
    ]
    return InnerProjectionSet(samples, _is_degenerate(W, tol.tol_dir), needs_review)


def inner_projection(norm: Norm, x, n_steps: int, tol: Optional[Tolerances] = None) -> InnerProjectionSet:
    """Radial normalizations z/||z|| of the nonzero inner-bisector points, closed under negation"""
    tol = tol or DEFAULT_TOLERANCES
    x = _unit(norm, x)
    side = _inner_sides(norm, [x], n_steps, tol)[0]
    return _projection_set(norm, _directions(norm, side.points), tol, side.needs_review)


def inner_projection_batch(
    norm: Norm, xs: List[PlanePoint], n_steps: int, tol: Optional[Tolerances] = None
) -> List[np.ndarray]:
    """Positive-side projected directions for many unit x at once"""
    tol = tol or DEFAULT_TOLERANCES
    return [_directions(norm, side.points) for side in _inner_sides(norm, xs, n_steps, tol)]


# Lines inside bisectors


def _chord_axes(norm: Norm, x: PlanePoint, y: PlanePoint, tol: Tolerances) -> Tuple[PlanePoint, PlanePoint]:
    """Axes (fixed, negated) of the reflection deciding whether bis(x, y) contains a line.

    With x, y on S and x + y != 0 the chord itself is used. Otherwise a chord
    x', y' of S parallel to y - x is built at transversal offset 1/2.
    """
    if x + y != PlanePoint(0, 0) and _on_circle(norm, x, tol) and _on_circle(norm, y, tol):
        return y - x, x + y
    v = y - x
    n = norm.support_point(v.rotleft()).as_float()
    vf = v.as_float()
    base = n * 0.5
    ends = []
    for sign in (-1.0, 1.0):

        def outside(s, sign=sign):
            return norm.gauge_array(base.to_array()[None, :] + (sign * s)[:, None] * vf.to_array()[None, :]) > 1

        S = expand_bracket(lambda s: np.ones(len(s), dtype=bool), outside, 1)
        lo, _ = bisect(outside, np.zeros(1), S, 1e-14)
        ends.append(base + vf * (sign * float(lo[0])))
    xp, yp = ends
    return yp - xp, xp + yp


def _on_circle(norm: Norm, p: PlanePoint, tol: Tolerances) -> bool:
    g = norm.gauge(p)
    return g == 1 if not isinstance(g, float) else abs(g - 1.0) <= tol.tol_norm


def bisector_contains_line(norm: Norm, x, y, tol: Optional[Tolerances] = None) -> bool:
    """True iff S is invariant under the reflection fixing the chord direction and negating x + y"""
    tol = tol or DEFAULT_TOLERANCES
    x, y = as_point(x), as_point(y)
    _check_pair(x, y)
    fixed, negated = _chord_axes(norm, x, y, tol)
    T = build_reflection(fixed, negated)
    dev = circle_deviation(norm, T, tol)
    if norm.exact_polygon is not None and T.is_exact:
        return dev == 0
    return dev <= tol.tol_orth + norm.discretization_tol


def bisector_line(norm: Norm, x, y, tol: Optional[Tolerances] = None) -> Optional[Tuple[PlanePoint, PlanePoint]]:
    """(base, direction) of the line inside bis(x, y), or None; there is at most one"""
    tol = tol or DEFAULT_TOLERANCES
    x, y = as_point(x), as_point(y)
    if not bisector_contains_line(norm, x, y, tol):
        return None
    _, negated = _chord_axes(norm, x, y, tol)
    return midpoint(x, y), negated
