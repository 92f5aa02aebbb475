"""Estimators for the constants c_B, c_S and D of a normed plane."""

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

try:
    from .bisector import inner_projection_batch
    from .errors import DomainError
    from .geometry import PlanePoint, angle_key
    from .models import ConstantReport, SearchConfig, Tolerances
    from .norms import Norm, PolygonNorm
    from .oracles import random_linear_image, random_polygon_norm
    from .optimize import bisect
    from .orthogonality import distortion_batch, sine_batch
except ImportError:
    # Fallback for direct execution
    from app.bisector import inner_projection_batch
    from app.errors import DomainError
    from app.geometry import PlanePoint, angle_key
    from app.models import ConstantReport, SearchConfig, Tolerances
    from app.norms import Norm, PolygonNorm
    from app.oracles import random_linear_image, random_polygon_norm
    from app.optimize import bisect
    from app.orthogonality import distortion_batch, sine_batch

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES = Tolerances()
CHUNK = 128
CB_LOWER, CB_UPPER = 1.0 / 3.0, 1.0
CS_UPPER = 8.0 / 3.0


# workers


def resolve_workers(deterministic: bool = False) -> int:
    if deterministic:
        return 1
    cap = os.environ.get("MC_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            logger.warning("ignoring MC_THREADS=%r (not an integer)", cap)
    return n


def parallel_map(fn: Callable, jobs: Sequence[tuple], workers: int) -> List[Any]:
    """fn(*job) for every job, results in job order"""
    if workers <= 1 or len(jobs) <= 1:
        return [fn(*job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def _chunks(n: int) -> List[slice]:
    return [slice(i, min(i + CHUNK, n)) for i in range(0, n, CHUNK)]


# direction grids


def direction_grid(norm: Norm, resolution: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Points of S over the half circle [0, pi): uniform ray angles plus the polygon anchors.

    Returns (thetas, points, coarse) where ``coarse`` marks the half-resolution subgrid.
    """
    if resolution < 8:
        raise DomainError("resolution must be at least 8")
    thetas = math.pi * np.arange(resolution) / resolution
    points = norm.circle_points(thetas)
    coarse = np.arange(resolution) % 2 == 0
    anchors = []
    for a in norm.grid_anchors():
        th = angle_key(a)
        if th < math.pi:
            anchors.append((th, a.to_array()))
    if anchors:
        a_th = np.array([t for t, _ in anchors])
        a_pts = np.array([p for _, p in anchors])
        fresh = np.min(np.abs(a_th[:, None] - thetas[None, :]), axis=1) > 1e-12
        thetas = np.concatenate([thetas, a_th[fresh]])
        points = np.concatenate([points, a_pts[fresh]])
        coarse = np.concatenate([coarse, np.ones(int(fresh.sum()), dtype=bool)])
    order = np.argsort(thetas, kind="stable")
    return thetas[order], points[order], coarse[order]


def _witness_point(p: np.ndarray) -> List[float]:
    return [float(p[0]), float(p[1])]


def _check(value: float, lower: float, upper: float, slack: float) -> bool:
    return lower - slack <= value <= upper + slack


# c_B


def _cb_chunk(norm: Norm, X: np.ndarray, inner_resolution: int, tol: Tolerances):
    xs = [PlanePoint(float(a), float(b)) for a, b in X]
    projected = inner_projection_batch(norm, xs, inner_resolution, tol)
    counts = np.array([len(W) for W in projected])
    values = np.full(len(X), np.inf)
    best_w = np.full((len(X), 2), np.nan)
    if counts.sum() == 0:
        return values, best_w
    W = np.concatenate([W for W in projected if len(W)])
    Xr = np.repeat(X, counts, axis=0)
    s, _ = sine_batch(norm, W, Xr, tol)
    start = 0
    for k, c in enumerate(counts):
        if c:
            j = start + int(np.argmin(s[start:start + c]))
            values[k], best_w[k] = s[j], W[j]
        start += c
    return values, best_w


def estimate_cB(
    norm: Norm,
    resolution: int,
    inner_resolution: int,
    tol: Optional[Tolerances] = None,
    deterministic: bool = False,
) -> ConstantReport:
    """c_B = inf over unit x of inf over w in P_I(x) of s(w, x), on a direction grid.

    The grid infimum approaches c_B from above and need not be attained, so
    the report carries the half-resolution value and a one-sided
    extrapolation rather than a claim of attainment.
    """
    tol = tol or DEFAULT_TOLERANCES
    thetas, X, coarse = direction_grid(norm, resolution)
    jobs = [(norm, X[sl], inner_resolution, tol) for sl in _chunks(len(X))]
    parts = parallel_map(_cb_chunk, jobs, resolve_workers(deterministic))
    values = np.concatenate([p[0] for p in parts])
    W = np.concatenate([p[1] for p in parts])
    k = int(np.argmin(values))
    value = float(values[k])
    half = float(np.min(values[coarse]))
    extrapolated = min(value, 2 * value - half)
    slack = tol.tol_const + norm.discretization_tol
    logger.info("c_B(%s) ~ %.9f at resolution %d", norm.label(), value, resolution)
    return ConstantReport(
        name="cB",
        value=value,
        witness={"x": _witness_point(X[k]), "w": _witness_point(W[k]), "theta": float(thetas[k])},
        resolution=resolution,
        inner_resolution=inner_resolution,
        tolerances=tol.model_dump(),
        bounds_ok=_check(value, CB_LOWER, CB_UPPER, slack),
        exactness=norm.exactness,
        extras={
            "value_half_resolution": half,
            "extrapolated": extrapolated,
            "attained": False,
            "grid_size": int(len(X)),
        },
    )


# c_S


def _reflection_matrices(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    det = X[:, 0] * Y[:, 1] - X[:, 1] * Y[:, 0]
    M = np.empty((len(X), 2, 2))
    M[:, 0, 0] = (Y[:, 1] * X[:, 0] + X[:, 1] * Y[:, 0]) / det
    M[:, 0, 1] = -2 * X[:, 0] * Y[:, 0] / det
    M[:, 1, 0] = 2 * X[:, 1] * Y[:, 1] / det
    M[:, 1, 1] = -(Y[:, 0] * X[:, 1] + X[:, 0] * Y[:, 1]) / det
    return M


def birkhoff_pairs(norm: Norm, X: np.ndarray, n_fan: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Every grid x with a fan of its supporting directions y (x Birkhoff orthogonal to y).

    Returns (xs, ys, edge_pair) where ``edge_pair`` marks a vertex x with y an adjacent edge direction.
    """
    xs, ys, edge = [], [], []
    for p in X:
        dr = norm.supporting_directions(PlanePoint(float(p[0]), float(p[1])))
        fan = dr.fan(1 if dr.is_single else n_fan)
        for i, d in enumerate(fan):
            xs.append(p)
            ys.append(d.to_array())
            edge.append(not dr.is_single and i in (0, len(fan) - 1))
    return np.array(xs), np.array(ys), np.array(edge, dtype=bool)


def _cs_chunk(norm: Norm, X: np.ndarray, Y: np.ndarray, tol: Tolerances):
    sup, inf_direct, _ = distortion_batch(norm, _reflection_matrices(X, Y), tol)
    return sup, inf_direct


def estimate_cS(
    norm: Norm, resolution: int, tol: Optional[Tolerances] = None, deterministic: bool = False
) -> ConstantReport:
    """c_S = sup over Birkhoff pairs x, y of (M - 1/M), M the largest norm on T_xy(S)"""
    tol = tol or DEFAULT_TOLERANCES
    _, Xg, _ = direction_grid(norm, resolution)
    n_fan = tol.n_fan if norm.exact_polygon is not None else 3
    X, Y, edge = birkhoff_pairs(norm, Xg, n_fan)
    jobs = [(norm, X[sl], Y[sl], tol) for sl in _chunks(len(X))]
    parts = parallel_map(_cs_chunk, jobs, resolve_workers(deterministic))
    sup = np.concatenate([p[0] for p in parts])
    inf_direct = np.concatenate([p[1] for p in parts])
    spread = sup - 1.0 / sup
    best = float(spread.max())
    ties = np.flatnonzero(spread >= best - 1e-12)
    preferred = ties[edge[ties]]
    k = int(preferred[0] if len(preferred) else ties[0])
    gap = float(np.max(np.abs(sup * inf_direct - 1.0)))
    slack = tol.tol_const + norm.discretization_tol
    logger.info("c_S(%s) ~ %.9f over %d Birkhoff pairs", norm.label(), best, len(X))
    return ConstantReport(
        name="cS",
        value=best,
        witness={
            "x": _witness_point(X[k]),
            "y": _witness_point(Y[k]),
            "sup": float(sup[k]),
            "inf": float(1.0 / sup[k]),
            "inf_direct": float(inf_direct[k]),
            "vertex_edge_pair": bool(edge[k]),
        },
        resolution=resolution,
        tolerances=tol.model_dump(),
        bounds_ok=_check(best, 0.0, CS_UPPER, slack) and bool(np.all(sup <= 3 + slack)),
        exactness=norm.exactness,
        extras={"pairs": int(len(X)), "max_sup": float(sup.max()), "reciprocity_gap": gap},
    )


# D


def isosceles_partners(norm: Norm, X: np.ndarray, thetas: np.ndarray, tol: Tolerances) -> np.ndarray:
    """A unit y with ||x + y|| = ||x - y|| for each unit x at ray angle theta"""
    n = len(X)

    def h(psi):
        Yp = norm.circle_points(thetas + psi)
        return norm.gauge_array(X + Yp) - norm.gauge_array(X - Yp)

    lo = np.full(n, math.pi / 4)
    hi = np.full(n, 3 * math.pi / 4)
    # h > 0 at psi = 0 and h < 0 at psi = pi; the quarter-turn window usually brackets the root
    outside = ~((h(lo) >= 0) & (h(hi) <= 0))
    lo[outside], hi[outside] = 0.0, math.pi
    lo_f, hi_f = bisect(lambda psi: h(psi) < 0, lo, hi, 1e-13)
    return norm.circle_points(thetas + (lo_f + hi_f) / 2)


def estimate_D(
    norm: Norm, resolution: int, tol: Optional[Tolerances] = None, deterministic: bool = False
) -> ConstantReport:
    """D = inf of s(x, y) over isosceles orthogonal unit pairs"""
    tol = tol or DEFAULT_TOLERANCES
    thetas, X, _ = direction_grid(norm, resolution)
    Y = isosceles_partners(norm, X, thetas, tol)
    s, _ = sine_batch(norm, X, Y, tol)
    k = int(np.argmin(s))
    value = float(s[k])
    slack = tol.tol_const + norm.discretization_tol
    return ConstantReport(
        name="D",
        value=value,
        witness={"x": _witness_point(X[k]), "y": _witness_point(Y[k])},
        resolution=resolution,
        tolerances=tol.model_dump(),
        bounds_ok=_check(value, 0.0, 1.0, slack),
        exactness=norm.exactness,
        extras={"grid_size": int(len(X))},
    )


# inner product detection


def _chord_endpoints(norm: Norm, resolution: int) -> np.ndarray:
    V = norm.vertex_array
    if V is not None and norm.exact_polygon is None:
        # sampled boundary: use actual samples so the chords lie on the true curve
        idx = np.round(np.arange(2 * resolution) * len(V) / (2 * resolution)).astype(int) % len(V)
        return V[np.unique(idx)]
    return norm.circle_points(2 * math.pi * np.arange(2 * resolution) / (2 * resolution))


def _chord_deviation(norm: Norm, resolution: int, tol: Tolerances) -> float:
    P = _chord_endpoints(norm, resolution)
    n = len(P)
    pairs = [(i, (i + 1) % n) for i in range(n)] + [(i, (i + n // 4) % n) for i in range(n)]
    I = np.array([i for i, _ in pairs])
    J = np.array([j for _, j in pairs])
    fixed, negated = P[J] - P[I], P[I] + P[J]
    ok = np.abs(fixed[:, 0] * negated[:, 1] - fixed[:, 1] * negated[:, 0]) > 1e-12
    maps = _reflection_matrices(fixed[ok], negated[ok])
    Z = norm.vertex_array if norm.vertex_array is not None else norm.boundary_samples(tol.n_roberts)
    worst = 0.0
    for sl in _chunks(len(maps)):
        images = np.einsum("nij,mj->nmi", maps[sl], Z)
        worst = max(worst, float(np.max(np.abs(norm.gauge_array(images) - 1.0))))
    return worst


def supported_point(norm: Norm, x: np.ndarray) -> np.ndarray:
    """The point y of S where the direction x supports B, i.e. y is Birkhoff orthogonal to x.

    On a flat spot parallel to x the midpoint of the flat is returned.
    """
    return norm.support_point(PlanePoint.from_array(x).rotleft()).to_array()


def _support_deviation(norm: Norm, resolution: int, tol: Tolerances) -> float:
    """Worst |‖ty - x‖ - ‖ty + x‖| over grid x and t in [-1, 1]; zero iff each [-y, y] lies in bis(-x, x)"""
    _, X, _ = direction_grid(norm, resolution)
    Y = np.array([supported_point(norm, x) for x in X])
    ts = np.linspace(-1.0, 1.0, 33)
    P = ts[None, :, None] * Y[:, None, :]
    diff = norm.gauge_array(P - X[:, None, :]) - norm.gauge_array(P + X[:, None, :])
    return float(np.max(np.abs(diff)))


def inner_product_report(
    norm: Norm, resolution: int, method: str = "chords", tol: Optional[Tolerances] = None
) -> Dict[str, Any]:
    tol = tol or DEFAULT_TOLERANCES
    if resolution < 8:
        raise DomainError("resolution must be at least 8")
    if method not in ("chords", "support", "both"):
        raise DomainError(f"unknown inner product test method {method!r}")
    threshold = tol.tol_orth + 2 * norm.discretization_tol
    deviations = {}
    if method in ("chords", "both"):
        deviations["chords"] = _chord_deviation(norm, resolution, tol)
    if method in ("support", "both"):
        deviations["support"] = _support_deviation(norm, resolution, tol)
    return {
        "method": method,
        "deviations": deviations,
        "threshold": threshold,
        "is_inner_product": all(d <= threshold for d in deviations.values()),
    }


def inner_product_test(
    norm: Norm, resolution: int, method: str = "chords", tol: Optional[Tolerances] = None
) -> bool:
    """Whether the norm comes from an inner product, i.e. S is an ellipse"""
    return inner_product_report(norm, resolution, method, tol)["is_inner_product"]


# lower bound search


def _search_norm(config: SearchConfig, rng: np.random.Generator) -> PolygonNorm:
    seed = int(rng.integers(0, 2 ** 31 - 1))
    if config.family == "affine-square":
        square = PolygonNorm.from_vertices([(1, 1), (-1, 1), (-1, -1), (1, -1)], symmetrize=False)
        return random_linear_image(square, seed)
    n_half = int(rng.integers(config.n_half_min, max(config.n_half_min, config.n_half_max) + 1))
    return random_polygon_norm(n_half, seed)


def search_cB_lower(
    config: SearchConfig, tol: Optional[Tolerances] = None, deterministic: bool = True
) -> Iterator[Dict[str, Any]]:
    """Stream c_B estimates over random polygons with the running minimum.

    Purely empirical: every record is tagged non-conclusive.
    """
    tol = tol or DEFAULT_TOLERANCES
    rng = np.random.default_rng(config.seed)
    running: Optional[float] = None
    for i in range(config.count):
        norm = _search_norm(config, rng)
        report = estimate_cB(norm, config.resolution, config.inner_resolution, tol, deterministic)
        improved = running is None or report.value < running
        if improved:
            running = report.value
            logger.info("search %d: new running minimum %.9f on %s", i, running, norm.label())
        yield {
            "index": i,
            "norm": norm.to_spec(),
            "digest": norm.digest(),
            "value": report.value,
            "bounds_ok": report.bounds_ok,
            "running_min": running,
            "improved": improved,
            "conclusive": False,
        }
