"""Vectorized one-dimensional searches.

Every routine works on arrays of independent problems at once: ``f`` maps a
float array of shape (N,) to an array of shape (N,).
"""

import logging
import math
from typing import Callable, Tuple, Union

import numpy as np

try:
    from .errors import NonConvergenceError
except ImportError:
    # Fallback for direct execution
    from app.errors import NonConvergenceError

logger = logging.getLogger(__name__)

ArrayFn = Callable[[np.ndarray], np.ndarray]
ArrayLike = Union[float, np.ndarray]

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
MAX_EXPANSIONS = 60


def golden_section(
    f: ArrayFn, lo: ArrayLike, hi: ArrayLike, tol: float = 1e-12, max_iter: int = 200, quadratic_fit: bool = True
) -> Tuple[np.ndarray, np.ndarray]:
    """Minimize unimodal functions on [lo, hi]; returns (argmin, min)."""
    a = np.array(lo, dtype=float, ndmin=1)
    b = np.array(hi, dtype=float, ndmin=1)
    a, b = np.broadcast_arrays(a, b)
    a, b = a.copy(), b.copy()
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if np.all(b - a <= tol):
            break
        left = fc <= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new = np.where(left, b - INVPHI * (b - a), a + INVPHI * (b - a))
        fnew = f(new)
        c, d, fc, fd = (
            np.where(left, new, d),
            np.where(left, c, new),
            np.where(left, fnew, fd),
            np.where(left, fc, fnew),
        )
    best_t = np.where(fc <= fd, c, d)
    best_f = np.minimum(fc, fd)
    if quadratic_fit:
        best_t, best_f = _parabolic_step(f, a, b, best_t, best_f)
    return best_t, best_f


def _parabolic_step(f: ArrayFn, a, b, best_t, best_f):
    m = (a + b) / 2
    fa, fm, fb = f(a), f(m), f(b)
    num = (m - a) ** 2 * (fm - fb) - (m - b) ** 2 * (fm - fa)
    den = (m - a) * (fm - fb) - (m - b) * (fm - fa)
    with np.errstate(divide="ignore", invalid="ignore"):
        vertex = m - 0.5 * num / den
    ok = np.isfinite(vertex) & (vertex >= a) & (vertex <= b)
    vertex = np.where(ok, vertex, m)
    fv = f(vertex)
    for t, ft in ((m, fm), (vertex, fv)):
        better = ft < best_f
        best_t = np.where(better, t, best_t)
        best_f = np.where(better, ft, best_f)
    return best_t, best_f


def bisect(
    predicate: Callable[[np.ndarray], np.ndarray],
    lo: ArrayLike,
    hi: ArrayLike,
    tol: ArrayLike = 1e-12,
    max_iter: int = 200,
) -> Tuple[np.ndarray, np.ndarray]:
    """Shrink [lo, hi] around the switch of a monotone predicate.

    ``predicate`` must be False at ``lo`` and True at ``hi``; returns the final
    (lo, hi) arrays.
    """
    lo = np.array(lo, dtype=float, ndmin=1)
    hi = np.array(hi, dtype=float, ndmin=1)
    lo, hi = np.broadcast_arrays(lo, hi)
    lo, hi = lo.copy(), hi.copy()
    tol = np.broadcast_to(np.asarray(tol, dtype=float), lo.shape)
    for _ in range(max_iter):
        active = np.abs(hi - lo) > tol
        if not np.any(active):
            break
        mid = (lo + hi) / 2
        p = predicate(mid)
        hi = np.where(active & p, mid, hi)
        lo = np.where(active & ~p, mid, lo)
    return lo, hi


def expand_bracket(
    low_ok: Callable[[np.ndarray], np.ndarray],
    high_ok: Callable[[np.ndarray], np.ndarray],
    n: int,
    start: float = 1.0,
    factor: float = 2.0,
    max_steps: int = MAX_EXPANSIONS,
) -> np.ndarray:
    """Smallest S = start * factor**k with low_ok(-S) and high_ok(S) for each of n problems.

    Raises NonConvergenceError when some problem needs more than ``max_steps`` expansions.
    """
    S = np.full(n, float(start))
    done = low_ok(-S) & high_ok(S)
    steps = 0
    while not np.all(done):
        if steps >= max_steps:
            raise NonConvergenceError(
                f"bracket expansion exceeded {max_steps} doublings for {int(np.sum(~done))} problem(s)"
            )
        S = np.where(done, S, S * factor)
        done = done | (low_ok(-S) & high_ok(S))
        steps += 1
    if steps:
        logger.debug("bracket expanded %d times (max S=%g)", steps, float(np.max(S)))
    return S
