import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import NormValidationError
from ..geometry import ConvexPolygon, PlanePoint, SegmentPP
from .base import FlatSpot
from .polygon import PolygonNorm

logger = logging.getLogger(__name__)

SYMMETRY_RTOL = 1e-9
CONVEXITY_SLACK = 1e-12


class SampledNorm(PolygonNorm):
    """Unit ball from a dense table of (angle, radius) samples.

    The boundary is modelled by the inscribed float polygon through the
    samples. A table whose angles all lie in [0, pi) is mirrored through the
    origin. Flatness is detected by tolerance, so every classification drawn
    from this model is reported as non-exact.
    """

    kind = "sampled"

    def __init__(self, pairs: Sequence[Sequence[float]], tol_dir: float = 1e-9):
        table = [(float(t), float(r)) for t, r in pairs]
        self._pairs = table
        self.tol_dir = tol_dir
        if len(table) < 2:
            raise NormValidationError("a sampled unit ball needs at least two samples")
        for i, (t, r) in enumerate(table):
            if not (math.isfinite(t) and math.isfinite(r)) or r <= 0:
                raise NormValidationError(f"sample {i} (theta={t}, r={r}) must have a finite positive radius")
        thetas = np.mod(np.array([t for t, _ in table]), 2 * math.pi)
        radii = np.array([r for _, r in table])
        if np.all(thetas < math.pi):
            logger.debug("mirroring %d half-circle samples", len(table))
            thetas = np.concatenate([thetas, thetas + math.pi])
            radii = np.concatenate([radii, radii])
        order = np.argsort(thetas, kind="stable")
        thetas, radii = thetas[order], radii[order]
        keep = np.concatenate([[True], np.diff(thetas) > 1e-15])
        thetas, radii = thetas[keep], radii[keep]
        pts = np.stack([radii * np.cos(thetas), radii * np.sin(thetas)], axis=1)
        self._check_convex(pts, order[keep])
        super().__init__(
            ConvexPolygon([PlanePoint(float(a), float(b)) for a, b in pts], strict=False), exact=False
        )
        self._check_symmetric(pts, order[keep], len(table))
        self._flats = self._find_flats()

    @staticmethod
    def _check_convex(pts: np.ndarray, source_index: np.ndarray):
        prev = np.roll(pts, 1, axis=0)
        nxt = np.roll(pts, -1, axis=0)
        e1, e2 = pts - prev, nxt - pts
        turn = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        scale = np.hypot(*e1.T) * np.hypot(*e2.T)
        bad = np.flatnonzero(turn < -CONVEXITY_SLACK * np.maximum(scale, 1e-300))
        if bad.size:
            i = int(bad[0])
            raise NormValidationError(
                f"sample {int(source_index[i])} at {tuple(np.round(pts[i], 12))} makes the boundary non-convex"
            )

    def _check_symmetric(self, pts: np.ndarray, source_index: np.ndarray, n_input: int):
        mirrored = self.gauge_array(-pts)
        bad = np.flatnonzero(np.abs(mirrored - 1.0) > SYMMETRY_RTOL * 1e3)
        if bad.size:
            i = int(bad[0])
            raise NormValidationError(
                f"sample {int(source_index[i]) % n_input} has no antipodal partner; the unit ball must satisfy B = -B"
            )

    def _find_flats(self) -> List[FlatSpot]:
        V = self.vertex_array
        E = np.roll(V, -1, axis=0) - V
        m = len(V)
        nrm = np.hypot(E[:, 0], E[:, 1])
        nxt = np.roll(E, -1, axis=0)
        sines = np.abs(E[:, 0] * nxt[:, 1] - E[:, 1] * nxt[:, 0]) / (nrm * np.roll(nrm, -1))
        collinear = sines <= self.tol_dir  # chord i continues into chord i+1
        if np.all(collinear):
            return []
        flats = []
        start = int(np.flatnonzero(~collinear)[0]) + 1
        i, seen = start, 0
        while seen < m:
            run_start = i
            while collinear[i % m] and seen < m:
                i += 1
                seen += 1
            run_len = i - run_start + 1  # chords in the run
            if run_len >= 2:
                a = PlanePoint(float(V[run_start % m, 0]), float(V[run_start % m, 1]))
                b = PlanePoint(float(V[(i + 1) % m, 0]), float(V[(i + 1) % m, 1]))
                flats.append(FlatSpot(SegmentPP(a, b), maximal=True, exact=False))
            i += 1
            seen += 1
        return flats

    def flat_spots(self) -> List[FlatSpot]:
        return list(self._flats)

    @property
    def discretization_tol(self) -> float:
        V = self.vertex_array
        mids = (np.roll(V, 1, axis=0) + np.roll(V, -1, axis=0)) / 2
        return float(max(0.0, np.max(1.0 - self.gauge_array(mids))))

    def grid_anchors(self) -> List[PlanePoint]:
        return []

    def to_spec(self) -> Dict[str, Any]:
        return {"type": "sampled", "pairs": [[t, r] for t, r in self._pairs]}

    def label(self) -> str:
        return f"sampled[{len(self.vertex_array)}]"

    @classmethod
    def ellipse(cls, a: float, b: float, rotation: float = 0.0, n: int = 4096) -> "SampledNorm":
        """Radial table of the ellipse with semi-axes a, b turned by ``rotation``"""
        thetas = math.pi * np.arange(n) / n
        phi = thetas - rotation
        radii = 1.0 / np.sqrt((np.cos(phi) / a) ** 2 + (np.sin(phi) / b) ** 2)
        return cls(list(zip(thetas.tolist(), radii.tolist())))
