import numpy as np
import pytest

from app.errors import NonConvergenceError
from app.optimize import bisect, expand_bracket, golden_section


def test_golden_section_solves_a_batch():
    centers = np.array([-1.5, 0.0, 0.7])
    t, f = golden_section(lambda t: (t - centers) ** 2 + 1.0, -2.0, 2.0)
    np.testing.assert_allclose(t, centers, atol=1e-6)
    np.testing.assert_allclose(f, 1.0, atol=1e-12)


def test_golden_section_handles_kinks():
    t, f = golden_section(lambda t: np.abs(t - 0.3), np.array([-2.0]), np.array([2.0]), quadratic_fit=False)
    assert t[0] == pytest.approx(0.3, abs=1e-9)
    assert f[0] == pytest.approx(0.0, abs=1e-9)


def test_bisect_locates_threshold_per_row():
    thresholds = np.array([0.25, -1.0, 3.0])
    lo, hi = bisect(lambda s: s > thresholds, -5.0, 5.0, tol=1e-10)
    assert np.all(hi - lo <= 1e-10)
    np.testing.assert_allclose((lo + hi) / 2, thresholds, atol=1e-10)


def test_expand_bracket_doubles_until_both_sides_hold():
    targets = np.array([0.5, 3.0, 10.0])
    S = expand_bracket(lambda s: s < -targets, lambda s: s > targets, 3)
    np.testing.assert_array_equal(S, [1.0, 4.0, 16.0])


def test_expand_bracket_gives_up():
    with pytest.raises(NonConvergenceError, match="bracket expansion"):
        expand_bracket(lambda s: np.zeros_like(s, dtype=bool), lambda s: s > 0, 2, max_steps=5)
