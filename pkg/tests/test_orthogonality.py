from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from app.constants import birkhoff_pairs, direction_grid
from app.errors import CollinearAxesError, ZeroVectorError
from app.geometry import PlanePoint
from app.models import Tolerances
from app.norms import PolygonNorm
from app.orthogonality import (
    birkhoff_test,
    build_reflection,
    circle_deviation,
    distortion_batch,
    isosceles_test,
    reflection_distortion,
    roberts_test,
    sine,
    sine_batch,
)


class TestSine:
    def test_square_values_are_exact(self, square):
        result = sine(square, (1, 0), (1, 1))
        assert result.exact
        assert result.value == Fraction(1, 2)
        assert sine(square, (1, 1), (0, 1)).value == 1

    def test_euclidean_is_the_angle_sine(self, euclidean):
        assert float(sine(euclidean, (1, 0), (1, 1)).value) == pytest.approx(2 ** -0.5, abs=1e-9)

    def test_scaling_does_not_matter(self, hexagon, l3):
        assert sine(hexagon, (2, 0), (3, 3)).value == sine(hexagon, (1, 0), (1, 1)).value
        assert float(sine(l3, (2.0, 0.0), (3.0, 3.0))) == pytest.approx(float(sine(l3, (1.0, 0.0), (1.0, 1.0))))

    def test_values_lie_in_unit_interval(self, battery):
        X = np.array([[1.0, 0.0], [0.3, -1.2], [-1.0, 0.4]])
        Y = np.array([[1.0, 1.0], [2.0, 0.5], [0.2, 1.0]])
        for name, norm in battery.items():
            values, _ = sine_batch(norm, X, Y)
            assert np.all(values > 0), name
            assert np.all(values <= 1 + 1e-12), name

    def test_batch_matches_single_calls(self, octagon):
        X = np.array([[1.0, 0.2], [0.0, 1.0]])
        Y = np.array([[0.5, 1.0], [1.0, -0.3]])
        values, _ = sine_batch(octagon, X, Y)
        for k in range(2):
            assert values[k] == pytest.approx(float(sine(octagon, tuple(X[k]), tuple(Y[k])).value), abs=1e-12)

    def test_zero_vector_is_rejected(self, square):
        with pytest.raises(ZeroVectorError, match="zero vector"):
            sine(square, (0, 0), (1, 0))


class TestPredicates:
    def test_birkhoff_is_not_symmetric_on_the_square(self, square):
        assert birkhoff_test(square, (1, 1), (1, 0))
        assert not birkhoff_test(square, (1, 0), (1, 1))

    def test_birkhoff_both_ways_on_hexagon_diagonals(self, hexagon):
        assert birkhoff_test(hexagon, (1, 1), (1, -1))
        assert birkhoff_test(hexagon, (1, -1), (1, 1))

    def test_isosceles(self, square, euclidean):
        assert isosceles_test(square, (1, 0), (0, 1))
        assert not isosceles_test(square, (1, 0), (1, 1))
        assert isosceles_test(euclidean, (1.0, 0.0), (0.0, 1.0))

    def test_roberts_on_polygons(self, square, hexagon):
        assert roberts_test(square, (1, 0), (0, 1))
        assert roberts_test(square, (1, 1), (1, -1))
        assert not roberts_test(square, (1, 0), (1, 1))
        assert roberts_test(hexagon, (1, 1), (1, -1))

    def test_roberts_on_smooth_norms(self, euclidean, l3, ellipse):
        tol = Tolerances(n_roberts=512)
        assert roberts_test(euclidean, (1.0, 0.0), (0.0, 1.0), tol)
        assert roberts_test(l3, (1.0, 0.0), (0.0, 1.0), tol)
        assert not roberts_test(l3, (1.0, 0.0), (1.0, 1.0), tol)
        assert roberts_test(ellipse, (2.0, 0.0), (0.0, 1.0), tol)


class TestReflections:
    def test_reflection_fixes_x_and_negates_y(self):
        T = build_reflection((1, 1), (0, 1))
        assert T.is_exact
        assert T((1, 1)) == PlanePoint(1, 1)
        assert T((0, 1)) == PlanePoint(0, -1)

    def test_collinear_axes_are_rejected(self):
        with pytest.raises(CollinearAxesError):
            build_reflection((1, 0), (2, 0))

    def test_circle_deviation_is_zero_for_symmetries(self, square):
        assert circle_deviation(square, build_reflection((1, 0), (0, 1))) == 0
        assert circle_deviation(square, build_reflection((1, 0), (1, 1))) == 2

    def test_square_distortion(self, square):
        d = reflection_distortion(square, build_reflection((1, 1), (0, 1)))
        assert d.sup == pytest.approx(3.0)
        assert d.inf_direct == pytest.approx(1 / 3)
        assert d.spread == pytest.approx(8 / 3)

    def test_hexagon_distortion(self, hexagon):
        d = reflection_distortion(hexagon, build_reflection((1, 0), (0, 1)))
        assert d.sup == pytest.approx(2.0)
        assert d.spread == pytest.approx(1.5)

    def test_euclidean_reflection_is_an_isometry(self, euclidean):
        d = reflection_distortion(euclidean, build_reflection((1.0, 0.0), (0.0, 1.0)), Tolerances(n_roberts=256))
        assert d.sup == pytest.approx(1.0, abs=1e-9)
        assert d.inf_direct == pytest.approx(1.0, abs=1e-9)

    def test_inf_is_reciprocal_of_sup_over_birkhoff_pairs(self, full_battery):
        for name, norm in full_battery.items():
            _, X, _ = direction_grid(norm, 32)
            xs, ys, _ = birkhoff_pairs(norm, X, 8)
            maps = np.stack([build_reflection(tuple(x), tuple(y)).matrix() for x, y in zip(xs, ys)])
            sup, inf_direct, _ = distortion_batch(norm, maps)
            assert np.all(sup >= 1 - 1e-9), name
            assert np.max(np.abs(sup * inf_direct - 1)) <= 1e-9, name


SQUARE_VERTICES = [(1, 1), (-1, 1), (-1, -1), (1, -1)]
HEXAGON_VERTICES = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
# (vertices, linear symmetry, reflection axis pairs)
ROBERTS_SEEDS = [
    (SQUARE_VERTICES, ((0, -1), (1, 0)), [((1, 0), (0, 1)), ((1, 1), (1, -1))]),
    (HEXAGON_VERTICES, ((1, -1), (1, 0)), [((1, 0), (1, 2)), ((1, 1), (1, -1))]),
]


def _apply(m, p):
    (a, b), (c, d) = m
    return PlanePoint(a * p.u + b * p.v, c * p.u + d * p.v)


def _random_image(rng):
    while True:
        m = tuple(tuple(int(v) for v in row) for row in rng.integers(-3, 4, size=(2, 2)))
        if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0:
            return m


def _random_rational(rng):
    num = int(rng.integers(1, 10)) * (1 if rng.random() < 0.5 else -1)
    return Fraction(num, int(rng.integers(1, 8)))


def _roberts_pairs(count, seed=0):
    rng = np.random.default_rng(seed)
    for i in range(count):
        vertices, rotation, axes = ROBERTS_SEEDS[i % 2]
        x, y = (PlanePoint(*p) for p in axes[int(rng.integers(len(axes)))])
        for _ in range(int(rng.integers(6))):
            x, y = _apply(rotation, x), _apply(rotation, y)
        x, y = x * _random_rational(rng), y * _random_rational(rng)
        if rng.random() < 0.5:
            x, y = y, x
        m = _random_image(rng)
        norm = PolygonNorm.from_vertices([tuple(_apply(m, PlanePoint(*v))) for v in vertices])
        yield norm, _apply(m, x), _apply(m, y)


class TestOrthogonalityRelations:
    def test_roberts_pairs_are_birkhoff_both_ways(self):
        for norm, x, y in _roberts_pairs(500):
            assert roberts_test(norm, x, y), (x, y)
            assert roberts_test(norm, y, x), (x, y)
            assert birkhoff_test(norm, x, y), (x, y)
            assert birkhoff_test(norm, y, x), (x, y)
            assert sine(norm, x, y).value == 1

    def test_sine_stays_below_one_off_birkhoff(self, square, hexagon):
        rng = np.random.default_rng(7)
        norms = [square, hexagon]
        for _ in range(4):
            m = _random_image(rng)
            norms.append(PolygonNorm.from_vertices([tuple(_apply(m, PlanePoint(*v))) for v in HEXAGON_VERTICES]))
        found = 0
        while found < 500:
            norm = norms[found % len(norms)]
            x, y = (PlanePoint(*(int(v) for v in rng.integers(-5, 6, size=2))) for _ in range(2))
            if x.is_zero or y.is_zero or birkhoff_test(norm, x, y):
                continue
            assert float(sine(norm, x, y).value) < 1 - 1e-6, (x, y)
            found += 1

    @settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(
        theta=st.floats(min_value=0, max_value=2 * np.pi),
        phi=st.floats(min_value=0, max_value=2 * np.pi),
        lam=st.floats(min_value=0.1, max_value=10),
    )
    def test_sine_ignores_sign_and_length_of_the_direction(self, battery, theta, phi, lam):
        x = (np.cos(theta), np.sin(theta))
        y = np.array([np.cos(phi), np.sin(phi)])
        for name, norm in battery.items():
            base = float(sine(norm, x, tuple(y)))
            assert float(sine(norm, x, tuple(-y))) == pytest.approx(base, abs=1e-8), name
            assert float(sine(norm, x, tuple(lam * y))) == pytest.approx(base, abs=1e-8), name
