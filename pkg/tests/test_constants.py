import math

import numpy as np
import pytest

from app.constants import (
    birkhoff_pairs,
    direction_grid,
    estimate_cB,
    estimate_cS,
    estimate_D,
    inner_product_report,
    inner_product_test,
    resolve_workers,
    search_cB_lower,
    supported_point,
)
from app.errors import DomainError
from app.models import SearchConfig
from app.norms import LpNorm
from app.orthogonality import birkhoff_test


class TestGrid:
    def test_polygon_anchors_are_added(self, square):
        thetas, points, coarse = direction_grid(square, 8)
        assert np.all(np.diff(thetas) >= 0)
        assert np.any(np.all(np.isclose(points, [1.0, 1.0]), axis=1))
        assert len(thetas) == len(points) == len(coarse)

    def test_resolution_floor(self, euclidean):
        with pytest.raises(DomainError):
            direction_grid(euclidean, 4)

    def test_birkhoff_pairs_fan_out_at_vertices(self, square):
        X = np.array([[1.0, 1.0], [1.0, 0.0]])
        xs, ys, edge = birkhoff_pairs(square, X, 4)
        assert len(xs) == 5
        assert edge.sum() == 2
        np.testing.assert_allclose(ys[-1], [0.0, 1.0])


class TestWorkers:
    def test_deterministic_is_single_process(self):
        assert resolve_workers(deterministic=True) == 1

    def test_mc_threads_caps_the_pool(self, monkeypatch):
        monkeypatch.setenv("MC_THREADS", "1")
        assert resolve_workers() == 1
        monkeypatch.setenv("MC_THREADS", "many")
        assert resolve_workers() >= 1


class TestEuclidean:
    def test_constants(self, euclidean):
        cb = estimate_cB(euclidean, 32, 8, deterministic=True)
        cs = estimate_cS(euclidean, 32, deterministic=True)
        d = estimate_D(euclidean, 32, deterministic=True)
        assert cb.value == pytest.approx(1.0, abs=1e-6)
        assert cs.value == pytest.approx(0.0, abs=1e-6)
        assert d.value == pytest.approx(1.0, abs=1e-6)
        assert cb.bounds_ok and cs.bounds_ok and d.bounds_ok
        assert cb.extras["attained"] is False


class TestStretchingConstant:
    def test_square_reaches_the_upper_bound(self, square):
        report = estimate_cS(square, 32, deterministic=True)
        assert report.value == pytest.approx(8 / 3, abs=1e-9)
        assert report.witness["sup"] == pytest.approx(3.0)
        assert report.witness["vertex_edge_pair"]
        assert report.bounds_ok

    def test_hexagon_witness_is_a_vertex_and_its_side(self, hexagon):
        report = estimate_cS(hexagon, 64, deterministic=True)
        assert report.value == pytest.approx(1.5, abs=1e-2)
        assert report.witness["vertex_edge_pair"]

    def test_bounds_hold_on_the_battery(self, battery):
        for name, norm in battery.items():
            report = estimate_cS(norm, 32, deterministic=True)
            assert -1e-6 <= report.value <= 8 / 3 + 1e-6, name
            assert report.extras["max_sup"] <= 3 + 1e-6, name
            assert report.extras["reciprocity_gap"] <= 1e-6, name


class TestOrdering:
    def test_cb_does_not_exceed_d(self, octagon, hexagon, l3):
        for norm in (octagon, hexagon, l3, LpNorm(1.5), LpNorm(4)):
            cb = estimate_cB(norm, 64, 32, deterministic=True)
            d = estimate_D(norm, 64, deterministic=True)
            assert cb.bounds_ok and d.bounds_ok
            assert cb.value <= d.value + 1e-2, norm.label()

    def test_every_norm_stays_in_bounds(self, full_battery):
        slack = 1e-6
        for name, norm in full_battery.items():
            cb = estimate_cB(norm, 16, 8, deterministic=True)
            cs = estimate_cS(norm, 16, deterministic=True)
            d = estimate_D(norm, 16, deterministic=True)
            assert cb.bounds_ok and cs.bounds_ok and d.bounds_ok, name
            assert 1 / 3 - slack <= cb.value <= 1 + slack, name
            assert -slack <= cs.value <= 8 / 3 + slack, name
            assert -slack <= d.value <= 1 + slack, name

    def test_refining_the_grid_moves_cs_up_and_d_down(self, full_battery):
        for name in ("square", "hexagon", "l3", "l1.5", "ellipse", "random-0", "random-4"):
            norm = full_battery[name]
            cs = [estimate_cS(norm, r, deterministic=True).value for r in (8, 16, 32)]
            d = [estimate_D(norm, r, deterministic=True).value for r in (8, 16, 32)]
            assert cs[0] <= cs[1] + 1e-6 and cs[1] <= cs[2] + 1e-6, name
            assert d[1] <= d[0] + 1e-6 and d[2] <= d[1] + 1e-6, name


class TestInnerProduct:
    def test_ellipses_pass(self, euclidean, ellipse):
        assert inner_product_test(euclidean, 64)
        assert inner_product_test(ellipse, 64)

    def test_other_norms_fail(self, square, hexagon, l3):
        for norm in (square, hexagon, l3):
            assert not inner_product_test(norm, 64), norm.label()

    def test_report_lists_each_method(self, euclidean):
        report = inner_product_report(euclidean, 32, method="both")
        assert set(report["deviations"]) == {"chords", "support"}
        assert report["is_inner_product"]
        with pytest.raises(DomainError):
            inner_product_report(euclidean, 32, method="angles")

    def test_support_method_measures_birkhoff_partners(self, l3, square):
        _, X, _ = direction_grid(l3, 16)
        for x in X:
            y = supported_point(l3, x)
            assert l3.gauge_array(y) == pytest.approx(1.0)
            assert birkhoff_test(l3, tuple(y), tuple(x))
        deviation = inner_product_report(l3, 256, method="support")["deviations"]["support"]
        assert deviation == pytest.approx(0.322, abs=1e-2)
        assert not inner_product_test(square, 64, method="support")


class TestSearch:
    def test_search_is_reproducible(self):
        config = SearchConfig(count=3, seed=5, resolution=16, inner_resolution=8)
        first = list(search_cB_lower(config))
        second = list(search_cB_lower(config))
        assert [r["value"] for r in first] == [r["value"] for r in second]
        assert all(r["conclusive"] is False for r in first)
        running = [r["running_min"] for r in first]
        assert running == sorted(running, reverse=True)
        assert first[0]["improved"]

    def test_affine_squares_give_one_half(self):
        config = SearchConfig(family="affine-square", count=2, resolution=64, inner_resolution=16)
        for record in search_cB_lower(config):
            assert record["value"] >= 0.5 - 1e-9
            assert record["bounds_ok"]


@pytest.mark.slow
class TestGoldenValues:
    @pytest.mark.parametrize("norm", [pytest.param("square", id="square"), pytest.param("diamond", id="diamond")])
    def test_rectilinear_cb_is_one_half_from_above(self, square, norm):
        norm = square if norm == "square" else LpNorm(1)
        fine = estimate_cB(norm, 1024, 256)
        coarse = estimate_cB(norm, 512, 256)
        assert 0.5 <= fine.value <= 0.51
        assert fine.value <= coarse.value + 1e-9
        assert fine.extras["value_half_resolution"] >= fine.value

    @pytest.mark.parametrize("n", [2, 3])
    def test_regular_4n_gon(self, octagon, dodecagon, n):
        norm = octagon if n == 2 else dodecagon
        report = estimate_cB(norm, 1024, 256)
        assert report.value == pytest.approx(math.cos(math.pi / (4 * n)) ** 2, abs=2e-3)

    def test_hexagon_cs_at_full_resolution(self, hexagon):
        assert estimate_cS(hexagon, 512).value == pytest.approx(1.5, abs=1e-2)
