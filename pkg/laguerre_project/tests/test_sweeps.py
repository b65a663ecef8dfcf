from dataclasses import replace

import numpy as np
import pytest

from laguerre_project.src.analysis.sweeps import (
    SweepConfig,
    c1_prime_sweep,
    c2_prime_sweep,
    control_family,
    difference_spot_check,
    interval_value,
    lemma_sweep,
    negative_control_sweep,
    outer_nodes,
    run_sweep,
)
from laguerre_project.src.kernels.family import KernelFamily
from laguerre_project.src.kernels.heat import heat_kernel
from laguerre_project.src.setting.measure_geom import (
    AdmissibleInterval,
    gamma_mass,
    interval_family,
    tail_cutoff,
)
from laguerre_project.src.utils.errors import ConfigError, DomainError
from laguerre_project.tests.base_test import BaseTest


class TestSweepConfig(BaseTest):
    def test_validation(self, small_family, small_orders):
        family = KernelFamily("riesz", 0.0, n=1)
        with pytest.raises(ConfigError, match="non-empty interval family"):
            SweepConfig(family, [], 0.0)
        with pytest.raises(ConfigError, match="not in the class B_1"):
            SweepConfig(family, [AdmissibleInterval(4.0, 0.5, 2.0)], 0.0)
        with pytest.raises(ConfigError, match=r"Passed \'exclusion\' value"):
            SweepConfig(family, small_family, 0.0, exclusion=1.0)
        with pytest.raises(ConfigError, match="either an operator or a lemma"):
            SweepConfig(None, small_family, 0.0)
        with pytest.raises(ConfigError, match="sub-grid sizes"):
            SweepConfig(family, small_family, 0.0, x_points=0)
        with pytest.raises(ValueError, match="Unexpected lemma id"):
            SweepConfig(None, small_family, 0.0, lemma="L77")
        with pytest.raises(DomainError):
            SweepConfig(None, small_family, 0.0, lemma="L34", beta=-1.0)

    def test_refined_hand_picked(self, riesz_sweep_cfg):
        refined = riesz_sweep_cfg.refined()
        assert len(refined.interval_family) == 2 * len(riesz_sweep_cfg.interval_family)
        assert refined.level is None
        assert refined.x_points == 7
        assert (refined.n_y, refined.n_r, refined.n_s) == (32, 80, 32)
        radii = sorted(interval.radius for interval in refined.interval_family)
        assert radii[0] == pytest.approx(0.0625)
        assert refined.family.n_r == 80

    def test_refined_level(self):
        cfg = SweepConfig.at_level(KernelFamily("riesz", 0.0, n=1), 0.0, level=0)
        refined = cfg.refined()
        assert refined.level == 1
        assert len(refined.interval_family) == len(interval_family(1.0, 1))
        assert len(refined.interval_family) > len(cfg.interval_family)

    def test_describe(self, riesz_sweep_cfg, lemma_sweep_cfg):
        description = riesz_sweep_cfg.describe()
        assert description["kernel"] == "riesz"
        assert description["intervals"] == 3
        assert lemma_sweep_cfg.describe()["lemma"] == "L31"


class TestOuterNodes(BaseTest):
    @pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0])
    def test_outer_mass(self, alpha):
        interval = AdmissibleInterval(1.0, 0.25)
        nodes, log_weights = outer_nodes(interval, alpha, 64)
        lo, hi = interval.dilate(2.0)
        assert np.all((nodes <= lo) | (nodes >= hi))
        assert np.all(np.isfinite(log_weights))
        x_max = max(tail_cutoff(alpha), 2 * hi)
        expected = gamma_mass(0.0, lo, alpha) + gamma_mass(hi, x_max, alpha)
        assert np.sum(np.exp(log_weights)) == pytest.approx(expected, rel=1e-6)

    def test_interval_touching_zero(self):
        interval = AdmissibleInterval(0.5, 0.25)
        nodes, _ = outer_nodes(interval, 0.0, 16)
        assert np.all(nodes >= 1.0)


class TestSweeps(BaseTest):
    def test_c1_sweep(self, riesz_sweep_cfg, small_family):
        report = c1_prime_sweep(riesz_sweep_cfg)
        assert report.name == "riesz_pointwise_n1"
        assert report.condition == "c1"
        assert len(report.rows) == len(small_family)
        assert np.all(report.rows["value"] > 0)
        for interval, argmax in zip(small_family, report.rows["argmax"]):
            assert interval.lo < argmax < interval.hi
        assert isinstance(report.passed, bool)
        assert np.isfinite(report.delta)
        assert report.refined_max > 0
        assert report.provenance["sweep"]["kernel"] == "riesz"
        assert report.provenance["doubling_constant"] > 1

    def test_refinement_at_high_s_order(self, riesz_sweep_cfg):
        cfg = replace(riesz_sweep_cfg, n_s=128)
        report = c1_prime_sweep(cfg)
        assert np.isfinite(report.refined_max)
        assert np.isfinite(report.delta)

    def test_no_refinement(self, riesz_sweep_cfg):
        report = c1_prime_sweep(riesz_sweep_cfg, refine=False)
        assert report.passed is None
        assert report.delta is None
        assert report.refined_max is None

    def test_control_family_is_heat_at_grid_edge(self, riesz_sweep_cfg):
        family = control_family(riesz_sweep_cfg)
        assert family.tag == "heat"
        assert family.t == riesz_sweep_cfg.operator.time_grid.t_min
        assert (family.n_r, family.n_s) == (riesz_sweep_cfg.n_r, riesz_sweep_cfg.n_s)

    def test_negative_control_uses_undifferentiated_heat(self, riesz_sweep_cfg):
        cfg = replace(riesz_sweep_cfg, x_points=1)
        interval = AdmissibleInterval(1.0, 0.0625)
        value, argmax = interval_value(cfg, "negative_control", interval)
        assert argmax == interval.center
        nodes, log_weights = outer_nodes(interval, cfg.alpha, cfg.n_y)
        t_min = cfg.operator.time_grid.t_min
        kernel = heat_kernel(t_min, argmax, nodes, cfg.alpha, n_s=cfg.n_s)
        expected = interval.radius * np.sum(kernel * np.exp(log_weights))
        assert value == pytest.approx(expected, rel=1e-9)
        assert 0 < value < interval.radius

    def test_negative_control_fails_its_gate(self, riesz_sweep_cfg):
        report = negative_control_sweep(riesz_sweep_cfg)
        assert report.passed is False
        assert report.delta > 0.5
        assert report.refined_max > report.running_max

    @pytest.mark.parametrize("tag, params", [("fractional", {"omega": 1.5}), ("riesz", {"n": 1})])
    def test_c1_c2_values(self, small_family, small_orders, tag, params):
        cfg = SweepConfig(KernelFamily(tag, 0.0, **params), small_family, 0.0, **small_orders)
        c1 = c1_prime_sweep(cfg, refine=False)
        c2 = c2_prime_sweep(cfg, refine=False)
        assert np.all(c2.rows["value"] > 0)
        if tag == "fractional":
            np.testing.assert_allclose(c1.rows["value"], c2.rows["value"], rtol=1e-6)

    def test_lemma_sweep(self, lemma_sweep_cfg, riesz_sweep_cfg):
        report = lemma_sweep("L31", lemma_sweep_cfg, refine=False)
        assert report.name == "L31"
        assert np.all(report.rows["value"] > 0)
        swapped = lemma_sweep("L31", riesz_sweep_cfg, refine=False)
        np.testing.assert_allclose(swapped.rows["value"], report.rows["value"])

    def test_lemma_integrated_in_y(self, small_family, small_orders):
        cfg = SweepConfig(None, small_family, 0.5, lemma="L35", **small_orders)
        value, argmax = interval_value(cfg, "lemma", small_family[1])
        assert value >= 0
        assert small_family[1].lo < argmax < small_family[1].hi

    def test_time_indexed_sweep(self, small_family, small_orders, coarse_grid):
        family = KernelFamily("poisson_deriv", 0.0, "sup_t", k=1, time_grid=coarse_grid)
        cfg = SweepConfig(family, small_family[1:2], 0.0, **small_orders)
        report = c1_prime_sweep(cfg, refine=False)
        assert report.name == "poisson_deriv_sup_t_n0_k1"
        assert report.running_max > 0

    def test_condition_checks(self, riesz_sweep_cfg, lemma_sweep_cfg):
        with pytest.raises(ValueError, match="Unexpected sweep condition"):
            run_sweep(riesz_sweep_cfg, "c3")
        with pytest.raises(ConfigError, match="does not match the sweep target"):
            run_sweep(riesz_sweep_cfg, "lemma")
        with pytest.raises(ConfigError, match="does not match the sweep target"):
            run_sweep(lemma_sweep_cfg, "c1")

    def test_threads_do_not_change_values(self, riesz_sweep_cfg):
        single = c1_prime_sweep(riesz_sweep_cfg, refine=False)
        threaded = c1_prime_sweep(replace(riesz_sweep_cfg, threads=3), refine=False)
        np.testing.assert_array_equal(single.rows["value"], threaded.rows["value"])


class TestDifferenceSpotCheck(BaseTest):
    def test_spot_check(self, riesz_sweep_cfg):
        report = c1_prime_sweep(riesz_sweep_cfg, refine=False)
        table = difference_spot_check(riesz_sweep_cfg, report, samples=2)
        assert list(table.columns) == ["center", "radius", "difference", "bound", "passed"]
        assert len(table) == 2
        assert np.all(table["difference"] >= 0)
        assert np.all(table["difference"] <= 1.5 * table["bound"])

    def test_needs_matching_c1_report(self, riesz_sweep_cfg):
        report = c2_prime_sweep(riesz_sweep_cfg, refine=False)
        with pytest.raises(ConfigError, match="needs the c1 report"):
            difference_spot_check(riesz_sweep_cfg, report)

    def test_reduced_accuracy_relaxes_gate(self, small_family, small_orders):
        with pytest.warns(UserWarning, match="relaxed tenfold"):
            cfg = SweepConfig(None, small_family, -0.47, lemma="L31", **small_orders)
        report = lemma_sweep("L31", cfg)
        assert any("gate threshold relaxed to 0.5" in note for note in report.notes)
