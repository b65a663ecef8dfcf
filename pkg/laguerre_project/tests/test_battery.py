import numpy as np
import pandas as pd
import pytest

from laguerre_project.src.analysis.battery import (
    LEMMA_IDS,
    battery_statepoints,
    build_sweep_config,
    load_statepoint_operator,
    run_endpoint,
    sweep_job,
)
from laguerre_project.src.analysis.sweeps import CONTROL_FAMILY
from laguerre_project.src.setting.measure_geom import interval_family
from laguerre_project.tests.base_test import BaseTest


class TestBuildSweepConfig(BaseTest):
    def test_operator_statepoint(self, mock_statepoint):
        cfg = build_sweep_config(mock_statepoint, {"config_hash": "abc"})
        assert cfg.family.tag == "fractional"
        assert cfg.family.n_r == 100
        assert cfg.alpha.alpha == 0.5
        assert (cfg.x_points, cfg.n_y, cfg.seed) == (5, 32, 11)
        assert len(cfg.interval_family) == len(interval_family(1.0, 0))
        assert cfg.provenance == {"config_hash": "abc"}

    def test_lemma_statepoint(self):
        cfg = build_sweep_config(
            {"condition": "lemma", "operator": "lemma", "lemma": "L34", "beta": 2.0}
        )
        assert cfg.operator is None
        assert cfg.lemma == "L34"
        assert cfg.beta == 2.0

    def test_incorrect_statepoints(self, mock_statepoint):
        with pytest.raises(ValueError, match=r"Unexpected condition name"):
            build_sweep_config({**mock_statepoint, "condition": "c3"})
        with pytest.raises(ValueError, match=r"Unexpected operator name"):
            build_sweep_config({**mock_statepoint, "operator": "foo"})
        with pytest.raises(ValueError, match=r"Unexpected lemma id"):
            build_sweep_config({"condition": "lemma", "operator": "lemma", "lemma": "L99"})
        with pytest.raises(ValueError, match=r"Unexpected lemma id"):
            build_sweep_config({"condition": "lemma", "operator": "lemma"})

    def test_statepoint_operator(self):
        operator = load_statepoint_operator(
            {"operator": "maximal", "k": 1, "t_min": 1e-2, "t_max": 10.0, "t_count": 12}
        )
        assert operator.name == "maximal_k1"
        assert operator.family.time_grid.count == 12


class TestBatteryStatepoints(BaseTest):
    def test_default_battery(self):
        statepoints = battery_statepoints()
        per_alpha = 6 * 2 + len(LEMMA_IDS) + 6 * 2
        assert len(statepoints) == 3 * per_alpha + 1
        controls = [sp for sp in statepoints if sp["condition"] == "negative_control"]
        assert len(controls) == 1
        assert {sp["alpha"] for sp in statepoints} == {0.0, 0.5, 2.0}

    def test_statepoints_build(self):
        for sp in battery_statepoints(alphas=(0.0,)):
            if sp["condition"] in ("c1", "c2", "lemma", "negative_control"):
                build_sweep_config(sp)

    def test_control_runs_on_fixture_family(self):
        cfg = build_sweep_config(
            {"operator": "riesz", "n": 1, "condition": "negative_control", "level": 2}
        )
        assert cfg.interval_family == CONTROL_FAMILY
        assert cfg.level is None


class TestRunEndpoint(BaseTest):
    def test_incorrect_condition(self):
        with pytest.raises(ValueError, match=r"Unexpected condition name"):
            run_endpoint({"operator": "frac", "condition": "c1"})

    def test_bmo_battery_doubles(self):
        report = run_endpoint(
            {"operator": "frac", "condition": "linf_bmo", "count": 1, "seed": 3}
        )
        assert len(report.rows) == 2
        assert report.passed is not None
        assert np.all(report.rows["value"] >= 0)

    def test_atom_battery_doubles(self):
        report = run_endpoint(
            {"operator": "frac", "condition": "h1_l1", "count": 1, "seed": 3}
        )
        assert len(report.rows) == 2
        assert report.condition == "h1_l1"
        assert np.all(report.rows["value"] > 0)


class TestSweepJob(BaseTest):
    def test_sweep_job(self, tmp_job):
        report = sweep_job(tmp_job)
        summary = tmp_job.doc["sweep"]
        assert summary["name"] == "riesz_pointwise_n1"
        assert summary["max"] == pytest.approx(report.running_max)
        assert summary["job_id"] == tmp_job.id
        assert summary["passed"] in (True, False)
        assert tmp_job.isfile("sweep.csv")
        with open(tmp_job.fn("sweep.csv")) as handle:
            assert handle.readline().startswith("# alpha = 0.0")
        table = pd.read_csv(tmp_job.fn("sweep.csv"), comment="#")
        assert len(table) == len(interval_family(1.0, 0))
