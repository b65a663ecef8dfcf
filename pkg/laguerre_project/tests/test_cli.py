import io
import json
import os

import numpy as np
import pandas as pd
import pytest

from laguerre_project import __version__
from laguerre_project.src.cli import main
from laguerre_project.tests.base_test import BaseTest

SMALL_VERIFY = [
    "--operator",
    "riesz",
    "--n",
    "1",
    "--x-points",
    "1",
    "--n-y",
    "4",
    "--n-r",
    "20",
    "--n-s",
    "8",
]


class TestKernelEval(BaseTest):
    def test_grid_rows(self, capsys):
        code = main(
            [
                "kernel-eval",
                "--kernel",
                "heat",
                "--alpha",
                "0.5",
                "--grid",
                "t=0.5:1:2",
                "x=0.5:2:2",
                "y=2:0.5:4",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith(f"# laguerre-endpoint {__version__}")
        assert "# kernel = heat" in out
        table = pd.read_csv(io.StringIO(out), comment="#")
        assert list(table.columns) == ["t", "x", "y", "value"]
        assert len(table) == 16
        keys = list(zip(table["t"], table["x"], table["y"]))
        assert keys == sorted(keys)
        assert np.all(table["value"] > 0)

    def test_untimed_kernel_to_file(self, tmp_path):
        out = str(tmp_path / "riesz.csv")
        code = main(
            ["kernel-eval", "--kernel", "riesz", "--n", "1", "--x", "1.0", "--y", "2.0", "0.5", "--out", out]
        )
        assert code == 0
        table = pd.read_csv(out, comment="#")
        assert len(table) == 2
        assert table["t"].isna().all()
        np.testing.assert_allclose(table["y"], [0.5, 2.0])

    @pytest.mark.parametrize(
        "argv",
        [
            ["kernel-eval", "--kernel", "heat", "--t", "-1", "--x", "1", "--y", "2"],
            ["kernel-eval", "--kernel", "heat", "--x", "1", "--y", "2"],
            ["kernel-eval", "--kernel", "heat", "--t", "1", "--x", "-1", "--y", "2"],
            ["kernel-eval", "--kernel", "heat_dx", "--r", "1.5", "--x", "1", "--y", "2"],
            ["kernel-eval", "--kernel", "heat", "--t", "1", "--grid", "x=0:1", "--y", "2"],
            ["kernel-eval", "--kernel", "gauss", "--x", "1", "--y", "2"],
            ["kernel-eval", "--kernel", "riesz", "--n", "1", "--x", "1", "--y", "1"],
            ["kernel-eval", "--kernel", "riesz", "--n", "5", "--x", "1", "--y", "2"],
            ["selftest", "--alpha", "-0.6"],
            ["verify", "--suite", "nope"],
            [],
        ],
    )
    def test_usage_errors(self, argv, capsys):
        assert main(argv) == 2

    def test_version(self, capsys):
        assert main(["--version"]) == 0
        assert __version__ in capsys.readouterr().out


class TestSelftest(BaseTest):
    def test_selftest_passes(self, capsys):
        assert main(["selftest"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 4
        assert all(line.startswith("PASS") for line in lines)

    def test_corrupt_cache_is_rebuilt(self, tmp_path, capsys):
        cache = str(tmp_path / "rules")
        assert main(["selftest", "--cache-dir", cache]) == 0
        files = sorted(os.listdir(cache))
        assert files
        with open(os.path.join(cache, files[0]), "r+b") as handle:
            handle.write(b"XXXX")
        with pytest.warns(UserWarning, match="Ignoring corrupt quadrature cache"):
            assert main(["selftest", "--cache-dir", cache]) == 0


class TestVerify(BaseTest):
    def test_negative_control_fails(self, tmp_path, capsys):
        output = str(tmp_path / "reports")
        code = main(
            ["verify", "--suite", "c1", "--negative-control", "--output", output] + SMALL_VERIFY
        )
        assert code == 1
        assert "Failing gates" in capsys.readouterr().err
        with open(os.path.join(output, "summary.json")) as handle:
            summary = json.load(handle)
        assert summary["all_passed"] is False
        assert summary["version"] == __version__
        table = pd.read_csv(os.path.join(output, "criterion_report.csv"), comment="#")
        assert list(table["condition"]) == ["negative_control"]

    def test_lemma_suite_writes_reports(self, tmp_path):
        output = str(tmp_path / "reports")
        code = main(
            ["verify", "--suite", "lemmas", "--lemma", "L31", "--output", output] + SMALL_VERIFY
        )
        assert code in (0, 1)
        names = sorted(os.listdir(output))
        assert "criterion_report.csv" in names
        assert "summary.json" in names
        assert "00_L31_lemma.csv" in names

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text("[run]\nalpha = 0.5\n[physics]\nmass = 1\n")
        assert main(["selftest", "--config", str(path)]) == 2
