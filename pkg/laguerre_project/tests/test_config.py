import pytest

from laguerre_project import __version__
from laguerre_project.src.utils.config import THREADS_ENV, RunConfig
from laguerre_project.src.utils.errors import ConfigError
from laguerre_project.tests.base_test import BaseTest


class TestRunConfig(BaseTest):
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.alpha == 0.0
        assert cfg.stability_threshold == 0.05
        assert cfg.time_grid().count == 200
        assert cfg.alpha_param().alpha == 0.0

    def test_hash(self):
        cfg = RunConfig()
        assert cfg.config_hash() == RunConfig().config_hash()
        assert cfg.config_hash() != cfg.with_overrides(alpha=0.5).config_hash()
        assert len(cfg.config_hash()) == 64
        assert cfg.provenance() == {"config_hash": cfg.config_hash(), "version": __version__}

    def test_overrides(self):
        cfg = RunConfig().with_overrides(alpha=0.5, seed=None, threads=4)
        assert (cfg.alpha, cfg.seed, cfg.threads) == (0.5, 7, 4)
        with pytest.raises(ConfigError, match="Unexpected config keys"):
            RunConfig().with_overrides(gamma=1.0)

    def test_types_are_coerced(self):
        cfg = RunConfig(alpha="0.25", n_r="80")
        assert cfg.alpha == 0.25
        assert cfg.n_r == 80
        with pytest.raises(ConfigError, match=r"Passed \'alpha\' value"):
            RunConfig(alpha="abc")

    def test_bounds(self):
        with pytest.raises(ConfigError, match=r"Passed \'stability_threshold\' value"):
            RunConfig(stability_threshold=0.0)
        with pytest.raises(ConfigError, match=r"Passed \'n_r\' value"):
            RunConfig(n_r=0)

    def test_from_file(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text("[run]\nalpha = 0.5\nseed = 3\n\n[verify]\noperator = frac\n")
        cfg = RunConfig.from_file(str(path), seed=9, threads=None)
        assert (cfg.alpha, cfg.seed, cfg.operator, cfg.threads) == (0.5, 9, "frac", 1)

    def test_ini_roundtrip(self, tmp_path):
        cfg = RunConfig(alpha=2.0, lemma="L34", t_min=1e-3, cache_dir="")
        path = tmp_path / "run.ini"
        path.write_text(cfg.to_ini())
        loaded = RunConfig.from_file(str(path))
        assert loaded == cfg
        assert loaded.config_hash() == cfg.config_hash()

    @pytest.mark.parametrize(
        "text, message",
        [
            ("[physics]\nalpha = 0.5\n", "Unexpected config section"),
            ("[run]\ngamma = 0.5\n", "Unexpected key 'gamma'"),
            ("[quad]\nn_s = many\n", r"Passed \'n_s\' value"),
        ],
    )
    def test_bad_files(self, tmp_path, text, message):
        path = tmp_path / "run.ini"
        path.write_text(text)
        with pytest.raises(ConfigError, match=message):
            RunConfig.from_file(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="does not exist"):
            RunConfig.from_file(str(tmp_path / "missing.ini"))

    def test_worker_count(self, monkeypatch):
        cfg = RunConfig(threads=2)
        monkeypatch.delenv(THREADS_ENV, raising=False)
        assert cfg.worker_count() == 2
        monkeypatch.setenv(THREADS_ENV, "6")
        assert cfg.worker_count() == 6
        monkeypatch.setenv(THREADS_ENV, "six")
        with pytest.raises(ConfigError, match="expected an integer"):
            cfg.worker_count()
        monkeypatch.setenv(THREADS_ENV, "0")
        with pytest.raises(ConfigError, match="expected value 1 or greater"):
            cfg.worker_count()
