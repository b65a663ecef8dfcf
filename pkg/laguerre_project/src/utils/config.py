"""Run configuration read from INI files and overridden by flags."""
import configparser
import hashlib
import json
import os
from dataclasses import asdict, dataclass, fields, replace

from laguerre_project import __version__
from laguerre_project.src.operators.timegrid import TimeGrid
from laguerre_project.src.setting.measure_geom import AlphaParam
from laguerre_project.src.utils.errors import ConfigError

THREADS_ENV = "LAGUERRE_NUM_THREADS"

SECTIONS = {
    "run": ("alpha", "seed", "output_dir", "threads"),
    "quad": ("n_s", "n_x", "n_r", "n_y", "cache_dir"),
    "grid": ("t_min", "t_max", "t_count", "class_a", "family_level"),
    "verify": (
        "operator",
        "n",
        "k",
        "omega",
        "rho",
        "beta",
        "phi",
        "lemma",
        "count",
        "stability_threshold",
        "x_points",
    ),
}


@dataclass(frozen=True)
class RunConfig:
    """Every knob of a run; two equal configs produce identical reports."""

    alpha: float = 0.0
    seed: int = 7
    output_dir: str = "reports"
    threads: int = 1
    n_s: int = 64
    n_x: int = 128
    n_r: int = 200
    n_y: int = 64
    cache_dir: str = ""
    t_min: float = 1e-4
    t_max: float = 1e2
    t_count: int = 200
    class_a: float = 1.0
    family_level: int = 0
    operator: str = "riesz"
    n: int = 1
    k: int = 0
    omega: float = 1.0
    rho: float = 3.0
    beta: float = 0.0
    phi: str = "cos"
    lemma: str = "all"
    count: int = 50
    stability_threshold: float = 0.05
    x_points: int = 9

    def __post_init__(self):
        for spec in fields(self):
            value = getattr(self, spec.name)
            try:
                object.__setattr__(self, spec.name, spec.type(value))
            except (TypeError, ValueError) as err:
                raise ConfigError(
                    f"Passed '{spec.name}' value: {value!r}, expected a "
                    f"{spec.type.__name__}."
                ) from err
        if self.stability_threshold <= 0:
            raise ConfigError(
                f"Passed 'stability_threshold' value: {self.stability_threshold}, "
                "expected value greater than 0."
            )
        for name in ("n_s", "n_x", "n_r", "n_y", "count", "x_points", "threads"):
            if getattr(self, name) < 1:
                raise ConfigError(
                    f"Passed '{name}' value: {getattr(self, name)}, expected "
                    "value 1 or greater."
                )

    @classmethod
    def from_file(cls, path: str, **overrides) -> "RunConfig":
        """Parse an INI file; keyword overrides that are not None win."""
        parser = configparser.ConfigParser()
        if not parser.read(path):
            raise ConfigError(f"Config file {path} does not exist or is unreadable.")
        values = {}
        for section in parser.sections():
            if section not in SECTIONS:
                raise ConfigError(
                    f"Unexpected config section [{section}], expected one of "
                    f"{sorted(SECTIONS)}."
                )
            for key, value in parser.items(section):
                if key not in SECTIONS[section]:
                    raise ConfigError(
                        f"Unexpected key '{key}' in section [{section}], expected "
                        f"one of {SECTIONS[section]}."
                    )
                values[key] = value
        return cls(**values).with_overrides(**overrides)

    def with_overrides(self, **overrides) -> "RunConfig":
        known = {spec.name for spec in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigError(f"Unexpected config keys {sorted(unknown)}.")
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def as_dict(self) -> dict:
        return asdict(self)

    def config_hash(self) -> str:
        """Return the SHA-256 of the canonical JSON of the configuration."""
        payload = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def provenance(self) -> dict:
        return {"config_hash": self.config_hash(), "version": __version__}

    def alpha_param(self) -> AlphaParam:
        return AlphaParam(self.alpha)

    def time_grid(self) -> TimeGrid:
        return TimeGrid(self.t_min, self.t_max, self.t_count)

    def worker_count(self) -> int:
        """Return the thread count, honoring LAGUERRE_NUM_THREADS."""
        value = os.environ.get(THREADS_ENV)
        if value is None:
            return self.threads
        try:
            threads = int(value)
        except ValueError as err:
            raise ConfigError(
                f"Passed {THREADS_ENV} value: {value!r}, expected an integer."
            ) from err
        if threads < 1:
            raise ConfigError(
                f"Passed {THREADS_ENV} value: {threads}, expected value 1 or greater."
            )
        return threads

    def to_ini(self) -> str:
        """Return the configuration as INI text, one section per module."""
        parser = configparser.ConfigParser()
        for section, keys in SECTIONS.items():
            parser[section] = {key: str(getattr(self, key)) for key in keys}
        lines = []
        for section in parser.sections():
            lines.append(f"[{section}]")
            lines.extend(f"{key} = {value}" for key, value in parser.items(section))
            lines.append("")
        return "\n".join(lines)
