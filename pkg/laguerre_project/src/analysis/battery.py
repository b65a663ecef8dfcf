"""Build sweep configurations from statepoints and run them on signac jobs."""
import logging
from typing import Dict, List

import signac

from laguerre_project import __version__
from laguerre_project.src.analysis.endpoint import (
    atom_battery,
    bmo_battery,
    endpoint_h1_l1,
    endpoint_linf_bmo,
)
from laguerre_project.src.analysis.report import SweepReport
from laguerre_project.src.analysis.sweeps import (
    CONDITIONS,
    CONTROL_FAMILY,
    SweepConfig,
    run_sweep,
)
from laguerre_project.src.operators.timegrid import TimeGrid
from laguerre_project.src.setting.measure_geom import interval_family
from laguerre_project.src.utils.registry import OPERATOR_NAMES, load_operator

logger = logging.getLogger(__name__)

ENDPOINT_CONDITIONS = ("h1_l1", "linf_bmo")
LEMMA_IDS = (
    "L31",
    "L31_omega",
    "L32",
    "L33",
    "L34",
    "L35",
    "L36_1",
    "L36_2",
    "L36_3",
    "L36_4",
)

STATEPOINT_DEFAULTS = {
    "alpha": 0.0,
    "level": 0,
    "n": 1,
    "k": 0,
    "omega": 1.0,
    "rho": 3.0,
    "beta": 0.0,
    "phi": "cos",
    "lemma": None,
    "x_points": 9,
    "n_y": 64,
    "n_r": 200,
    "n_s": 64,
    "t_min": 1e-4,
    "t_max": 1e2,
    "t_count": 200,
    "seed": 7,
    "count": 50,
    "threshold": 0.05,
}


def _resolved(statepoint: Dict) -> Dict:
    values = dict(STATEPOINT_DEFAULTS)
    values.update({key: value for key, value in statepoint.items() if value is not None})
    return values


def load_statepoint_operator(statepoint: Dict):
    """Return the EndpointOperator named by ``statepoint["operator"]``."""
    sp = _resolved(statepoint)
    grid = TimeGrid(sp["t_min"], sp["t_max"], sp["t_count"])
    return load_operator(
        sp["operator"],
        sp["alpha"],
        n=sp["n"],
        k=sp["k"],
        omega=sp["omega"],
        rho=sp["rho"],
        phi=sp["phi"],
        beta=sp["beta"],
        grid=grid,
    )


def build_sweep_config(statepoint: Dict, provenance: Dict = None) -> SweepConfig:
    """Based on a statepoint, return the SweepConfig of its sweep.

    The negative control ignores "level" and runs on CONTROL_FAMILY.

    Parameters
    ----------
    statepoint : dict
        Must hold "operator" (one of the operator names, or "lemma") and
        "condition"; missing parameters take the values of
        STATEPOINT_DEFAULTS.
    provenance : dict, optional
        Embedded in the reports.

    Raises
    ------
    ValueError
        For an unknown operator, lemma or condition.
    """
    sp = _resolved(statepoint)
    name = sp.get("operator")
    condition = sp.get("condition")
    if condition not in CONDITIONS:
        raise ValueError(
            f"Unexpected condition name. Condition {condition} is not currently "
            f"supported, expected one of {CONDITIONS}."
        )
    common = dict(
        omega=sp["omega"],
        beta=sp["beta"],
        x_points=sp["x_points"],
        n_y=sp["n_y"],
        n_r=sp["n_r"],
        n_s=sp["n_s"],
        stability_threshold=sp["threshold"],
        seed=sp["seed"],
        provenance=dict(provenance or {"version": __version__}),
    )
    if name == "lemma":
        if sp["lemma"] not in LEMMA_IDS:
            raise ValueError(
                f"Unexpected lemma id. Lemma {sp['lemma']} is not currently "
                f"supported, expected one of {LEMMA_IDS}."
            )
        return SweepConfig(
            None,
            interval_family(1.0, sp["level"]),
            sp["alpha"],
            lemma=sp["lemma"],
            level=sp["level"],
            **common,
        )
    if name not in OPERATOR_NAMES:
        raise ValueError(
            f"Unexpected operator name. Operator name {name} is not currently "
            f"supported, expected one of {OPERATOR_NAMES + ('lemma',)}."
        )
    family = load_statepoint_operator(sp).family
    if condition == "negative_control":
        return SweepConfig(family, CONTROL_FAMILY, sp["alpha"], **common)
    return SweepConfig(
        family,
        interval_family(1.0, sp["level"]),
        sp["alpha"],
        level=sp["level"],
        **common,
    )


def run_endpoint(statepoint: Dict) -> SweepReport:
    """Run the atom or BMO battery named by ``statepoint["condition"]``.

    The battery has 2 * count entries so the doubling gate can be read off
    one run.
    """
    sp = _resolved(statepoint)
    operator = load_statepoint_operator(sp)
    if sp["condition"] == "h1_l1":
        atoms = atom_battery(2 * sp["count"], sp["seed"], sp["alpha"])
        return endpoint_h1_l1(operator, atoms, threshold_fraction=sp["threshold"])
    if sp["condition"] == "linf_bmo":
        functions = bmo_battery(2 * sp["count"], sp["seed"], sp["alpha"])
        return endpoint_linf_bmo(
            operator,
            functions,
            interval_family(1.0, sp["level"]),
            threshold_fraction=sp["threshold"],
        )
    raise ValueError(
        f"Unexpected condition name. Condition {sp['condition']} is not currently "
        f"supported, expected one of {ENDPOINT_CONDITIONS}."
    )


def battery_statepoints(alphas=(0.0, 0.5, 2.0), level: int = 0) -> List[Dict]:
    """Return the statepoints of the default verification battery."""
    statepoints = []
    families = [
        {"operator": "maximal", "k": 0},
        {"operator": "gfunction", "n": 0, "k": 1},
        {"operator": "riesz", "n": 1},
        {"operator": "variation", "k": 0, "rho": 3.0},
        {"operator": "frac", "omega": 1.0},
        {"operator": "multiplier", "phi": "cos"},
    ]
    for alpha in alphas:
        for params in families:
            for condition in ("c1", "c2"):
                statepoints.append(
                    {"alpha": alpha, "level": level, "condition": condition, **params}
                )
        for lemma in LEMMA_IDS:
            statepoints.append(
                {
                    "alpha": alpha,
                    "level": level,
                    "condition": "lemma",
                    "operator": "lemma",
                    "lemma": lemma,
                }
            )
        for params in families:
            statepoints.append({"alpha": alpha, "condition": "h1_l1", **params})
            statepoints.append(
                {"alpha": alpha, "level": level, "condition": "linf_bmo", **params}
            )
    statepoints.append(
        {
            "alpha": 0.0,
            "level": level,
            "condition": "negative_control",
            "operator": "riesz",
            "n": 1,
        }
    )
    return statepoints


def sweep_job(job: signac.job.Job, filename: str = "sweep.csv") -> SweepReport:
    """Run the sweep of a job and store its report.

    The summary (max, delta, passed, provenance) is added to the job
    document under "sweep" and the per-interval table is written to
    ``filename`` in the job workspace.

    Parameters
    ----------
    job : signac.job.Job
        The Job object; its statepoint is passed to build_sweep_config.
    filename : str, default "sweep.csv"
        The relative path (from the job directory) of the table.
    """
    statepoint = dict(job.sp)
    provenance = {"version": __version__, "job_id": job.id}
    if statepoint.get("condition") in ENDPOINT_CONDITIONS:
        report = run_endpoint(statepoint)
        report.provenance.update(provenance)
    else:
        cfg = build_sweep_config(statepoint, provenance)
        report = run_sweep(cfg, statepoint["condition"])
    job.doc["sweep"] = report.summary()
    report.to_csv(
        job.fn(filename),
        comments=[f"{key} = {value}" for key, value in sorted(statepoint.items())],
    )
    if report.passed is False and statepoint.get("condition") != "negative_control":
        logger.warning("Sweep %s of job %s failed its gate.", report.name, job.id)
    return report
