"""Initialize signac statepoints of the verification battery."""
import itertools
import os

import signac

from laguerre_project.src.analysis.battery import battery_statepoints


def dict_product(dd):
    """Return the product of the key/values of a dictionary."""
    keys = dd.keys()
    for element in itertools.product(*dd.values()):
        yield dict(zip(keys, element))


alphas = [0.0, 0.5, 2.0]
levels = [0]

# parameter scans on top of the default battery
scans = {
    "L31_omega": {"omega": [0.5, 1.0, 2.0]},
    "L34": {"beta": [0.0, 1.0, 2.0]},
}

pr_root = os.path.join(os.getcwd(), "src")
pr = signac.get_project(pr_root)

total_statepoints = list()
for level in levels:
    # scanned lemmas get their entries from the scans below
    total_statepoints.extend(
        sp
        for sp in battery_statepoints(alphas, level)
        if sp.get("lemma") not in scans
    )

for lemma, scan in scans.items():
    for alpha, level, params in itertools.product(
        alphas, levels, dict_product(scan)
    ):
        total_statepoints.append(
            {
                "alpha": alpha,
                "level": level,
                "condition": "lemma",
                "operator": "lemma",
                "lemma": lemma,
                **params,
            }
        )

for sp in total_statepoints:
    pr.open_job(
        statepoint=sp,
    ).init()
