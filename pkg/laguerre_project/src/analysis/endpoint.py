"""Atom-image and L^infinity-to-BMO experiments for the endpoint operators."""
import logging
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd

from laguerre_project.src.analysis.refinement import prefix_stability
from laguerre_project.src.analysis.report import SweepReport
from laguerre_project.src.analysis.sweeps import outer_nodes
from laguerre_project.src.operators.functions import (
    SampledFunction,
    SpectralFunction,
    expand,
)
from laguerre_project.src.operators.handles import EndpointOperator
from laguerre_project.src.setting.measure_geom import (
    AdmissibleInterval,
    AlphaLike,
    as_alpha,
    interval_family,
)
from laguerre_project.src.setting.quad import gamma_alpha_rule, interval_gamma_rule
from laguerre_project.src.spaces.atoms import Atom, random_atom, validate_atom
from laguerre_project.src.spaces.bmo import bmo_seminorm
from laguerre_project.src.utils.errors import AtomValidationError

logger = logging.getLogger(__name__)

EXPANSION_DEGREE = 64
INNER_PANELS = 8
MIN_ATOM_RADIUS = 0.02
MAX_ATOM_CENTER = 4.0
STEP_SUPPORT = (0.0, 4.0)


def atom_intervals() -> List[AdmissibleInterval]:
    """Return the intervals random atoms are drawn on.

    The level-0 family restricted to radii of at least 0.02 and centers up
    to 4, so every kernel evaluation point of (2I)^c stays a fixed distance
    away from the support.
    """
    return [
        interval
        for interval in interval_family(1.0, 0)
        if interval.radius >= MIN_ATOM_RADIUS and interval.center <= MAX_ATOM_CENTER
    ]


def atom_battery(count: int, seed: int, alpha: AlphaLike, q: float = 2.0) -> List[Atom]:
    """Draw ``count`` seeded random (1, q, alpha)-atoms.

    Atom i depends only on (seed, i), so the battery of size 2*count starts
    with the battery of size count.
    """
    alpha = as_alpha(alpha)
    intervals = atom_intervals()
    atoms = []
    for index in range(count):
        rng = np.random.default_rng([seed, index])
        interval = intervals[int(rng.integers(len(intervals)))]
        atoms.append(random_atom(interval, q, int(rng.integers(2**31)), alpha))
    return atoms


def _inner_rule(interval: AdmissibleInterval, alpha):
    lo, hi = interval.dilate(2.0)
    return interval_gamma_rule(
        lo, hi, alpha, 16, breakpoints=np.linspace(lo, hi, INNER_PANELS + 1)[1:-1]
    )


def atom_image_norms(
    T: EndpointOperator,
    atom: Atom,
    K: int = EXPANSION_DEGREE,
    n_y: int = 32,
    n_x: int = 128,
) -> Tuple[float, float]:
    """Return the L^1 norms of T b over 2I and over (2I)^c.

    The part on 2I uses the spectral path, the part off 2I the kernel path,
    which only sees points at distance r_I or more from the support. For the
    constant atom the whole norm comes from the spectral path.
    """
    alpha = atom.alpha
    if atom.kind == "constant":
        rule = gamma_alpha_rule(alpha, n_x)
        image = T.apply_spectral(atom.as_spectral(K), rule.nodes)
        return float(np.dot(rule.weights, np.abs(image))), 0.0
    rule = _inner_rule(atom.interval, alpha)
    inner = float(
        np.dot(rule.weights, np.abs(T.apply_spectral(atom.as_spectral(K), rule.nodes)))
    )
    nodes, log_weights = outer_nodes(atom.interval, alpha, n_y)
    if nodes.size == 0:
        return inner, 0.0
    outer_values = T.apply_kernel(atom.sampled, nodes)
    outer = float(np.sum(np.exp(log_weights) * np.abs(outer_values)))
    return inner, outer


def endpoint_h1_l1(
    T: EndpointOperator,
    atoms: Sequence[Atom],
    K: int = EXPANSION_DEGREE,
    n_y: int = 32,
    threshold_fraction: float = 0.05,
) -> SweepReport:
    """Return ||T b||_{L^1(gamma_alpha)} for every atom and their maximum.

    Parameters
    ----------
    T : EndpointOperator
        The operator, applied spectrally on 2I and by its kernel off 2I.
    atoms : sequence of Atom
        Validated atoms; the rows keep their order.
    K : int, default=64
        Degree of the Laguerre expansion of each atom.
    n_y : int, default=32
        Nodes per piece of (2I)^c.
    threshold_fraction : float, default=0.05
        Gate of the atom-count doubling check, applied when the battery
        has an even size of 2 or more (the first half against the whole).

    Raises
    ------
    AtomValidationError
        When one of the atoms fails a clause.
    """
    rows = []
    for index, atom in enumerate(atoms):
        check = validate_atom(atom)
        if not check.passed:
            raise AtomValidationError(f"Atom {index} is invalid: {check.as_dict()}.")
        inner, outer = atom_image_norms(T, atom, K, n_y)
        interval = atom.interval
        rows.append(
            {
                "atom": index,
                "kind": atom.kind,
                "center": np.nan if interval is None else interval.center,
                "radius": np.nan if interval is None else interval.radius,
                "inner": inner,
                "outer": outer,
                "value": inner + outer,
            }
        )
        logger.debug("atom %d: inner %.6g, outer %.6g", index, inner, outer)
    table = pd.DataFrame(
        rows, columns=["atom", "kind", "center", "radius", "inner", "outer", "value"]
    )
    report = SweepReport(T.name, "h1_l1", table, notes=[])
    if len(table) >= 2 and len(table) % 2 == 0:
        report.passed, report.delta = prefix_stability(table["value"], threshold_fraction)
        report.refined_max = report.running_max
    logger.info("h1_l1 %s: %d atoms, max %.6g", T.name, len(table), report.running_max)
    return report


def step_function(
    breaks: Sequence[float], signs: Sequence[float], alpha: AlphaLike, K: int = EXPANSION_DEGREE
) -> SpectralFunction:
    """Return the degree-K expansion of the +-1 step with the given breaks."""
    alpha = as_alpha(alpha)
    breaks = np.sort(np.asarray(breaks, dtype=float))
    signs = np.asarray(signs, dtype=float)
    rule = gamma_alpha_rule(alpha, max(2 * K, 128))
    values = signs[np.searchsorted(breaks, rule.nodes)]
    return expand(SampledFunction(rule, values, alpha), K)


def bmo_battery(
    count: int, seed: int, alpha: AlphaLike, K: int = EXPANSION_DEGREE
) -> List[Tuple[SpectralFunction, float]]:
    """Return ``count`` bounded test functions with their declared sup norms.

    Even entries are random +-1 steps with three breaks in (0, 4), odd
    entries cos(w x) with a random frequency w in (0.5, 3). Entry i depends
    only on (seed, i).
    """
    alpha = as_alpha(alpha)
    battery = []
    for index in range(count):
        rng = np.random.default_rng([seed, index])
        if index % 2 == 0:
            breaks = rng.uniform(*STEP_SUPPORT, size=3)
            signs = rng.choice([-1.0, 1.0], size=4)
            battery.append((step_function(breaks, signs, alpha, K), 1.0))
        else:
            frequency = rng.uniform(0.5, 3.0)
            sampled = SampledFunction.from_callable(
                lambda x, w=frequency: np.cos(w * x),
                alpha,
                gamma_alpha_rule(alpha, max(2 * K, 128)),
            )
            battery.append((expand(sampled, K), 1.0))
    return battery


def endpoint_linf_bmo(
    T: EndpointOperator,
    test_functions: Sequence[Tuple[SpectralFunction, float]],
    family: Sequence[AdmissibleInterval],
    threshold_fraction: float = 0.05,
) -> SweepReport:
    """Return ||T f||_* / ||f||_inf for every test function and their maximum.

    The seminorm is the largest mean oscillation over ``family``, a lower
    bound of the BMO seminorm.
    """
    rows = []
    for index, (f, sup_norm) in enumerate(test_functions):
        seminorm = bmo_seminorm(lambda x, f=f: T.apply_spectral(f, x), family, f.alpha)
        rows.append(
            {
                "function": index,
                "sup_norm": sup_norm,
                "seminorm": seminorm,
                "value": seminorm / sup_norm,
            }
        )
    table = pd.DataFrame(rows, columns=["function", "sup_norm", "seminorm", "value"])
    report = SweepReport(T.name, "linf_bmo", table, notes=[])
    if len(table) >= 2 and len(table) % 2 == 0:
        report.passed, report.delta = prefix_stability(table["value"], threshold_fraction)
        report.refined_max = report.running_max
    logger.info("linf_bmo %s: %d functions, max %.6g", T.name, len(table), report.running_max)
    return report
