"""Mean oscillations, the BMO seminorm and John-Nirenberg profiles."""
import logging
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy import stats

from laguerre_project.src.setting.measure_geom import (
    AdmissibleInterval,
    AlphaLike,
    interval_family,
)
from laguerre_project.src.setting.quad import interval_gamma_rule

logger = logging.getLogger(__name__)

OSCILLATION_PANELS = 8
OSCILLATION_ORDER = 16


def _interval_samples(f: Callable, interval: AdmissibleInterval, alpha: AlphaLike, panels: int):
    breakpoints = np.linspace(interval.lo, interval.hi, panels + 1)[1:-1]
    rule = interval_gamma_rule(
        interval.lo, interval.hi, alpha, OSCILLATION_ORDER, breakpoints=breakpoints
    )
    values = np.broadcast_to(np.asarray(f(rule.nodes), dtype=float), rule.nodes.shape)
    weights = rule.weights / np.sum(rule.weights)
    return values, weights


def mean_oscillation(
    f: Callable, interval: AdmissibleInterval, alpha: AlphaLike, panels: int = OSCILLATION_PANELS
) -> float:
    """Return (1 / gamma(I)) int_I |f - f_I| dgamma_alpha."""
    values, weights = _interval_samples(f, interval, alpha, panels)
    mean = np.dot(weights, values)
    return float(np.dot(weights, np.abs(values - mean)))


def mean_oscillations(
    f: Callable, family: Sequence[AdmissibleInterval], alpha: AlphaLike
) -> np.ndarray:
    """Return the mean oscillation of ``f`` on every interval of ``family``."""
    return np.array([mean_oscillation(f, interval, alpha) for interval in family])


def bmo_seminorm(f: Callable, family: Sequence[AdmissibleInterval], alpha: AlphaLike) -> float:
    """Return the largest mean oscillation over ``family``.

    A lower bound of the seminorm, which takes the supremum over the whole
    admissible class.

    Examples
    --------
    >>> family = interval_family(1.0, 0)[:5]
    >>> bmo_seminorm(lambda x: 3.0, family, 0.0) < 1e-12
    True
    """
    if len(family) == 0:
        return 0.0
    return float(np.max(mean_oscillations(f, family, alpha)))


def bmo_family_ratio(f: Callable, alpha: AlphaLike, level: int = 0) -> float:
    """Return the seminorm over the a=2 family divided by the a=1 family.

    The space does not depend on a, the norms only up to constants, so the
    ratio is reported and never asserted. NaN when f has no oscillation.
    """
    base = bmo_seminorm(f, interval_family(1.0, level), alpha)
    wide = bmo_seminorm(f, interval_family(2.0, level), alpha)
    if base == 0:
        return float("nan")
    return wide / base


def jn_profile(
    f: Callable,
    interval: AdmissibleInterval,
    lambdas: Sequence[float],
    alpha: AlphaLike,
    panels: int = 4 * OSCILLATION_PANELS,
) -> List[Tuple[float, float]]:
    """Return (lambda, gamma({x in I: |f - f_I| > lambda}) / gamma(I)) pairs."""
    values, weights = _interval_samples(f, interval, alpha, panels)
    deviation = np.abs(values - np.dot(weights, values))
    return [
        (float(lam), float(np.dot(weights, deviation > lam))) for lam in lambdas
    ]


def jn_decay_fit(profile: Sequence[Tuple[float, float]]):
    """Fit log(fraction) = intercept + slope * lambda on the positive entries.

    Returns
    -------
    (slope, intercept, r_squared)
    """
    points = np.array([(lam, frac) for lam, frac in profile if frac > 0], dtype=float)
    if points.shape[0] < 2:
        return float("nan"), float("nan"), float("nan")
    fit = stats.linregress(points[:, 0], np.log(points[:, 1]))
    return float(fit.slope), float(fit.intercept), float(fit.rvalue**2)
