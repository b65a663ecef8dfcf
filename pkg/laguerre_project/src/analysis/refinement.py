"""Refinement gates for sweep maxima and battery maxima."""
from typing import List

import numpy as np
import numpy.typing as npt


def is_refinement_stable(
    coarse_max: float,
    fine_max: float,
    threshold_fraction: float = 0.05,
) -> List:
    """Check if a maximum is stable under one refinement step.

    The relative increase (fine_max - coarse_max) / coarse_max is compared to
    the threshold. A finite maximum that grows by less than the threshold
    fraction (or shrinks) returns [True, delta], and [False, delta]
    otherwise. Non-finite maxima never pass and report delta = inf.

    Parameters
    ----------
    coarse_max : float
        Maximum at the coarse resolution.
    fine_max : float
        Maximum after doubling the family and the quadrature orders.
    threshold_fraction : float, optional, default=0.05
        Largest accepted relative increase.

    Examples
    --------
    >>> is_refinement_stable(1.0, 1.02)[0]
    True
    >>> is_refinement_stable(1.0, 2.0)
    [False, 1.0]
    """
    if threshold_fraction <= 0.0:
        raise ValueError(
            f"Passed 'threshold_fraction' value: {threshold_fraction}, "
            "expected value greater than 0.0."
        )
    if not (np.isfinite(coarse_max) and np.isfinite(fine_max)):
        return [False, float("inf")]
    if coarse_max == 0:
        if fine_max == 0:
            return [True, 0.0]
        return [False, float("inf")]
    delta = float((fine_max - coarse_max) / abs(coarse_max))
    return [bool(delta < threshold_fraction), delta]


def prefix_stability(
    values: npt.ArrayLike,
    threshold_fraction: float = 0.05,
) -> List:
    """Check if the maximum of a battery is stable when the battery doubles.

    The first half of ``values`` is the battery of the requested size, the
    whole array its doubled counterpart drawn with the same seed.
    Returns [passed, delta] as ``is_refinement_stable``.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise ValueError(
            f"Passed {values.size} battery values, expected 2 or more."
        )
    half = values.size // 2
    return is_refinement_stable(
        float(np.max(values[:half])), float(np.max(values)), threshold_fraction
    )
