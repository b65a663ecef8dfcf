"""Kernel application of operators to sampled functions off their support."""
import logging

import numpy as np

from laguerre_project.src.kernels.family import KernelFamily
from laguerre_project.src.kernels.singular import riesz_kernel
from laguerre_project.src.operators.functions import SampledFunction
from laguerre_project.src.utils.errors import ProximityError

logger = logging.getLogger(__name__)

MIN_SUPPORT_DISTANCE = 1e-3


def check_proximity(f: SampledFunction, x, distance: float = MIN_SUPPORT_DISTANCE):
    """Raise ProximityError when a point of ``x`` is too close to supp f."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if f.support is None:
        raise ProximityError(
            "Kernel application needs a sampled function with a declared support."
        )
    lo, hi = f.support
    gap = np.maximum(lo - x, x - hi)
    if np.any(gap < distance):
        bad = float(x[np.argmin(gap)])
        raise ProximityError(
            f"Passed 'x' value: {bad}, expected distance at least {distance} "
            f"from the support ({lo}, {hi})."
        )


def kernel_trajectory(family: KernelFamily, f: SampledFunction, x, dx: int = 0) -> np.ndarray:
    """Return int K(x, y) f(y) dgamma_alpha(y) before the time norm.

    The result has shape x.shape, plus a trailing time axis for
    time-indexed families.
    """
    check_proximity(f, x)
    x = np.asarray(x, dtype=float)
    active = f.values != 0
    nodes = f.nodes[active]
    mass = (f.weights * f.values)[active]
    results = []
    for point in np.atleast_1d(x):
        values = family.values(point, nodes, dx=dx)
        results.append(np.tensordot(mass, values, axes=(0, 0)))
    stacked = np.stack(results)
    return stacked.reshape(x.shape + stacked.shape[1:])


def kernel_apply(family: KernelFamily, f: SampledFunction, x, dx: int = 0) -> np.ndarray:
    """Return the X-norm of the kernel application at each point of ``x``.

    Signed for scalar (pointwise) families, a non-negative time norm
    otherwise.
    """
    trajectory = kernel_trajectory(family, f, x, dx)
    if family.time_indexed:
        return family.reduce(trajectory)
    return trajectory


def riesz_kernel_apply(n: int, f: SampledFunction, x: float) -> float:
    """Return int R_n(x, y) f(y) dgamma_alpha(y) for x off the support."""
    check_proximity(f, x)
    active = f.values != 0
    values = riesz_kernel(n, float(x), f.nodes[active], f.alpha)
    return float(np.dot((f.weights * f.values)[active], values))
