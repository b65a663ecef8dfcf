"""Exact rho-variation of a sampled trajectory."""
import numpy as np

from laguerre_project.src.utils.errors import DomainError


def _check_rho(rho: float):
    if not rho > 2:
        raise DomainError(
            f"Passed 'rho' value: {rho}, expected value greater than 2."
        )


def turning_points(samples) -> np.ndarray:
    """Return the endpoints and strict local extrema of ``samples``.

    For rho >= 1 an optimal chain only visits these points: dropping an
    interior point of a monotone run never decreases the sum of powers.
    """
    values = np.asarray(samples, dtype=float)
    if values.size < 3:
        return values
    keep = np.concatenate([[True], np.diff(values) != 0])
    values = values[keep]
    if values.size < 3:
        return values
    step = np.diff(values)
    extremum = step[:-1] * step[1:] < 0
    return values[np.concatenate([[True], extremum, [True]])]


def rho_variation(rho: float, samples) -> float:
    """Return sup over subsequences of (sum |F_i - F_j|^rho)^(1/rho).

    The samples are taken in decreasing time order; the value does not
    depend on the direction. Uses best(j) = max_{i<j} best(i) +
    |F_i - F_j|^rho on the turning points of the sequence.

    Examples
    --------
    >>> round(rho_variation(3, [3, 1, 2, 0]), 12)
    3.0
    """
    _check_rho(rho)
    values = turning_points(samples)
    if values.size < 2:
        return 0.0
    best = np.zeros(values.size)
    for j in range(1, values.size):
        best[j] = np.max(best[:j] + np.abs(values[:j] - values[j]) ** rho)
    return float(np.max(best) ** (1 / rho))


def rho_variation_batch(rho: float, trajectories, axis: int = -1) -> np.ndarray:
    """Apply ``rho_variation`` along ``axis`` of a batch of trajectories."""
    _check_rho(rho)
    moved = np.moveaxis(np.asarray(trajectories, dtype=float), axis, -1)
    flat = moved.reshape(-1, moved.shape[-1])
    result = np.array([rho_variation(rho, row) for row in flat])
    return result.reshape(moved.shape[:-1])
