"""Geometric time grids for sup_t, L^2(dt/t) and rho-variation reductions."""
from dataclasses import dataclass

import numpy as np

from laguerre_project.src.utils.errors import DomainError


@dataclass(frozen=True)
class TimeGrid:
    """``count`` geometrically spaced times in [t_min, t_max].

    Examples
    --------
    >>> TimeGrid(1e-2, 1.0, 3).times
    array([0.01, 0.1 , 1.  ])
    """

    t_min: float = 1e-4
    t_max: float = 1e2
    count: int = 200

    def __post_init__(self):
        if not self.t_min > 0:
            raise DomainError(
                f"Passed 't_min' value: {self.t_min}, expected value greater "
                "than 0."
            )
        if not self.t_max > self.t_min:
            raise DomainError(
                f"Passed 't_max' value: {self.t_max}, expected value greater "
                f"than t_min={self.t_min}."
            )
        if int(self.count) != self.count or self.count < 2:
            raise DomainError(
                f"Passed 'count' value: {self.count}, expected an integer >= 2."
            )

    @property
    def times(self) -> np.ndarray:
        return np.geomspace(self.t_min, self.t_max, int(self.count))

    @property
    def log_step(self) -> float:
        return float(np.log(self.t_max / self.t_min) / (self.count - 1))

    def log_weights(self) -> np.ndarray:
        """Trapezoid weights for int g(t) dt/t on the grid."""
        weights = np.full(int(self.count), self.log_step)
        weights[[0, -1]] *= 0.5
        return weights

    def refined(self) -> "TimeGrid":
        """Return the grid with every gap halved (old times are kept)."""
        return TimeGrid(self.t_min, self.t_max, 2 * int(self.count) - 1)

    def as_dict(self) -> dict:
        return {"t_min": self.t_min, "t_max": self.t_max, "count": int(self.count)}
