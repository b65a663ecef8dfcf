"""Operator kernels bundled with the Banach-space norm of their values.

A vector-valued kernel K(x, y) = {K_t(x, y)}_t is sampled on a time grid and
reduced by the norm of the space it takes values in: pointwise for scalar
kernels, sup_t for maximal operators, L^2(dt/t) for square functions and
rho-variation for variation operators.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from laguerre_project.src.kernels.heat import check_points
from laguerre_project.src.kernels.poisson import check_orders, poisson_radial_weight
from laguerre_project.src.kernels.representation import (
    heat_derivative,
    radial_nodes,
    radial_sum,
)
from laguerre_project.src.kernels.singular import (
    check_omega,
    check_riesz_order,
    fractional_radial_weight,
    multiplier_time_rule,
    phi_values,
    riesz_radial_weight,
)
from laguerre_project.src.operators.timegrid import TimeGrid
from laguerre_project.src.operators.variation import rho_variation_batch
from laguerre_project.src.setting.measure_geom import AlphaParam, as_alpha
from laguerre_project.src.setting.quad import DEFAULT_N_R, DEFAULT_N_S
from laguerre_project.src.utils.errors import DomainError

TAGS = (
    "heat",
    "heat_dx",
    "poisson",
    "poisson_deriv",
    "riesz",
    "fractional",
    "multiplier",
)
TIME_TAGS = ("heat", "poisson", "poisson_deriv")
TIME_NORMS = ("pointwise", "sup_t", "l2_dt_over_t", "rho_variation")


@dataclass(frozen=True)
class KernelFamily:
    """A kernel tag with its parameters and time norm.

    Parameters
    ----------
    tag : str
        One of heat, heat_dx, poisson, poisson_deriv, riesz, fractional,
        multiplier.
    alpha : AlphaParam or float
        Type parameter.
    time_norm : str, default="pointwise"
        One of pointwise, sup_t, l2_dt_over_t, rho_variation; the last three
        only for heat, poisson and poisson_deriv.
    n, k : int
        Space and time derivative orders (poisson_deriv, heat_dx, riesz).
    t : float, optional
        Fixed time of a pointwise time-indexed kernel.
    r : float, optional
        Fixed radius of heat_dx.
    omega : float
        Order of the fractional integral.
    rho : float
        Exponent of the rho-variation norm, rho > 2.
    phi : callable, optional
        Bounded function defining the multiplier.
    time_grid : TimeGrid
        Samples for sup_t and rho-variation, and the log-t rule of
        L^2(dt/t).
    """

    tag: str
    alpha: AlphaParam
    time_norm: str = "pointwise"
    n: int = 0
    k: int = 0
    t: Optional[float] = None
    r: Optional[float] = None
    omega: float = 1.0
    rho: float = 3.0
    phi: Optional[Callable] = field(default=None, compare=False)
    phi_name: str = ""
    time_grid: TimeGrid = TimeGrid()
    n_r: int = DEFAULT_N_R
    n_s: int = DEFAULT_N_S

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        if self.tag not in TAGS:
            raise ValueError(
                f"Unexpected kernel tag {self.tag}, expected one of {TAGS}."
            )
        if self.time_norm not in TIME_NORMS:
            raise ValueError(
                f"Unexpected time norm {self.time_norm}, expected one of "
                f"{TIME_NORMS}."
            )
        if self.time_norm != "pointwise" and self.tag not in TIME_TAGS:
            raise DomainError(
                f"Time norm {self.time_norm} needs a time-indexed tag, got "
                f"{self.tag}."
            )
        if self.tag == "riesz":
            check_riesz_order(self.n)
        elif self.tag == "fractional":
            check_omega(self.omega)
        elif self.tag in ("poisson", "poisson_deriv", "heat_dx"):
            check_orders(self.n, self.k)
        elif self.tag == "multiplier" and self.phi is None:
            raise DomainError("The multiplier kernel needs a function 'phi'.")
        if self.time_norm == "rho_variation" and not self.rho > 2:
            raise DomainError(
                f"Passed 'rho' value: {self.rho}, expected value greater than 2."
            )
        if self.time_norm == "pointwise" and self.tag in TIME_TAGS:
            if self.t is None or not self.t > 0:
                raise DomainError(
                    f"Passed 't' value: {self.t}, a pointwise {self.tag} kernel "
                    "needs a time t > 0."
                )
        if self.tag == "heat_dx" and not (self.r is not None and 0 < self.r < 1):
            raise DomainError(
                f"Passed 'r' value: {self.r}, expected value in (0, 1)."
            )

    @property
    def time_indexed(self) -> bool:
        return self.time_norm != "pointwise"

    def describe(self) -> dict:
        """Return the parameters that identify the family in reports."""
        return {
            "tag": self.tag,
            "alpha": self.alpha.alpha,
            "time_norm": self.time_norm,
            "n": self.n,
            "k": self.k,
            "t": self.t,
            "r": self.r,
            "omega": self.omega,
            "rho": self.rho,
            "phi": self.phi_name,
            "time_grid": self.time_grid.as_dict(),
            "n_r": self.n_r,
            "n_s": self.n_s,
        }

    def with_orders(self, n_r: int, n_s: int) -> "KernelFamily":
        """Return a copy with other quadrature orders."""
        params = {name: getattr(self, name) for name in self.__dataclass_fields__}
        params.update(n_r=n_r, n_s=n_s)
        return KernelFamily(**params)

    def _times(self):
        return self.time_grid.times

    def values(self, x, y, dx: int = 0, dy: int = 0, log_weight=0.0):
        """Return kernel samples at (x, y), with a trailing time axis if any.

        ``dx`` and ``dy`` add one x- or y-derivative to the kernel. For
        batched input the last axis of the (x, y) broadcast is the
        integration axis and one radial rule is shared along it.
        ``log_weight`` multiplies the samples by exp(log_weight).
        """
        x, y = check_points(x, y)
        log_weight = np.asarray(log_weight, dtype=float)
        if self.tag in ("heat", "heat_dx"):
            return self._heat_values(x, y, dx, dy, log_weight)
        if self.tag == "multiplier":
            return self._multiplier_values(x, y, dx, dy, log_weight)
        shared = self.time_indexed
        if shared:
            r, c, w = radial_nodes(x, y, self.n_r, shared=True)
        else:
            t = self.t if self.tag in TIME_TAGS else 0.0
            r, c, w = radial_nodes(x, y, self.n_r, t=t)
        nx = dx + (self.n if self.tag in ("poisson_deriv", "riesz") else 0)
        subtract = (
            nx == 0
            and dy == 0
            and (self.tag == "fractional" or (self.tag in TIME_TAGS and self.k >= 1))
        )
        amplitude = heat_derivative(
            nx,
            dy,
            r,
            c,
            x[..., None],
            y[..., None],
            self.alpha,
            self.n_s,
            log_weight=log_weight[..., None],
            minus_one=subtract,
        )
        if self.tag == "riesz":
            return radial_sum(amplitude, w, riesz_radial_weight(self.n, r, c))
        if self.tag == "fractional":
            return radial_sum(
                amplitude, w, fractional_radial_weight(self.omega, r, c)
            )
        k = self.k if self.tag == "poisson_deriv" else 0
        power = k + (self.n if self.tag == "poisson_deriv" else 0)
        if not shared:
            return radial_sum(
                amplitude, w, poisson_radial_weight(k, power, self.t, r, c)
            )
        times = self._times().reshape((-1,) + (1,) * r.ndim)
        return radial_sum(amplitude, w, poisson_radial_weight(k, power, times, r, c))

    def _heat_values(self, x, y, dx, dy, log_weight):
        if self.tag == "heat_dx":
            r = np.asarray(self.r)
            return heat_derivative(
                self.n + dx, dy, r, 1 - r, x, y, self.alpha, self.n_s, log_weight
            )
        if not self.time_indexed:
            r, c = np.exp(-self.t / 2), -np.expm1(-self.t / 2)
            return heat_derivative(dx, dy, r, c, x, y, self.alpha, self.n_s, log_weight)
        times = self._times()
        return heat_derivative(
            dx,
            dy,
            np.exp(-times / 2),
            -np.expm1(-times / 2),
            x[..., None],
            y[..., None],
            self.alpha,
            self.n_s,
            log_weight[..., None],
        )

    def _multiplier_values(self, x, y, dx, dy, log_weight):
        times, weights = multiplier_time_rule()
        r, c, w = radial_nodes(x, y, self.n_r, shared=True)
        amplitude = heat_derivative(
            dx,
            dy,
            r,
            c,
            x[..., None],
            y[..., None],
            self.alpha,
            self.n_s,
            log_weight=log_weight[..., None],
        )
        grid = times.reshape((-1,) + (1,) * r.ndim)
        d_t = radial_sum(amplitude, w, poisson_radial_weight(1, 0, grid, r, c))
        return -d_t @ (weights * phi_values(self.phi, times))

    def reduce(self, values):
        """Return the time norm of kernel samples (absolute value if scalar)."""
        values = np.asarray(values, dtype=float)
        if self.time_norm == "pointwise":
            return np.abs(values)
        if self.time_norm == "sup_t":
            return np.max(np.abs(values), axis=-1)
        if self.time_norm == "l2_dt_over_t":
            return np.sqrt(np.abs(values) ** 2 @ self.time_grid.log_weights())
        return rho_variation_batch(self.rho, values)

    def norm(self, x, y, dx: int = 0, dy: int = 0, log_weight=0.0):
        """Return reduce(values(...)), the X-norm of the kernel at (x, y)."""
        return self.reduce(self.values(x, y, dx, dy, log_weight))
