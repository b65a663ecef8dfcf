"""The subordinated Poisson kernel and its (n, k) derivative kernels.

P_t = (t / (2 sqrt(pi))) int_0^inf exp(-t^2/(4u)) u^(-3/2) W_u du, and with
u = -2 log r this becomes an r-integral over (0, 1) whose time factor is
t exp(-a t^2), a = 1/(4u). Time derivatives act on that factor only.
"""
import numpy as np

from laguerre_project.src.kernels.heat import check_points, check_positive_time
from laguerre_project.src.kernels.representation import (
    heat_derivative,
    minus_log_r,
    radial_nodes,
    radial_sum,
)
from laguerre_project.src.setting.measure_geom import AlphaLike
from laguerre_project.src.setting.quad import DEFAULT_N_R, DEFAULT_N_S
from laguerre_project.src.setting.specfun import MAX_DERIVATIVE, poisson_time_factor
from laguerre_project.src.utils.errors import CapacityError, DomainError


def check_orders(n: int, k: int):
    if n < 0 or k < 0:
        raise DomainError(
            f"Passed orders (n={n}, k={k}), expected non-negative values."
        )
    if n + k > MAX_DERIVATIVE:
        raise CapacityError(
            f"Passed orders (n={n}, k={k}), expected n + k <= {MAX_DERIVATIVE}."
        )


def poisson_radial_weight(k: int, power: int, t, r, complement):
    """Return t^power d_t^k (t exp(-a t^2)) / (sqrt(pi) r u^(3/2)).

    ``t`` must already broadcast against ``r``; a leading time axis is kept.
    """
    u = 2 * minus_log_r(r, complement)
    a = 1 / (4 * u)
    t = np.asarray(t, dtype=float)
    return (
        t**power
        * poisson_time_factor(k, t, a)
        / (np.sqrt(np.pi) * r * u**1.5)
    )


def poisson_deriv_kernel(
    n: int,
    k: int,
    t,
    x,
    y,
    alpha: AlphaLike,
    n_r: int = DEFAULT_N_R,
    n_s: int = DEFAULT_N_S,
    dy: int = 0,
):
    """Return the signed value t^(n+k) d_x^n d_t^k P_t(x, y).

    Parameters
    ----------
    n, k : int
        Space and time orders, n + k <= 4.
    t : float or numpy.ndarray
        Time, t > 0.
    x, y : float or numpy.ndarray
        Points of (0, inf).
    alpha : AlphaParam or float
        Type parameter.
    n_r, n_s : int, optional
        Orders of the radial and s-rules.
    dy : int, optional, default=0
        Extra y-derivative (0 or 1).
    """
    check_orders(n, k)
    t = check_positive_time(t)
    x, y = check_points(x, y)
    r, complement, w = radial_nodes(x, y, n_r, t=t)
    amplitude = heat_derivative(
        n,
        dy,
        r,
        complement,
        x[..., None],
        y[..., None],
        alpha,
        n_s,
        minus_one=(n == 0 and dy == 0 and k >= 1),
    )
    weight = poisson_radial_weight(k, n + k, t[..., None], r, complement)
    return radial_sum(amplitude, w, weight)


def poisson_kernel(t, x, y, alpha: AlphaLike, n_r: int = DEFAULT_N_R, n_s: int = DEFAULT_N_S):
    """Return P_t(x, y)."""
    return poisson_deriv_kernel(0, 0, t, x, y, alpha, n_r, n_s)
