"""Riesz, fractional-integral and Laplace-multiplier kernels.

All three are time integrals of the heat or Poisson kernel. The Riesz and
fractional kernels are pulled back to r = exp(-t/2), where they become
sum_r w_r A(r) T(r) with an explicit radial weight T. The multiplier kernel
is a t-integral of phi(t) against -d_t P_t, evaluated for each t from one
precomputed set of heat amplitudes.
"""
import logging

import numpy as np
from scipy import special

from laguerre_project.src.kernels.heat import check_points
from laguerre_project.src.kernels.poisson import poisson_radial_weight
from laguerre_project.src.kernels.representation import (
    heat_derivative,
    minus_log_r,
    radial_nodes,
    radial_sum,
)
from laguerre_project.src.setting.measure_geom import AlphaLike
from laguerre_project.src.setting.quad import DEFAULT_N_R, DEFAULT_N_S, integrate_adaptive
from laguerre_project.src.utils.errors import CapacityError, DomainError, NearDiagonalError

logger = logging.getLogger(__name__)

MAX_RIESZ_ORDER = 3
NEAR_DIAGONAL = 1e-6
# Range of log t over which the multiplier sweeps integrate.
MULTIPLIER_LOG_T = (np.log(1e-8), np.log(1e3))


def _check_off_diagonal(x, y, what: str):
    if np.any(np.abs(np.asarray(x) - np.asarray(y)) < NEAR_DIAGONAL):
        raise NearDiagonalError(
            f"The {what} kernel is singular at x = y; passed points closer "
            f"than {NEAR_DIAGONAL}."
        )


def riesz_radial_weight(n: int, r, complement):
    """Return (2 / Gamma(n/2)) u^(n/2 - 1) / r with u = -2 log r."""
    u = 2 * minus_log_r(r, complement)
    return 2 / special.gamma(n / 2) * u ** (n / 2 - 1) / r


def fractional_radial_weight(omega: float, r, complement):
    """Return (2 / Gamma(omega)) u^(omega - 1) / r with u = -2 log r."""
    u = 2 * minus_log_r(r, complement)
    return 2 / special.gamma(omega) * u ** (omega - 1) / r


def check_riesz_order(n: int):
    if n < 1:
        raise DomainError(f"Passed 'n' value: {n}, expected value 1 or greater.")
    if n > MAX_RIESZ_ORDER:
        raise CapacityError(
            f"Passed 'n' value: {n}, expected value at most {MAX_RIESZ_ORDER}."
        )


def check_omega(omega: float):
    if not omega > 0:
        raise DomainError(
            f"Passed 'omega' value: {omega}, expected value greater than 0."
        )


def riesz_kernel(
    n: int,
    x,
    y,
    alpha: AlphaLike,
    dx: int = 0,
    dy: int = 0,
    n_r: int = DEFAULT_N_R,
    n_s: int = DEFAULT_N_S,
):
    """Return the kernel of the n-th order Riesz transform off the diagonal.

    K(x, y) = (2 / Gamma(n/2)) int_0^1 (-2 log r)^(n/2-1) d_x^n W(x, y) dr/r,
    the r-form of (1 / Gamma(n/2)) int_0^inf t^(n/2-1) d_x^n W_t dt. The
    optional ``dx`` and ``dy`` add one x- or y-derivative.

    Raises
    ------
    NearDiagonalError
        When |x - y| < 1e-6.
    """
    check_riesz_order(n)
    x, y = check_points(x, y)
    _check_off_diagonal(x, y, "Riesz")
    r, complement, w = radial_nodes(x, y, n_r)
    amplitude = heat_derivative(
        n + dx, dy, r, complement, x[..., None], y[..., None], alpha, n_s
    )
    return radial_sum(amplitude, w, riesz_radial_weight(n, r, complement))


def riesz_kernel_tform(n: int, x: float, y: float, alpha: AlphaLike, tol: float = 1e-10) -> float:
    """Return the Riesz kernel from its t-form by adaptive quadrature."""
    check_riesz_order(n)
    _check_off_diagonal(x, y, "Riesz")
    scale = special.gamma(n / 2)

    def integrand(t):
        value = heat_derivative(
            n, 0, np.exp(-t / 2), -np.expm1(-t / 2), x, y, alpha
        )
        return float(t ** (n / 2 - 1) * value) / scale

    knee = max((x - y) ** 2, 1e-3)
    return integrate_adaptive(integrand, (0.0, knee), tol) + integrate_adaptive(
        integrand, (knee, np.inf), tol
    )


def frac_kernel(
    omega: float,
    x,
    y,
    alpha: AlphaLike,
    dx: int = 0,
    dy: int = 0,
    n_r: int = DEFAULT_N_R,
    n_s: int = DEFAULT_N_S,
):
    """Return the kernel of the negative power Delta^(-omega).

    Computed as (1 / Gamma(omega)) int_0^inf t^(omega-1) (W_t(x, y) - 1) dt
    in its r-form, which reproduces the eigenvalues k^(-omega) and kills the
    constant mode. For omega <= 1/2 the kernel is unbounded on the diagonal
    and such points are refused.
    """
    check_omega(omega)
    x, y = check_points(x, y)
    if omega <= 0.5 or dx or dy:
        _check_off_diagonal(x, y, "fractional")
    r, complement, w = radial_nodes(x, y, n_r)
    amplitude = heat_derivative(
        dx,
        dy,
        r,
        complement,
        x[..., None],
        y[..., None],
        alpha,
        n_s,
        minus_one=(dx == 0 and dy == 0),
    )
    return radial_sum(amplitude, w, fractional_radial_weight(omega, r, complement))


def frac_kernel_printed(
    omega: float,
    x,
    y,
    alpha: AlphaLike,
    n_r: int = DEFAULT_N_R,
    n_s: int = DEFAULT_N_S,
):
    """Return (1 / Gamma(omega)) int_0^1 (W - 1) dr / (r (-log r)^(1-omega)).

    The measure is taken literally, without the Jacobian of t = -2 log r,
    so the result is 2^(-omega) times ``frac_kernel`` and its eigenvalues
    are (2k)^(-omega).
    """
    check_omega(omega)
    x, y = check_points(x, y)
    if omega <= 0.5:
        _check_off_diagonal(x, y, "fractional")
    r, complement, w = radial_nodes(x, y, n_r)
    amplitude = heat_derivative(
        0, 0, r, complement, x[..., None], y[..., None], alpha, n_s, minus_one=True
    )
    measure = minus_log_r(r, complement) ** (omega - 1) / (special.gamma(omega) * r)
    return radial_sum(amplitude, w, measure)


def phi_values(phi, t):
    """Evaluate ``phi`` on an array, falling back to scalar calls."""
    t = np.asarray(t, dtype=float)
    try:
        values = np.asarray(phi(t), dtype=float)
        return np.broadcast_to(values, t.shape)
    except (TypeError, ValueError):
        return np.vectorize(lambda v: float(phi(v)))(t)


def multiplier_time_rule(count: int = 301):
    """Return log-spaced times and trapezoid weights for int g(t) dt."""
    log_t = np.linspace(*MULTIPLIER_LOG_T, count)
    h = log_t[1] - log_t[0]
    t = np.exp(log_t)
    weights = h * t
    weights[[0, -1]] *= 0.5
    return t, weights


def multiplier_kernel(
    phi,
    x: float,
    y: float,
    alpha: AlphaLike,
    dx: int = 0,
    dy: int = 0,
    tol: float = 1e-9,
    n_r: int = DEFAULT_N_R,
) -> float:
    """Return K_phi(x, y) = int_0^inf phi(t) (-d_t P_t)(x, y) dt.

    The heat amplitudes on the radial nodes are computed once; the time
    integral is then adaptive in t. The amplitude is W itself rather than
    W - 1: d_t kills the constant either way, and off the diagonal W
    vanishes where the small-t time factor cancels.

    Raises
    ------
    ToleranceError
        When the adaptive time integral does not converge.
    """
    x, y = (float(v) for v in check_points(x, y))
    _check_off_diagonal(x, y, "multiplier")
    r, complement, w = radial_nodes(x, y, n_r)
    weighted = w * heat_derivative(dx, dy, r, complement, x, y, alpha)

    def integrand(t):
        return -float(phi(t)) * float(
            np.dot(weighted, poisson_radial_weight(1, 0, t, r, complement))
        )

    knee = max(abs(x - y), 0.1)
    value = integrate_adaptive(integrand, (0.0, knee), tol)
    value += integrate_adaptive(integrand, (knee, np.inf), tol)
    logger.debug("multiplier kernel at (%s, %s): %s", x, y, value)
    return value


def laplace_symbol(phi, z, tol: float = 1e-10):
    """Return M(z) = z int_0^inf exp(-z t) phi(t) dt for z > 0.

    With t = exp(s) / z the integral is int exp(s - e^s) phi(e^s / z) ds,
    which also handles phi oscillating in log t.

    Examples
    --------
    >>> round(float(laplace_symbol(lambda t: 1.0, 2.0)), 10)
    1.0
    """
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0)):
        raise DomainError(f"Passed 'z' value: {z}, expected values greater than 0.")

    def one(zv):
        def integrand(s):
            return np.exp(s - np.exp(s)) * float(phi(np.exp(s) / zv))

        return integrate_adaptive(integrand, (-40.0, 4.0), tol)

    values = np.array([one(zv) for zv in z.ravel()])
    return values.reshape(z.shape) if z.ndim else float(values[0])
