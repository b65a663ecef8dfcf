"""The heat kernel W_t(x, y) of the Laguerre operator and its derivatives."""
import numpy as np

from laguerre_project.src.kernels.representation import (
    exponent_terms,
    heat_derivative,
    s_average,
)
from laguerre_project.src.setting.measure_geom import AlphaLike, as_alpha
from laguerre_project.src.setting.quad import DEFAULT_N_S
from laguerre_project.src.setting.specfun import K_MAX, laguerre_table
from laguerre_project.src.utils.errors import DomainError


def check_positive_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise DomainError(f"Passed 't' value: {t}, expected values greater than 0.")
    return t


def check_radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(~((r > 0) & (r < 1))):
        raise DomainError(f"Passed 'r' value: {r}, expected values in (0, 1).")
    return r


def check_points(*points):
    checked = []
    for p in points:
        p = np.asarray(p, dtype=float)
        if np.any(~(p >= 0)) or np.any(~np.isfinite(p)):
            raise DomainError(
                f"Passed point value: {p}, expected finite values >= 0."
            )
        checked.append(p)
    return checked


def heat_kernel(t, x, y, alpha: AlphaLike, n_s: int = DEFAULT_N_S):
    """Return W_t(x, y) through its integral representation.

    Parameters
    ----------
    t : float or numpy.ndarray
        Time, t > 0.
    x, y : float or numpy.ndarray
        Points of (0, inf).
    alpha : AlphaParam or float
        Type parameter.
    n_s : int, optional, default=64
        Order of the s-rule.
    """
    t = check_positive_time(t)
    x, y = check_points(x, y)
    r = np.exp(-t / 2)
    return heat_derivative(0, 0, r, -np.expm1(-t / 2), x, y, alpha, n_s)


def heat_kernel_series(t, x, y, alpha: AlphaLike, K: int = 60):
    """Return the truncated eigen-expansion sum_k e^{-tk} L_k(x) L_k(y).

    Only meaningful when e^{-tK} is negligible; used as an independent
    check of ``heat_kernel``.
    """
    t = check_positive_time(t)
    x, y = check_points(x, y)
    if np.ndim(t):
        raise DomainError("The series form takes a single time t.")
    K = min(int(K), K_MAX)
    x, y = np.broadcast_arrays(x, y)
    k = np.arange(K + 1).reshape((K + 1,) + (1,) * x.ndim)
    table_x = laguerre_table(K, alpha, x)
    table_y = laguerre_table(K, alpha, y)
    return np.sum(np.exp(-t * k) * table_x * table_y, axis=0)


def heat_dx(n: int, r, x, y, alpha: AlphaLike, n_s: int = DEFAULT_N_S):
    """Return d_x^n W at r = e^{-t/2} for 0 <= n <= 4."""
    r = check_radius(r)
    x, y = check_points(x, y)
    return heat_derivative(n, 0, r, 1 - r, x, y, alpha, n_s)


def heat_dxdy(r, x, y, alpha: AlphaLike, n_s: int = DEFAULT_N_S):
    """Return d_x d_y W at r from its direct two-term representation.

    d_x d_y W = 2r/(1-r^2)^(alpha+3/2) int exp(E(s)) [s/sqrt(1-r^2)
    + 2r (rx-ys)(ry-xs)/(1-r^2)^(3/2)] Pi_alpha(s) ds. This is computed
    independently of the Hermite form used by ``heat_derivative``.
    """
    alpha = as_alpha(alpha)
    r = check_radius(r)
    x, y = check_points(x, y)
    e1, lam, one_m_r2 = exponent_terms(x, y, r, 1 - r)
    root = np.sqrt(one_m_r2)
    log_pref = np.log(2 * r) - (alpha.alpha + 1.5) * np.log(one_m_r2)

    def factor(s, x, y, r, root):
        return s / root + 2 * r * (r * x - y * s) * (r * y - x * s) / root**3

    return s_average(
        alpha, e1 + log_pref, lam, factor, n_s=n_s, x=x, y=y, r=r, root=root
    )
