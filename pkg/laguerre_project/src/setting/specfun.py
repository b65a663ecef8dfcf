"""Laguerre and Hermite polynomials, the quadratic form q and its estimates."""
from math import factorial

import numpy as np
import numpy.typing as npt
from scipy import special

from laguerre_project.src.setting.measure_geom import AlphaLike, as_alpha
from laguerre_project.src.utils.errors import CapacityError, DomainError

K_MAX = 256
MAX_DERIVATIVE = 4
# Below 1 - r < AUX_SERIES_SEAM the ratio (-log r)/(1 - r^2) uses its series.
AUX_SERIES_SEAM = 1e-6

# d^k/dt^k (t exp(-a t^2)) = exp(-a t^2) * sum(coef * a**p * t**q)
POISSON_TIME_TABLE = {
    0: ((1.0, 0, 1),),
    1: ((1.0, 0, 0), (-2.0, 1, 2)),
    2: ((-6.0, 1, 1), (4.0, 2, 3)),
    3: ((-6.0, 1, 0), (24.0, 2, 2), (-8.0, 3, 4)),
    4: ((60.0, 2, 1), (-80.0, 3, 3), (16.0, 4, 5)),
}

Q_ESTIMATE_NAMES = (
    "swap_identity",
    "completed_square",
    "cross_term",
    "negative_s",
    "scaled_sum",
    "scaled_x",
    "scaled_y",
    "split_in_s",
    "swapped_square",
)


def _check_degree(k: int, n_deriv: int):
    if k < 0 or k > K_MAX:
        raise CapacityError(
            f"Passed 'k' value: {k}, expected value between 0 and {K_MAX}."
        )
    if n_deriv < 0 or n_deriv > MAX_DERIVATIVE:
        raise CapacityError(
            f"Passed 'n_deriv' value: {n_deriv}, expected value between 0 "
            f"and {MAX_DERIVATIVE}."
        )


def laguerre_norm(k: int, alpha: AlphaLike) -> float:
    """Return sqrt(Gamma(alpha+1) k! / Gamma(alpha+k+1))."""
    a = as_alpha(alpha).alpha
    return float(
        np.exp(
            0.5
            * (
                special.gammaln(a + 1)
                + special.gammaln(k + 1)
                - special.gammaln(a + k + 1)
            )
        )
    )


def _chain_coefficient(n: int, m: int) -> float:
    # d^n/dx^n f(x^2) = sum_m n!/((2m-n)!(n-m)!) (2x)^(2m-n) f^(m)(x^2)
    return factorial(n) / (factorial(2 * m - n) * factorial(n - m))


def laguerre_normalized(
    k: int, alpha: AlphaLike, x: npt.ArrayLike, n_deriv: int = 0
) -> np.ndarray:
    """Return the n-th x-derivative of the normalized Laguerre function.

    The function is sqrt(Gamma(alpha+1)k!/Gamma(alpha+k+1)) L_k^alpha(x**2)
    with L_k^alpha the classical polynomial. Derivatives in u = x**2 follow
    d/du L_k^alpha = -L_{k-1}^{alpha+1} and are carried to x by the chain
    rule through x**2.

    Parameters
    ----------
    k : int
        Degree, 0 <= k <= 256.
    alpha : AlphaParam or float
        The order.
    x : numpy.typing.ArrayLike
        Points in [0, inf).
    n_deriv : int, optional, default=0
        Derivative order, at most 4.

    Examples
    --------
    >>> round(float(laguerre_normalized(1, 0.0, 1.0, n_deriv=1)), 12)
    -2.0
    """
    _check_degree(k, n_deriv)
    a = as_alpha(alpha).alpha
    x = np.asarray(x, dtype=float)
    u = x * x
    total = np.zeros_like(x)
    for m in range((n_deriv + 1) // 2, n_deriv + 1):
        if m > k:
            continue
        du_m = (-1) ** m * special.eval_genlaguerre(k - m, a + m, u)
        total = total + _chain_coefficient(n_deriv, m) * (2 * x) ** (
            2 * m - n_deriv
        ) * du_m
    return laguerre_norm(k, a) * total


def laguerre_table(
    K: int, alpha: AlphaLike, x: npt.ArrayLike, n_deriv: int = 0
) -> np.ndarray:
    """Return the array [d^n/dx^n L_k(x)] of shape (K+1,) + shape(x)."""
    _check_degree(K, n_deriv)
    x = np.asarray(x, dtype=float)
    return np.stack(
        [laguerre_normalized(k, alpha, x, n_deriv) for k in range(K + 1)]
    )


def hermite(n: int, x: npt.ArrayLike) -> np.ndarray:
    """Return the physicists' Hermite polynomial H_n(x)."""
    if n < 0:
        raise DomainError(
            f"Passed 'n' value: {n}, expected value 0 or greater."
        )
    return special.eval_hermite(n, np.asarray(x, dtype=float))


def jacobi_weight(s: npt.ArrayLike, alpha: AlphaLike) -> np.ndarray:
    """Return Pi_alpha(s), the probability density on (-1, 1)."""
    alpha = as_alpha(alpha)
    s = np.asarray(s, dtype=float)
    return alpha.pi_alpha_const * (1 - s * s) ** (alpha.alpha - 0.5)


def q_form(x: npt.ArrayLike, y: npt.ArrayLike, s: npt.ArrayLike) -> np.ndarray:
    """Return q(x, y, s) = x^2 + y^2 - 2xys."""
    x, y, s = (np.asarray(v, dtype=float) for v in (x, y, s))
    return x * x + y * y - 2 * x * y * s


def check_q_estimates(x, y, r, s) -> np.ndarray:
    """Evaluate the two identities and seven lower bounds of q, in the order
    of Q_ESTIMATE_NAMES.

    Returns a boolean array of shape (9,) + broadcast shape. The identities
    are compared with a relative tolerance scaled by the size of the terms
    involved; the inequalities get a 1e-12 relative slack for rounding.
    "negative_s" is asserted for s < 0 and the three "scaled_*" bounds for
    s >= 0; outside their range they are reported as satisfied.
    """
    x, y, r, s = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (x, y, r, s))
    )
    one_m_r2 = 1 - r * r
    q_sym = q_form(x, r * y, s)
    q_rx = q_form(r * x, y, s)
    scale = 1 + x * x + y * y
    slack = 1e-12 * scale

    lhs0 = q_rx / one_m_r2 - y * y
    rhs0 = q_sym / one_m_r2 - x * x
    e0 = np.abs(lhs0 - rhs0) <= 1e-10 * (scale / one_m_r2 + np.abs(lhs0))
    e1 = np.abs(q_sym - ((x - r * y) ** 2 + 2 * x * y * r * (1 - s))) <= slack
    e2 = q_sym >= 2 * x * y * r * (1 - s) - slack
    r2_sum = r * r * (x * x + y * y)
    e3 = np.where(s < 0, q_sym >= r2_sum - slack, True)
    nonneg = s >= 0
    e4 = np.where(nonneg, q_sym >= r2_sum * (1 - s) - slack, True)
    e5 = np.where(nonneg, q_sym >= x * x * r * r * (1 - s) - slack, True)
    e6 = np.where(nonneg, q_sym >= y * y * r * r * (1 - s) - slack, True)
    e7 = q_sym >= (x - r * y * s) ** 2 + y * y * r * r * (1 - s * s) - slack
    e8 = q_rx >= (r * x - y * s) ** 2 - slack
    return np.stack([e0, e1, e2, e3, e4, e5, e6, e7, e8])


def _log_ratio(r: np.ndarray) -> np.ndarray:
    """Return (-log r)/(1 - r^2) on (0, 1], with its series near r = 1."""
    eps = 1 - r
    near_one = eps < AUX_SERIES_SEAM
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = -np.log(r) / (eps * (1 + r))
    series = (1 + eps / 2 + eps * eps / 3) / (2 - eps)
    return np.where(near_one, series, direct)


def aux_functions(r: npt.ArrayLike, n: int):
    """Return (phi(r), psi(r), xi_n(r)) on [0, 1].

    phi = (1-r^2)/(-log r), psi = r(-log r)/(1-r^2) and
    xi_n = r^n (-log r)^(n/2-1)/(1-r^2)^(n/2-1); all three vanish at r=0 and
    take their limits at r=1.
    """
    r = np.asarray(r, dtype=float)
    if np.any((r < 0) | (r > 1)) or np.any(np.isnan(r)):
        raise DomainError(
            f"Passed 'r' value: {r}, expected values in [0, 1]."
        )
    if n < 0:
        raise DomainError(f"Passed 'n' value: {n}, expected value 0 or greater.")
    positive = r > 0
    safe = np.where(positive, r, 0.5)
    ratio = _log_ratio(safe)
    phi = np.where(positive, 1 / ratio, 0.0)
    psi = np.where(positive, safe * ratio, 0.0)
    xi = np.where(positive, safe**n * ratio ** (n / 2 - 1), 0.0)
    return phi, psi, xi


def aux_supremum(name: str, n: int = 1, grid_size: int = 10**6) -> float:
    """Return the maximum of phi, psi or xi_n on a dense grid of [0, 1]."""
    names = ("phi", "psi", "xi")
    if name not in names:
        raise ValueError(
            f"Unexpected auxiliary function name {name}, expected one of "
            f"{names}."
        )
    values = aux_functions(np.linspace(0.0, 1.0, grid_size), n)
    return float(np.max(values[names.index(name)]))


def poisson_time_factor(k: int, t: npt.ArrayLike, a: npt.ArrayLike) -> np.ndarray:
    """Return d^k/dt^k (t exp(-a t^2)) from the embedded coefficient table."""
    if k not in POISSON_TIME_TABLE:
        raise CapacityError(
            f"Passed 'k' value: {k}, expected value between 0 and "
            f"{max(POISSON_TIME_TABLE)}."
        )
    t = np.asarray(t, dtype=float)
    a = np.asarray(a, dtype=float)
    poly = sum(c * a**p * t**q for c, p, q in POISSON_TIME_TABLE[k])
    return poly * np.exp(-a * t * t)
