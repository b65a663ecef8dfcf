"""Spectral application of the semigroups and the endpoint operators.

Every operator here is diagonal in the Laguerre basis, so it acts on the
coefficients of a SpectralFunction. These are the reference values the
kernel path is checked against.
"""
import logging

import numpy as np
from scipy import special

from laguerre_project.src.kernels.singular import check_omega, check_riesz_order, laplace_symbol
from laguerre_project.src.operators.functions import SpectralFunction, synthesize
from laguerre_project.src.operators.timegrid import TimeGrid
from laguerre_project.src.operators.variation import rho_variation_batch
from laguerre_project.src.setting.quad import integrate_adaptive
from laguerre_project.src.setting.specfun import laguerre_table
from laguerre_project.src.utils.errors import CapacityError, DomainError

logger = logging.getLogger(__name__)

MAX_TIME_ORDER = 3
# Abel parameters of the Riesz sums, halved twice for the extrapolation.
ABEL_EPSILONS = (1e-2, 5e-3, 2.5e-3)


def _roots(f: SpectralFunction) -> np.ndarray:
    return np.sqrt(np.arange(f.degree + 1))


def apply_semigroup(kind: str, t: float, f: SpectralFunction) -> SpectralFunction:
    """Return W_t f (kind="heat") or P_t f (kind="poisson")."""
    if not t > 0:
        raise DomainError(f"Passed 't' value: {t}, expected value greater than 0.")
    k = np.arange(f.degree + 1)
    if kind == "heat":
        return f.with_coeffs(np.exp(-k * t) * f.coeffs)
    if kind == "poisson":
        return f.with_coeffs(np.exp(-np.sqrt(k) * t) * f.coeffs)
    raise ValueError(f"Unexpected semigroup kind {kind}, expected heat or poisson.")


def _check_time_orders(n: int, k: int):
    if n < 0 or k < 0 or n + k > MAX_TIME_ORDER:
        raise CapacityError(
            f"Passed orders (n={n}, k={k}), expected non-negative orders with "
            f"n + k <= {MAX_TIME_ORDER}."
        )


def mode_amplitudes(f: SpectralFunction, x, n: int = 0, k: int = 0) -> np.ndarray:
    """Return a_j(x) = c_j (-sqrt j)^k d^n/dx^n L_j(x), shape (K+1,) + x.shape.

    Then t^(n+k) d_x^n d_t^k P_t f(x) = t^(n+k) sum_j a_j(x) exp(-sqrt(j) t).
    """
    x = np.asarray(x, dtype=float)
    table = laguerre_table(f.degree, f.alpha, x, n)
    factor = f.coeffs * (-_roots(f)) ** k
    return factor.reshape((-1,) + (1,) * x.ndim) * table


def poisson_trajectory(f: SpectralFunction, x, times, n: int = 0, k: int = 0) -> np.ndarray:
    """Return t^(n+k) d_x^n d_t^k P_t f(x), shape x.shape + (len(times),)."""
    times = np.asarray(times, dtype=float)
    amplitudes = mode_amplitudes(f, x, n, k)
    decay = np.exp(-np.outer(times, _roots(f)))
    values = np.tensordot(decay, amplitudes, axes=(1, 0)) * (
        times**(n + k)
    ).reshape((-1,) + (1,) * (amplitudes.ndim - 1))
    return np.moveaxis(values, 0, -1)


def maximal(k: int, f: SpectralFunction, x, grid: TimeGrid = TimeGrid()):
    """Return max over the grid of |t^k d_t^k P_t f(x)|.

    Examples
    --------
    >>> round(float(maximal(0, SpectralFunction.basis(0, 0.0), 1.0)), 12)
    1.0
    """
    _check_time_orders(0, k)
    return np.max(np.abs(poisson_trajectory(f, x, grid.times, 0, k)), axis=-1)


def _check_square_orders(n: int, k: int):
    _check_time_orders(n, k)
    if n + k < 1:
        raise DomainError(
            f"Passed orders (n={n}, k={k}), the square function needs n + k >= 1."
        )


def gfunction(n: int, k: int, f: SpectralFunction, x: float, tol: float = 1e-10) -> float:
    """Return (int_0^inf |t^(n+k) d_x^n d_t^k P_t f(x)|^2 dt/t)^(1/2).

    The time integral is adaptive on (0, 1) and (1, inf).

    Raises
    ------
    ToleranceError
        When the tail does not converge.
    """
    _check_square_orders(n, k)
    amplitudes = mode_amplitudes(f, float(x), n, k)
    roots = _roots(f)
    m = n + k

    def integrand(t):
        value = t**m * np.dot(amplitudes, np.exp(-roots * t))
        return value * value / t

    total = integrate_adaptive(integrand, (0.0, 1.0), tol)
    total += integrate_adaptive(integrand, (1.0, np.inf), tol)
    return float(np.sqrt(total))


def gfunction_gram(n: int, k: int, f: SpectralFunction, x) -> np.ndarray:
    """Return the square function from the exact time integrals.

    int_0^inf t^(2m-1) exp(-(sqrt i + sqrt j) t) dt = Gamma(2m)/(sqrt i +
    sqrt j)^(2m), so g^2 = a^T G a with a the mode amplitudes.
    """
    _check_square_orders(n, k)
    m = n + k
    roots = _roots(f)[1:]
    amplitudes = mode_amplitudes(f, x, n, k)[1:]
    gram = special.gamma(2 * m) / np.add.outer(roots, roots) ** (2 * m)
    squared = np.einsum("i...,ij,j...->...", amplitudes, gram, amplitudes)
    return np.sqrt(np.maximum(squared, 0.0))


def riesz_spectral(n: int, f: SpectralFunction, epsilon: float = 0.0):
    """Return x -> sum_{k>=1} k^(-n/2) c_k e^(-epsilon k) d^n/dx^n L_k(x)."""
    check_riesz_order(n)
    k = np.arange(f.degree + 1)
    multiplier = np.zeros(f.degree + 1)
    multiplier[1:] = k[1:] ** (-n / 2.0) * np.exp(-epsilon * k[1:])
    transformed = f.with_coeffs(multiplier * f.coeffs)

    def handle(x):
        return synthesize(transformed, x, n)

    return handle


def riesz_spectral_abel(n: int, f: SpectralFunction, x) -> np.ndarray:
    """Return the Abel-regularized Riesz sum extrapolated to epsilon = 0.

    With S(e) the sum at parameter e, the first Richardson step removes the
    linear term from the pairs (e, e/2) and (e/2, e/4); the second removes
    the quadratic one.
    """
    e1, e2, e3 = (riesz_spectral(n, f, eps)(x) for eps in ABEL_EPSILONS)
    first = 2 * e2 - e1
    second = 2 * e3 - e2
    return (4 * second - first) / 3


def frac_integral(omega: float, f: SpectralFunction) -> SpectralFunction:
    """Return Delta^(-omega) f: c_k -> k^(-omega) c_k, c_0 -> 0."""
    check_omega(omega)
    k = np.arange(f.degree + 1)
    coeffs = np.zeros(f.degree + 1)
    coeffs[1:] = k[1:] ** (-float(omega)) * f.coeffs[1:]
    return f.with_coeffs(coeffs)


def laplace_multiplier(phi, f: SpectralFunction) -> SpectralFunction:
    """Return T_M f: c_k -> M(sqrt k) c_k with M the Laplace symbol of phi."""
    coeffs = np.zeros(f.degree + 1)
    if f.degree:
        roots = _roots(f)[1:]
        coeffs[1:] = np.asarray(laplace_symbol(phi, roots)) * f.coeffs[1:]
    return f.with_coeffs(coeffs)


def variation_operator(
    rho: float, k: int, f: SpectralFunction, x, grid: TimeGrid = TimeGrid()
):
    """Return the rho-variation of t -> t^k d_t^k P_t f(x) on the grid.

    Any finite grid gives a lower bound of the variation over (0, inf).
    """
    _check_time_orders(0, k)
    trajectory = poisson_trajectory(f, x, grid.times[::-1], 0, k)
    return rho_variation_batch(rho, trajectory)


def variation_upper_bound(k: int, f: SpectralFunction, x: float, tol: float = 1e-10) -> float:
    """Return int_0^inf |d/dt (t^k d_t^k P_t f(x))| dt, a bound on every V_rho."""
    _check_time_orders(0, k)
    amplitudes = mode_amplitudes(f, float(x), 0, k)
    roots = _roots(f)

    def integrand(t):
        slope = (k * t ** (k - 1) if k else 0.0) - roots * t**k
        return abs(float(np.dot(amplitudes, slope * np.exp(-roots * t))))

    return integrate_adaptive(integrand, (0.0, 1.0), tol) + integrate_adaptive(
        integrand, (1.0, np.inf), tol
    )


def imaginary_power_phi(beta: float):
    """Return t -> Re(t^(-2 beta i) / Gamma(1 - 2 beta i)).

    Its Laplace symbol is cos(2 beta log z), the real part of z^(2 beta i).
    """
    if not np.isfinite(beta):
        raise DomainError(f"Passed 'beta' value: {beta}, expected a finite value.")
    scale = 1 / special.gamma(1 - 2j * beta)

    def phi(t):
        t = np.asarray(t, dtype=float)
        return np.real(np.exp(-2j * beta * np.log(t)) * scale)

    return phi
