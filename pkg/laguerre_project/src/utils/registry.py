"""Utilities to load operators and multiplier functions by name."""
import numpy as np

from laguerre_project.src.operators.handles import (
    EndpointOperator,
    fractional_operator,
    gfunction_operator,
    maximal_operator,
    multiplier_operator,
    riesz_operator,
    variation_operator_handle,
)
from laguerre_project.src.operators.spectral import imaginary_power_phi
from laguerre_project.src.operators.timegrid import TimeGrid
from laguerre_project.src.setting.measure_geom import AlphaLike

OPERATOR_NAMES = ("maximal", "gfunction", "riesz", "variation", "frac", "multiplier")
PHI_NAMES = ("one", "zero", "cos", "texp", "imaginary")


def load_phi(name: str = "cos", beta: float = 0.5):
    """Based on a name, return a bounded function phi for the multipliers.

    Parameters
    ----------
    name : str, default="cos"
        One of one, zero, cos, texp (t e^-t) and imaginary (the real part of
        the imaginary-power function with parameter ``beta``).
    beta : float, default=0.5
        Parameter of the imaginary power.
    """
    if name == "one":
        return lambda t: np.ones_like(np.asarray(t, dtype=float))
    elif name == "zero":
        return lambda t: np.zeros_like(np.asarray(t, dtype=float))
    elif name == "cos":
        return np.cos
    elif name == "texp":
        return lambda t: np.asarray(t, dtype=float) * np.exp(-np.asarray(t, dtype=float))
    elif name == "imaginary":
        return imaginary_power_phi(beta)
    else:
        raise ValueError(
            f"Unexpected multiplier name. Multiplier name {name} is not "
            f"currently supported, expected one of {PHI_NAMES}."
        )


def load_operator(
    name: str,
    alpha: AlphaLike,
    n: int = 1,
    k: int = 0,
    omega: float = 1.0,
    rho: float = 3.0,
    phi: str = "cos",
    beta: float = 0.5,
    grid: TimeGrid = TimeGrid(),
) -> EndpointOperator:
    """Based on an operator name, return its EndpointOperator.

    Parameters
    ----------
    name : str
        One of maximal, gfunction, riesz, variation, frac, multiplier.
    alpha : AlphaParam or float
        Type parameter.
    n, k : int
        Space and time orders; the square function needs n + k >= 1.
    omega, rho : float
        Fractional order and variation exponent.
    phi : str
        Multiplier function name, see ``load_phi``.
    beta : float
        Parameter of the imaginary-power multiplier.
    grid : TimeGrid
        Time samples of the time-indexed operators.
    """
    if name == "maximal":
        return maximal_operator(alpha, k=k, grid=grid)
    elif name == "gfunction":
        return gfunction_operator(alpha, n=n, k=k, grid=grid)
    elif name == "riesz":
        return riesz_operator(alpha, n=n)
    elif name == "variation":
        return variation_operator_handle(alpha, rho=rho, k=k, grid=grid)
    elif name == "frac":
        return fractional_operator(alpha, omega=omega)
    elif name == "multiplier":
        return multiplier_operator(alpha, load_phi(phi, beta), phi_name=phi)
    else:
        raise ValueError(
            f"Unexpected operator name. Operator name {name} is not currently "
            f"supported, expected one of {OPERATOR_NAMES}."
        )
