"""Endpoint operators with both a spectral and a kernel evaluation path."""
from dataclasses import dataclass
from typing import Callable

import numpy as np

from laguerre_project.src.kernels.family import KernelFamily
from laguerre_project.src.operators.functions import (
    SampledFunction,
    SpectralFunction,
    synthesize,
)
from laguerre_project.src.operators.kernel_path import kernel_apply
from laguerre_project.src.operators.spectral import (
    frac_integral,
    gfunction_gram,
    laplace_multiplier,
    maximal,
    riesz_spectral_abel,
    variation_operator,
)
from laguerre_project.src.operators.timegrid import TimeGrid
from laguerre_project.src.setting.measure_geom import AlphaLike, as_alpha


@dataclass(frozen=True)
class EndpointOperator:
    """An operator T with its kernel family.

    ``spectral(f, x)`` evaluates T f at points from a SpectralFunction;
    ``apply_kernel`` integrates the kernel against a SampledFunction at
    points off its support. Sublinear operators return non-negative norms
    on both paths.
    """

    name: str
    family: KernelFamily
    spectral: Callable
    linear: bool = True

    def apply_spectral(self, f: SpectralFunction, x) -> np.ndarray:
        return np.asarray(self.spectral(f, x), dtype=float)

    def apply_kernel(self, f: SampledFunction, x) -> np.ndarray:
        return np.asarray(kernel_apply(self.family, f, x), dtype=float)


def maximal_operator(alpha: AlphaLike, k: int = 0, grid: TimeGrid = TimeGrid()) -> EndpointOperator:
    """Return P_{*,k} f = sup_t |t^k d_t^k P_t f|."""
    family = KernelFamily(
        "poisson_deriv", as_alpha(alpha), "sup_t", k=k, time_grid=grid
    )
    return EndpointOperator(
        f"maximal_k{k}", family, lambda f, x: maximal(k, f, x, grid), linear=False
    )


def gfunction_operator(
    alpha: AlphaLike, n: int = 0, k: int = 1, grid: TimeGrid = TimeGrid()
) -> EndpointOperator:
    """Return the square function g_{n,k}."""
    family = KernelFamily(
        "poisson_deriv", as_alpha(alpha), "l2_dt_over_t", n=n, k=k, time_grid=grid
    )
    return EndpointOperator(
        f"gfunction_n{n}_k{k}",
        family,
        lambda f, x: gfunction_gram(n, k, f, x),
        linear=False,
    )


def riesz_operator(alpha: AlphaLike, n: int = 1) -> EndpointOperator:
    """Return the Riesz transform of order n."""
    family = KernelFamily("riesz", as_alpha(alpha), n=n)
    return EndpointOperator(
        f"riesz_n{n}", family, lambda f, x: riesz_spectral_abel(n, f, x)
    )


def variation_operator_handle(
    alpha: AlphaLike, rho: float = 3.0, k: int = 0, grid: TimeGrid = TimeGrid()
) -> EndpointOperator:
    """Return V_rho({t^k d_t^k P_t}_t)."""
    family = KernelFamily(
        "poisson_deriv", as_alpha(alpha), "rho_variation", k=k, rho=rho, time_grid=grid
    )
    return EndpointOperator(
        f"variation_rho{rho:g}_k{k}",
        family,
        lambda f, x: variation_operator(rho, k, f, x, grid),
        linear=False,
    )


def fractional_operator(alpha: AlphaLike, omega: float = 1.0) -> EndpointOperator:
    """Return the negative power Delta^(-omega)."""
    family = KernelFamily("fractional", as_alpha(alpha), omega=omega)
    return EndpointOperator(
        f"frac_omega{omega:g}",
        family,
        lambda f, x: synthesize(frac_integral(omega, f), x),
    )


def multiplier_operator(alpha: AlphaLike, phi: Callable, phi_name: str = "phi") -> EndpointOperator:
    """Return the Laplace-transform-type multiplier T_M with symbol of ``phi``."""
    family = KernelFamily("multiplier", as_alpha(alpha), phi=phi, phi_name=phi_name)
    return EndpointOperator(
        f"multiplier_{phi_name}",
        family,
        lambda f, x: synthesize(laplace_multiplier(phi, f), x),
    )
