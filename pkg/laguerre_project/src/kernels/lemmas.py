"""The auxiliary double-integral kernels behind the endpoint estimates.

Each kernel is int_0^1 int_{-1}^1 R(r) G(r, s, x, y) exp(c E(s) + b)
(1 - r^2)^(-p) Pi_{alpha_w}(s) ds dr with E the heat exponent, c = 1 or
1/2 and p depending on the kernel. Kernels whose estimate takes the
supremum over y integrate in x and the other way round; ``LemmaSpec.role``
records which.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from laguerre_project.src.kernels.heat import check_points
from laguerre_project.src.kernels.representation import (
    exponent_terms,
    minus_log_r,
    radial_nodes,
    s_average,
)
from laguerre_project.src.setting.measure_geom import AlphaLike, as_alpha
from laguerre_project.src.setting.quad import DEFAULT_N_R, DEFAULT_N_S
from laguerre_project.src.setting.specfun import aux_functions
from laguerre_project.src.utils.errors import DomainError

# Roles: which variable is integrated over the complement of 2I.
INTEGRATE_X = "integrate_x"
INTEGRATE_Y = "integrate_y"


@dataclass(frozen=True)
class LemmaSpec:
    """Shape of one auxiliary kernel.

    ``log_radial(r, complement)`` is log R(r); ``factor(s, x, y, r, root)``
    is G. ``shift`` raises the Jacobi parameter by one for the kernels that
    carry Pi_{alpha+1}.
    """

    name: str
    power: float
    halved: bool = False
    shift: int = 0
    log_radial: Optional[Callable] = None
    factor: Optional[Callable] = None
    absolute: bool = False
    role: str = INTEGRATE_X


def _log_r(r, complement):
    return np.log(r)


def _two_log_r(r, complement):
    return 2 * np.log(r)


def _g_l32(s, x, y, r, root):
    return -2 * (r * (x * x + y * y) - x * y * s * (1 + r * r)) / root**4


def _g_l33(s, x, y, r, root):
    return (r * x - y * s) * (r * y - x * s)


def _g_l35(s, x, y, r, root):
    return x * y + 0 * s


def _g_k1(s, x, y, r, root):
    return x + 0 * s


def _g_k2(s, x, y, r, root):
    return x * (x - y * s * r)


def _g_k3(s, x, y, r, root):
    return x * y * (x - y * s * r) * (r * y - x * s)


def _g_k4(s, x, y, r, root):
    return y * (r * y - x * s)


def lemma_spec(lemma_id: str, omega: float = 1.0, beta: float = 0.0) -> LemmaSpec:
    """Return the kernel shape for ``lemma_id``.

    Accepted ids are L31, L31_omega, L32, L33, L34, L35 and L36_1 to L36_4;
    ``omega`` and ``beta`` parametrize L31_omega and L34.
    """
    if lemma_id == "L31":
        return LemmaSpec("L31", power=2.5, halved=True)
    if lemma_id == "L31_omega":
        if not omega > 0:
            raise DomainError(
                f"Passed 'omega' value: {omega}, expected value greater than 0."
            )

        def log_radial(r, complement):
            return (omega - 1) * np.log(minus_log_r(r, complement))

        return LemmaSpec("L31_omega", power=1.5, halved=True, log_radial=log_radial)
    if lemma_id == "L32":

        def log_radial(r, complement):
            phi, _, _ = aux_functions(r, 1)
            return 0.5 * np.log(phi) + np.log(r)

        return LemmaSpec("L32", power=1.5, log_radial=log_radial, factor=_g_l32, absolute=True)
    if lemma_id == "L33":
        return LemmaSpec("L33", power=3.5, log_radial=_log_r, factor=_g_l33)
    if lemma_id == "L34":
        if not beta >= 0:
            raise DomainError(
                f"Passed 'beta' value: {beta}, expected value 0 or greater."
            )

        def factor(s, x, y, r, root):
            return np.abs((r * x - y * s) / root) ** beta

        return LemmaSpec("L34", power=2.5, factor=factor, role=INTEGRATE_Y)
    if lemma_id == "L35":
        return LemmaSpec(
            "L35", power=3.5, shift=1, log_radial=_log_r, factor=_g_l35, role=INTEGRATE_Y
        )
    table = {
        "L36_1": (2.5, _log_r, _g_k1),
        "L36_2": (3.5, _log_r, _g_k2),
        "L36_3": (4.5, _two_log_r, _g_k3),
        "L36_4": (2.5, _log_r, _g_k4),
    }
    if lemma_id in table:
        power, log_radial, factor = table[lemma_id]
        return LemmaSpec(
            lemma_id, power=power, shift=1, log_radial=log_radial, factor=factor, absolute=True
        )
    raise ValueError(
        f"Unexpected lemma id {lemma_id}, expected one of L31, L31_omega, L32, "
        "L33, L34, L35, L36_1, L36_2, L36_3, L36_4."
    )


def lemma_kernel(
    lemma_id: str,
    x,
    y,
    alpha: AlphaLike,
    omega: float = 1.0,
    beta: float = 0.0,
    log_weight=0.0,
    n_r: int = DEFAULT_N_R,
    n_s: int = DEFAULT_N_S,
    shared: bool = False,
):
    """Evaluate the named auxiliary kernel at (x, y) by iterated quadrature.

    Parameters
    ----------
    lemma_id : str
        One of L31, L31_omega, L32, L33, L34, L35, L36_1 .. L36_4.
    x, y : float or numpy.ndarray
        Points of (0, inf).
    alpha : AlphaParam or float
        Type parameter.
    omega, beta : float, optional
        Parameters of L31_omega and L34.
    log_weight : float or numpy.ndarray, optional
        Added to the exponent, used to fold in the density of the
        integration variable.
    shared : bool, optional, default=False
        Share one radial rule along the last axis of the batch.

    Examples
    --------
    >>> float(lemma_kernel("L31", 2.0, 1.0, 0.0)) > 0
    True
    """
    alpha = as_alpha(alpha)
    spec = lemma_spec(lemma_id, omega, beta)
    x, y = check_points(x, y)
    power = alpha.alpha + spec.power
    r, complement, w = radial_nodes(x, y, n_r, shared=shared)
    xs, ys = x[..., None], y[..., None]
    e1, lam, one_m_r2 = exponent_terms(xs, ys, r, complement)
    root = np.sqrt(one_m_r2)
    exponent = -power * np.log(one_m_r2) + np.asarray(log_weight)[..., None]
    if spec.halved:
        e1, lam = e1 / 2 + xs * xs / 2, lam / 2
    if spec.log_radial is not None:
        exponent = exponent + spec.log_radial(r, complement)
    values = s_average(
        alpha.alpha + spec.shift,
        e1 + exponent,
        lam,
        spec.factor,
        n_s=n_s,
        **(
            {}
            if spec.factor is None
            else {"x": xs, "y": ys, "r": r, "root": root}
        ),
    )
    total = np.sum(w * values, axis=-1)
    return np.abs(total) if spec.absolute else total
