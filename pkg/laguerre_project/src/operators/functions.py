"""Functions on (0, inf) in spectral and sampled form."""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple
from warnings import warn

import numpy as np

from laguerre_project.src.setting.measure_geom import AlphaLike, AlphaParam, as_alpha
from laguerre_project.src.setting.quad import QuadRule, gamma_alpha_rule
from laguerre_project.src.setting.specfun import K_MAX, laguerre_table
from laguerre_project.src.utils.errors import CapacityError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Coefficients c_0..c_K of f in the normalized Laguerre basis.

    Parameters
    ----------
    alpha : AlphaParam
        Type parameter of the basis.
    coeffs : numpy.ndarray
        The coefficients, K <= 256.
    metadata : dict
        Precision flags raised while the coefficients were computed.
    """

    alpha: AlphaParam
    coeffs: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if coeffs.ndim != 1 or coeffs.size - 1 > K_MAX:
            raise CapacityError(
                f"Passed {coeffs.size} coefficients, expected a flat array of "
                f"at most {K_MAX + 1}."
            )
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def l2_norm(self) -> float:
        """The L^2(gamma_alpha) norm, by Parseval."""
        return float(np.sqrt(np.sum(self.coeffs**2)))

    def with_coeffs(self, coeffs) -> "SpectralFunction":
        return SpectralFunction(self.alpha, coeffs, dict(self.metadata))

    @classmethod
    def basis(cls, k: int, alpha: AlphaLike, scale: float = 1.0) -> "SpectralFunction":
        """Return scale * L_k as a SpectralFunction."""
        coeffs = np.zeros(k + 1)
        coeffs[k] = scale
        return cls(as_alpha(alpha), coeffs)

    @classmethod
    def combination(cls, terms: dict, alpha: AlphaLike) -> "SpectralFunction":
        """Return sum c * L_k for a mapping {k: c}."""
        coeffs = np.zeros(max(terms) + 1)
        for k, c in terms.items():
            coeffs[k] += c
        return cls(as_alpha(alpha), coeffs)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of f on the nodes of a rule integrating against gamma_alpha.

    Parameters
    ----------
    rule : QuadRule
        Nodes and weights with sum(w * g(nodes)) ~ int g dgamma_alpha.
    values : numpy.ndarray
        f at the nodes.
    alpha : AlphaParam
        Type parameter of the measure.
    support : (float, float), optional
        A closed interval containing every node where f is non-zero.
    """

    rule: QuadRule
    values: np.ndarray
    alpha: AlphaParam
    support: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.rule.nodes.shape:
            raise DomainError(
                f"Passed {values.shape} values for {self.rule.nodes.shape} nodes."
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("Sampled values must be finite at every node.")
        if self.support is not None:
            lo, hi = self.support
            outside = (self.rule.nodes < lo) | (self.rule.nodes > hi)
            if np.any(values[outside] != 0):
                raise DomainError(
                    f"Sampled function has non-zero values outside its support "
                    f"({lo}, {hi})."
                )
        object.__setattr__(self, "values", values)

    @property
    def nodes(self) -> np.ndarray:
        return self.rule.nodes

    @property
    def weights(self) -> np.ndarray:
        return self.rule.weights

    def integral(self) -> float:
        """Return int f dgamma_alpha."""
        return float(np.dot(self.weights, self.values))

    def lp_norm(self, q: float) -> float:
        """Return the L^q(gamma_alpha) norm, q in [1, inf]."""
        if np.isinf(q):
            return float(np.max(np.abs(self.values)))
        return float(np.dot(self.weights, np.abs(self.values) ** q) ** (1 / q))

    def scaled(self, factor: float) -> "SampledFunction":
        return SampledFunction(self.rule, factor * self.values, self.alpha, self.support)

    @classmethod
    def from_callable(
        cls,
        f: Callable,
        alpha: AlphaLike,
        rule: Optional[QuadRule] = None,
        support: Optional[Tuple[float, float]] = None,
    ) -> "SampledFunction":
        """Sample ``f`` on ``rule`` (default: the 128-point gamma_alpha rule)."""
        alpha = as_alpha(alpha)
        rule = gamma_alpha_rule(alpha) if rule is None else rule
        values = np.broadcast_to(np.asarray(f(rule.nodes), dtype=float), rule.nodes.shape)
        return cls(rule, values, alpha, support)


def expand(f: SampledFunction, K: int) -> SpectralFunction:
    """Return the Laguerre coefficients c_k = int f L_k dgamma_alpha, k <= K.

    A grid with fewer than 2K nodes aliases high modes; the result is then
    flagged in ``metadata["aliasing"]`` and a warning is raised.

    Examples
    --------
    >>> f = SampledFunction.from_callable(lambda x: np.ones_like(x), 0.0)
    >>> round(expand(f, 3).coeffs[0], 10)
    1.0
    """
    if K < 0 or K > K_MAX:
        raise CapacityError(f"Passed 'K' value: {K}, expected value between 0 and {K_MAX}.")
    metadata = {"aliasing": False, "grid_size": int(f.nodes.size)}
    if f.nodes.size < 2 * K:
        metadata["aliasing"] = True
        warn(
            f"Expansion to degree {K} on {f.nodes.size} nodes aliases high "
            "modes; use at least 2K nodes."
        )
    table = laguerre_table(K, f.alpha, f.nodes)
    coeffs = table @ (f.weights * f.values)
    return SpectralFunction(f.alpha, coeffs, metadata)


def synthesize(f: SpectralFunction, x, n_deriv: int = 0) -> np.ndarray:
    """Return sum_k c_k d^n/dx^n L_k(x)."""
    x = np.asarray(x, dtype=float)
    table = laguerre_table(f.degree, f.alpha, x, n_deriv)
    return np.tensordot(f.coeffs, table, axes=(0, 0))
