"""The Laguerre measure, the admissible-interval geometry and interval masses."""
from dataclasses import dataclass, field
from typing import List, Tuple, Union
from warnings import warn

import numpy as np
from scipy import special

from laguerre_project.src.utils.errors import ConfigError, DomainError

# Below this value of alpha the Jacobi weight is nearly non-integrable and
# harness tolerances are relaxed tenfold.
REDUCED_ACCURACY_ALPHA = -0.45


@dataclass(frozen=True)
class AlphaParam:
    """Type parameter of the Laguerre measure with its derived constants.

    Parameters
    ----------
    alpha : float
        The order of the Laguerre polynomials, alpha > -1/2.

    Examples
    --------
    >>> a = AlphaParam(0.0)
    >>> round(a.gamma_alpha_norm, 6)
    2.0
    """

    alpha: float
    pi_alpha_const: float = field(init=False, repr=False)
    gamma_alpha_norm: float = field(init=False, repr=False)

    def __post_init__(self):
        alpha = float(self.alpha)
        if not np.isfinite(alpha) or alpha <= -0.5:
            raise DomainError(
                f"Passed 'alpha' value: {self.alpha}, expected value "
                "greater than -0.5."
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(
            self,
            "pi_alpha_const",
            float(
                np.exp(special.gammaln(alpha + 1) - special.gammaln(alpha + 0.5))
                / np.sqrt(np.pi)
            ),
        )
        object.__setattr__(
            self,
            "gamma_alpha_norm",
            float(2.0 * np.exp(-special.gammaln(alpha + 1))),
        )
        if alpha < REDUCED_ACCURACY_ALPHA:
            warn(
                f"alpha={alpha} is below {REDUCED_ACCURACY_ALPHA}; quadrature "
                "tolerances are relaxed tenfold."
            )

    @property
    def reduced_accuracy(self) -> bool:
        """Whether tolerances should be relaxed for this alpha."""
        return self.alpha < REDUCED_ACCURACY_ALPHA

    def density(self, x: np.ndarray) -> np.ndarray:
        """Return the density of gamma_alpha with respect to dx."""
        x = np.asarray(x, dtype=float)
        return np.exp(self.log_density(x))

    def log_density(self, x: np.ndarray) -> np.ndarray:
        """Return the logarithm of the density, -inf at x=0 for alpha>-1/2."""
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return (
                np.log(self.gamma_alpha_norm)
                + (2 * self.alpha + 1) * np.log(x)
                - x * x
            )


AlphaLike = Union[AlphaParam, float]


def as_alpha(alpha: AlphaLike) -> AlphaParam:
    """Coerce a float into an AlphaParam, passing AlphaParam through."""
    if isinstance(alpha, AlphaParam):
        return alpha
    return AlphaParam(alpha)


def admissibility_scale(x: float) -> float:
    """Return m(x) = min(1, 1/x).

    Examples
    --------
    >>> admissibility_scale(2.0)
    0.5
    """
    if not x > 0:
        raise DomainError(
            f"Passed 'x' value: {x}, expected value greater than 0."
        )
    return min(1.0, 1.0 / x)


def is_admissible(c: float, r: float, a: float) -> bool:
    """Check whether I(c, r) belongs to the class B_a."""
    for name, value in (("c", c), ("r", r), ("a", a)):
        if not value > 0:
            raise DomainError(
                f"Passed '{name}' value: {value}, expected value greater "
                "than 0."
            )
    return bool(r <= c and r <= a * admissibility_scale(c))


@dataclass(frozen=True)
class AdmissibleInterval:
    """The interval (c - r, c + r) of the class B_a.

    Parameters
    ----------
    center : float
        The center c_I > 0.
    radius : float
        The radius r_I, with r_I <= c_I and r_I <= class_a * m(c_I).
    class_a : float, default=1.0
        The admissibility parameter a.
    """

    center: float
    radius: float
    class_a: float = 1.0

    def __post_init__(self):
        # tolerate the rounding of a*m(c)*2^-i
        slack = 1.0 + 1e-12
        if not is_admissible(self.center, self.radius / slack, self.class_a):
            raise DomainError(
                f"Passed interval (c={self.center}, r={self.radius}) is not "
                f"admissible for class a={self.class_a}."
            )

    @property
    def lo(self) -> float:
        return max(self.center - self.radius, 0.0)

    @property
    def hi(self) -> float:
        return self.center + self.radius

    def dilate(self, factor: float) -> Tuple[float, float]:
        """Return the endpoints of I(c, factor*r) clipped to (0, inf)."""
        return (
            max(self.center - factor * self.radius, 0.0),
            self.center + factor * self.radius,
        )

    def interior_points(self, count: int = 9) -> np.ndarray:
        """Return ``count`` equispaced points strictly inside the interval."""
        return self.center + self.radius * np.linspace(-1, 1, count + 2)[1:-1]

    def as_dict(self) -> dict:
        return {"center": self.center, "radius": self.radius, "a": self.class_a}


def gamma_mass(lo: float, hi: float, alpha: AlphaLike) -> float:
    """Return gamma_alpha((lo, hi)) through the regularized incomplete gamma.

    With u = x**2 the mass is P(alpha+1, hi**2) - P(alpha+1, lo**2). Tail
    intervals are computed from the upper function Q to avoid cancellation.

    Parameters
    ----------
    lo, hi : float
        Endpoints with 0 <= lo <= hi <= inf.
    alpha : AlphaParam or float
        The type parameter.

    Examples
    --------
    >>> round(gamma_mass(0.0, 1.0, 0.0), 12) == round(1 - np.exp(-1), 12)
    True
    """
    alpha = as_alpha(alpha)
    if lo < 0 or hi < lo or np.isnan(lo) or np.isnan(hi):
        raise DomainError(
            f"Passed interval endpoints ({lo}, {hi}), expected "
            "0 <= lo <= hi."
        )
    a = alpha.alpha + 1
    u_lo, u_hi = lo * lo, hi * hi
    if u_lo > a:
        return float(special.gammaincc(a, u_lo) - special.gammaincc(a, u_hi))
    return float(special.gammainc(a, u_hi) - special.gammainc(a, u_lo))


def doubling_ratio(interval: AdmissibleInterval, alpha: AlphaLike) -> float:
    """Return gamma_alpha(I(c, 2r)) / gamma_alpha(I(c, r))."""
    lo, hi = interval.dilate(2.0)
    return gamma_mass(lo, hi, alpha) / gamma_mass(
        interval.lo, interval.hi, alpha
    )


def interval_family(a: float = 1.0, level: int = 0) -> List[AdmissibleInterval]:
    """Return the sweep family of admissible intervals.

    Centers lie on the geometric grid 2**(j / 2**level) for
    |j| <= 6 * 2**level plus a linear fill of [0.25, 4]. Radii are
    min(a*m(c), c) * 2**-i for i = 0..6+level, so every level halves the
    smallest radius and roughly doubles the family.

    Parameters
    ----------
    a : float, default=1.0
        The admissibility class.
    level : int, default=0
        The refinement level.
    """
    if level < 0:
        raise DomainError(
            f"Passed 'level' value: {level}, expected value 0 or greater."
        )
    steps = 2**level
    geometric = 2.0 ** (np.arange(-6 * steps, 6 * steps + 1) / steps)
    linear = np.linspace(0.25, 4.0, 8 * steps)
    centers = np.unique(np.round(np.concatenate([geometric, linear]), 12))
    family = []
    for c in centers:
        base = min(a * admissibility_scale(c), c)
        for i in range(7 + level):
            family.append(AdmissibleInterval(float(c), base * 2.0**-i, a))
    return family


def doubling_constant(
    family: List[AdmissibleInterval], alpha: AlphaLike
) -> float:
    """Return the empirical doubling constant sup_I doubling_ratio(I)."""
    return max(doubling_ratio(interval, alpha) for interval in family)


def tail_cutoff(alpha: AlphaLike, tolerance: float = 1e-12) -> float:
    """Return X_max = sqrt(alpha+2) + 8 after checking its tail mass."""
    alpha = as_alpha(alpha)
    x_max = float(np.sqrt(alpha.alpha + 2) + 8)
    tail = gamma_mass(x_max, np.inf, alpha)
    if tail >= tolerance:
        raise ConfigError(
            f"Tail mass {tail} beyond X_max={x_max} exceeds {tolerance}."
        )
    return x_max
