"""Quadrature rules for the s-, x- and r-integrals of the kernels.

Three integrals recur: s in (-1, 1) against Pi_alpha, x in (0, inf) against
gamma_alpha and r in (0, 1) with singular behavior at both endpoints. Rules
are cached per (alpha, N) and can be persisted to a binary sidecar.
"""
import logging
import os
import struct
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate as sp_integrate
from scipy import special

from laguerre_project.src.setting.measure_geom import AlphaLike, as_alpha
from laguerre_project.src.utils.errors import (
    DomainError,
    EvaluationError,
    NumericError,
    ToleranceError,
)

logger = logging.getLogger(__name__)

DEFAULT_N_S = 64
DEFAULT_N_X = 128
DEFAULT_N_R = 200
DE_HALF_WIDTH = 4.0


@dataclass(frozen=True, eq=False)
class QuadRule:
    """Nodes and positive weights of a one-dimensional rule.

    ``complements`` holds hi - node for rules whose nodes crowd the right
    endpoint, so integrands singular there can be evaluated without
    cancellation.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    order: int
    alpha: Optional[float] = None
    complements: Optional[np.ndarray] = None

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))


def _check_order(N: int):
    if int(N) != N or N < 1:
        raise DomainError(f"Passed 'N' value: {N}, expected an integer >= 1.")


@lru_cache(maxsize=64)
def _jacobi(alpha: float, N: int) -> QuadRule:
    try:
        s, w = special.roots_jacobi(N, alpha - 0.5, alpha - 0.5)
    except np.linalg.LinAlgError as err:
        raise NumericError(
            f"Gauss-Jacobi eigenproblem failed for alpha={alpha}, N={N}."
        ) from err
    w = w / np.sum(w)
    return QuadRule(s, w, "jacobi", N, alpha)


def gauss_jacobi_rule(alpha: AlphaLike, N: int = DEFAULT_N_S) -> QuadRule:
    """Return the N-point rule for Pi_alpha on (-1, 1), normalized to mass 1.

    Examples
    --------
    >>> rule = gauss_jacobi_rule(0.5, 8)
    >>> abs(rule.total_weight - 1) < 1e-12
    True
    """
    _check_order(N)
    return _jacobi(as_alpha(alpha).alpha, int(N))


@lru_cache(maxsize=64)
def _gen_laguerre(parameter: float, N: int) -> Tuple[np.ndarray, np.ndarray]:
    try:
        u, w = special.roots_genlaguerre(N, parameter)
    except np.linalg.LinAlgError as err:
        raise NumericError(
            f"Gauss-Laguerre eigenproblem failed for parameter={parameter}, "
            f"N={N}."
        ) from err
    return u, w


def gamma_alpha_rule(alpha: AlphaLike, N: int = DEFAULT_N_X) -> QuadRule:
    """Return the N-point rule for gamma_alpha on (0, inf).

    With u = x**2 the integral becomes (1/Gamma(alpha+1)) int f(sqrt(u))
    u**alpha exp(-u) du, so the generalized Gauss-Laguerre rule mapped back
    to x = sqrt(u) is exact for polynomials in x**2 of degree <= 2N-1.
    """
    _check_order(N)
    a = as_alpha(alpha).alpha
    u, w = _gen_laguerre(a, int(N))
    return QuadRule(np.sqrt(u), w / np.sum(w), "gen_laguerre", int(N), a)


def laguerre_slope_rule(alpha: AlphaLike, N: int = DEFAULT_N_S):
    """Return nodes and weights for int g(v) v**(alpha-1/2) exp(-v) dv.

    Used for s-integrals whose exponent is steep near s = 1, where
    v = lambda*(1 - s).
    """
    _check_order(N)
    return _gen_laguerre(as_alpha(alpha).alpha - 0.5, int(N))


@lru_cache(maxsize=64)
def _de_unit(N: int, stiffness: float) -> QuadRule:
    half_width = DE_HALF_WIDTH * stiffness
    t = np.linspace(-half_width, half_width, N) if N > 1 else np.zeros(1)
    h = t[1] - t[0] if N > 1 else 1.0
    z = np.pi * np.sinh(t)
    nodes = special.expit(z)
    complements = special.expit(-z)
    weights = h * np.pi * np.cosh(t) * nodes * complements
    if N == 1:
        # midpoint rule
        weights = np.ones(1)
    keep = (nodes > 0) & (complements > 0) & (weights > 0)
    return QuadRule(
        nodes[keep], weights[keep], "double_exponential", N,
        complements=complements[keep],
    )


def de_rule_unit(N: int = DEFAULT_N_R, stiffness: float = 1.0) -> QuadRule:
    """Return the tanh-sinh rule with N nodes on (0, 1).

    Nodes are r = expit(pi sinh t) on a uniform t-grid of half-width
    4 * stiffness, so they cluster double exponentially at both ends. The
    complements 1 - r are exact even where r rounds to 1.

    Examples
    --------
    >>> abs(de_rule_unit(50).total_weight - 1) < 1e-12
    True
    """
    _check_order(N)
    if not stiffness > 0:
        raise DomainError(
            f"Passed 'stiffness' value: {stiffness}, expected value greater "
            "than 0."
        )
    return _de_unit(int(N), float(stiffness))


def de_rule_interval(lo: float, hi: float, N: int = DEFAULT_N_R) -> QuadRule:
    """Return the unit tanh-sinh rule mapped to (lo, hi)."""
    if not (np.isfinite(lo) and np.isfinite(hi) and hi > lo):
        raise DomainError(
            f"Passed interval ({lo}, {hi}), expected finite lo < hi."
        )
    unit = de_rule_unit(N)
    width = hi - lo
    return QuadRule(
        lo + width * unit.nodes,
        width * unit.weights,
        "double_exponential",
        unit.order,
        complements=width * unit.complements,
    )


def split_radial_nodes(eps_star, N: int = DEFAULT_N_R):
    """Return r-nodes on (0, 1) split at r* = 1 - eps_star.

    Each half carries N // 2 tanh-sinh nodes. ``eps_star`` may be an array,
    in which case the returned (r, 1 - r, weights) have shape
    eps_star.shape + (2 * (N // 2),).
    """
    unit = de_rule_unit(max(N // 2, 1))
    eps_star = np.clip(np.asarray(eps_star, dtype=float), 1e-14, 0.5)[..., None]
    keep = 1 - eps_star
    r_low = keep * unit.nodes
    c_low = eps_star + keep * unit.complements
    r_high = 1 - eps_star * unit.complements
    c_high = eps_star * unit.complements
    r = np.concatenate(np.broadcast_arrays(r_low, r_high), axis=-1)
    complements = np.concatenate(np.broadcast_arrays(c_low, c_high), axis=-1)
    weights = np.concatenate(
        np.broadcast_arrays(keep * unit.weights, eps_star * unit.weights),
        axis=-1,
    )
    return r, complements, weights


def interval_gamma_rule(
    lo: float,
    hi: float,
    alpha: AlphaLike,
    N: int = 16,
    breakpoints: Optional[Sequence[float]] = None,
) -> QuadRule:
    """Return a composite Gauss-Legendre rule on (lo, hi) against gamma_alpha.

    The weights include the gamma_alpha density, so sum(w * f(nodes))
    approximates int_lo^hi f dgamma_alpha. Each panel between consecutive
    breakpoints gets N nodes.
    """
    alpha = as_alpha(alpha)
    if not (0 <= lo < hi < np.inf):
        raise DomainError(
            f"Passed interval ({lo}, {hi}), expected 0 <= lo < hi < inf."
        )
    edges = np.unique(
        np.concatenate([[lo, hi], np.asarray([] if breakpoints is None else breakpoints, dtype=float)])
    )
    edges = edges[(edges >= lo) & (edges <= hi)]
    g, gw = np.polynomial.legendre.leggauss(N)
    half = np.diff(edges)[:, None] / 2
    mid = (edges[:-1] + edges[1:])[:, None] / 2
    nodes = (mid + half * g).ravel()
    weights = (half * gw).ravel() * alpha.density(nodes)
    return QuadRule(nodes, weights, "composite_legendre", N, alpha.alpha)


def integrate(f: Callable, rule: QuadRule) -> float:
    """Return the weighted node sum of f over ``rule``.

    ``f`` is called once on the node array; scalar-only callables are
    evaluated node by node.
    """
    try:
        values = np.asarray(f(rule.nodes), dtype=float)
    except (TypeError, ValueError):
        values = None
    if values is None or values.shape != rule.nodes.shape:
        values = np.array([f(node) for node in rule.nodes], dtype=float)
    return weighted_sum(values, rule)


def integrate_with_complement(f: Callable, rule: QuadRule) -> float:
    """Return the node sum of f(node, complement) for endpoint-singular f."""
    if rule.complements is None:
        raise DomainError(f"Rule of kind {rule.kind} carries no complements.")
    values = np.asarray(f(rule.nodes, rule.complements), dtype=float)
    return weighted_sum(values, rule)


def weighted_sum(values: np.ndarray, rule: QuadRule) -> float:
    """Return sum(weights * values) after checking the values are finite."""
    bad = ~np.isfinite(values)
    if np.any(bad):
        node = float(rule.nodes[np.argmax(bad)])
        raise EvaluationError(
            f"Integrand is not finite at node {node}.", node=node
        )
    return float(np.dot(rule.weights, values))


def integrate_adaptive(
    f: Callable[[float], float],
    domain: Tuple[float, float],
    tol: float = 1e-10,
    max_depth: int = 40,
) -> float:
    """Integrate a scalar function adaptively with scipy's QUADPACK wrapper.

    Parameters
    ----------
    f : callable
        Scalar integrand.
    domain : (float, float)
        Integration limits, infinite endpoints allowed.
    tol : float, optional, default=1e-10
        Absolute and relative tolerance.
    max_depth : int, optional, default=40
        Bisection depth budget, translated into a subinterval limit.

    Raises
    ------
    ToleranceError
        When the integrator reports non-convergence; the best estimate is
        attached as ``estimate``.
    """
    lo, hi = domain
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", sp_integrate.IntegrationWarning)
        value, error = sp_integrate.quad(
            f, lo, hi, epsabs=tol, epsrel=tol, limit=5 * max_depth
        )
    if not np.isfinite(value):
        raise EvaluationError(
            f"Adaptive integral over ({lo}, {hi}) is not finite."
        )
    trouble = [
        w for w in caught if issubclass(w.category, sp_integrate.IntegrationWarning)
    ]
    if trouble or error > 10 * max(tol, tol * abs(value)):
        raise ToleranceError(
            f"Adaptive integral over ({lo}, {hi}) did not reach tol={tol}; "
            f"best estimate {value} with error {error}.",
            estimate=value,
            error=error,
        )
    return float(value)


class RuleCache:
    """Binary sidecar store for Gauss-Jacobi and Gauss-Laguerre rules.

    Each file holds a little-endian header (magic, version, kind, alpha, N)
    followed by N nodes and N weights as float64. Files that fail any check
    are ignored and rewritten.
    """

    MAGIC = b"LQRC"
    VERSION = 1
    HEADER = struct.Struct("<4sHBdI")
    KINDS = {"jacobi": 1, "gen_laguerre": 2}
    BUILDERS = {"jacobi": gauss_jacobi_rule, "gen_laguerre": gamma_alpha_rule}

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    def path(self, kind: str, alpha: float, N: int) -> str:
        return os.path.join(self.directory, f"{kind}_{alpha!r}_{N}.rule")

    def load(self, kind: str, alpha: AlphaLike, N: int) -> Optional[QuadRule]:
        """Return the cached rule, or None when missing or unreadable."""
        a = as_alpha(alpha).alpha
        filename = self.path(kind, a, N)
        if not os.path.isfile(filename):
            return None
        with open(filename, "rb") as handle:
            blob = handle.read()
        expected = self.HEADER.size + 16 * N
        try:
            magic, version, code, cached_alpha, cached_n = self.HEADER.unpack_from(
                blob
            )
        except struct.error:
            magic = None
        if (
            magic != self.MAGIC
            or len(blob) != expected
            or version != self.VERSION
            or code != self.KINDS[kind]
            or cached_alpha != a
            or cached_n != N
        ):
            warnings.warn(f"Ignoring corrupt quadrature cache file {filename}.")
            return None
        payload = np.frombuffer(blob, dtype="<f8", offset=self.HEADER.size)
        nodes, weights = payload[:N].copy(), payload[N:].copy()
        if not (np.all(np.isfinite(payload)) and np.all(weights > 0)):
            warnings.warn(f"Ignoring corrupt quadrature cache file {filename}.")
            return None
        return QuadRule(nodes, weights, kind, N, a)

    def store(self, rule: QuadRule):
        """Write ``rule`` to its sidecar file."""
        header = self.HEADER.pack(
            self.MAGIC, self.VERSION, self.KINDS[rule.kind], rule.alpha, rule.order
        )
        payload = np.concatenate([rule.nodes, rule.weights]).astype("<f8")
        with open(self.path(rule.kind, rule.alpha, rule.order), "wb") as handle:
            handle.write(header + payload.tobytes())

    def get(self, kind: str, alpha: AlphaLike, N: int) -> QuadRule:
        """Return the rule from cache, computing and storing it when needed."""
        if kind not in self.KINDS:
            raise ValueError(
                f"Unexpected rule kind {kind}, expected one of "
                f"{sorted(self.KINDS)}."
            )
        rule = self.load(kind, alpha, N)
        if rule is None:
            logger.debug("computing %s rule alpha=%s N=%s", kind, alpha, N)
            rule = self.BUILDERS[kind](alpha, N)
            self.store(rule)
        return rule
