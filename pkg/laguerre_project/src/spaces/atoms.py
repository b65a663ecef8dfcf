"""Atoms of the Hardy space H^1(gamma_alpha) and atomic decompositions."""
import logging
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from laguerre_project.src.operators.functions import (
    SampledFunction,
    SpectralFunction,
    expand,
)
from laguerre_project.src.setting.measure_geom import (
    AdmissibleInterval,
    AlphaLike,
    AlphaParam,
    as_alpha,
    gamma_mass,
    is_admissible,
)
from laguerre_project.src.setting.quad import QuadRule, gamma_alpha_rule, interval_gamma_rule
from laguerre_project.src.utils.errors import AtomValidationError, DomainError

logger = logging.getLogger(__name__)

ATOM_TOLERANCE = 1e-9
PANEL_ORDER = 16
ATOM_PANELS = 8
FIXTURE_VERSION = 1


def _check_q(q: float):
    if not q > 1:
        raise DomainError(f"Passed 'q' value: {q}, expected value greater than 1.")


@dataclass(frozen=True, eq=False)
class Atom:
    """An (a, q, alpha)-atom.

    Parameters
    ----------
    kind : str
        "constant" for b = 1, "supported" for a mean-zero function on I.
    alpha : AlphaParam
        Type parameter of the measure.
    q : float
        Integrability exponent, q in (1, inf].
    interval : AdmissibleInterval, optional
        The support interval of a supported atom.
    sampled : SampledFunction, optional
        Values of a supported atom on a rule covering I.
    """

    kind: str
    alpha: AlphaParam
    q: float = 2.0
    interval: Optional[AdmissibleInterval] = None
    sampled: Optional[SampledFunction] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        _check_q(self.q)
        if self.kind not in ("constant", "supported"):
            raise ValueError(
                f"Unexpected atom kind {self.kind}, expected constant or supported."
            )
        if self.kind == "supported" and (self.interval is None or self.sampled is None):
            raise DomainError("A supported atom needs an interval and sampled values.")

    @classmethod
    def constant(cls, alpha: AlphaLike, q: float = 2.0) -> "Atom":
        return cls("constant", as_alpha(alpha), q)

    def as_sampled(self, N: int = 128) -> SampledFunction:
        """Return the atom on its rule (the gamma_alpha rule for b = 1)."""
        if self.kind == "constant":
            rule = gamma_alpha_rule(self.alpha, N)
            return SampledFunction(rule, np.ones(rule.nodes.size), self.alpha)
        return self.sampled

    def as_spectral(self, K: int) -> SpectralFunction:
        """Return the first K+1 Laguerre coefficients of the atom."""
        if self.kind == "constant":
            return SpectralFunction.basis(0, self.alpha)
        return expand(self.sampled, K)

    def scaled(self, factor: float) -> "Atom":
        if self.kind == "constant":
            raise DomainError("The constant atom cannot be rescaled.")
        return Atom(self.kind, self.alpha, self.q, self.interval, self.sampled.scaled(factor))


@dataclass
class AtomReport:
    """Outcome of the atom clauses with their margins."""

    admissible: bool
    support_ok: bool
    size_ok: bool
    cancellation_ok: bool
    size_margin: float
    cancellation_margin: float

    @property
    def passed(self) -> bool:
        return self.admissible and self.support_ok and self.size_ok and self.cancellation_ok

    def as_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


def size_bound(interval: AdmissibleInterval, q: float, alpha: AlphaLike) -> float:
    """Return gamma_alpha(I)^(1/q - 1)."""
    mass = gamma_mass(interval.lo, interval.hi, alpha)
    exponent = -1.0 if np.isinf(q) else 1.0 / q - 1.0
    return float(mass**exponent)


def validate_atom(b: Atom, a: float = 1.0) -> AtomReport:
    """Check the support, size and cancellation clauses of an atom.

    Failures are report content, not exceptions. Margins are positive when
    a clause holds with room to spare: bound - norm for the size clause and
    1e-9 - |int b| for cancellation.
    """
    if b.kind == "constant":
        return AtomReport(True, True, True, True, 0.0, ATOM_TOLERANCE)
    interval = b.interval
    f = b.sampled
    admissible = is_admissible(interval.center, interval.radius / (1 + 1e-12), a)
    nonzero = f.values != 0
    support_ok = bool(
        np.all(f.nodes[nonzero] >= interval.lo) and np.all(f.nodes[nonzero] <= interval.hi)
    )
    bound = size_bound(interval, b.q, b.alpha)
    norm = f.lp_norm(b.q)
    size_margin = bound - norm
    size_ok = bool(norm <= bound * (1 + ATOM_TOLERANCE))
    integral = f.integral()
    cancellation_margin = ATOM_TOLERANCE - abs(integral)
    return AtomReport(
        bool(admissible),
        support_ok,
        size_ok,
        bool(cancellation_margin >= 0),
        float(size_margin),
        float(cancellation_margin),
    )


def _saturate(rule: QuadRule, values: np.ndarray, interval, q, alpha) -> np.ndarray:
    values = values - np.dot(rule.weights, values) / np.sum(rule.weights)
    sampled = SampledFunction(rule, values, alpha, (interval.lo, interval.hi))
    norm = sampled.lp_norm(q)
    if norm == 0:
        raise AtomValidationError("Cannot rescale a vanishing function into an atom.")
    return values * size_bound(interval, q, alpha) / norm


def interval_rule(interval: AdmissibleInterval, alpha: AlphaLike, breakpoints=None) -> QuadRule:
    """Return the composite rule on I used for atom values.

    I is cut into ATOM_PANELS equal panels plus the given breakpoints, so an
    atom carries enough nodes for an expansion of degree 64.
    """
    uniform = np.linspace(interval.lo, interval.hi, ATOM_PANELS + 1)[1:-1]
    extra = np.asarray([] if breakpoints is None else breakpoints, dtype=float)
    return interval_gamma_rule(
        interval.lo,
        interval.hi,
        alpha,
        PANEL_ORDER,
        breakpoints=np.concatenate([uniform, extra]),
    )


def random_atom(
    interval: AdmissibleInterval,
    q: float,
    seed: int,
    alpha: AlphaLike,
    pieces: int = 4,
    degree: int = 2,
) -> Atom:
    """Draw a piecewise-polynomial atom on ``interval``.

    The pieces have random breakpoints and normal coefficients; the
    gamma_alpha mean is subtracted against the quadrature mass and the
    result is rescaled so that the size clause holds with equality.
    Deterministic for a given seed.
    """
    alpha = as_alpha(alpha)
    _check_q(q)
    rng = np.random.default_rng(seed)
    inner = np.sort(rng.uniform(interval.lo, interval.hi, pieces - 1))
    rule = interval_rule(interval, alpha, inner)
    coefficients = rng.normal(size=(pieces, degree + 1))
    piece = np.searchsorted(inner, rule.nodes)
    local = (rule.nodes - interval.center) / interval.radius
    powers = local[:, None] ** np.arange(degree + 1)
    values = np.sum(coefficients[piece] * powers, axis=1)
    values = _saturate(rule, values, interval, q, alpha)
    sampled = SampledFunction(rule, values, alpha, (interval.lo, interval.hi))
    return Atom("supported", alpha, q, interval, sampled)


def haar_atom(
    interval: AdmissibleInterval, q: float, alpha: AlphaLike, scale: float = 1.0
) -> Atom:
    """Return the two-step mean-zero atom on ``interval``.

    The step is positive left of the center and negative right of it; with
    ``scale=1`` the size clause holds with equality.
    """
    alpha = as_alpha(alpha)
    _check_q(q)
    rule = interval_rule(interval, alpha, [interval.center])
    values = np.where(rule.nodes < interval.center, 1.0, -1.0)
    left = np.dot(rule.weights, values > 0)
    right = np.dot(rule.weights, values < 0)
    values = np.where(values > 0, 1.0 / left, -1.0 / right)
    values = scale * _saturate(rule, values, interval, q, alpha)
    sampled = SampledFunction(rule, values, alpha, (interval.lo, interval.hi))
    return Atom("supported", alpha, q, interval, sampled)


@dataclass
class AtomicDecomposition:
    """A finite combination f = sum lambda_j b_j."""

    terms: List[Tuple[float, Atom]] = field(default_factory=list)

    @property
    def norm(self) -> float:
        return float(sum(abs(lam) for lam, _ in self.terms))


def h1_norm_upper(decomposition: AtomicDecomposition, a: float = 1.0) -> float:
    """Return sum |lambda_j|, an upper bound of the H^1 norm.

    Raises
    ------
    AtomValidationError
        When one of the atoms fails a clause.
    """
    for index, (_, atom) in enumerate(decomposition.terms):
        report = validate_atom(atom, a)
        if not report.passed:
            raise AtomValidationError(
                f"Atom {index} of the decomposition is invalid: {report.as_dict()}."
            )
    return decomposition.norm


def save_atom(atom: Atom, path: str):
    """Write a supported atom to a text fixture (header, then node rows)."""
    if atom.kind != "supported":
        raise DomainError("Only supported atoms are stored as fixtures.")
    header = "\n".join(
        [
            f"version={FIXTURE_VERSION}",
            f"alpha={atom.alpha.alpha!r}",
            f"center={atom.interval.center!r}",
            f"radius={atom.interval.radius!r}",
            f"class_a={atom.interval.class_a!r}",
            f"q={atom.q!r}",
            "columns=node weight value",
        ]
    )
    table = np.column_stack(
        [atom.sampled.nodes, atom.sampled.weights, atom.sampled.values]
    )
    np.savetxt(path, table, fmt="%.17g", header=header)


def load_atom(path: str) -> Atom:
    """Read an atom written by ``save_atom``."""
    meta = {}
    with open(path) as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
    if int(meta.get("version", -1)) != FIXTURE_VERSION:
        raise DomainError(f"Unsupported atom fixture version in {path}.")
    table = np.loadtxt(path, ndmin=2)
    alpha = as_alpha(float(meta["alpha"]))
    interval = AdmissibleInterval(
        float(meta["center"]), float(meta["radius"]), float(meta["class_a"])
    )
    rule = QuadRule(table[:, 0], table[:, 1], "composite_legendre", PANEL_ORDER, alpha.alpha)
    sampled = SampledFunction(rule, table[:, 2], alpha, (interval.lo, interval.hi))
    return Atom("supported", alpha, float(meta["q"]), interval, sampled)
