"""Shared machinery behind every heat-based kernel.

With r = exp(-t/2) the heat kernel is an average over s in (-1, 1) of
exp(E(s)), where E(s) = -q(rx, y, s)/(1 - r^2) + y^2 is affine in s:

    E(s) = E1 - lam * (1 - s),
    E1 = -r^2 (x - y)^2 / (1 - r^2) + 2xyr / (1 + r),
    lam = 2xyr / (1 - r^2).

For moderate slopes the average uses the Gauss-Jacobi rule of Pi_alpha.
When lam is large the mass sits in a layer of width 1/lam at s = 1 and the
substitution v = lam (1 - s) turns the integral into a generalized
Gauss-Laguerre sum. Every radial kernel is then sum_r w_r A(r) T(r).
"""
import numpy as np

from laguerre_project.src.setting.measure_geom import AlphaLike, as_alpha
from laguerre_project.src.setting.quad import (
    DEFAULT_N_R,
    DEFAULT_N_S,
    gauss_jacobi_rule,
    laguerre_slope_rule,
    split_radial_nodes,
)
from laguerre_project.src.setting.specfun import MAX_DERIVATIVE, hermite
from laguerre_project.src.utils.errors import CapacityError, EvaluationError

# Slope above which the s-average switches to the Gauss-Laguerre layer rule.
SLOPE_SWITCH = 250.0


def minus_log_r(r, complement):
    """Return -log r, accurate near both endpoints of (0, 1)."""
    r = np.asarray(r, dtype=float)
    complement = np.asarray(complement, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(complement < 0.5, -np.log1p(-complement), -np.log(r))


def exponent_terms(x, y, r, complement):
    """Return (E1, lam, 1 - r^2) for the affine-in-s heat exponent."""
    one_m_r2 = complement * (1 + r)
    e1 = -r * r * (x - y) ** 2 / one_m_r2 + 2 * x * y * r / (1 + r)
    lam = 2 * x * y * r / one_m_r2
    return e1, lam, one_m_r2


def s_average(alpha_w: AlphaLike, e1, lam, factor=None, n_s=DEFAULT_N_S, **fields):
    """Return int factor(s) exp(e1 - lam (1 - s)) Pi_{alpha_w}(s) ds.

    Parameters
    ----------
    alpha_w : AlphaParam or float
        Parameter of the Jacobi weight.
    e1, lam : numpy.ndarray
        Exponent value at s=1 and its slope, broadcastable to a common shape.
    factor : callable, optional
        ``factor(s, **fields)`` evaluated with every field reshaped to
        (M, 1) and s of shape (M, n_s) or (1, n_s).
    n_s : int, optional, default=64
        Order of both rules.
    **fields : numpy.ndarray
        Arrays broadcastable to the common shape, passed to ``factor``.
    """
    alpha_w = as_alpha(alpha_w)
    arrays = np.broadcast_arrays(
        np.asarray(e1, dtype=float), np.asarray(lam, dtype=float),
        *(np.asarray(v, dtype=float) for v in fields.values()),
    )
    shape = arrays[0].shape
    flat = [a.reshape(-1) for a in arrays]
    e1_flat, lam_flat = flat[0], flat[1]
    field_flat = dict(zip(fields.keys(), flat[2:]))
    result = np.zeros(e1_flat.shape)
    steep = lam_flat >= SLOPE_SWITCH

    def _fields(mask):
        return {key: value[mask][:, None] for key, value in field_flat.items()}

    gentle = ~steep
    if np.any(gentle):
        rule = gauss_jacobi_rule(alpha_w, n_s)
        s = rule.nodes[None, :]
        lam_g = lam_flat[gentle][:, None]
        terms = np.exp(e1_flat[gentle][:, None] - lam_g * (1 - s))
        if factor is not None:
            terms = terms * factor(s, **_fields(gentle))
        result[gentle] = terms @ rule.weights
    if np.any(steep):
        v, w = laguerre_slope_rule(alpha_w, n_s)
        lam_s = lam_flat[steep][:, None]
        # nodes with v >= 2 lam fall outside s > -1; their weight is below e^{-2 lam}
        inside = v[None, :] < 2 * lam_s
        ratio = np.where(inside, v[None, :] / lam_s, 1.0)
        s = 1 - ratio
        shape_term = np.where(inside, (2 - ratio) ** (alpha_w.alpha - 0.5), 0.0)
        terms = shape_term * w[None, :]
        if factor is not None:
            terms = terms * factor(s, **_fields(steep))
        log_scale = (
            np.log(alpha_w.pi_alpha_const)
            - (alpha_w.alpha + 0.5) * np.log(lam_flat[steep])
            + e1_flat[steep]
        )
        result[steep] = np.exp(log_scale) * np.sum(terms, axis=-1)
    bad = ~np.isfinite(result)
    if np.any(bad):
        index = int(np.argmax(bad))
        raise EvaluationError(
            f"s-average is not finite (e1={e1_flat[index]}, "
            f"lam={lam_flat[index]}).",
            node=index,
        )
    return result.reshape(shape)


def _hermite_factor(nx, ny):
    def factor(s, x, y, r, root, one_m_r2):
        z = (r * x - y * s) / root
        if ny == 0:
            return hermite(nx, z)
        return s * hermite(nx + 1, z) / root + 2 * y * (
            s * s - r * r
        ) * hermite(nx, z) / one_m_r2

    return factor


def heat_derivative(
    nx: int,
    ny: int,
    r,
    complement,
    x,
    y,
    alpha: AlphaLike,
    n_s: int = DEFAULT_N_S,
    log_weight=0.0,
    minus_one: bool = False,
):
    """Return exp(log_weight) * d_x^nx d_y^ny W at r = exp(-t/2).

    Uses d_x^n W = (1-r^2)^(-alpha-1) (-r/sqrt(1-r^2))^n
    int H_n(z) exp(E(s)) Pi_alpha ds with z = (rx - ys)/sqrt(1-r^2); one
    y-derivative turns H_n(z) into s H_{n+1}(z)/sqrt(1-r^2)
    + 2y(s^2-r^2) H_n(z)/(1-r^2). With ``minus_one`` the constant
    exp(log_weight) is subtracted (only for nx = ny = 0).
    """
    if nx < 0 or nx > MAX_DERIVATIVE or ny not in (0, 1):
        raise CapacityError(
            f"Passed derivative orders (nx={nx}, ny={ny}), expected "
            f"0 <= nx <= {MAX_DERIVATIVE} and ny in (0, 1)."
        )
    alpha = as_alpha(alpha)
    r = np.asarray(r, dtype=float)
    e1, lam, one_m_r2 = exponent_terms(x, y, r, complement)
    root = np.sqrt(one_m_r2)
    log_pref = -(alpha.alpha + 1) * np.log(one_m_r2) + log_weight
    sign = 1.0
    if nx:
        log_pref = log_pref + nx * (np.log(r) - np.log(root))
        sign = (-1.0) ** nx
    if nx == 0 and ny == 0:
        value = s_average(alpha, e1 + log_pref, lam, n_s=n_s)
    else:
        value = sign * s_average(
            alpha,
            e1 + log_pref,
            lam,
            _hermite_factor(nx, ny),
            n_s=n_s,
            x=x,
            y=y,
            r=r,
            root=root,
            one_m_r2=one_m_r2,
        )
    if minus_one:
        if nx or ny:
            raise ValueError("Only the undifferentiated kernel subtracts 1.")
        value = value - np.exp(log_weight)
    return value


def peak_scale(x, y, t=0.0):
    """Return the split point 1 - r* of the radial rule for (x, y) and t.

    The heat factor concentrates where 1 - r is comparable to (x-y)^2 and
    the Poisson time factor where it is comparable to t^2. The last axis is
    treated as the integration axis when ``x`` and ``y`` broadcast to a
    time-indexed batch, see ``radial_nodes``.
    """
    d2 = (np.asarray(x, dtype=float) - np.asarray(y, dtype=float)) ** 2
    return d2 + np.asarray(t, dtype=float) ** 2 / 4


def radial_nodes(x, y, n_r=DEFAULT_N_R, t=0.0, shared=False):
    """Return (r, 1 - r, w) with a trailing radial axis.

    With ``shared`` the split point is the smallest peak scale along the
    last axis of the (x, y) batch, so all points of a row share one rule.
    """
    scale = peak_scale(x, y, t)
    if shared and np.ndim(scale) > 0:
        scale = np.min(scale, axis=-1, keepdims=True)
    return split_radial_nodes(scale, n_r)


def radial_sum(amplitude, weights, radial_weight):
    """Return sum_r w_r A(r) T(r), broadcasting any leading time axis of T.

    ``amplitude`` and ``weights`` have shape B + (Nr,); ``radial_weight``
    has shape B' + (Nr,) or (Nt,) + B' + (Nr,) with B' broadcastable to B.
    The time axis, when present, is moved last.
    """
    weighted = amplitude * weights
    radial_weight = np.asarray(radial_weight)
    if radial_weight.ndim <= weighted.ndim:
        return np.sum(weighted * radial_weight, axis=-1)
    return np.einsum("...r,t...r->...t", weighted, radial_weight)
