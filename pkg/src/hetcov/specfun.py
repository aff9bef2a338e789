"""Interference integral and cell-load probability mass functions.

``rho`` is the normalized interference integral that appears in every
Rayleigh-fading coverage expression; the PMFs describe how many users land
in a Voronoi cell under the gamma approximation of the cell-area
distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate as _sci
from scipy.special import gammaln

from .quadrature import DEFAULT_QUADRATURE, QuadratureSettings


@dataclass(frozen=True)
class CellAreaModel:
    """Gamma-approximation constants for the area of a typical Voronoi cell."""

    q: float = 3.61  # shape
    b: float = 3.61  # rate


CELL_AREA = CellAreaModel()


def rho_closed_form_alpha4(x: float) -> float:
    """Closed form of the interference integral for path-loss exponent 4."""
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    if x == 0.0:
        return 0.0
    s = math.sqrt(x)
    return s * (math.pi / 2.0 - math.atan(1.0 / s))


def rho_quadrature(x: float, alpha: float, settings: QuadratureSettings = DEFAULT_QUADRATURE) -> float:
    """Interference integral by quadrature, valid for any alpha > 2.

    The defining semi-infinite integral over u is mapped to a finite one
    with u -> 1/t (the tail decays only like u^(-alpha/2), so direct
    truncation converges slowly near alpha = 2):

        rho(x, alpha) = x^(2/alpha) * int_0^{x^(2/alpha)} t^(alpha/2-2) / (1 + t^(alpha/2)) dt

    The endpoint power t^(alpha/2-2) is handled with an algebraic-weight
    rule so accuracy does not degrade for alpha < 4.
    """
    if alpha <= 2.0:
        raise ValueError("alpha must exceed 2")
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    if x == 0.0:
        return 0.0
    t0 = x ** (2.0 / alpha)
    half_alpha = alpha / 2.0
    val, _ = _sci.quad(
        lambda t: 1.0 / (1.0 + t ** half_alpha),
        0.0, t0,
        weight="alg", wvar=(half_alpha - 2.0, 0.0),
        epsabs=settings.abs_tol, epsrel=min(settings.rel_tol, 1e-11),
        limit=settings.max_subdivisions,
    )
    return t0 * val


def rho(x: float, alpha: float) -> float:
    """Normalized interference integral; closed form when alpha == 4."""
    if alpha == 4.0:
        return rho_closed_form_alpha4(x)
    return rho_quadrature(x, alpha)


def _mean_load(n: int, lambda_users: float, lambda_eq: float) -> float:
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    if lambda_users < 0.0 or lambda_eq <= 0.0:
        raise ValueError("lambda_eq must be positive and lambda_users nonnegative")
    return lambda_users / lambda_eq


def pmf_users_random_cell(n: int, lambda_users: float, lambda_eq: float) -> float:
    """P[N = n] for the user count of a randomly chosen cell.

    ``lambda_eq`` is the density of the PPP whose Voronoi tessellation
    approximates the cells (the per-tier equivalent density).  Evaluated in
    log space so it stays finite for n in the thousands.
    """
    mu = _mean_load(n, lambda_users, lambda_eq)
    if mu == 0.0:
        return 1.0 if n == 0 else 0.0
    q, b = CELL_AREA.q, CELL_AREA.b
    log_p = (q * math.log(b) - gammaln(n + 1) + gammaln(n + q) - gammaln(q)
             + n * math.log(mu) - (n + q) * math.log(mu + b))
    return math.exp(log_p)


def pmf_users_sharing_cell(n: int, lambda_users: float, lambda_eq: float) -> float:
    """P[N = n] for the other users sharing the typical user's cell.

    Size-biased version of :func:`pmf_users_random_cell`: the typical user
    lands in larger cells more often.
    """
    mu = _mean_load(n, lambda_users, lambda_eq)
    if mu == 0.0:
        return 1.0 if n == 0 else 0.0
    q, b = CELL_AREA.q, CELL_AREA.b
    log_p = (q * math.log(b) - gammaln(n + 1) + gammaln(n + q + 1) - gammaln(q)
             + n * math.log(mu) - (n + q + 1) * math.log(mu + b))
    return math.exp(log_p)


def prob_unloaded(lambda_users: float, lambda_eq: float) -> float:
    """Probability that a randomly chosen cell has no user at all."""
    return pmf_users_random_cell(0, lambda_users, lambda_eq)
