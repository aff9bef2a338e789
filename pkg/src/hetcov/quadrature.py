"""Adaptive integration and guarded series summation.

Thin contracts over QUADPACK: adaptive subdivision with an embedded
Gauss-Kronrod rule pair, plus a tail-bounded summer for the nonnegative,
eventually-decreasing series that show up in the throughput formulas.

Every coverage integrand in this package decays at least as fast as
exp(-c*x^2); semi-infinite integrals are truncated where that dominant
exponent reaches ``TAIL_EXPONENT`` (integrand below e^-40 of its scale)
when the caller supplies the rate ``c``, and handed to QUADPACK's
infinite-interval transform otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

from scipy import integrate as _sci

TAIL_EXPONENT = 40.0


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 200

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class SeriesSettings:
    tail_tol: float = 1e-8
    max_terms: int = 2000

    def __post_init__(self):
        if self.tail_tol <= 0.0:
            raise ValueError("tail_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_QUADRATURE = QuadratureSettings()
DEFAULT_SERIES = SeriesSettings()


class QuadratureError(RuntimeError):
    """Raised when the adaptive scheme does not converge.

    Carries the partial value and error estimate so callers can decide
    whether the result is still usable.
    """

    def __init__(self, message: str, partial_value: float, error_estimate: float):
        super().__init__(f"{message} (partial value {partial_value!r}, error {error_estimate!r})")
        self.partial_value = partial_value
        self.error_estimate = error_estimate


class SeriesResult(NamedTuple):
    value: float
    terms_used: int
    converged: bool


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
    gaussian_rate: float | None = None,
) -> tuple[float, float]:
    """Integrate ``f`` on [a, b]; ``b`` may be ``math.inf``.

    ``gaussian_rate`` is the coefficient c of a known exp(-c*x^2) decay
    envelope of the integrand; when given, a semi-infinite range is cut at
    the point where c*x^2 = TAIL_EXPONENT.  Returns (value, error_estimate)
    and raises :class:`QuadratureError` if the subdivision budget is
    exhausted before the tolerances are met.
    """
    if not math.isinf(b) and b < a:
        raise ValueError("integration bounds must satisfy a <= b")
    if math.isinf(b) and gaussian_rate is not None:
        if gaussian_rate <= 0.0:
            raise ValueError("gaussian_rate must be positive")
        b = math.sqrt(a * a + TAIL_EXPONENT / gaussian_rate)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _sci.IntegrationWarning)
        out = _sci.quad(
            f, a, b,
            epsabs=settings.abs_tol,
            epsrel=settings.rel_tol,
            limit=settings.max_subdivisions,
            full_output=1,
        )
    value, err = out[0], out[1]
    if len(out) > 3:  # quad appends a message when ier != 0
        raise QuadratureError(out[3], value, err)
    return value, err


def sum_series(
    term: Callable[[int], float],
    settings: SeriesSettings = DEFAULT_SERIES,
) -> SeriesResult:
    """Sum ``term(n)`` for n = 0, 1, ... with a geometric tail bound.

    Terms must be nonnegative and eventually decreasing.  Summation stops
    once the running tail bound t_n / (1 - t_n/t_{n-1}) drops below
    ``tail_tol`` (or a term is exactly zero past a decreasing run); hitting
    ``max_terms`` yields ``converged=False`` and a RuntimeWarning rather
    than a silent truncation.
    """
    total = 0.0
    prev = None
    for n in range(settings.max_terms):
        t = term(n)
        if t < 0.0:
            raise ValueError(f"series term {n} is negative ({t!r})")
        total += t
        if t == 0.0:
            # Nonnegative, eventually-decreasing terms: a zero term means the
            # tail contributes nothing.
            return SeriesResult(total, n + 1, True)
        if prev is not None and prev > 0.0:
            ratio = t / prev
            if ratio < 1.0 and t / (1.0 - ratio) < settings.tail_tol:
                return SeriesResult(total, n + 1, True)
        prev = t
    warnings.warn(
        f"series did not converge within {settings.max_terms} terms",
        RuntimeWarning,
        stacklevel=2,
    )
    return SeriesResult(total, settings.max_terms, False)
