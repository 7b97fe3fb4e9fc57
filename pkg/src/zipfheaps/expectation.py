"""Expected number of distinct words in ``n`` i.i.d. Zipf tokens.

Four routes to the same quantity ``E X(n) = sum_i 1 - (1 - p_i)**n``:

* the series itself, summed with a certified error bound;
* the integral of the term function over ``[1, inf)`` and ``[0, inf)``,
  which bracket the series from below and above;
* the closed form of the tail integral obtained by binomial expansion and the
  alternating-sum/product identity;
* the Gamma-function asymptotic ``Gamma(1 - 1/a) * (n / zeta(a))**(1/a)``.

The binomial expansion of the tail integral produces an overall minus sign
that is easy to lose; the closed form below keeps it, which makes the result
positive, and is checked against quadrature.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .numerics import (
    DomainError,
    NumericalFailure,
    hurwitz_zeta_scaled,
    integrate_interval,
    integrate_semi_infinite,
    lgamma,
)
from .zipf import ZipfParams, pmf

POLE_GUARD = 1e-9
MAX_HEAD_TERMS = 2**27
_ULP = 2.0**-52


class Method(str, enum.Enum):
    EXACT_SERIES = "ExactSeries"
    INTEGRAL0 = "Integral0"
    INTEGRAL1 = "Integral1"
    CLOSED_FORM = "ClosedForm"
    ASYMPTOTIC = "Asymptotic"


class Lower(str, enum.Enum):
    FROM_ZERO = "FromZero"
    FROM_ONE = "FromOne"


@dataclass(frozen=True)
class ExpectationResult:
    """An estimate of E X tagged with how it was obtained.

    For the integral methods ``value`` is the integral itself and the bound
    refers to it; the integrals bracket E X rather than equal it.  The
    asymptotic form carries no certified bound (``inf``).
    """

    value: float
    abs_error_bound: float
    method: Method


# ---------------------------------------------------------------------------
# exact series
# ---------------------------------------------------------------------------

def _term(n, p):
    # 1 - (1 - p)**n without cancellation for small p or huge n.
    with np.errstate(divide="ignore"):
        return -np.expm1(n * np.log1p(-p))


def head_cutoff(params: ZipfParams, n: int) -> int:
    """Smallest power of two ``M`` with ``n * p_{M+1} <= 1/2``."""
    # (M+1)**a >= 2n / zeta
    target = math.exp(math.log(2.0 * n / params.zeta_alpha) / params.alpha)
    m = 1
    while m + 1 < target:
        m *= 2
        if m > MAX_HEAD_TERMS:
            raise NumericalFailure(
                f"series head would need more than {MAX_HEAD_TERMS} terms "
                f"(alpha={params.alpha}, n={n})"
            )
    return m


def _head_sum(params, n, m):
    total = 0.0
    chunk = 1 << 22
    for start in range(1, m + 1, chunk):
        ranks = np.arange(start, min(start + chunk, m + 1), dtype=float)
        total += float(np.sum(_term(n, pmf(params, ranks))))
    return total


def _tail_sum(params, n, m, eps):
    """sum_{i>m} 1 - (1-p_i)**n via the binomial expansion in p_i.

    With ``n p_{m+1} <= 1/2`` every per-rank expansion alternates with
    shrinking terms, so the aggregated series does too and the first omitted
    term bounds the truncation error.
    """
    a = params.alpha
    q = m + 1.0
    log_p = -math.log(params.zeta_alpha) - a * math.log(q)  # log p_{m+1}
    terms = []
    error = 0.0
    log_coeff = 0.0
    k = 0
    while True:
        k += 1
        if k > n:
            break
        log_coeff += math.log((n - k + 1) / k) + log_p
        scaled, em_bound = hurwitz_zeta_scaled(k * a, q)
        mag = math.exp(log_coeff)
        term = mag * scaled
        if term < 0.25 * eps * 1e-3:
            # first omitted term
            error += term
            break
        terms.append(term if k % 2 else -term)
        error += mag * em_bound
    return math.fsum(terms), error


def exact_expected_distinct(
    params: ZipfParams, n: int, eps: float = 1e-9
) -> ExpectationResult:
    """E X(n) as the series sum, to within ``eps``."""
    if not eps > 0:
        raise DomainError("eps must be positive")
    if n < 0:
        raise DomainError("n must be non-negative")
    n = int(n)
    if n == 0:
        return ExpectationResult(0.0, 0.0, Method.EXACT_SERIES)
    m = head_cutoff(params, n)
    head = _head_sum(params, n, m)
    tail, tail_err = _tail_sum(params, n, m, eps)
    value = head + tail
    rounding = (16 + math.log2(m)) * _ULP * abs(value)
    bound = tail_err + rounding
    if bound > eps:
        raise NumericalFailure(
            f"cannot certify E X to {eps:g}; best bound {bound:.3g}",
            best=ExpectationResult(min(value, n), bound, Method.EXACT_SERIES),
        )
    # the true value never exceeds n
    return ExpectationResult(min(value, float(n)), bound, Method.EXACT_SERIES)


# ---------------------------------------------------------------------------
# integrals
# ---------------------------------------------------------------------------

def integral_expected_distinct(
    params: ZipfParams,
    n: int,
    lower: Lower | str = Lower.FROM_ONE,
    tol: float = 1e-10,
    rel_tol: float = 1e-12,
) -> ExpectationResult:
    """Integral of ``1 - (1 - 1/(zeta x**a))**n`` from 0 or 1 to infinity.

    On ``[0, zeta**(-1/a)]`` the would-be probability exceeds one and the
    integrand is taken as 1.
    """
    lower = Lower(lower)
    method = Method.INTEGRAL1 if lower is Lower.FROM_ONE else Method.INTEGRAL0
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0:
        return ExpectationResult(0.0, 0.0, method)
    a, c = params.alpha, params.zeta_alpha

    def f(x):
        p = np.exp(-a * np.log(x)) / c
        return np.where(p >= 1.0, 1.0, _term(n, np.minimum(p, 1.0)))

    if lower is Lower.FROM_ONE:
        res = integrate_semi_infinite(f, 1.0, tol, rel_tol=rel_tol)
        return ExpectationResult(res.value, res.error_estimate, method)
    x0 = math.exp(-math.log(c) / a)
    res = integrate_semi_infinite(f, x0, tol, rel_tol=rel_tol)
    return ExpectationResult(x0 + res.value, res.error_estimate, method)


def integral_gap(params: ZipfParams, n: int) -> tuple[float, float]:
    """``(gap, log_deficit)`` for the two integrals, computed without cancellation.

    ``Integral0 - Integral1 = 1 - D`` with ``D = int_{x0}^{1} (1 - p(x))**n dx``,
    ``p(x) = 1/(zeta x**a)`` and ``x0 = zeta**(-1/a)``.  ``D`` is often far
    below double-precision resolution of the gap (about ``(1 - 1/zeta)**n``),
    so it is returned as a logarithm: ``log_deficit > -inf`` is the
    statement that the gap is strictly less than one.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0:
        return 0.0, 0.0
    a, c = params.alpha, params.zeta_alpha
    x0 = math.exp(-math.log(c) / a)
    p1 = 1.0 / c
    log_top = math.log1p(-p1)  # log of the integrand at x = 1, per token

    def scaled(w):
        # (1 - p(1 - w))**n / (1 - p1)**n with w = 1 - x, via the ratio
        # (1 - p)/(1 - p1) = 1 - (p - p1)/(1 - p1) so large n amplifies no cancellation
        rise = p1 * np.expm1(-a * np.log1p(-w)) / (1.0 - p1)  # (p - p1)/(1 - p1)
        with np.errstate(divide="ignore"):
            return np.exp(n * np.log1p(-np.minimum(rise, 1.0)))

    # the integrand decays from w = 0 on the scale 1 / (n L'(1))
    h = (1.0 - p1) / (n * a * p1)
    span = 1.0 - x0
    pieces = []
    lo, hi = 0.0, min(h, span)
    while lo < span:
        res = integrate_interval(scaled, lo, hi, tol=1e-14 * h, rel_tol=1e-12)
        pieces.append(res.value)
        if hi >= span or float(scaled(np.array([hi]))[0]) < 1e-30:
            break
        lo, hi = hi, min(2.0 * hi, span)
    log_deficit = n * log_top + math.log(math.fsum(pieces))
    return -math.expm1(log_deficit), log_deficit


# ---------------------------------------------------------------------------
# closed form and the alternating identity
# ---------------------------------------------------------------------------

def _check_poles(n, x):
    k = round(-x)
    if 0 <= k <= n and abs(x + k) < POLE_GUARD:
        raise DomainError(f"x={x!r} is within {POLE_GUARD:g} of the pole at {-k}")


def _log_gamma_shift(z, x):
    """ln Gamma(z + x) - ln Gamma(z) for large ``z`` by the Stirling series."""
    w = z + x
    value = (z - 0.5) * math.log1p(x / z) + x * math.log(w) - x
    value += (1 / w - 1 / z) / 12.0
    value -= (w**-3 - z**-3) / 360.0
    value += (w**-5 - z**-5) / 1260.0
    return value


def log_factorial_over_rising(n: int, x: float) -> tuple[float, int]:
    """``(log|r|, sign(r))`` for ``r = n! / (x (x+1) ... (x+n))``."""
    _check_poles(n, x)
    if n <= 1 << 20:
        k = np.arange(n + 1, dtype=float)
        shifted = x + k
        log_prod = math.fsum(np.log(np.abs(shifted)))
        negatives = int(np.count_nonzero(shifted < 0))
        return lgamma(n + 1) - log_prod, -1 if negatives % 2 else 1
    # Large n: factors with x + k < 0 are handled explicitly and the rest
    # collapsed into a ratio of Gamma functions.
    k_pos = max(0, math.floor(-x) + 1)
    log_prod = math.fsum(math.log(abs(x + k)) for k in range(k_pos))
    negatives = k_pos if x < 0 else 0
    base = x + k_pos  # > 0, the first positive factor
    # prod_{k=k_pos}^{n} (x+k) = Gamma(n + 1 + x) / Gamma(base)
    # n! / that = Gamma(n+1) / Gamma(n+1+x) * Gamma(base)
    log_ratio = -_log_gamma_shift(n + 1.0, x) + lgamma(base)
    return log_ratio - log_prod, -1 if negatives % 2 else 1


def alternating_identity(n: int, x: float, form: str = "Product") -> float:
    """``sum_i C(n,i) (-1)**i / (i + x)``, which equals ``n!/(x(x+1)...(x+n))``.

    ``form="Sum"`` evaluates the alternating sum literally (exact binomials,
    compensated summation) and loses roughly ``log10(C(n, n/2))`` digits to
    cancellation; keep it for small ``n``.  ``form="Product"`` works in log
    space with a separate sign and is stable for any ``n``.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    _check_poles(n, x)
    if form == "Sum":
        try:
            return math.fsum(
                (-1) ** i * (math.comb(n, i) / (i + x)) for i in range(n + 1)
            )
        except OverflowError:
            raise NumericalFailure(f"binomial coefficients overflow at n={n}") from None
    if form == "Product":
        log_abs, sign = log_factorial_over_rising(n, x)
        return sign * math.exp(log_abs)
    raise DomainError(f"unknown form {form!r}")


def closed_form_tail_integral(alpha: float, n: int) -> float:
    """Exact ``int_1^inf 1 - (1 - y**-alpha)**n dy``.

    Equals ``-1 - (1/alpha) * n! / prod_{k=0}^{n} (k - 1/alpha)``.
    """
    if not alpha > 1:
        raise DomainError("alpha must exceed 1")
    if n < 1:
        raise DomainError("n must be >= 1")
    x = -1.0 / alpha
    log_abs, sign = log_factorial_over_rising(n, x)
    # sign is negative (only the k=0 factor is negative), so this is -1 + |.|/alpha
    return -1.0 - sign * math.exp(log_abs - math.log(alpha))


def closed_form_expected_distinct(params: ZipfParams, n: int) -> ExpectationResult:
    """E X estimate from the closed-form tail integral.

    Rescaling ``x = y * zeta**(-1/a)`` turns the tail integral into the
    ``[1, inf)`` integral of the term function up to a piece on
    ``[zeta**(-1/a), 1]`` of size at most ``1 - zeta**(-1/a)``; together with
    the integral bracket this puts E X within 1 of the result.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0:
        return ExpectationResult(0.0, 0.0, Method.CLOSED_FORM)
    scale = math.exp(-math.log(params.zeta_alpha) / params.alpha)
    value = scale * closed_form_tail_integral(params.alpha, n)
    return ExpectationResult(value, 1.0, Method.CLOSED_FORM)


def asymptotic_expected_distinct(params: ZipfParams, n: int) -> ExpectationResult:
    """``Gamma(1 - 1/a) * (n / zeta(a))**(1/a)``; no certified error."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if n == 0:
        return ExpectationResult(0.0, math.inf, Method.ASYMPTOTIC)
    a = params.alpha
    log_value = lgamma(1.0 - 1.0 / a) + (math.log(n) - math.log(params.zeta_alpha)) / a
    return ExpectationResult(math.exp(log_value), math.inf, Method.ASYMPTOTIC)


def all_methods(params: ZipfParams, n: int, eps: float = 1e-9) -> list[ExpectationResult]:
    """Every evaluator in a fixed order, as used by the ``expect`` command."""
    return [
        exact_expected_distinct(params, n, eps),
        integral_expected_distinct(params, n, Lower.FROM_ONE),
        integral_expected_distinct(params, n, Lower.FROM_ZERO),
        closed_form_expected_distinct(params, n),
        asymptotic_expected_distinct(params, n),
    ]
