"""Exponent estimates: Heaps' beta from growth curves, Zipf's alpha from counts."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import brentq

from .corpus import RankFrequency, rank_frequency_from_ranks
from .numerics import DomainError, RandomStream, log_zeta_derivative, zeta
from .simulate import GrowthCurve, simulate_growth_curve
from .zipf import ZipfParams, sample_text

ALPHA_LO = 1.0 + 1e-6
ALPHA_HI = 20.0
DEFAULT_MIN_M = 1000


@dataclass(frozen=True)
class FitResult:
    exponent: float
    log_intercept: float
    residual_rms: float
    points_used: int
    # set when a likelihood maximum sits on the search bracket
    at_bracket_edge: bool = False


@dataclass(frozen=True)
class ReciprocityReport:
    alpha_hat: float
    beta_hat: float
    product: float
    deviation: float


def _line_fit(x, y):
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = float(dx @ dx)
    slope = float(dx @ (y - ym)) / sxx
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    return slope, intercept, math.sqrt(float(resid @ resid) / len(x))


def fit_heaps(curve: GrowthCurve | Iterable, min_m: float = DEFAULT_MIN_M) -> FitResult:
    """Least squares line through ``(ln m, ln d)`` for points with ``m >= min_m``.

    ``curve`` may be a GrowthCurve or any iterable of ``(m, d)`` pairs.
    """
    points = curve.points if isinstance(curve, GrowthCurve) else tuple(curve)
    pts = np.array([(m, d) for m, d in points if m >= min_m and d >= 1], dtype=float)
    if len(pts) < 2:
        raise DomainError(
            f"need at least 2 curve points with m >= {min_m} and d >= 1, got {len(pts)}"
        )
    slope, intercept, rms = _line_fit(np.log(pts[:, 0]), np.log(pts[:, 1]))
    return FitResult(slope, float(intercept), rms, len(pts))


def _ranks_counts(table):
    if isinstance(table, RankFrequency):
        counts = table.counts.astype(float)
        ranks = np.arange(1, len(counts) + 1, dtype=float)
    else:
        pairs = np.array(list(table), dtype=float).reshape(-1, 2)
        ranks, counts = pairs[:, 0], pairs[:, 1]
    return ranks, counts


def zipf_log_likelihood(alpha: float, ranks, counts) -> float:
    """``-alpha * sum c ln r - N ln zeta(alpha)``."""
    ranks = np.asarray(ranks, dtype=float)
    counts = np.asarray(counts, dtype=float)
    return -alpha * float(counts @ np.log(ranks)) - counts.sum() * math.log(zeta(alpha))


def fit_zipf_alpha(table) -> FitResult:
    """Maximum-likelihood alpha for ``p_r = r**-alpha / zeta(alpha)``.

    ``table`` is a RankFrequency (rank = position) or ``(rank, count)`` pairs.
    The log-likelihood is concave in alpha, so its stationary point is found
    by root bracketing of the score on ``(1 + 1e-6, 20]``.  If the score does
    not change sign the nearer edge is returned with ``at_bracket_edge`` set.
    ``residual_rms`` is the RMS log-log residual of observed frequencies
    against the fitted law, a diagnostic only.
    """
    ranks, counts = _ranks_counts(table)
    total = counts.sum()
    if len(counts) == 0 or total < 2:
        raise DomainError("need at least 2 tokens")
    if len(counts) < 2:
        raise DomainError("alpha is unidentifiable from a single distinct token")
    if np.any(ranks < 1) or np.any(counts < 0):
        raise DomainError("ranks must be >= 1 and counts non-negative")
    mean_log_rank = float(counts @ np.log(ranks)) / total

    def score(a):
        # per-token derivative of the log-likelihood
        return -log_zeta_derivative(a) - mean_log_rank

    edge = False
    if score(ALPHA_LO) <= 0:
        alpha, edge = ALPHA_LO, True
    elif score(ALPHA_HI) >= 0:
        alpha, edge = ALPHA_HI, True
    else:
        alpha = brentq(score, ALPHA_LO, ALPHA_HI, xtol=1e-12, rtol=1e-14)
    log_intercept = -math.log(zeta(alpha))
    seen = counts > 0
    resid = np.log(counts[seen] / total) - (log_intercept - alpha * np.log(ranks[seen]))
    rms = math.sqrt(float(resid @ resid) / seen.sum())
    return FitResult(alpha, log_intercept, rms, int(seen.sum()), edge)


def reciprocity_report(alpha_hat: float, beta_hat: float) -> ReciprocityReport:
    for name, v in (("alpha_hat", alpha_hat), ("beta_hat", beta_hat)):
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be finite and positive, got {v!r}")
    product = alpha_hat * beta_hat
    return ReciprocityReport(alpha_hat, beta_hat, product, abs(product - 1.0))


@dataclass(frozen=True)
class SyntheticRun:
    curve: GrowthCurve
    table: RankFrequency
    heaps: FitResult
    zipf: FitResult
    report: ReciprocityReport


def synthetic_reciprocity(
    params: ZipfParams, n: int, stream: RandomStream, min_m: float = DEFAULT_MIN_M
) -> SyntheticRun:
    """Sample one text, fit both exponents and compare their product with 1."""
    ranks = sample_text(params, n, stream.copy())
    curve = simulate_growth_curve(params, n, stream)
    table = rank_frequency_from_ranks(ranks)
    heaps = fit_heaps(curve, min_m)
    zipf = fit_zipf_alpha(table)
    return SyntheticRun(curve, table, heaps, zipf, reciprocity_report(zipf.exponent, heaps.exponent))
