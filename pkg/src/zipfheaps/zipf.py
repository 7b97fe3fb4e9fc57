"""Generalized Zipf law over the infinite rank vocabulary.

``p_i = 1 / (zeta(alpha) * i**alpha)`` for ranks ``i >= 1`` and ``alpha > 1``.

Sampling uses rejection-inversion with the continuous hat ``h(x) = x**-alpha``.
Each attempt consumes exactly one uniform, so the rank sequence is a fixed
function of the uniform sequence no matter how the draws are batched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .numerics import DomainError, NumericalFailure, RandomStream, zeta

_INT64_SAFE = 2.0**62
_ALWAYS_ACCEPT = 2.0**26


@dataclass(frozen=True)
class ZipfParams:
    alpha: float
    zeta_alpha: float = field(init=False)

    def __post_init__(self):
        alpha = float(self.alpha)
        # zeta() raises DomainError for alpha <= 1 + 1e-9
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "zeta_alpha", zeta(alpha))


def pmf(params: ZipfParams, i) -> float | np.ndarray:
    """Probability of rank ``i`` (scalar or array of ranks >= 1)."""
    ranks = np.asarray(i)
    if np.any(ranks < 1):
        raise DomainError("ranks start at 1")
    out = np.exp(-params.alpha * np.log(ranks.astype(float))) / params.zeta_alpha
    return float(out) if out.ndim == 0 else out


def tail_mass_bounds(params: ZipfParams, m: int) -> tuple[float, float]:
    """Integral bracket ``(lower, upper)`` on the mass beyond rank ``m``."""
    if m < 1:
        raise DomainError("m must be >= 1")
    a = params.alpha
    scale = (a - 1.0) * params.zeta_alpha
    lower = math.exp((1.0 - a) * math.log(m + 1.0)) / scale
    upper = math.exp((1.0 - a) * math.log(float(m))) / scale
    return lower, upper


class Envelope:
    """Tail areas of the hat, measured from +infinity.

    ``T(x) = x**(1-a)/(a-1)`` is the hat mass beyond ``x``.  A draw
    ``v ~ U(0, T(1.5) + 1]`` maps to ``x = T^-1(v)`` and ``k = round(x)``;
    ``k`` is accepted iff ``v <= T(k + 1/2) + h(k)``, which carves out a slab
    of width exactly ``h(k)`` for every ``k`` (convexity of ``h`` guarantees the
    slabs fit inside the hat).  The slab for ``k = 1`` is the whole top piece.
    """

    def __init__(self, alpha: float):
        self.a = alpha
        self.am1 = alpha - 1.0
        self.width = self.tail(1.5) + 1.0

    def tail(self, x):
        return np.exp(-self.am1 * np.log(x)) / self.am1

    def candidates(self, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        v = (1.0 - u) * self.width  # in (0, width]
        with np.errstate(over="ignore"):
            x = np.exp(-np.log(self.am1 * v) / self.am1)
        k = np.maximum(np.floor(x + 0.5), 1.0)
        with np.errstate(over="ignore", invalid="ignore"):
            accept = v <= self.tail(k + 0.5) + np.exp(-self.a * np.log(k))
        # Beyond _ALWAYS_ACCEPT the slab-vs-hat gap, about a(a+1)/(24 k^2) of
        # the slab, is under one ulp of a uniform, while the comparison above
        # has lost all significant digits.  Accepting is exact to resolution.
        accept |= k >= _ALWAYS_ACCEPT
        return k, accept


@lru_cache(maxsize=64)
def envelope(alpha: float) -> Envelope:
    return Envelope(alpha)


def _as_ranks(k: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(k)):
        raise NumericalFailure(
            "sampled rank overflowed double precision; alpha is too close to 1"
        )
    if k.size and k.max() >= _INT64_SAFE:
        return np.array([int(v) for v in k], dtype=object)
    return k.astype(np.int64)


def sample_text(params: ZipfParams, n: int, stream: RandomStream) -> np.ndarray:
    """``n`` i.i.d. ranks.  The stream advances only past the uniforms used.

    Returns int64 ranks, or an object array of Python ints in the (rare,
    alpha near 1) case that a rank does not fit in int64.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    env = envelope(params.alpha)
    chunks = []
    need = int(n)
    while need > 0:
        block = need + 16 + need // 32
        k, accept = env.candidates(stream.peek_uniform(block))
        hits = np.flatnonzero(accept)
        if hits.size >= need:
            hits = hits[:need]
            stream.skip(int(hits[-1]) + 1)
        else:
            stream.skip(block)
        chunks.append(k[hits])
        need -= hits.size
    if not chunks:
        return np.zeros(0, dtype=np.int64)
    return _as_ranks(np.concatenate(chunks))


def sample_rank(params: ZipfParams, stream: RandomStream) -> int:
    return int(sample_text(params, 1, stream)[0])
