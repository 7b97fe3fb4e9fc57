"""Monte Carlo vocabulary growth under i.i.d. Zipf sampling."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .numerics import DomainError, RandomStream, uniform_grid
from .zipf import ZipfParams, envelope, sample_text

CHUNK = 1 << 20


@dataclass(frozen=True)
class GrowthCurve:
    """Distinct count ``d`` after ``m`` tokens, at increasing ``m``."""

    points: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        pts = tuple((m, d) for m, d in self.points)
        object.__setattr__(self, "points", pts)
        prev_m, prev_d = 0, 0
        for m, d in pts:
            if not m > prev_m:
                raise DomainError("token counts must be strictly increasing")
            if d < prev_d or d > m or d < 0:
                raise DomainError(f"invalid distinct count {d} at m={m}")
            prev_m, prev_d = m, d

    @property
    def m(self) -> np.ndarray:
        return np.array([p[0] for p in self.points], dtype=float)

    @property
    def d(self) -> np.ndarray:
        return np.array([p[1] for p in self.points], dtype=float)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    trials: int


def geometric_checkpoints(n: int) -> list[int]:
    """1, 2, 4, ... below ``n``, then ``n`` itself."""
    if n <= 0:
        return []
    out = []
    m = 1
    while m < n:
        out.append(m)
        m *= 2
    out.append(n)
    return out


def _check_checkpoints(checkpoints, n):
    cps = [int(c) for c in checkpoints]
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise DomainError("checkpoints must be sorted and distinct")
    if cps and (cps[0] < 1 or cps[-1] > n):
        raise DomainError(f"checkpoints must lie in [1, {n}]")
    return cps


def distinct_at(tokens: np.ndarray, checkpoints: Sequence[int], seen=None) -> list[int]:
    """Distinct counts of ``tokens[:c]`` for each checkpoint ``c``.

    ``seen`` is an optional sorted array of values already observed before
    ``tokens`` began.
    """
    if len(tokens) == 0:
        return [0 for _ in checkpoints]
    values, first = np.unique(tokens, return_index=True)
    if seen is not None and len(seen):
        keep = ~np.isin(values, seen)
        first = first[keep]
    new = np.zeros(len(tokens), dtype=np.int64)
    new[first] = 1
    running = np.cumsum(new)
    return [int(running[c - 1]) if c > 0 else 0 for c in checkpoints]


def simulate_growth_curve(
    params: ZipfParams,
    n: int,
    stream: RandomStream,
    checkpoints: Iterable[int] | None = None,
) -> GrowthCurve:
    """Draw ``n`` tokens once and record the distinct count at each checkpoint.

    Distinctness is exact set membership over ranks.  Tokens are drawn in
    chunks, so memory stays bounded by the vocabulary rather than ``n``.
    """
    if n < 0:
        raise DomainError("n must be non-negative")
    cps = geometric_checkpoints(n) if checkpoints is None else _check_checkpoints(checkpoints, n)
    if n == 0:
        return GrowthCurve()
    seen = np.zeros(0, dtype=np.int64)
    points = []
    offset = 0
    distinct = 0
    idx = 0
    while offset < n:
        size = min(CHUNK, n - offset)
        ranks = sample_text(params, size, stream)
        local = [c - offset for c in cps[idx:] if c <= offset + size]
        counts = distinct_at(ranks, local + [size], seen)
        for c, cnt in zip(local, counts):
            points.append((c + offset, distinct + cnt))
        idx += len(local)
        distinct += counts[-1]
        if offset + size < n:
            seen = np.union1d(seen, ranks)
        offset += size
    return GrowthCurve(tuple(points))


def trial_distinct_count(params: ZipfParams, n: int, seed: int, trial: int) -> int:
    """Distinct count for trial ``trial``; depends only on (seed, trial)."""
    stream = RandomStream.derive(seed, trial)
    if n <= CHUNK:
        return len(np.unique(sample_text(params, n, stream)))
    return simulate_growth_curve(params, n, stream, [n]).points[-1][1]


def trial_distinct_counts(params: ZipfParams, n: int, seed: int, trials) -> np.ndarray:
    """Distinct counts for each trial id in ``trials``.

    Small texts are drawn for many trials at once as a 2-D block of
    uniforms; the result equals ``trial_distinct_count`` trial by trial.
    """
    trials = np.asarray(trials, dtype=np.int64)
    out = np.zeros(len(trials), dtype=np.int64)
    if n == 0:
        return out
    block = n + 16 + n // 32
    if n > 4096:
        for j, t in enumerate(trials):
            out[j] = trial_distinct_count(params, n, seed, int(t))
        return out
    env = envelope(params.alpha)
    rows = max(1, (1 << 21) // block)
    for start in range(0, len(trials), rows):
        ids = trials[start:start + rows]
        keys = RandomStream.derive_keys(seed, ids)
        k, accept = env.candidates(uniform_grid(keys, block))
        full = np.count_nonzero(accept, axis=1) >= n
        # overflowed ranks take the scalar path, which reports them
        full &= np.all(np.isfinite(k) | ~accept, axis=1)
        take = accept & (np.cumsum(accept, axis=1) <= n) & full[:, None]
        ranks = np.sort(k[take].reshape(-1, n), axis=1)
        counts = 1 + np.count_nonzero(np.diff(ranks, axis=1), axis=1)
        chunk = np.zeros(len(ids), dtype=np.int64)
        chunk[full] = counts
        for j in np.flatnonzero(~full):
            chunk[j] = trial_distinct_count(params, n, seed, int(ids[j]))
        out[start:start + len(ids)] = chunk
    return out


def monte_carlo_distinct(
    params: ZipfParams, n: int, trials: int, seed: int = 0
) -> MCEstimate:
    """Mean and standard error of the distinct count over independent trials."""
    if n < 0:
        raise DomainError("n must be non-negative")
    if trials < 2:
        raise DomainError("need at least 2 trials for a standard error")
    if n == 0:
        return MCEstimate(0.0, 0.0, trials)
    return summarize(trial_distinct_counts(params, n, seed, np.arange(trials)))


def summarize(counts) -> MCEstimate:
    counts = np.sort(np.asarray(counts, dtype=float))  # order-insensitive
    k = len(counts)
    mean = math.fsum(counts) / k
    var = math.fsum((counts - mean) ** 2) / (k - 1)
    return MCEstimate(mean, math.sqrt(var / k), k)
