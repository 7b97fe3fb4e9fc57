"""Special functions, semi-infinite quadrature and the seeded random stream.

Everything else in the package is built on these primitives.  The zeta
evaluator and the quadrature are written out here rather than borrowed so
that their error estimates are explicit; ``lgamma`` defers to the C library.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np


class DomainError(ValueError):
    """Argument outside the domain where an operation is defined."""


class NumericalFailure(ArithmeticError):
    """A computation could not reach its requested accuracy.

    ``best`` carries the best value obtained before giving up, when there is one.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


# ---------------------------------------------------------------------------
# zeta
# ---------------------------------------------------------------------------

# B_2, B_4, ..., B_20
_BERNOULLI = (
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
    -3617 / 510, 43867 / 798, -174611 / 330,
)
_EM_TERMS = 8
ZETA_ALPHA_MIN = 1.0 + 1e-9


def hurwitz_zeta_scaled(s: float, q: float) -> tuple[float, float]:
    """Return ``(q**s * zeta(s, q), bound)`` for ``s > 1`` and ``q >= 1``.

    ``zeta(s, q) = sum_{j>=0} (q + j)**-s``.  The scaling by ``q**s`` keeps the
    result near one when ``s`` is large, so callers can combine it in log space.
    ``bound`` is a rigorous bound on the Euler-Maclaurin remainder (the first
    omitted correction, valid because ``x**-s`` is completely monotone), in the
    same scaled units.
    """
    if not s > 1.0:
        raise DomainError(f"Hurwitz zeta needs s > 1, got {s!r}")
    if not q >= 1.0:
        raise DomainError(f"Hurwitz zeta needs q >= 1, got {q!r}")
    # Direct terms until the Euler-Maclaurin corrections shrink geometrically.
    n_direct = max(8, math.ceil(s + 2 * _EM_TERMS - q))
    j = np.arange(n_direct, dtype=float)
    head = math.fsum(np.exp(-s * np.log1p(j / q)))
    x0 = q + n_direct
    base = math.exp(-s * math.log(x0 / q))  # (q/x0)**s
    parts = [base * x0 / (s - 1.0), 0.5 * base]
    # rising factorial s (s+1) ... (s+2k-2) / (2k)! times x0**-(2k-1)
    coeff = s / x0
    fact = 2.0
    for k in range(1, _EM_TERMS + 1):
        parts.append(base * _BERNOULLI[k - 1] / fact * coeff)
        coeff *= (s + 2 * k - 1) * (s + 2 * k) / (x0 * x0)
        fact *= (2 * k + 1) * (2 * k + 2)
    bound = abs(base * _BERNOULLI[_EM_TERMS] / fact * coeff)
    return head + math.fsum(parts), bound


def zeta(alpha: float) -> float:
    """Riemann zeta function for real ``alpha > 1``.

    Partial sum plus Euler-Maclaurin tail; relative error is a few ulps.

    >>> round(zeta(2.0), 12)
    1.644934066848
    """
    alpha = float(alpha)
    if not alpha > ZETA_ALPHA_MIN:
        raise DomainError(
            f"zeta(alpha) diverges for alpha <= 1 (need alpha > 1 + 1e-9, got {alpha!r})"
        )
    if alpha > 1100.0:
        # 2**-alpha underflows; the series is 1 to double precision.
        return 1.0
    value, _ = hurwitz_zeta_scaled(alpha, 1.0)
    return value


def zeta_bracket(alpha: float, m: int) -> tuple[float, float]:
    """Integral bracket on zeta(alpha) from the first ``m`` terms."""
    if m < 1:
        raise DomainError("need m >= 1")
    i = np.arange(1, m + 1, dtype=float)
    partial = math.fsum(np.exp(-alpha * np.log(i)))
    lower = partial + (m + 1.0) ** (1.0 - alpha) / (alpha - 1.0)
    upper = partial + float(m) ** (1.0 - alpha) / (alpha - 1.0)
    return lower, upper


def log_zeta_derivative(alpha: float, rel_step: float = 1e-5) -> float:
    """zeta'(alpha)/zeta(alpha) by central differences of log zeta."""
    h = rel_step * max(1.0, alpha - 1.0)
    h = min(h, 0.5 * (alpha - ZETA_ALPHA_MIN))
    return (math.log(zeta(alpha + h)) - math.log(zeta(alpha - h))) / (2 * h)


# ---------------------------------------------------------------------------
# gamma
# ---------------------------------------------------------------------------

def lgamma(x: float) -> float:
    """ln Gamma(x) for ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"lgamma is only provided for x > 0, got {x!r}")
    return math.lgamma(x)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

# Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half, descending).
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
_GAUSS_W[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG, _WG[-2::-1]])


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    intervals: int = 1


def _gk15(g, lo, hi):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    y = np.asarray(g(mid + half * _NODES), dtype=float)
    k = half * float(_KRONROD_W @ y)
    gauss = half * float(_GAUSS_W @ y)
    return k, abs(k - gauss)


def integrate_unit(g, tol=1e-10, rel_tol=0.0, limit=2000):
    """Adaptive G7/K15 integration of ``g`` over [0, 1].

    The interval with the largest error estimate is bisected until the summed
    estimate drops below ``max(tol, rel_tol*|value|)``.  Endpoints are never
    evaluated, so integrable endpoint singularities are fine.
    """
    value, err = _gk15(g, 0.0, 1.0)
    heap = [(-err, 0.0, 1.0, value)]
    total_err = err
    count = 1
    while total_err > max(tol, rel_tol * abs(value)):
        if count >= limit:
            raise NumericalFailure(
                f"quadrature did not converge after {limit} intervals "
                f"(error estimate {total_err:.3g})",
                best=QuadratureResult(value, total_err, count),
            )
        neg_err, lo, hi, piece = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise NumericalFailure(
                "quadrature interval underflow",
                best=QuadratureResult(value, total_err, count),
            )
        left, left_err = _gk15(g, lo, mid)
        right, right_err = _gk15(g, mid, hi)
        value += left + right - piece
        total_err += left_err + right_err + neg_err
        heapq.heappush(heap, (-left_err, lo, mid, left))
        heapq.heappush(heap, (-right_err, mid, hi, right))
        count += 1
    # Re-sum from scratch so the running updates leave no drift.
    value = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    return QuadratureResult(value, total_err, count)


def integrate_semi_infinite(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    tol: float = 1e-10,
    *,
    rel_tol: float = 0.0,
    limit: int = 2000,
) -> QuadratureResult:
    """Integrate ``f`` over ``[a, inf)`` for ``a > 0``.

    Uses ``y = a/t`` to map onto ``t in (0, 1]``.  ``f`` is called with numpy
    arrays and must be vectorised.
    """
    if not a > 0.0:
        raise DomainError(f"lower limit must be positive for the y = a/t map, got {a!r}")

    def g(t):
        return f(a / t) * (a / (t * t))

    return integrate_unit(g, tol=tol, rel_tol=rel_tol, limit=limit)


def integrate_interval(f, a: float, b: float, tol=1e-10, *, rel_tol=0.0, limit=2000):
    """Integrate vectorised ``f`` over the finite interval ``[a, b]``."""
    if not b >= a:
        raise DomainError("need a <= b")
    width = b - a
    return integrate_unit(lambda t: f(a + width * t) * width, tol=tol, rel_tol=rel_tol, limit=limit)


# ---------------------------------------------------------------------------
# random stream
# ---------------------------------------------------------------------------

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_DERIVE_SALT = 0xD1B54A32D192ED03


def _mix64_int(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


class RandomStream:
    """Counter-based SplitMix64 stream.

    Output ``c`` (0-based) is ``mix(key + (c + 1) * golden)``, so the stream
    with key ``seed`` reproduces the reference SplitMix64 sequence and any
    block can be generated without touching the ones before it.  State is
    the ``(key, counter)`` pair.
    """

    def __init__(self, seed: int = 0, counter: int = 0):
        self.key = int(seed) & _MASK64
        self.counter = int(counter)

    @classmethod
    def derive(cls, seed: int, k: int) -> "RandomStream":
        """Independent stream number ``k`` for a given root ``seed``."""
        root = _mix64_int((int(seed) ^ _DERIVE_SALT) & _MASK64)
        return cls(_mix64_int((root + (int(k) + 1) * _GOLDEN) & _MASK64) ^ root)

    @staticmethod
    def derive_keys(seed: int, ks) -> np.ndarray:
        """Keys of ``derive(seed, k)`` for every ``k`` in ``ks``, vectorised."""
        root = np.uint64(_mix64_int((int(seed) ^ _DERIVE_SALT) & _MASK64))
        ks = np.asarray(ks, dtype=np.uint64)
        with np.errstate(over="ignore"):
            return _mix64(root + (ks + np.uint64(1)) * np.uint64(_GOLDEN)) ^ root

    def copy(self) -> "RandomStream":
        return RandomStream(self.key, self.counter)

    def peek_uint64(self, size: int) -> np.ndarray:
        """The next ``size`` raw outputs, without advancing."""
        idx = np.arange(self.counter + 1, self.counter + 1 + size, dtype=np.uint64)
        with np.errstate(over="ignore"):
            return _mix64(np.uint64(self.key) + idx * np.uint64(_GOLDEN))

    def peek_uniform(self, size: int) -> np.ndarray:
        """The next ``size`` doubles in [0, 1) with 53 random bits each."""
        return (self.peek_uint64(size) >> np.uint64(11)).astype(float) * 2.0**-53

    def skip(self, count: int) -> None:
        self.counter += int(count)

    def next_uint64(self) -> int:
        self.counter += 1
        return _mix64_int((self.key + self.counter * _GOLDEN) & _MASK64)

    def uniform(self, size: int) -> np.ndarray:
        out = self.peek_uniform(size)
        self.skip(size)
        return out

    def __repr__(self):
        return f"RandomStream(key={self.key:#018x}, counter={self.counter})"


def uniform_grid(keys: np.ndarray, size: int) -> np.ndarray:
    """First ``size`` uniforms of each fresh stream in ``keys``, one row per key."""
    idx = np.arange(1, size + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix64(np.asarray(keys, dtype=np.uint64)[:, None] + idx[None, :] * np.uint64(_GOLDEN))
    return (z >> np.uint64(11)).astype(float) * 2.0**-53


def uniform01(stream: RandomStream) -> float:
    """One uniform double in [0, 1); advances ``stream`` by one output."""
    return (stream.next_uint64() >> 11) * 2.0**-53
