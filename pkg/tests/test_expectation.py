import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zipfheaps.expectation import (
    Lower,
    Method,
    _term,
    all_methods,
    alternating_identity,
    asymptotic_expected_distinct,
    closed_form_expected_distinct,
    closed_form_tail_integral,
    exact_expected_distinct,
    head_cutoff,
    integral_expected_distinct,
    integral_gap,
)
from zipfheaps.numerics import DomainError, NumericalFailure
from zipfheaps.zipf import ZipfParams, pmf, tail_mass_bounds

P2 = ZipfParams(2.0)
ZETA2 = math.pi**2 / 6


def binomial_oracle(alpha, n, dps=80):
    """E X(n) = sum_k (-1)^(k+1) C(n,k) zeta(k a) / zeta(a)^k, exact for finite n."""
    with mpmath.workdps(dps):
        a = mpmath.mpf(alpha)
        z = mpmath.zeta(a)
        return float(mpmath.fsum(
            (-1) ** (k + 1) * mpmath.binomial(n, k) * mpmath.zeta(k * a) / z**k
            for k in range(1, n + 1)
        ))


def hurwitz_oracle(alpha, n, head=None):
    """Direct head sum, then the tail expanded in p with mpmath's Hurwitz zeta."""
    with mpmath.workdps(40):
        a = mpmath.mpf(alpha)
        z = mpmath.zeta(a)
        m = head or int(4 * (n / float(z)) ** (1 / alpha)) + 10
        total = mpmath.fsum(
            -mpmath.expm1(n * mpmath.log1p(-1 / (z * mpmath.mpf(i) ** a))) for i in range(1, m + 1)
        )
        k, term = 1, mpmath.mpf(1)
        while abs(term) > mpmath.mpf(10) ** -30:
            term = (-1) ** (k + 1) * mpmath.binomial(n, k) * mpmath.zeta(k * a, m + 1) / z**k
            total += term
            k += 1
        return float(total)


def euler_maclaurin_oracle(alpha, n):
    with mpmath.workdps(30):
        a = mpmath.mpf(alpha)
        z = mpmath.zeta(a)
        f = lambda i: -mpmath.expm1(n * mpmath.log1p(-1 / (z * i**a)))  # noqa: E731
        m = int(4 * (n / float(z)) ** (1 / alpha)) + 50
        return float(mpmath.fsum(f(i) for i in range(1, m)) + mpmath.sumem(f, [m, mpmath.inf]))


# --- exact series -----------------------------------------------------------

def test_anchor_values():
    assert exact_expected_distinct(P2, 0).value == 0.0
    assert exact_expected_distinct(P2, 1).value == pytest.approx(1.0, abs=1e-9)
    assert exact_expected_distinct(P2, 2).value == pytest.approx(1.6, abs=1e-9)
    # 2 - zeta(4) / zeta(2)^2 = 2 - (pi^4/90) / (pi^4/36)
    assert 2 - (math.pi**4 / 90) / ZETA2**2 == pytest.approx(1.6, abs=1e-15)


@pytest.mark.parametrize("alpha", [1.2, 1.5, 2.0, 3.0, 6.0])
def test_two_tokens_identity(alpha):
    with mpmath.workdps(30):
        want = float(2 - mpmath.zeta(2 * alpha) / mpmath.zeta(alpha) ** 2)
    assert exact_expected_distinct(ZipfParams(alpha), 2).value == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("alpha", [1.2, 1.5, 2.0, 3.0])
@pytest.mark.parametrize("n", [3, 7, 20, 45, 100])
def test_exact_matches_binomial_oracle(alpha, n):
    res = exact_expected_distinct(ZipfParams(alpha), n, eps=1e-9)
    assert res.method is Method.EXACT_SERIES
    assert res.abs_error_bound <= 1e-9
    assert abs(res.value - binomial_oracle(alpha, n)) <= 1e-9 + 4e-16 * n


@pytest.mark.parametrize("alpha,n", [(1.2, 10**4), (1.5, 10**5), (2.0, 10**6), (3.0, 10**5)])
def test_exact_large_n_against_mpmath(alpha, n):
    value = exact_expected_distinct(ZipfParams(alpha), n).value
    assert value == pytest.approx(hurwitz_oracle(alpha, n), rel=1e-12, abs=1e-9)
    if alpha >= 1.5:
        assert value == pytest.approx(euler_maclaurin_oracle(alpha, n), rel=1e-12)


def test_term_bound_grid():
    p = np.logspace(-15, -0.01, 200)
    for n in (1, 2, 10, 1000, 10**6, 10**9):
        t = _term(n, p)
        assert np.all(t > 0)
        # equality at n = 1, so allow a few ulps of rounding there
        assert np.all(t <= n * p * (1 + 4e-16))
        if n > 1:
            assert np.all(t < n * p)


def test_head_cutoff_is_minimal_power_of_two():
    for alpha, n in [(2.0, 1), (2.0, 10**4), (1.2, 10**5), (3.0, 7)]:
        params = ZipfParams(alpha)
        m = head_cutoff(params, n)
        assert m & (m - 1) == 0
        assert n * pmf(params, m + 1) <= 0.5
        if m > 1:
            assert n * pmf(params, m // 2 + 1) > 0.5


@given(alpha=st.floats(1.1, 5.0), n=st.integers(1, 10**5))
def test_tail_beyond_cutoff_within_union_bound(alpha, n):
    # the part of E X beyond M can never exceed n times the tail mass
    params = ZipfParams(alpha)
    m = head_cutoff(params, n)
    full = exact_expected_distinct(params, n).value
    head = math.fsum(_term(n, pmf(params, np.arange(1, m + 1))))
    assert full - head <= n * tail_mass_bounds(params, m)[1] + 1e-9


@given(alpha=st.floats(1.1, 6.0), n=st.integers(0, 10**6))
def test_at_most_n_distinct(alpha, n):
    res = exact_expected_distinct(ZipfParams(alpha), n)
    assert 0 <= res.value <= n
    if n:
        assert res.value >= 1 - 1e-9


@pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
def test_monotone_with_decreasing_increments(alpha):
    params = ZipfParams(alpha)
    values = [exact_expected_distinct(params, n, eps=1e-9).value for n in range(0, 102)]
    inc = np.diff(values)
    assert np.all(inc > 0)
    # increments sum_i p_i (1-p_i)^n, each shrinking by at least p_1^2 (1-p_1)^n
    assert np.all(np.diff(inc) < 0)


def test_eps_validation():
    with pytest.raises(DomainError):
        exact_expected_distinct(P2, 10, eps=0.0)
    with pytest.raises(DomainError):
        exact_expected_distinct(P2, 10, eps=-1e-3)
    with pytest.raises(DomainError):
        exact_expected_distinct(P2, -1)


def test_unreachable_eps_is_numerical_failure():
    with pytest.raises(NumericalFailure) as info:
        exact_expected_distinct(P2, 10**4, eps=1e-20)
    best = info.value.best
    assert best.value == pytest.approx(exact_expected_distinct(P2, 10**4).value, abs=1e-9)


# --- integrals --------------------------------------------------------------

def test_integral_examples():
    one = integral_expected_distinct(P2, 1, Lower.FROM_ONE)
    assert one.method is Method.INTEGRAL1
    assert one.value == pytest.approx(1 / ZETA2, abs=1e-10)
    assert one.value == pytest.approx(0.60793, abs=1e-5)
    two = integral_expected_distinct(P2, 2, "FromOne")
    assert two.value == pytest.approx(2 / ZETA2 - 1 / (3 * ZETA2**2), abs=1e-10)
    assert two.value == pytest.approx(1.0926624, abs=1e-7)
    # from zero at n=1: x0 + 1/(zeta x0) with x0 = zeta^(-1/2), i.e. 2 zeta^(-1/2)
    zero = integral_expected_distinct(P2, 1, Lower.FROM_ZERO)
    assert zero.method is Method.INTEGRAL0
    assert zero.value == pytest.approx(2 / math.sqrt(ZETA2), abs=1e-10)
    assert integral_expected_distinct(P2, 0, Lower.FROM_ZERO).value == 0.0


@pytest.mark.parametrize("alpha", [1.2, 1.5, 2.0, 3.0])
@pytest.mark.parametrize("n", [1, 10, 100, 1000, 10000])
def test_sandwich(alpha, n):
    params = ZipfParams(alpha)
    exact = exact_expected_distinct(params, n).value
    lo = integral_expected_distinct(params, n, Lower.FROM_ONE)
    hi = integral_expected_distinct(params, n, Lower.FROM_ZERO)
    assert lo.value - lo.abs_error_bound <= exact <= hi.value + hi.abs_error_bound
    gap, log_deficit = integral_gap(params, n)
    # 1 - gap can be far below the resolution of hi - lo, so test it directly
    assert math.isfinite(log_deficit) and 0 < gap <= 1
    assert hi.value - lo.value == pytest.approx(gap, abs=hi.abs_error_bound + lo.abs_error_bound + 1e-12 * hi.value)


@given(alpha=st.floats(1.15, 5.0), n=st.integers(1, 5000))
def test_sandwich_property(alpha, n):
    params = ZipfParams(alpha)
    exact = exact_expected_distinct(params, n).value
    lo = integral_expected_distinct(params, n, Lower.FROM_ONE)
    hi = integral_expected_distinct(params, n, Lower.FROM_ZERO)
    slack = lo.abs_error_bound + hi.abs_error_bound + 1e-9
    assert lo.value - slack <= exact <= hi.value + slack
    assert hi.value - lo.value <= 1 + slack + 1e-12 * hi.value
    assert math.isfinite(integral_gap(params, n)[1])


# --- closed form and the alternating identity ------------------------------

def gap_deficit_oracle(alpha, n):
    """log of int_{x0}^1 (1 - p(x))^n dx at 40 digits, split where the integrand decays."""
    with mpmath.workdps(40):
        a = mpmath.mpf(alpha)
        z = mpmath.zeta(a)
        x0, p1 = z ** (-1 / a), 1 / z
        h = (1 - p1) / (n * a * p1)
        pts = sorted({x0, 1} | {1 - h * 2**k for k in range(60) if 1 - h * 2**k > x0})
        return float(mpmath.log(mpmath.quad(lambda x: (1 - 1 / (z * x**a)) ** n, pts)))


@pytest.mark.parametrize("alpha", [1.2, 2.0, 8.0])
@pytest.mark.parametrize("n", [1, 10, 10**4, 10**9])
def test_integral_gap_deficit_against_mpmath(alpha, n):
    gap, log_deficit = integral_gap(ZipfParams(alpha), n)
    assert log_deficit == pytest.approx(gap_deficit_oracle(alpha, n), rel=1e-11, abs=1e-11)
    assert gap == pytest.approx(-math.expm1(log_deficit), rel=1e-15)


def test_integral_gap_small_n_is_visible():
    # at n = 1 the gap is 2 zeta^(-1/2) - 1/zeta for alpha = 2
    gap, _ = integral_gap(P2, 1)
    assert gap == pytest.approx(2 / math.sqrt(ZETA2) - 1 / ZETA2, rel=1e-12)
    assert integral_gap(P2, 0) == (0.0, 0.0)


@pytest.mark.parametrize(
    "alpha,n,want", [(2.0, 1, 1.0), (2.0, 2, 5 / 3), (3.0, 1, 0.5), (1.5, 1, 2.0)]
)
def test_closed_form_examples(alpha, n, want):
    assert closed_form_tail_integral(alpha, n) == pytest.approx(want, rel=1e-13)


def tail_integral_oracle(alpha, n):
    with mpmath.workdps(30):
        a = mpmath.mpf(alpha)
        # y = 1/t maps [1, inf) to (0, 1]
        g = lambda t: (1 - (1 - t**a) ** n) / t**2  # noqa: E731
        return float(mpmath.quad(g, [0, mpmath.mpf(1) / 2 ** 20, mpmath.mpf(1) / 1024, 0.5, 1]))


@pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("n", [1, 2, 5, 13, 50, 400])
def test_closed_form_against_mpmath_quadrature(alpha, n):
    assert closed_form_tail_integral(alpha, n) == pytest.approx(tail_integral_oracle(alpha, n), rel=1e-10)


@given(alpha=st.floats(1.01, 50.0), n=st.integers(1, 3000))
def test_closed_form_is_identity_in_disguise(alpha, n):
    via_identity = -1 - alternating_identity(n, -1 / alpha, "Product") / alpha
    assert closed_form_tail_integral(alpha, n) == pytest.approx(via_identity, rel=1e-12)


@given(alpha=st.floats(1.05, 10.0), n=st.integers(1, 2000))
def test_closed_form_positive_and_increasing(alpha, n):
    a, b = closed_form_tail_integral(alpha, n), closed_form_tail_integral(alpha, n + 1)
    assert 0 < a < b


def test_closed_form_pole_guard():
    with pytest.raises(DomainError):
        closed_form_tail_integral(1.0, 5)
    with pytest.raises(DomainError):
        closed_form_tail_integral(2.0, 0)


def test_alternating_examples():
    assert alternating_identity(1, 1.0, "Sum") == pytest.approx(0.5, rel=1e-15)
    assert alternating_identity(1, 1.0, "Product") == pytest.approx(0.5, rel=1e-15)
    assert alternating_identity(2, 1.0, "Sum") == pytest.approx(1 / 3, rel=1e-15)
    assert alternating_identity(2, 1.0, "Product") == pytest.approx(1 / 3, rel=1e-15)
    s, p = alternating_identity(10, -0.5, "Sum"), alternating_identity(10, -0.5, "Product")
    assert abs(s - p) / abs(p) <= 1e-9


def test_alternating_against_exact_rationals():
    from fractions import Fraction

    for n in (3, 8, 15):
        for x in (Fraction(-1, 2), Fraction(-2, 3), Fraction(7, 3)):
            rising = math.prod(x + k for k in range(n + 1))
            want = float(math.factorial(n) / rising)
            assert alternating_identity(n, float(x), "Product") == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("n", [10**3, 2**20 + 1, 10**7, 10**9])
@pytest.mark.parametrize("x", [-0.5, -1 / 1.5, 2.5, -3.25])
def test_product_form_large_n(n, x):
    with mpmath.workdps(40):
        xm = mpmath.mpf(x)  # n + 1 + x must not be rounded to a double first
        want = mpmath.gamma(n + 1) * mpmath.gamma(xm) / mpmath.gamma(n + 1 + xm)
    assert alternating_identity(n, x, "Product") == pytest.approx(float(want), rel=1e-11)


@pytest.mark.parametrize("x", [0.0, -1.0, -3.0, -3.0 + 1e-11, 1e-10])
def test_alternating_poles(x):
    with pytest.raises(DomainError):
        alternating_identity(5, x, "Product")
    with pytest.raises(DomainError):
        alternating_identity(5, x, "Sum")


def test_alternating_beyond_last_pole_is_fine():
    # -7 is a pole only when n >= 7
    assert math.isfinite(alternating_identity(5, -7.0))
    with pytest.raises(DomainError):
        alternating_identity(5, 1.0, "Difference")


def test_closed_form_estimate_within_one():
    for alpha in (1.5, 2.0, 3.0):
        params = ZipfParams(alpha)
        for n in (1, 10, 1000, 10**5):
            cf = closed_form_expected_distinct(params, n)
            assert cf.method is Method.CLOSED_FORM
            assert abs(cf.value - exact_expected_distinct(params, n).value) <= cf.abs_error_bound
    assert closed_form_expected_distinct(P2, 0).value == 0.0


# --- asymptotic -------------------------------------------------------------

def test_asymptotic_examples():
    assert asymptotic_expected_distinct(P2, 0).value == 0.0
    big = asymptotic_expected_distinct(P2, 10**6)
    assert big.value == pytest.approx(math.sqrt(math.pi * 1e6 / ZETA2), rel=1e-12)
    assert big.value == pytest.approx(1381.98, abs=0.01)
    assert big.abs_error_bound == math.inf
    exact = exact_expected_distinct(P2, 10**6).value
    assert abs(exact / big.value - 1) <= 0.05
    three = ZipfParams(3.0)
    a3 = asymptotic_expected_distinct(three, 10**6).value
    assert a3 == pytest.approx(127.36, abs=0.01)
    assert abs(exact_expected_distinct(three, 10**6).value / a3 - 1) <= 0.10


@pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
def test_asymptotic_ratio_converges(alpha):
    params = ZipfParams(alpha)
    gaps = []
    for k in range(2, 7):
        n = 10**k
        gaps.append(abs(exact_expected_distinct(params, n).value / asymptotic_expected_distinct(params, n).value - 1))
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_asymptotic_offset_tends_to_minus_half():
    # the next-order term of the expansion is a constant -1/2
    e = exact_expected_distinct(P2, 10**7).value
    a = asymptotic_expected_distinct(P2, 10**7).value
    assert e - a == pytest.approx(-0.5, abs=0.02)


def test_all_methods_order():
    methods = [r.method.value for r in all_methods(P2, 100)]
    assert methods == ["ExactSeries", "Integral1", "Integral0", "ClosedForm", "Asymptotic"]


@pytest.mark.parametrize("fn", [
    exact_expected_distinct, asymptotic_expected_distinct, closed_form_expected_distinct,
])
def test_zero_tokens_everywhere(fn):
    assert fn(ZipfParams(1.3), 0).value == 0.0
