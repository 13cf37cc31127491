import threading
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eulersums.exact_kernel import (
    IntPoly,
    RatSeries,
    SeriesTruncationError,
    bernoulli,
    binom,
    check_conv_BG_GG,
    check_conv_eGG_eBG,
    check_linearization,
    compose_poly_tanh,
    derivative_poly,
    genocchi,
    pn_coefficient,
    rho,
    tanh_series,
    zeta_even_over_pi,
)


def akiyama_tanigawa(n):
    """Independent Bernoulli oracle; this algorithm yields B_1 = +1/2."""
    a = [Fraction(1, m + 1) for m in range(n + 1)]
    for m in range(n + 1):
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m == n:
            return a[0]


# Frozen from a symbolic expansion of t/(e^t - 1) and 2t/(e^t + 1).
BERNOULLI_GF = [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0, Fraction(1, 42), 0,
                Fraction(-1, 30), 0, Fraction(5, 66), 0, Fraction(-691, 2730), 0]
GENOCCHI_GF = [0, 1, -1, 0, 1, 0, -3, 0, 17, 0, -155, 0, 2073, 0]


def test_bernoulli_table_matches_generating_function():
    assert [bernoulli(n) for n in range(14)] == BERNOULLI_GF


@pytest.mark.parametrize("n", range(0, 40))
def test_bernoulli_matches_akiyama_tanigawa(n):
    expected = akiyama_tanigawa(n)
    if n == 1:
        expected = -expected
    assert bernoulli(n) == expected


def test_genocchi_table_matches_generating_function():
    assert [genocchi(n) for n in range(14)] == GENOCCHI_GF


@given(st.integers(0, 120))
def test_genocchi_from_bernoulli(n):
    assert genocchi(n) == 2 * (1 - 2**n) * bernoulli(n)


@given(st.integers(1, 80))
def test_odd_indices_vanish(n):
    assert bernoulli(2 * n + 1) == 0
    assert genocchi(2 * n + 1) == 0


@given(st.integers(1, 80))
def test_genocchi_integral(n):
    assert genocchi(n).denominator == 1


@given(st.integers(1, 60))
def test_even_genocchi_sign_alternates(n):
    assert (genocchi(2 * n) > 0) == (n % 2 == 0)


def test_zeta_even_over_pi():
    assert zeta_even_over_pi(1) == Fraction(1, 6)
    assert zeta_even_over_pi(2) == Fraction(1, 90)
    assert zeta_even_over_pi(3) == Fraction(1, 945)


def test_binom_out_of_range_is_zero():
    assert binom(3, -1) == 0
    assert binom(3, 4) == 0
    assert binom(5, 2) == 10


def test_bernoulli_threads_agree():
    results = []

    def work():
        results.append([bernoulli(n) for n in range(0, 200, 7)])

    threads = [threading.Thread(target=work) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)


# ---- derivative polynomials ------------------------------------------------

def test_derivative_poly_small():
    assert derivative_poly(0) == IntPoly((0, 1))
    assert derivative_poly(1) == IntPoly((1, 0, -1))
    assert derivative_poly(2) == IntPoly((0, -2, 0, 2))
    assert derivative_poly(3) == IntPoly((-2, 0, 8, 0, -6))
    # frozen from symbolic differentiation of tanh
    assert derivative_poly(4) == IntPoly((0, 16, 0, -40, 0, 24))


def test_poly_string():
    assert str(derivative_poly(2)) == "2*y^3 - 2*y"
    assert str(derivative_poly(3)) == "-6*y^4 + 8*y^2 - 2"


@given(st.integers(0, 25))
def test_derivative_poly_recurrence(n):
    one_minus_y2 = IntPoly((1, 0, -1))
    p = derivative_poly(n)
    assert derivative_poly(n + 1) == one_minus_y2 * p.derivative()
    assert p.degree == n + 1


# ---- series ----------------------------------------------------------------

def test_tanh_series_frozen():
    # frozen from a symbolic series of tanh
    expected = [0, 1, 0, Fraction(-1, 3), 0, Fraction(2, 15), 0, Fraction(-17, 315), 0, Fraction(62, 2835)]
    s = tanh_series(9)
    assert [s[k] for k in range(10)] == expected
    assert tanh_series(1)[1] == 1


def test_series_truncation_enforced():
    s = tanh_series(5)
    with pytest.raises(SeriesTruncationError):
        s[6]
    assert s.derivative().order == 4
    with pytest.raises(SeriesTruncationError):
        s.derivative()[5]


def test_pn_examples():
    assert compose_poly_tanh(derivative_poly(0), 4)[0] == 0
    assert pn_coefficient(0, 0) == 0
    assert compose_poly_tanh(derivative_poly(1), 4)[0] == 1
    assert compose_poly_tanh(derivative_poly(2), 4)[1] == -2


@pytest.mark.parametrize("n", range(16))
def test_pn_identity(n):
    s = compose_poly_tanh(derivative_poly(n), 15)
    for k in range(16):
        assert s[k] == pn_coefficient(n, k)


@given(st.integers(0, 10), st.integers(0, 12))
def test_pn_series_is_derivative(n, order):
    # d/dt P_n(tanh t) = P_{n+1}(tanh t)
    lhs = compose_poly_tanh(derivative_poly(n), order + 1).derivative()
    rhs = compose_poly_tanh(derivative_poly(n + 1), order)
    assert lhs == rhs


@given(
    st.lists(st.fractions(max_denominator=20), min_size=1, max_size=6),
    st.lists(st.fractions(max_denominator=20), min_size=1, max_size=6),
    st.lists(st.fractions(max_denominator=20), min_size=1, max_size=6),
)
def test_series_ring_laws(a, b, c):
    A, B, C = (RatSeries(tuple(x), 5) for x in (a, b, c))
    assert A * (B + C) == A * B + A * C
    assert A * B == B * A
    assert (A * B) * C == A * (B * C)


# ---- linearization and convolutions -------------------------------------------

def test_rho_examples():
    assert rho(0, 0, 0) == 1
    assert rho(1, 1, 0) == Fraction(1, 6)
    assert rho(2, 2, 1) == 0


@given(st.integers(0, 12), st.integers(0, 12), st.integers(1, 12))
def test_rho_binomial_form(m, n, k):
    top = m + n + 1 - 2 * k
    expected = (-1) ** m * binom(n, top) + (-1) ** n * binom(m, top)
    assert rho(m, n, k) == expected


@pytest.mark.parametrize("m,n,order", [(0, 0, 4), (1, 2, 6), (2, 2, 0)])
def test_linearization_examples(m, n, order):
    assert check_linearization(m, n, order) == 0


def test_linearization_grid():
    assert all(check_linearization(m, n, 20) == 0 for m in range(11) for n in range(11))


@given(st.integers(0, 10), st.integers(0, 10), st.integers(0, 16))
def test_linearization_symmetric(m, n, order):
    assert check_linearization(m, n, order) == 0
    assert check_linearization(n, m, order) == 0


@pytest.mark.parametrize("args", [(0, 0, 0, 1, 1), (3, 1, 2, 0, 1), (10, 0, 0, 0, 0)])
def test_conv_egg_examples(args):
    assert check_conv_eGG_eBG(*args) == 0


@given(st.integers(0, 20), st.integers(0, 8), st.integers(0, 8), st.integers(0, 1), st.integers(0, 1))
def test_conv_egg_property(n, a, g, d, e):
    assert check_conv_eGG_eBG(n, a, g, d, e) == 0


@pytest.mark.parametrize("n,q", [(0, 3), (1, 2), (5, 7)])
def test_conv_bgg_examples(n, q):
    assert check_conv_BG_GG(n, q) == 0


@given(st.integers(0, 30), st.integers(2, 30))
def test_conv_bgg_property(n, q):
    assert check_conv_BG_GG(n, q) == 0


def test_conv_bgg_rejects_small_q():
    with pytest.raises(ValueError):
        check_conv_BG_GG(0, 1)


def test_b1_convention_fixes_g1():
    # with B_1 = +1/2 the Genocchi relation would give G_1 = -1
    assert bernoulli(1) == Fraction(-1, 2)
    assert genocchi(1) == 1
    assert 2 * (1 - 2) * Fraction(1, 2) == -1


def test_binom_agrees_with_comb_in_range():
    assert all(binom(a, b) == comb(a, b) for a in range(10) for b in range(a + 1))
