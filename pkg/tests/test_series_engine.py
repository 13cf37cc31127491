import threading
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eulersums.const_ring import (
    AZETA51,
    AZETA71,
    LI4HALF,
    PI,
    ZETA62,
    Atom,
    AtomKind,
    Family,
    SumIndex,
    known_evaluations,
    rhs_spec,
    tbar,
    zeta,
)
from eulersums.series_engine import (
    EvalContext,
    HarmonicState,
    MPFloat,
    PrecisionUnreachable,
    eval_atom,
    eval_double_oracle,
    eval_euler_sum,
    eval_euler_sum_direct,
    eval_expr,
    eval_terms,
    tail_bound,
    terms_needed,
)

T = lambda p, q: SumIndex(Family.T_SUM, p, q)  # noqa: E731
S = lambda p, q: SumIndex(Family.S_SUM, p, q)  # noqa: E731
R = lambda p, q: SumIndex(Family.R_SUM, p, q)  # noqa: E731

# Frozen at 40 digits from mpmath.nsum applied to the defining series with
# harmonic numbers written as digamma differences (an independent route).
FROZEN = {
    T(2, 2): "4.058712126416768218185013862029379635405",
    T(1, 2): "2.633889302798536545948395588664021103622",
    S(1, 3): "2.596351031543734251445752828929139303576",
    R(2, 4): "0.2459880650225823126246720911252568395124",
    R(1, 3): "0.5113034330826167463143661708262974516952",
}
FROZEN_ATOMS = {
    LI4HALF: "0.5174790616738993863307581618988629456224",
    ZETA62: "0.01781974041683598836265953024872461216871",
    AZETA51: "0.02639914879311694693301810700294852646787",
    AZETA71: "0.007217895875394201570614388318929150047942",
}


@pytest.fixture(scope="module")
def ctx():
    return EvalContext(50)


def close(a, b, tol):
    return abs(float(mpmath.mpf(a) - mpmath.mpf(b))) <= tol


@pytest.mark.parametrize("idx", list(FROZEN), ids=str)
def test_sums_match_frozen(idx, ctx):
    with mpmath.workdps(60):
        got = eval_euler_sum(idx, ctx).value
        assert abs(mpmath.mpf(str(got)) - mpmath.mpf(FROZEN[idx])) < mpmath.mpf(10) ** -38


@pytest.mark.parametrize("expr", list(FROZEN_ATOMS), ids=str)
def test_atoms_match_frozen(expr, ctx):
    with mpmath.workdps(60):
        got = eval_expr(expr, ctx).value
        assert abs(mpmath.mpf(str(got)) - mpmath.mpf(FROZEN_ATOMS[expr])) < mpmath.mpf(10) ** -38


def test_zeta_two_is_pi_squared_over_six(ctx):
    diff = eval_expr(zeta(2) - PI**2 * Fraction(1, 6), ctx)
    assert abs(float(diff.value)) < 1e-60


def zeta3_oracle(dps):
    """Brute force to N plus an Euler-Maclaurin tail, written out here."""
    with mpmath.workdps(dps + 10):
        N = 60
        head = mpmath.fsum(mpmath.mpf(k) ** -3 for k in range(1, N))
        x = mpmath.mpf(N)
        tail = 1 / (2 * x**2) + 1 / (2 * x**3)
        # B_{2j}/(2j)! * f^{(2j-1)}(N) with f = x^-3
        for j in range(1, 25):
            b = mpmath.bernoulli(2 * j)
            deriv = mpmath.rf(3, 2 * j - 1) * x ** (-(3 + 2 * j - 1))
            tail += b / mpmath.factorial(2 * j) * deriv
        return head + tail


def test_zeta_three_against_local_oracle(ctx):
    got = eval_atom(Atom(AtomKind.ZETA, 3), ctx).value
    assert abs(float(got - zeta3_oracle(60))) < 1e-55


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("q", [2, 3, 4])
def test_double_values_are_bridged_linear_sums(p, q, ctx):
    small = eval_euler_sum(SumIndex(Family.DOUBLE_t, p, q), ctx)
    big = eval_euler_sum(SumIndex(Family.DOUBLE_T, p, q), ctx)
    assert abs(float(small.value * 2 ** (p + q) - eval_euler_sum(T(p, q), ctx).value)) < 1e-55
    assert abs(float(big.value * 2 ** (p + q - 2) - eval_euler_sum(S(p, q), ctx).value)) < 1e-55


@pytest.mark.parametrize("p", range(2, 6))
@pytest.mark.parametrize("q", range(2, 6))
def test_r_and_sbar_reflection(p, q, ctx):
    # swapping the order of summation: R_{p,q} + Sbar_{q,p} = zeta(p) tbar(q)
    lhs = eval_euler_sum(R(p, q), ctx) + eval_euler_sum(S(q, p), ctx)
    rhs = eval_expr(zeta(p) * tbar(q), ctx)
    assert abs(float((lhs - rhs).value)) < 1e-55


@pytest.mark.parametrize("q", range(2, 9))
def test_one_q_forms(q, ctx):
    ts = eval_euler_sum(T(1, q), ctx) + eval_euler_sum(S(1, q), ctx)
    assert abs(float((ts - eval_expr(rhs_spec("TS1Q", {"q": q}), ctx)).value)) < 1e-55
    r = eval_euler_sum(R(1, q), ctx)
    assert abs(float((r - eval_expr(rhs_spec("R1Q", {"q": q}), ctx)).value)) < 1e-55


def test_known_evaluations_numerically(ctx):
    for idx, expr in known_evaluations().items():
        diff = eval_euler_sum(idx, ctx) - eval_expr(expr, ctx)
        assert abs(float(diff.value)) < 1e-55, idx


def test_precision_monotone():
    exact = eval_euler_sum(T(2, 3), EvalContext(120)).value
    errs = []
    for d in (20, 40, 80):
        v = eval_euler_sum(T(2, 3), EvalContext(d)).value
        errs.append(abs(float(v - exact)))
        assert errs[-1] < 10.0 ** -(d - 2)
    assert errs[0] >= errs[1] >= errs[2]


def test_context_settings():
    ctx = EvalContext(50)
    assert ctx.mp.dps >= 65
    assert ctx.precision_bits == ctx.mp.prec
    assert ctx.tolerance == pytest.approx(1e-40)
    assert ctx.derive(2).mp.dps > ctx.mp.dps
    with pytest.raises(ValueError):
        EvalContext(10)


def test_context_does_not_touch_global_precision():
    before = mpmath.mp.prec
    eval_euler_sum(T(3, 3), EvalContext(80))
    assert mpmath.mp.prec == before


def test_mpfloat_floor():
    with pytest.raises(ValueError):
        MPFloat(mpmath.mpf(1), 53)
    v = eval_euler_sum(T(1, 2), EvalContext(15, 10))
    assert v.precision_bits >= 64


def test_mpfloat_error_propagation(ctx):
    a = ctx.wrap(ctx.mpf(2), 1e-30)
    b = ctx.wrap(ctx.mpf(3), 2e-30)
    assert (a + b).error >= 3e-30
    assert (a * b).error >= 3 * 1e-30 + 2 * 2e-30
    assert (a * Fraction(1, 2)).error >= 0.5e-30
    assert float(a - a) == 0


def test_eval_terms_linear(ctx):
    terms = [(Fraction(3), T(2, 2)), (Fraction(-1, 2), S(1, 3))]
    got = eval_terms(terms, ctx)
    want = eval_euler_sum(T(2, 2), ctx) * 3 - eval_euler_sum(S(1, 3), ctx) * Fraction(1, 2)
    assert abs(float((got - want).value)) < 1e-60


def test_threads_give_identical_values():
    idxs = [T(p, q) for p in range(1, 4) for q in range(2, 5)] + [R(2, 3), S(3, 2)]
    results = []

    def work():
        c = EvalContext(40)
        results.append([mpmath.nstr(eval_euler_sum(i, c).value, 45) for i in idxs])

    threads = [threading.Thread(target=work) for _ in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(results) == 6
    assert all(r == results[0] for r in results)


# ---- plain summation path ---------------------------------------------------------

def test_harmonic_recurrence(ctx):
    st_ = HarmonicState(ctx, [1, 2])
    for _ in range(100):
        st_.advance()
    mp = ctx.mp
    assert abs(st_.H[1] - mp.harmonic(100)) < 1e-55
    # h_n = sum (k - 1/2)^-1 = 2 * (H_{2n} - H_n / 2)
    assert abs(st_.h[1] - 2 * (mp.harmonic(200) - mp.harmonic(100) / 2)) < 1e-55
    assert abs(st_.H[2] - (mp.zeta(2) - mp.zeta(2, 101))) < 1e-55


def test_harmonic_self_check_trips():
    ctx = EvalContext(20)
    s = HarmonicState(ctx, [1])
    for _ in range(3):
        s.advance()
    s.H[1] += 1e-10
    with pytest.raises(AssertionError):
        s.advance()


@pytest.mark.parametrize("idx", [T(1, 2), T(2, 3), S(1, 3), S(2, 2), R(1, 3), R(3, 2)], ids=str)
def test_direct_sum_within_tail_bound(idx):
    ctx = EvalContext(30)
    exact = eval_euler_sum(idx, ctx).value
    direct = eval_euler_sum_direct(idx, ctx, 2000)
    gap = float(exact - direct.value)
    # all summands are positive, so the partial sum undershoots
    assert 0 <= gap <= direct.error
    # and the bound is not absurdly loose
    assert direct.error < 50 * gap


def test_tail_bound_example():
    assert tail_bound("S", 1, 5, 10**6) < 1e-20


@given(st.sampled_from(["T", "S", "R"]), st.integers(2, 4), st.integers(3, 6), st.integers(10, 10**5))
def test_tail_bound_polynomial_decay(fam, p, q, N):
    # for p >= 2 the bound is a constant over N^(q-1)
    ratio = tail_bound(fam, p, q, 2 * N) / tail_bound(fam, p, q, N)
    assert ratio <= 2.0 ** -(q - 1) * 1.01


@given(st.sampled_from(["T", "S", "R"]), st.integers(1, 3), st.integers(2, 5), st.integers(2, 10**6))
def test_tail_bound_monotone(fam, p, q, N):
    assert tail_bound(fam, p, q, N + 1) <= tail_bound(fam, p, q, N)


def test_terms_needed():
    n = terms_needed("T", 2, 4, 1e-12)
    assert tail_bound("T", 2, 4, n) <= 1e-12 < tail_bound("T", 2, 4, n - 1)
    with pytest.raises(PrecisionUnreachable):
        terms_needed("T", 1, 2, 1e-30, cap=10**6)


def test_direct_sum_respects_term_cap():
    ctx = EvalContext(20, term_cap=1000)
    with pytest.raises(PrecisionUnreachable):
        eval_euler_sum_direct(T(1, 2), ctx, 5000)


# ---- literal oracle ----------------------------------------------------------------

@pytest.mark.parametrize("kind,p,q", [("t", 1, 2), ("t", 2, 3), ("T", 1, 3), ("T", 2, 2)])
def test_oracle_brackets_engine(kind, p, q):
    ctx = EvalContext(30)
    if kind == "t":
        exact = eval_euler_sum(SumIndex(Family.DOUBLE_t, p, q), ctx).value
    else:
        exact = eval_euler_sum(SumIndex(Family.DOUBLE_T, p, q), ctx).value
    o = eval_double_oracle(kind, p, q, 50000, ctx)
    gap = float(exact - o.value)
    assert -1e-15 <= gap <= o.error


def test_oracle_atoms():
    ctx = EvalContext(30)
    z62 = eval_double_oracle("zeta", 2, 6, 100000, ctx)
    assert abs(float(z62.value - eval_expr(ZETA62, ctx).value)) <= z62.error + 1e-16
    a51 = eval_double_oracle("azeta", 1, 5, 100000, ctx)
    assert abs(float(a51.value - eval_expr(AZETA51, ctx).value)) <= a51.error + 1e-16
    assert a51.precision_bits == 64


def test_oracle_rejects_bad_input():
    with pytest.raises(ValueError):
        eval_double_oracle("x", 1, 2, 100)
    with pytest.raises(ValueError):
        eval_double_oracle("t", 1, 1, 100)


@settings(max_examples=10)
@given(st.integers(1, 3), st.integers(3, 5))
def test_oracle_agrees_for_random_small_indices(p, q):
    ctx = EvalContext(20)
    exact = eval_euler_sum(SumIndex(Family.DOUBLE_t, p, q), ctx).value
    o = eval_double_oracle("t", p, q, 20000, ctx)
    assert -1e-15 <= float(exact - o.value) <= o.error
