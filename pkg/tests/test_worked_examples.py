from fractions import Fraction

import pytest

from eulersums.const_ring import Family, SumIndex
from eulersums.series_engine import EvalContext, eval_expr, eval_terms
from eulersums.worked_examples import (
    EXACT_EXAMPLES,
    NUMERIC_EXAMPLES,
    WorkedExample,
    link_scale,
    parse_terms,
)


@pytest.fixture(scope="module")
def ctx():
    return EvalContext(50)


def test_parse_terms():
    got = parse_terms("3T[2,4] - 2S[3,3] + 5TT(4,6) - 1/2R[1,2]")
    assert got == [
        (3, SumIndex(Family.T_SUM, 2, 4)),
        (-2, SumIndex(Family.S_SUM, 3, 3)),
        (5, SumIndex(Family.DOUBLE_T, 6, 4)),
        (Fraction(-1, 2), SumIndex(Family.R_SUM, 1, 2)),
    ]
    with pytest.raises(ValueError):
        parse_terms("3Q[1,2]")


def test_registry_size_and_labels():
    assert len(NUMERIC_EXAMPLES) >= 30
    labels = [e.label for e in NUMERIC_EXAMPLES]
    assert len(labels) == len(set(labels))


def find(lhs):
    return next(e for e in NUMERIC_EXAMPLES if e.lhs.replace(" ", "") == lhs.replace(" ", ""))


@pytest.mark.parametrize(
    "lhs,rhs",
    [
        ("T[1,2] + S[1,2]", "pi^2*ln2"),
        ("3R[2,4] + 2R[3,3]", "112*z(3)^2 - 1/6*pi^6"),
        ("42R[4,10] + 56R[5,9] + 35R[6,8] + 10R[7,7]", "1802808*z(5)*z(9) + 1614170*z(7)^2 - 5461/14175*pi^14"),
        ("T[1,5] + S[1,5]", "62*ln2*z(5) - 7*z(3)^2 - 1/30*pi^6"),
        ("3TT(5,7) + 10TT(6,6) + 18TT(7,5) + 21TT(8,4) + 14TT(9,3)", "11811/1024*z(5)*z(7) - 1/92160*pi^12"),
    ],
)
def test_required_examples_present(lhs, rhs):
    ex = find(lhs)
    assert ex.closed_form == type(ex.closed_form).parse(rhs)


def test_both_double_t_examples_present():
    doubles = [e for e in NUMERIC_EXAMPLES if "TT(" in e.lhs]
    assert len(doubles) == 2


@pytest.mark.parametrize("ex", NUMERIC_EXAMPLES, ids=lambda e: e.label)
def test_example_links_to_general_form(ex):
    assert link_scale(ex) is not None


@pytest.mark.parametrize("ex", NUMERIC_EXAMPLES, ids=lambda e: e.label)
def test_example_numeric(ex, ctx):
    res = eval_terms(ex.terms, ctx) - eval_expr(ex.closed_form, ctx)
    assert abs(float(res.value)) < 1e-40


def test_scale_inference():
    c = {e.label: link_scale(e) for e in NUMERIC_EXAMPLES}
    assert c["T1q+S1q q=2"] == 1
    assert c["(3,3,3)"] == Fraction(1, 3)
    assert c["(2,1,2)"] == -1


def test_wrong_display_is_not_linked():
    good = find("T[1,2] + S[1,2]")
    bad_rhs = WorkedExample("x", good.lhs, "2*pi^2*ln2", good.identity, good.params)
    assert link_scale(bad_rhs) is None
    bad_lhs = WorkedExample("y", "T[1,2] + 2S[1,2]", good.rhs, good.identity, good.params)
    assert link_scale(bad_lhs) is None


@pytest.mark.parametrize("ex", EXACT_EXAMPLES, ids=lambda e: e.label)
def test_exact_examples(ex):
    assert all(ex.residual(v) == 0 for v in ex.values)


def test_exact_examples_detect_perturbation():
    ex = EXACT_EXAMPLES[0]
    assert ex.residual(ex.values[0]) + Fraction(1, 10**9) != 0
