"""Fixed regression set: displayed worked identities, transcribed literally.

Each numeric example carries its own LHS term list and RHS, exactly as
displayed, plus a link to the general identity it instantiates.  The link is
checked structurally: the displayed LHS must be a rational multiple ``c`` of
the expanded general LHS, and the displayed RHS the same multiple of the
general RHS.  Displayed forms are often normalized differently from the
general statement (divided by a common factor, or negated), so ``c`` is
inferred rather than assumed.

LHS notation: ``T[p,q]``, ``S[p,q]``, ``R[p,q]`` for the linear sums and
``TT(a,b)`` for the double T-value T(a,b).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .const_ring import ConstExpr, Family, SumIndex, lhs_spec, normalize, rhs_spec
from .exact_kernel import bernoulli, binom, genocchi

__all__ = [
    "WorkedExample",
    "ExactExample",
    "NUMERIC_EXAMPLES",
    "EXACT_EXAMPLES",
    "parse_terms",
    "link_scale",
]

_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(T|S|R)\[(\d+),(\d+)\]|([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*TT\((\d+),(\d+)\)")
_FAMILY = {"T": Family.T_SUM, "S": Family.S_SUM, "R": Family.R_SUM}


def parse_terms(text: str) -> list[tuple[Fraction, SumIndex]]:
    """``"3T[2,4] - 2S[3,3] + 5TT(4,6)"`` -> weighted SumIndex list."""
    out = []
    pos = 0
    compact = text.replace(" ", "")
    while pos < len(compact):
        m = _TERM.match(compact, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse term list at {compact[pos:]!r}")
        if m.group(3):
            sign, coeff = m.group(1), m.group(2)
            idx = SumIndex(_FAMILY[m.group(3)], int(m.group(4)), int(m.group(5)))
        else:
            sign, coeff = m.group(6), m.group(7)
            a, b = int(m.group(8)), int(m.group(9))
            idx = SumIndex(Family.DOUBLE_T, b, a)  # T(a,b)
        w = Fraction(coeff) if coeff else Fraction(1)
        out.append((-w if sign == "-" else w, idx))
        pos = m.end()
    return out


@dataclass(frozen=True)
class WorkedExample:
    label: str
    lhs: str
    rhs: str
    identity: str
    params: tuple[tuple[str, int], ...]

    @property
    def terms(self) -> list[tuple[Fraction, SumIndex]]:
        return parse_terms(self.lhs)

    @property
    def closed_form(self) -> ConstExpr:
        return ConstExpr.parse(self.rhs)


def link_scale(ex: WorkedExample) -> Fraction | None:
    """The factor c with displayed = c * general, or None if no such c exists."""
    params = dict(ex.params)
    if ex.identity == "KNOWN_EVAL":
        return Fraction(1) if len(ex.terms) == 1 else None
    general = dict((idx, w) for w, idx in lhs_spec(ex.identity, params))
    shown = {}
    for w, idx in ex.terms:
        shown[idx] = shown.get(idx, Fraction(0)) + w
    if set(general) != set(shown):
        return None
    first = next(iter(shown))
    c = shown[first] / general[first]
    if any(shown[i] != c * general[i] for i in shown):
        return None
    lhs = normalize(ex.closed_form, "pi_form")
    rhs = normalize(rhs_spec(ex.identity, params) * c, "pi_form")
    return c if lhs == rhs else None


def _ex(label: str, lhs: str, rhs: str, identity: str, **params: int) -> WorkedExample:
    return WorkedExample(label, lhs, rhs, identity, tuple(params.items()))


NUMERIC_EXAMPLES: tuple[WorkedExample, ...] = (
    # T_{1,q} + Sbar_{1,q}
    _ex("T1q+S1q q=2", "T[1,2] + S[1,2]", "pi^2*ln2", "SYM_TS", m=1, p=1, q=2),
    _ex("T1q+S1q q=3", "T[1,3] + S[1,3]", "14*ln2*z(3) - 1/12*pi^4", "SYM_TS", m=1, p=1, q=3),
    _ex("T1q+S1q q=4", "T[1,4] + S[1,4]", "-5/3*pi^2*z(3) + 1/3*pi^4*ln2", "SYM_TS", m=1, p=1, q=4),
    _ex("T1q+S1q q=5", "T[1,5] + S[1,5]", "62*ln2*z(5) - 7*z(3)^2 - 1/30*pi^6", "SYM_TS", m=1, p=1, q=5),
    _ex("T_{1,3}", "T[1,3]", "-16*Li4(1/2) - 2/3*ln2^4 + 2/3*pi^2*ln2^2 + 23/360*pi^4",
        "KNOWN_EVAL", p=1, q=3),
    _ex("T_{1,5}", "T[1,5]", "-32*z(5b,1) + 62*ln2*z(5) + 17/2*z(3)^2 - 73/1260*pi^6",
        "KNOWN_EVAL", p=1, q=5),
    _ex("S_{1,3}", "S[1,3]", "16*Li4(1/2) + 14*ln2*z(3) + 2/3*ln2^4 - 2/3*pi^2*ln2^2 - 53/360*pi^4",
        "KNOWN_EVAL", p=1, q=3),
    _ex("S_{1,5}", "S[1,5]", "32*z(5b,1) - 31/2*z(3)^2 + 31/1260*pi^6", "KNOWN_EVAL", p=1, q=5),
    # m = q, p = 1
    _ex("(2,1,2)", "T[2,2] - 2S[1,3] - S[2,2]", "-1/12*pi^4", "SYM_TS", m=2, p=1, q=2),
    _ex("(3,1,3)", "T[3,3] + 6S[1,5] + 3S[2,4] + S[3,3]", "49*z(3)^2 - 1/30*pi^6", "SYM_TS", m=3, p=1, q=3),
    _ex("(4,1,4)", "T[4,4] - 20S[1,7] - 10S[2,6] - 4S[3,5] - S[4,4]", "-17/1260*pi^8",
        "SYM_TS", m=4, p=1, q=4),
    _ex("(5,1,5)", "T[5,5] + 70S[1,9] + 35S[2,8] + 15S[3,7] + 5S[4,6] + S[5,5]",
        "961*z(5)^2 - 31/5670*pi^10", "SYM_TS", m=5, p=1, q=5),
    _ex("(6,1,6)", "T[6,6] - 252S[1,11] - 126S[2,10] - 56S[3,9] - 21S[4,8] - 6S[5,7] - S[6,6]",
        "-691/311850*pi^12", "SYM_TS", m=6, p=1, q=6),
    # m = q, p = 3, 5
    _ex("(2,3,2)", "3T[2,4] + 4T[3,3] + 3T[4,2] - 2S[3,3] - 3S[4,2]", "196*z(3)^2 - 1/3*pi^6",
        "SYM_TS", m=2, p=3, q=2),
    _ex("(3,3,3)", "2T[3,5] + 3T[4,4] + 2T[5,3] + 2S[3,5] + 3S[4,4] + 2S[5,3]",
        "868*z(3)*z(5) - 17/180*pi^8", "SYM_TS", m=3, p=3, q=3),
    _ex("(4,3,4)", "5T[4,6] + 8T[5,5] + 5T[6,4] - 10S[3,7] - 15S[4,6] - 12S[5,5] - 5S[6,4]",
        "7688*z(5)^2 - 31/315*pi^10", "SYM_TS", m=4, p=3, q=4),
    _ex("(2,5,2)", "5T[2,6] + 8T[3,5] + 9T[4,4] + 8T[5,3] + 5T[6,2] - 2S[5,3] - 5S[6,2]",
        "3472*z(3)*z(5) - 17/36*pi^8", "SYM_TS", m=2, p=5, q=2),
    _ex("(3,5,3)",
        "5T[3,7] + 10T[4,6] + 12T[5,5] + 10T[6,4] + 5T[7,3] + 2S[5,5] + 5S[6,4] + 5S[7,3]",
        "8890*z(3)*z(7) + 11532*z(5)^2 - 31/135*pi^10", "SYM_TS", m=3, p=5, q=3),
    # odd weight
    _ex("(2,1,3)", "T[2,3] - 3S[1,4] - S[2,3]", "-5/6*pi^2*z(3)", "SYM_TS", m=2, p=1, q=3),
    _ex("(3,1,2)", "T[3,2] + 3S[1,4] + 2S[2,3] + S[3,2]", "19/6*pi^2*z(3)", "SYM_TS", m=3, p=1, q=2),
    _ex("(2,2,2)", "T[2,3] + T[3,2] + S[2,3] + S[3,2]", "7/3*pi^2*z(3)", "SYM_TS", m=2, p=2, q=2),
    _ex("(2,4,2)", "2T[2,5] + 3T[3,4] + 3T[4,3] + 2T[5,2] + S[4,3] + 2S[5,2]", "62/3*pi^2*z(5)",
        "SYM_TS", m=2, p=4, q=2),
    _ex("(2,6,2)",
        "3T[2,7] + 5T[3,6] + 6T[4,5] + 6T[5,4] + 5T[6,3] + 3T[7,2] + S[6,3] + 3S[7,2]",
        "127*pi^2*z(7)", "SYM_TS", m=2, p=6, q=2),
    _ex("(3,2,3)", "T[3,4] + T[4,3] - 2S[2,5] - 2S[3,4] - S[4,3]", "-14/45*pi^4*z(3)",
        "SYM_TS", m=3, p=2, q=3),
    _ex("(3,4,3)", "5T[3,6] + 9T[4,5] + 9T[5,4] + 5T[6,3] - 3S[4,5] - 6S[5,4] - 5S[6,3]",
        "-62/15*pi^4*z(5)", "SYM_TS", m=3, p=4, q=3),
    _ex("(4,2,4)", "T[4,5] + T[5,4] + 5S[2,7] + 5S[3,6] + 3S[4,5] + S[5,4]",
        "31/45*pi^4*z(5) + 2/27*pi^6*z(3)", "SYM_TS", m=4, p=2, q=4),
    _ex("(5,2,5)", "T[5,6] + T[6,5] - 14S[2,9] - 14S[3,8] - 9S[4,7] - 4S[5,6] - S[6,5]",
        "-248/945*pi^6*z(5) - 14/675*pi^8*z(3)", "SYM_TS", m=5, p=2, q=5),
    # R_{1,q}
    _ex("R_{1,2}", "R[1,2]", "7*z(3) - pi^2*ln2", "R1Q", q=2),
    _ex("R_{1,3}", "R[1,3]", "-14*ln2*z(3) + 1/8*pi^4", "R1Q", q=3),
    _ex("R_{1,4}", "R[1,4]", "62*z(5) - 7/2*pi^2*z(3) - 1/3*pi^4*ln2", "R1Q", q=4),
    _ex("R_{1,5}", "R[1,5]", "-62*ln2*z(5) - 49/2*z(3)^2 + 1/12*pi^6", "R1Q", q=5),
    # symmetric R-sums
    _ex("R (2,2,3)", "3R[2,4] + 2R[3,3]", "112*z(3)^2 - 1/6*pi^6", "SYM_R", m=2, p=2, q=3),
    _ex("R (2,2,5)", "5R[2,6] + 2R[3,5]", "1798*z(3)*z(5) - 17/72*pi^8", "SYM_R", m=2, p=2, q=5),
    _ex("R_{2,4}", "R[2,4]", "128*z(5b,1) + z(3)^2 - 1/210*pi^6", "KNOWN_EVAL", p=2, q=4),
    _ex("R_{3,3}", "R[3,3]", "-192*z(5b,1) + 109/2*z(3)^2 - 8/105*pi^6", "KNOWN_EVAL", p=3, q=3),
    _ex("R_{2,6}", "R[2,6]", "768*z(7b,1) + 289*z(6,2) - 864*z(3)*z(5) + 59/525*pi^8",
        "KNOWN_EVAL", p=2, q=6),
    _ex("R_{3,5}", "R[3,5]", "-1920*z(7b,1) - 1445/2*z(6,2) + 3059*z(3)*z(5) - 2011/5040*pi^8",
        "KNOWN_EVAL", p=3, q=5),
    _ex("R (3,3,5)", "5R[3,7] + 5R[4,6] + 2R[5,5]", "-3810*z(3)*z(7) - 5704*z(5)^2 + 31/270*pi^10",
        "SYM_R", m=3, p=3, q=5),
    _ex("R (4,4,5)", "7R[4,8] + 12R[5,7] + 10R[6,6] + 4R[7,5]", "64640*z(5)*z(7) - 691/9450*pi^12",
        "SYM_R", m=4, p=4, q=5),
    _ex("R (2,3,8)", "9R[2,10] + 2R[3,9]", "58254*z(3)*z(9) + 94488*z(5)*z(7) - 691/3780*pi^12",
        "SYM_R", m=2, p=3, q=8),
    _ex("R (4,5,6)", "42R[4,10] + 56R[5,9] + 35R[6,8] + 10R[7,7]",
        "1802808*z(5)*z(9) + 1614170*z(7)^2 - 5461/14175*pi^14", "SYM_R", m=4, p=5, q=6),
    _ex("R (5,4,2)", "5R[4,6] + 12R[5,5] + 15R[6,4] + 10R[7,3]",
        "70*z(3)*z(7) + 4216*z(5)^2 - 31/630*pi^10", "SYM_R", m=5, p=4, q=2),
    _ex("R (5,6,2)", "3R[5,7] + 10R[6,6] + 18R[7,5] + 21R[8,4] + 14R[9,3]",
        "-10872*z(5)*z(7) + 98*z(3)*z(9) + 691/56700*pi^12", "SYM_R", m=5, p=6, q=2),
    # double T-values
    _ex("T (5,4,2)", "5TT(4,6) + 12TT(5,5) + 15TT(6,4) + 10TT(7,3)",
        "-961/64*z(5)^2 + 1/4608*pi^10", "SYM_T", m=5, p=4, q=2),
    _ex("T (5,6,2)", "3TT(5,7) + 10TT(6,6) + 18TT(7,5) + 21TT(8,4) + 14TT(9,3)",
        "11811/1024*z(5)*z(7) - 1/92160*pi^12", "SYM_T", m=5, p=6, q=2),
)


# --------------------------------------------------------------------------
# Exact Bernoulli/Genocchi examples (each checked over a parameter range)
# --------------------------------------------------------------------------

B, G = bernoulli, genocchi


def _bgg_n0(q: int) -> Fraction:
    lhs = sum(
        (binom(q - 1, i) * B(q + i) * G(q - i) / ((q + i) * (q - i)) for i in range(q)),
        Fraction(0),
    )
    rhs = Fraction((-1) ** q, q * binom(2 * q, q)) * G(2 * q) / (2 * q) - G(q) ** 2 / (4 * q * q)
    return lhs - rhs


def _bgg_n1(q: int) -> Fraction:
    lhs = sum(
        (binom(q - 1, i) * B(q + i) * G(q + 2 - i) / ((q + i) * (q + 2 - i)) for i in range(q)),
        Fraction(0),
    )
    rhs = (
        Fraction((-1) ** q, q * binom(2 * q, q)) * G(2 * q + 2) / (2 * q + 2)
        - G(q) * G(q + 2) / (2 * q * (q + 2))
        + G(q + 1) ** 2 / (2 * (q + 1) ** 2)
    )
    return lhs - rhs


def _gg_alt(q: int, n: int) -> Fraction:
    return sum(
        (
            (-1) ** i * binom(2 * n, i) * G(i + q) * G(2 * n + q - i) / ((i + q) * (2 * n + q - i))
            for i in range(2 * n + 1)
        ),
        Fraction(0),
    )


def _gg_q3(n: int) -> Fraction:
    rhs = -G(2 * n + 6) / (15 * (2 * n + 6)) + G(2 * n + 2) / (15 * (2 * n + 2))
    return _gg_alt(3, n) - rhs


def _gg_q4(n: int) -> Fraction:
    rhs = (
        G(2 * n + 8) / (70 * (2 * n + 8))
        + G(2 * n + 4) / (30 * (2 * n + 4))
        - G(2 * n + 2) / (21 * (2 * n + 2))
    )
    return _gg_alt(4, n) - rhs


@dataclass(frozen=True)
class ExactExample:
    label: str
    param: str
    values: tuple[int, ...]
    residual: Callable[[int], Fraction]


EXACT_EXAMPLES: tuple[ExactExample, ...] = (
    ExactExample("BG-GG n=0", "q", tuple(range(2, 31)), _bgg_n0),
    ExactExample("BG-GG n=1", "q", tuple(range(2, 31)), _bgg_n1),
    ExactExample("GG q=3", "n", tuple(range(0, 21)), _gg_q3),
    ExactExample("GG q=4", "n", tuple(range(0, 21)), _gg_q4),
)
