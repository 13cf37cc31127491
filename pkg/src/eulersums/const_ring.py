"""Exact Q-linear combinations of products of constants (zeta values, tbar
values, pi, ln 2 and a few depth-two constants), together with the closed-form
right-hand sides of the symmetric Euler-sum identities.

A :class:`ConstExpr` is immutable.  The conventions ``zeta(1) = -2 ln 2`` and
``tbar(1) = 0`` are applied by the constructors :func:`zeta` and :func:`tbar`,
so an atom with argument 1 never exists.
"""
from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping, TypeVar

from .exact_kernel import genocchi, zeta_even_over_pi

__all__ = [
    "AtomKind",
    "Atom",
    "Monomial",
    "ConstExpr",
    "Family",
    "SumIndex",
    "zeta",
    "tbar",
    "LN2",
    "PI",
    "LI4HALF",
    "AZETA51",
    "AZETA71",
    "ZETA62",
    "ONE",
    "ZERO",
    "const",
    "normalize",
    "lambda_op",
    "rhs_sym_TS",
    "rhs_TS_qeq",
    "rhs_TS_qeq_coeff",
    "rhs_sym_R",
    "rhs_sym_T",
    "lhs_spec",
    "rhs_spec",
    "IdentityForm",
    "IDENTITY_FORMS",
    "merge_terms",
    "known_evaluations",
    "weight",
]


class AtomKind(enum.IntEnum):
    # Order fixes the canonical ordering of atoms inside a monomial.
    PI = 0
    LN2 = 1
    ZETA = 2
    TBAR = 3
    LI4HALF = 4
    AZETA51 = 5
    AZETA71 = 6
    ZETA62 = 7


_ATOM_WEIGHT = {
    AtomKind.PI: 1,
    AtomKind.LN2: 1,
    AtomKind.LI4HALF: 4,
    AtomKind.AZETA51: 6,
    AtomKind.AZETA71: 8,
    AtomKind.ZETA62: 8,
}

_FIXED_NAMES = {
    AtomKind.PI: "pi",
    AtomKind.LN2: "ln2",
    AtomKind.LI4HALF: "Li4(1/2)",
    AtomKind.AZETA51: "z(5b,1)",
    AtomKind.AZETA71: "z(7b,1)",
    AtomKind.ZETA62: "z(6,2)",
}
_NAME_TO_FIXED = {v: k for k, v in _FIXED_NAMES.items()}


@dataclass(frozen=True, order=True)
class Atom:
    kind: AtomKind
    arg: int = 0

    def __post_init__(self) -> None:
        if self.kind in (AtomKind.ZETA, AtomKind.TBAR):
            if self.arg < 2:
                raise ValueError(f"{self.kind.name} atom needs argument >= 2, got {self.arg}")
        elif self.arg != 0:
            raise ValueError(f"{self.kind.name} atom takes no argument")

    @property
    def weight(self) -> int:
        if self.kind in (AtomKind.ZETA, AtomKind.TBAR):
            return self.arg
        return _ATOM_WEIGHT[self.kind]

    def __str__(self) -> str:
        if self.kind is AtomKind.ZETA:
            return f"z({self.arg})"
        if self.kind is AtomKind.TBAR:
            return f"tbar({self.arg})"
        return _FIXED_NAMES[self.kind]

    @classmethod
    def parse(cls, text: str) -> "Atom":
        text = text.strip()
        if text in _NAME_TO_FIXED:
            return cls(_NAME_TO_FIXED[text])
        m = re.fullmatch(r"(z|tbar)\((\d+)\)", text)
        if not m:
            raise ValueError(f"unknown atom {text!r}")
        kind = AtomKind.ZETA if m.group(1) == "z" else AtomKind.TBAR
        return cls(kind, int(m.group(2)))


# A monomial is a sorted tuple of (atom, exponent) pairs; () is the constant 1.
Monomial = tuple[tuple[Atom, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps: dict[Atom, int] = dict(a)
    for atom, e in b:
        exps[atom] = exps.get(atom, 0) + e
    return tuple(sorted(exps.items()))


def _mono_weight(m: Monomial) -> int:
    return sum(atom.weight * e for atom, e in m)


def _mono_str(m: Monomial) -> str:
    return "*".join(str(a) if e == 1 else f"{a}^{e}" for a, e in m)


def _mono_key(m: Monomial):
    # Heavier monomials first, then by atom tuple; gives a stable rendering.
    return (-_mono_weight(m), [(int(a.kind), a.arg, -e) for a, e in m])


class ConstExpr:
    """Finite sum of ``coefficient * monomial`` with Fraction coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                key = tuple(sorted(mono))
                clean[key] = clean.get(key, Fraction(0)) + c
                if not clean[key]:
                    del clean[key]
        self._terms = clean
        self._hash = None

    @classmethod
    def atom(cls, atom: Atom, exponent: int = 1) -> "ConstExpr":
        return cls({((atom, exponent),): Fraction(1)})

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    # ring operations -----------------------------------------------------
    @staticmethod
    def _coerce(other) -> "ConstExpr":
        if isinstance(other, ConstExpr):
            return other
        if isinstance(other, (int, Fraction)):
            return ConstExpr({(): Fraction(other)})
        return NotImplemented

    def __add__(self, other) -> "ConstExpr":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return ConstExpr(out)

    __radd__ = __add__

    def __neg__(self) -> "ConstExpr":
        return ConstExpr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "ConstExpr":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "ConstExpr":
        return (-self) + other

    def __mul__(self, other) -> "ConstExpr":
        if isinstance(other, (int, Fraction)):
            return ConstExpr({m: c * other for m, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return ConstExpr(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ConstExpr":
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, n: int) -> "ConstExpr":
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # inspection ----------------------------------------------------------
    def atoms(self) -> set[Atom]:
        return {a for m in self._terms for a, _ in m}

    def weights(self) -> set[int]:
        return {_mono_weight(m) for m in self._terms}

    def coefficient(self, mono: Iterable[tuple[Atom, int]]) -> Fraction:
        return self._terms.get(tuple(sorted(mono)), Fraction(0))

    def substitute(self, rule: Callable[[Atom], "ConstExpr | None"]) -> "ConstExpr":
        """Replace atoms via ``rule``; atoms mapped to ``None`` are kept."""
        out = ZERO
        for mono, c in self._terms.items():
            term = ConstExpr({(): c})
            for atom, e in mono:
                repl = rule(atom)
                if repl is None:
                    repl = ConstExpr.atom(atom)
                term = term * repl**e
            out = out + term
        return out

    # serialization -------------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for mono, c in self.items():
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = _mono_str(mono)
            else:
                body = f"{mag}*{_mono_str(mono)}"
            if not chunks:
                chunks.append(body if c > 0 else f"-{body}")
            else:
                chunks.append(("+ " if c > 0 else "- ") + body)
        return " ".join(chunks)

    def __repr__(self) -> str:
        return f"ConstExpr({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "ConstExpr":
        """Inverse of :meth:`__str__`; spaces around signs are optional."""
        text = text.replace(" ", "")
        if not text:
            raise ValueError("empty expression")
        out = ZERO
        for negative, body in _split_terms(text):
            coeff = Fraction(1)
            term = ONE
            for f in _split_factors(body):
                if re.fullmatch(r"\d+(/\d+)?", f):
                    coeff *= Fraction(f)
                    continue
                base, _, exp = f.rpartition("^") if re.search(r"\^\d+$", f) else (f, "", "1")
                term = term * ConstExpr.atom(Atom.parse(base), int(exp))
            out = out + term * (-coeff if negative else coeff)
        return out

    def to_json(self) -> list:
        return [
            {
                "monomial": [[str(a), e] for a, e in mono],
                "coeff": f"{c.numerator}/{c.denominator}",
            }
            for mono, c in self.items()
        ]

    @classmethod
    def from_json(cls, data: list) -> "ConstExpr":
        out: dict[Monomial, Fraction] = {}
        for entry in data:
            mono = tuple(sorted((Atom.parse(a), int(e)) for a, e in entry["monomial"]))
            out[mono] = out.get(mono, Fraction(0)) + Fraction(entry["coeff"])
        return cls(out)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def _split_terms(text: str) -> list[tuple[bool, str]]:
    # Split on '+'/'-' outside parentheses; returns (negative, body) pairs.
    terms, depth, cur, negative = [], 0, [], False
    for i, ch in enumerate(text):
        if ch in "+-" and depth == 0:
            if cur:
                terms.append((negative, "".join(cur)))
            elif i:
                raise ValueError(f"dangling sign in {text!r}")
            cur, negative = [], ch == "-"
            continue
        depth += (ch == "(") - (ch == ")")
        cur.append(ch)
    if not cur:
        raise ValueError(f"expression ends in a sign: {text!r}")
    terms.append((negative, "".join(cur)))
    return terms


def _split_factors(body: str) -> list[str]:
    # Split on '*' outside parentheses (atoms like Li4(1/2) contain '/').
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    if not all(parts):
        raise ValueError(f"empty factor in {body!r}")
    return parts


ZERO = ConstExpr()
ONE = ConstExpr({(): Fraction(1)})
PI = ConstExpr.atom(Atom(AtomKind.PI))
LN2 = ConstExpr.atom(Atom(AtomKind.LN2))
LI4HALF = ConstExpr.atom(Atom(AtomKind.LI4HALF))
AZETA51 = ConstExpr.atom(Atom(AtomKind.AZETA51))
AZETA71 = ConstExpr.atom(Atom(AtomKind.AZETA71))
ZETA62 = ConstExpr.atom(Atom(AtomKind.ZETA62))


def const(value) -> ConstExpr:
    return ConstExpr({(): Fraction(value)})


def zeta(s: int) -> ConstExpr:
    """zeta(s) for s >= 2; zeta(1) is read as -2 ln 2."""
    if s == 1:
        return LN2 * -2
    return ConstExpr.atom(Atom(AtomKind.ZETA, s))


def tbar(s: int) -> ConstExpr:
    """tbar(s) = (2^s - 1) zeta(s) for s >= 2; tbar(1) is read as 0."""
    if s == 1:
        return ZERO
    return ConstExpr.atom(Atom(AtomKind.TBAR, s))


def weight(e: ConstExpr) -> int:
    """The common weight of a homogeneous expression."""
    ws = e.weights()
    if len(ws) != 1:
        raise ValueError(f"expression is not weight-homogeneous: weights {sorted(ws)}")
    return ws.pop()


def normalize(e: ConstExpr, mode: str = "raw") -> ConstExpr:
    """``raw``: tbar(s) -> (2^s - 1) zeta(s).  ``pi_form``: also zeta(2k) -> r pi^(2k)."""
    if mode not in ("raw", "pi_form"):
        raise ValueError(f"unknown normalization mode {mode!r}")

    def rule(atom: Atom):
        if atom.kind is AtomKind.TBAR:
            inner = ConstExpr.atom(Atom(AtomKind.ZETA, atom.arg))
            if mode == "pi_form" and atom.arg % 2 == 0:
                inner = PI**atom.arg * zeta_even_over_pi(atom.arg // 2)
            return inner * (2**atom.arg - 1)
        if atom.kind is AtomKind.ZETA and mode == "pi_form" and atom.arg % 2 == 0:
            return PI**atom.arg * zeta_even_over_pi(atom.arg // 2)
        return None

    return e.substitute(rule)


# --------------------------------------------------------------------------
# lambda operator and closed forms
# --------------------------------------------------------------------------

V = TypeVar("V")


def lambda_op(m: int, p: int, q: int, family: Callable[[int, int], V]) -> V:
    """sum_{i+j=m-1} C(p+i-1, i) C(q+j-1, j) family(p+i, q+j).

    Generic over the value ring: works for ConstExpr, mpf or MPFloat, as long
    as values support ``int * value`` and ``+``.
    """
    if m < 1:
        raise ValueError(f"lambda_m needs m >= 1, got {m}")
    total = None
    for i in range(m):
        j = m - 1 - i
        w = comb(p + i - 1, i) * comb(q + j - 1, j)
        term = w * family(p + i, q + j)
        total = term if total is None else total + term
    return total


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def rhs_sym_TS(m: int, p: int, q: int) -> ConstExpr:
    """Closed form of (-1)^(m-1) lambda_p(T_{m,q}) + (-1)^(p-1) lambda_m(Sbar_{p,q})."""
    _check(m >= 1 and p >= 1, "rhs_sym_TS needs m, p >= 1")
    _check(q >= 2, f"rhs_sym_TS needs q >= 2, got q={q}")
    a = lambda_op(p, m, q, lambda x, y: tbar(x) * tbar(y) * _sign(x))
    b = lambda_op(m, p, q, lambda x, y: tbar(x) * zeta(y) * _sign(x))
    c = lambda_op(q, m, p, lambda x, y: zeta(x) * tbar(y))
    return a * _sign(m) + b * _sign(p) - c


def rhs_TS_qeq(p: int, q: int) -> ConstExpr:
    """The m = q, p odd form with the tbar*zeta terms merged into one sum."""
    _check(p >= 1 and p % 2 == 1, f"rhs_TS_qeq needs odd p >= 1, got p={p}")
    _check(q >= 2, f"rhs_TS_qeq needs q >= 2, got q={q}")
    first = lambda_op(p, q, q, lambda x, y: tbar(x) * tbar(y) * _sign(x)) * _sign(q)
    second = ZERO
    for k in range(1, q // 2 + 1):
        second += (
            tbar(p - 1 + 2 * k) * zeta(2 * q - 2 * k)
            * (comb(p - 2 + 2 * k, p - 1) * comb(2 * q - 1 - 2 * k, q - 2 * k))
        )
    return first - second * 2


def rhs_TS_qeq_coeff(p: int, q: int) -> ConstExpr:
    """The m = q, p odd closed form with the pi-power coefficient made explicit."""
    _check(p >= 1 and p % 2 == 1, f"rhs_TS_qeq_coeff needs odd p >= 1, got p={p}")
    _check(q >= 2, f"rhs_TS_qeq_coeff needs q >= 2, got q={q}")
    out = ZERO
    for i in range(p):
        if (q + i) % 2 == 1:
            out += tbar(q + i) * tbar(p + q - 1 - i) * (
                comb(q + i - 1, i) * comb(p + q - 2 - i, p - 1 - i)
            )
    out = out * _sign(q - 1)
    w = p - 1 + 2 * q
    coeff = Fraction(_sign((p - 1) // 2), 8) * comb(p - 2 + 2 * q, p - 1) * genocchi(w)
    coeff = coeff * Fraction(2**w) / _factorial(w)
    return out + PI**w * coeff


def _factorial(n: int) -> int:
    from math import factorial

    return factorial(n)


def rhs_sym_R(m: int, p: int, q: int) -> ConstExpr:
    """Closed form of (-1)^(m-1) lambda_p(R_{m,q}) + (-1)^(p-1) lambda_m(R_{p,q})."""
    _check(m >= 1 and p >= 1, "rhs_sym_R needs m, p >= 1")
    _check(q >= 2, f"rhs_sym_R needs q >= 2, got q={q}")
    w = m + p + q - 1
    out = tbar(w) * comb(m + p + q - 2, q - 1)
    out += lambda_op(p, m, q, lambda x, y: zeta(x) * tbar(y) * _sign(x)) * _sign(m)
    out += lambda_op(m, p, q, lambda x, y: zeta(x) * tbar(y) * _sign(x)) * _sign(p)
    out -= lambda_op(q, m, p, lambda x, y: tbar(x) * tbar(y))
    return out


def rhs_sym_T(m: int, p: int, q: int) -> ConstExpr:
    """Closed form of 2^(m+p+q-3) {(-1)^m lambda_p(T(m,q)) + (-1)^p lambda_m(T(p,q))}."""
    _check(min(m, p, q) >= 2, f"rhs_sym_T needs m, p, q >= 2, got {(m, p, q)}")
    w = m + p + q - 1
    out = tbar(w) * comb(m + p + q - 2, q - 1)
    out += lambda_op(p, m, q, lambda x, y: zeta(x) * tbar(y) * (1 + _sign(x))) * _sign(m)
    out += lambda_op(m, p, q, lambda x, y: zeta(x) * tbar(y) * (1 + _sign(x))) * _sign(p)
    out -= lambda_op(q, m, p, lambda x, y: tbar(x) * tbar(y))
    return out


# --------------------------------------------------------------------------
# Left-hand sides as weighted lists of sums
# --------------------------------------------------------------------------

class Family(str, enum.Enum):
    T_SUM = "T"
    S_SUM = "S"
    R_SUM = "R"
    DOUBLE_t = "t"
    DOUBLE_T = "TT"


@dataclass(frozen=True, order=True)
class SumIndex:
    """One linear sum or double value.

    For the double families the index mirrors the linear sums they bridge to:
    ``SumIndex(DOUBLE_t, p, q)`` is t(q, p) and ``SumIndex(DOUBLE_T, p, q)`` is
    T(q, p), so the outer (convergence-controlling) argument is always ``q``.
    """

    family: Family
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError(f"{self} diverges: need q >= 2")
        if self.p < 1:
            raise ValueError(f"{self} needs p >= 1")

    @property
    def weight(self) -> int:
        return self.p + self.q

    def __str__(self) -> str:
        f = self.family
        if f is Family.DOUBLE_t:
            return f"t({self.q},{self.p})"
        if f is Family.DOUBLE_T:
            return f"T({self.q},{self.p})"
        return f"{f.value}_{{{self.p},{self.q}}}"




Terms = list[tuple[Fraction, SumIndex]]


def merge_terms(terms: Iterable[tuple[Fraction, SumIndex]]) -> Terms:
    """Combine duplicate indices, drop zero weights and sort canonically."""
    acc: dict[SumIndex, Fraction] = {}
    for w, idx in terms:
        acc[idx] = acc.get(idx, Fraction(0)) + Fraction(w)
    return sorted(((w, idx) for idx, w in acc.items() if w), key=lambda t: t[1])


def _lam(m: int, p: int, q: int, make: Callable[[int, int], SumIndex], scale=1) -> Terms:
    # lambda_op spelled out on term lists, so weights stay explicit
    out = []
    for i in range(m):
        j = m - 1 - i
        w = comb(p + i - 1, i) * comb(q + j - 1, j)
        out.append((Fraction(scale) * w, make(p + i, q + j)))
    return out


def _T(a, b):
    return SumIndex(Family.T_SUM, a, b)


def _S(a, b):
    return SumIndex(Family.S_SUM, a, b)


def _R(a, b):
    return SumIndex(Family.R_SUM, a, b)


def _dt(a, b):
    # family entry Omega_{a,b} = t(b, a)
    return SumIndex(Family.DOUBLE_t, a, b)


def _dT(a, b):
    # family entry Omega_{a,b} = T(b, a)
    return SumIndex(Family.DOUBLE_T, a, b)


def _dT_plain(a, b):
    # family entry Omega_{a,b} = T(a, b)
    return SumIndex(Family.DOUBLE_T, b, a)


def _sum_tbar_products(q: int) -> ConstExpr:
    return sum((tbar(q - j) * tbar(j + 1) for j in range(1, q - 1)), ZERO)


def _qeq_tail(q: int, first_binom: Callable[[int], int], shift: int) -> ConstExpr:
    out = ZERO
    for k in range(1, q // 2 + 1):
        out += tbar(2 * k + shift) * zeta(2 * q - 2 * k) * (
            first_binom(k) * comb(2 * q - 1 - 2 * k, q - 2 * k)
        )
    return out * 2


@dataclass(frozen=True)
class IdentityForm:
    """LHS term list and RHS closed form of one family of identities."""

    params: tuple[str, ...]
    lhs: Callable[..., Terms]
    rhs: Callable[..., ConstExpr]
    valid: Callable[..., bool]


def _forms() -> dict[str, IdentityForm]:
    f: dict[str, IdentityForm] = {}

    def sym_ts_lhs(m, p, q):
        return _lam(p, m, q, _T, _sign(m - 1)) + _lam(m, p, q, _S, _sign(p - 1))

    f["SYM_TS"] = IdentityForm(
        ("m", "p", "q"), sym_ts_lhs, rhs_sym_TS, lambda m, p, q: m >= 1 and p >= 1 and q >= 2
    )
    f["TS1Q"] = IdentityForm(
        ("q",),
        lambda q: [(Fraction(1), _T(1, q)), (Fraction(1), _S(1, q))],
        lambda q: LN2 * tbar(q) * 2 - sum(
            (zeta(q - j) * tbar(j + 1) for j in range(1, q - 1)), ZERO
        ),
        lambda q: q >= 2,
    )
    f["TS_Q1Q"] = IdentityForm(
        ("q",),
        lambda q: sym_ts_lhs(q, 1, q),
        lambda q: tbar(q) ** 2 - _qeq_tail(q, lambda k: 1, 0),
        lambda q: q >= 2,
    )
    f["TS_Q3Q"] = IdentityForm(
        ("q",),
        lambda q: sym_ts_lhs(q, 3, q),
        lambda q: tbar(q) * tbar(q + 2) * (q * (q + 1))
        - tbar(q + 1) ** 2 * (q * q)
        - _qeq_tail(q, lambda k: comb(2 * k + 1, 2), 2),
        lambda q: q >= 2,
    )
    f["TS_Q5Q"] = IdentityForm(
        ("q",),
        lambda q: sym_ts_lhs(q, 5, q),
        lambda q: tbar(q) * tbar(q + 4) * (2 * comb(q + 3, 4))
        - tbar(q + 1) * tbar(q + 3) * (2 * q * comb(q + 2, 3))
        + tbar(q + 2) ** 2 * comb(q + 1, 2) ** 2
        - _qeq_tail(q, lambda k: comb(2 * k + 3, 4), 4),
        lambda q: q >= 2,
    )
    f["TS_QEQ_COEFF"] = IdentityForm(
        ("p", "q"),
        lambda p, q: sym_ts_lhs(q, p, q),
        rhs_TS_qeq_coeff,
        lambda p, q: p >= 1 and p % 2 == 1 and q >= 2,
    )

    def qeq_even_rhs(q, n):
        out = ZERO
        for i in range(1, q, 2):
            j = q - 1 - i
            out += tbar(2 * n + i) * zeta(q + j) * (comb(2 * n + i - 1, i) * comb(q + j - 1, j))
        return out * -2

    f["TS_QEQ_EVEN"] = IdentityForm(
        ("q", "n"),
        lambda q, n: sym_ts_lhs(q, 2 * n, q),
        qeq_even_rhs,
        lambda q, n: q >= 2 and n >= 1,
    )

    def ts2e2_lhs(n):
        terms = [
            (Fraction((i + 1) * (2 * n - i), 2), _T(i + 2, 2 * n - 1 - i + 2))
            for i in range(2 * n)
        ]
        return terms + [(Fraction(n), _S(2 * n + 1, 2)), (Fraction(1), _S(2 * n, 3))]

    f["TS2E2"] = IdentityForm(
        ("n",),
        ts2e2_lhs,
        lambda n: PI**2 * zeta(2 * n + 1) * Fraction(n * (2 ** (2 * n + 1) - 1), 3),
        lambda n: n >= 1,
    )

    def q345_lhs(q, n):
        return _lam(2 * n, q, q, _T) + _lam(q, 2 * n, q, _S, _sign(q))

    def q345_rhs(q, n):
        c = (2 * n + 2) * (2 * n + 1) * (2 * n)
        if q == 3:
            return zeta(4) * tbar(2 * n + 1) * (-12 * n)
        if q == 4:
            return zeta(6) * tbar(2 * n + 1) * (40 * n) + zeta(4) * tbar(2 * n + 3) * Fraction(c, 3)
        return zeta(8) * tbar(2 * n + 1) * (-140 * n) - zeta(6) * tbar(2 * n + 3) * Fraction(5 * c, 3)

    f["TS_Q345"] = IdentityForm(
        ("q", "n"), q345_lhs, q345_rhs, lambda q, n: q in (3, 4, 5) and n >= 1
    )

    def ttv_lhs(m, p, q):
        w = m + p + q - 1
        return _lam(p, m, q, _dt, _sign(m - 1) * 2**w) + _lam(
            m, p, q, _dT, _sign(p - 1) * Fraction(2 ** (w - 2))
        )

    f["SYM_TTV"] = IdentityForm(
        ("m", "p", "q"), ttv_lhs, rhs_sym_TS, lambda m, p, q: m >= 1 and p >= 1 and q >= 2
    )
    f["SYM_R"] = IdentityForm(
        ("m", "p", "q"),
        lambda m, p, q: _lam(p, m, q, _R, _sign(m - 1)) + _lam(m, p, q, _R, _sign(p - 1)),
        rhs_sym_R,
        lambda m, p, q: m >= 1 and p >= 1 and q >= 2,
    )
    f["R1Q"] = IdentityForm(
        ("q",),
        lambda q: [(Fraction(1), _R(1, q))],
        lambda q: tbar(q + 1) * Fraction(q, 2) - LN2 * tbar(q) * 2
        - _sum_tbar_products(q) * Fraction(1, 2),
        lambda q: q >= 2,
    )

    def la_r_rhs(p, q):
        inner = tbar(2 * p + q - 1) * comb(2 * p + q - 2, q - 1) - lambda_op(
            q, p, p, lambda x, y: tbar(x) * tbar(y)
        )
        return inner * Fraction(_sign(p - 1), 2) - lambda_op(
            p, p, q, lambda x, y: zeta(x) * tbar(y) * _sign(x)
        )

    f["LA_R"] = IdentityForm(
        ("p", "q"), lambda p, q: _lam(p, p, q, _R), la_r_rhs, lambda p, q: p >= 2 and q >= 2
    )

    def sym_t_lhs(m, p, q):
        scale = 2 ** (m + p + q - 3)
        return _lam(p, m, q, _dT_plain, _sign(m) * scale) + _lam(
            m, p, q, _dT_plain, _sign(p) * scale
        )

    f["SYM_T"] = IdentityForm(
        ("m", "p", "q"), sym_t_lhs, rhs_sym_T, lambda m, p, q: min(m, p, q) >= 2
    )

    def la_t_rhs(p, q):
        w = 2 * p + q - 1
        a = (
            tbar(w) * comb(2 * p + q - 2, q - 1)
            - lambda_op(q, p, p, lambda x, y: tbar(x) * tbar(y))
        ) * Fraction(_sign(p), 2 ** (w - 1))
        b = lambda_op(p, p, q, lambda x, y: zeta(x) * tbar(y) * (1 + _sign(x)))
        return a + b * Fraction(1, 2 ** (w - 2))

    f["LA_T"] = IdentityForm(
        ("p", "q"), lambda p, q: _lam(p, p, q, _dT_plain), la_t_rhs, lambda p, q: p >= 2 and q >= 2
    )
    return f


IDENTITY_FORMS: dict[str, IdentityForm] = _forms()


def _form(identity_id) -> IdentityForm:
    key = getattr(identity_id, "value", identity_id)
    try:
        return IDENTITY_FORMS[key]
    except KeyError:
        raise KeyError(f"no sum-identity form for {key!r}") from None


def _bind(form: IdentityForm, params: Mapping[str, int]) -> tuple[int, ...]:
    missing = [n for n in form.params if n not in params]
    if missing:
        raise ValueError(f"missing parameters {missing}")
    args = tuple(int(params[n]) for n in form.params)
    if not form.valid(*args):
        raise ValueError(f"parameters {dict(zip(form.params, args))} outside the validity domain")
    return args


def lhs_spec(identity_id, params: Mapping[str, int]) -> Terms:
    """Expand an identity's LHS into ``[(weight, SumIndex), ...]``."""
    form = _form(identity_id)
    return merge_terms(form.lhs(*_bind(form, params)))


def rhs_spec(identity_id, params: Mapping[str, int]) -> ConstExpr:
    """The identity's closed-form right-hand side."""
    form = _form(identity_id)
    return form.rhs(*_bind(form, params))


def known_evaluations() -> dict[SumIndex, ConstExpr]:
    """Individually evaluated linear sums involving depth-two constants."""
    z3, z5 = zeta(3), zeta(5)
    L = LN2
    return {
        _T(1, 3): LI4HALF * -16 - L**4 * Fraction(2, 3) + PI**2 * L**2 * Fraction(2, 3)
        + PI**4 * Fraction(23, 360),
        _T(1, 5): AZETA51 * -32 + L * z5 * 62 + z3**2 * Fraction(17, 2)
        - PI**6 * Fraction(73, 1260),
        _S(1, 3): LI4HALF * 16 + L * z3 * 14 + L**4 * Fraction(2, 3)
        - PI**2 * L**2 * Fraction(2, 3) - PI**4 * Fraction(53, 360),
        _S(1, 5): AZETA51 * 32 - z3**2 * Fraction(31, 2) + PI**6 * Fraction(31, 1260),
        _R(2, 4): AZETA51 * 128 + z3**2 - PI**6 * Fraction(1, 210),
        _R(3, 3): AZETA51 * -192 + z3**2 * Fraction(109, 2) - PI**6 * Fraction(8, 105),
        _R(2, 6): AZETA71 * 768 + ZETA62 * 289 - z3 * z5 * 864 + PI**8 * Fraction(59, 525),
        _R(3, 5): AZETA71 * -1920 - ZETA62 * Fraction(1445, 2) + z3 * z5 * 3059
        - PI**8 * Fraction(2011, 5040),
    }
