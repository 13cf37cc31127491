"""High-precision evaluation of constants, linear Euler sums and double values.

Every linear sum handled here is a double series

    sum_{k>=1} (k + b)^(-t) * zeta(s, k + c)        (Hurwitz zeta inside)

with shifts ``b`` in {0, -1/2} and ``c`` in {0, 1/2, 1}.  The first ``N - 1``
terms are summed directly, with the inner Hurwitz tail updated by one
subtraction per step.  The remainder ``k >= N`` is summed through the
asymptotic expansion of the summand,

    (k+b)^(-t) zeta(s, k+b+d) ~ sum_j (-1)^j B_j(d) (s)_{j-1} / j! * (k+b)^(1-s-t-j),

term by term against ``zeta(s+t-1+j, N+b)``.  With ``N`` near half the working
digit count the expansion reaches full precision long before it diverges.

:func:`eval_double_oracle` is deliberately naive (literal double sums in
extended precision) and exists only to cross-check the fast path.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from mpmath import MPContext

from .const_ring import Atom, AtomKind, ConstExpr, Family, SumIndex
from .exact_kernel import bernoulli_poly

__all__ = [
    "MPFloat",
    "EvalContext",
    "HarmonicState",
    "PrecisionUnreachable",
    "eval_atom",
    "eval_expr",
    "eval_euler_sum",
    "eval_euler_sum_direct",
    "eval_double_value",
    "eval_double_oracle",
    "eval_terms",
    "tail_bound",
    "terms_needed",
]

EULER_GAMMA = 0.5772156649015329
HALF = Fraction(1, 2)


class PrecisionUnreachable(RuntimeError):
    """The requested accuracy needs more terms than the configured cap."""


@dataclass(frozen=True)
class MPFloat:
    """An mpmath value with the precision it was computed at and an error bound."""

    value: object
    precision_bits: int
    error: float = 0.0

    def __post_init__(self) -> None:
        if self.precision_bits < 64:
            raise ValueError("MPFloat needs at least 64 bits of precision")

    @property
    def ctx(self):
        return self.value.context

    def _ulp(self, v) -> float:
        return float(abs(v)) * 2.0 ** (-self.precision_bits + 2)

    def __add__(self, other) -> "MPFloat":
        if isinstance(other, MPFloat):
            v = self.value + other.value
            return MPFloat(
                v,
                min(self.precision_bits, other.precision_bits),
                self.error + other.error + self._ulp(v),
            )
        if other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "MPFloat":
        return MPFloat(-self.value, self.precision_bits, self.error)

    def __sub__(self, other: "MPFloat") -> "MPFloat":
        return self + (-other)

    def __mul__(self, other) -> "MPFloat":
        if isinstance(other, MPFloat):
            v = self.value * other.value
            err = (
                float(abs(self.value)) * other.error
                + float(abs(other.value)) * self.error
                + self.error * other.error
                + self._ulp(v)
            )
            return MPFloat(v, min(self.precision_bits, other.precision_bits), err)
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            v = self.value * c.numerator / c.denominator
            return MPFloat(v, self.precision_bits, self.error * abs(float(c)) + self._ulp(v))
        return NotImplemented

    __rmul__ = __mul__

    def __abs__(self) -> "MPFloat":
        return MPFloat(abs(self.value), self.precision_bits, self.error)

    def __float__(self) -> float:
        return float(self.value)

    def nstr(self, digits: int) -> str:
        return self.ctx.nstr(self.value, digits)

    def __str__(self) -> str:
        return self.nstr(max(15, int(self.precision_bits * math.log10(2)) - 2))


class EvalContext:
    """Working precision plus a per-context cache of atoms and sums.

    Each context owns a private mpmath context, so contexts can be used from
    different threads at the same time without touching global precision.
    """

    def __init__(self, target_digits: int = 50, guard_digits: int = 15, *, term_cap: int = 10**6):
        if target_digits < 15:
            raise ValueError("target_digits must be >= 15")
        if guard_digits < 10:
            raise ValueError("guard_digits must be >= 10")
        self.target_digits = target_digits
        self.guard_digits = guard_digits
        self.term_cap = term_cap
        self.mp = MPContext()
        self.mp.dps = target_digits + guard_digits
        self.precision_bits = self.mp.prec
        self._atoms: dict[Atom, MPFloat] = {}
        self._sums: dict[SumIndex, MPFloat] = {}

    @property
    def eps(self) -> float:
        return 2.0 ** (-self.precision_bits)

    @property
    def tolerance(self) -> float:
        """Pass threshold for identity residuals at this context's target."""
        return 10.0 ** (-(self.target_digits - 10))

    def derive(self, factor: int = 2) -> "EvalContext":
        """A fresh context at ``factor`` times the target digits."""
        return EvalContext(self.target_digits * factor, self.guard_digits, term_cap=self.term_cap)

    def mpf(self, x) -> object:
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        return self.mp.mpf(x)

    def wrap(self, value, error: float = 0.0) -> MPFloat:
        return MPFloat(value, self.precision_bits, error)

    def __repr__(self) -> str:
        return f"EvalContext(target_digits={self.target_digits}, precision_bits={self.precision_bits})"


# --------------------------------------------------------------------------
# Shared pure caches (keyed by precision, so sharing between contexts is safe)
# --------------------------------------------------------------------------

_HURWITZ_CACHE: dict[tuple[int, int, Fraction], tuple] = {}
_HURWITZ_LOCK = threading.Lock()


def _hurwitz(ctx: EvalContext, s: int, a: Fraction):
    """zeta(s, a) at the context precision, memoized as raw mpf tuples."""
    key = (ctx.precision_bits, s, a)
    raw = _HURWITZ_CACHE.get(key)
    if raw is None:
        value = ctx.mp.zeta(s, ctx.mpf(a))
        with _HURWITZ_LOCK:
            _HURWITZ_CACHE[key] = value._mpf_
        return value
    return ctx.mp.make_mpf(raw)


@lru_cache(maxsize=None)
def _tail_coefficient(s: int, j: int, d: Fraction) -> Fraction:
    """(-1)^j B_j(d) Gamma(s-1+j) / (Gamma(s) j!), the Hurwitz expansion weight."""
    if j == 0:
        return Fraction(1, s - 1)
    rising = 1
    for i in range(j - 1):
        rising *= s + i
    return (-1) ** j * bernoulli_poly(j, d) * Fraction(rising, math.factorial(j))


def _cutoff(ctx: EvalContext) -> int:
    # exp(-2 pi N) must sit well below 10^-dps; N ~ 0.37 dps suffices.
    return max(20, math.ceil(0.5 * ctx.mp.dps) + 10)


def _double_series(ctx: EvalContext, t: int, b: Fraction, s: int, c: Fraction) -> MPFloat:
    """sum_{k>=1} (k+b)^(-t) zeta(s, k+c) for s >= 2, t >= 1."""
    if s < 2 or t < 1:
        raise ValueError("double series needs s >= 2 and t >= 1")
    mp = ctx.mp
    N = _cutoff(ctx)
    bb, cc = ctx.mpf(b), ctx.mpf(c)
    inner = _hurwitz(ctx, s, 1 + c)
    head = mp.zero
    for k in range(1, N):
        head += (k + bb) ** (-t) * inner
        inner -= (k + cc) ** (-s)

    d = c - b
    x = Fraction(N) + b
    tail = mp.zero
    scale = abs(head) + 1
    small = 0
    last = 0.0
    jmax = 12 * N
    for j in range(jmax):
        coeff = _tail_coefficient(s, j, d)
        if not coeff:
            continue
        term = ctx.mpf(coeff) * _hurwitz(ctx, s + t - 1 + j, x)
        tail += term
        mag = float(abs(term))
        if mag < ctx.eps * float(scale):
            small += 1
            last = mag
            if small >= 2:
                break
        else:
            small = 0
    else:
        raise PrecisionUnreachable(
            f"tail expansion did not converge for t={t}, b={b}, s={s}, c={c} at N={N}"
        )
    value = head + tail
    err = 4 * last + 4 * N * ctx.eps * float(abs(value))
    return ctx.wrap(value, err)


# --------------------------------------------------------------------------
# Atoms
# --------------------------------------------------------------------------

def _li4_half(ctx: EvalContext) -> MPFloat:
    mp = ctx.mp
    total = mp.zero
    term_bound = 1.0
    n = 0
    while True:
        n += 1
        term = mp.ldexp(mp.one, -n) / mp.mpf(n) ** 4
        total += term
        # geometric remainder: sum_{k>n} 2^-k / k^4 < 2^-n / (n+1)^4
        term_bound = 2.0**-n / (n + 1) ** 4
        if term_bound < ctx.eps * 0.5:
            break
    return ctx.wrap(total, term_bound + n * ctx.eps)


def _alternating_double(ctx: EvalContext, s: int) -> MPFloat:
    """zeta(s-bar, 1) = sum_{n>k>=1} (-1)^n / (n^s k), split by the parity of k."""
    g = lambda b, c: _double_series(ctx, 1, b, s, c)  # noqa: E731
    combo = g(Fraction(0), Fraction(1)) - g(Fraction(0), HALF) + g(-HALF, Fraction(0)) - g(-HALF, HALF)
    return combo * Fraction(1, 2 ** (s + 1))


def eval_atom(atom: Atom, ctx: EvalContext) -> MPFloat:
    cached = ctx._atoms.get(atom)
    if cached is not None:
        return cached
    mp = ctx.mp
    kind = atom.kind
    if kind is AtomKind.ZETA:
        out = ctx.wrap(mp.zeta(atom.arg), ctx.eps)
    elif kind is AtomKind.TBAR:
        z = eval_atom(Atom(AtomKind.ZETA, atom.arg), ctx)
        out = z * (2**atom.arg - 1)
    elif kind is AtomKind.PI:
        out = ctx.wrap(+mp.pi, ctx.eps)
    elif kind is AtomKind.LN2:
        out = ctx.wrap(+mp.ln2, ctx.eps)
    elif kind is AtomKind.LI4HALF:
        out = _li4_half(ctx)
    elif kind is AtomKind.AZETA51:
        out = _alternating_double(ctx, 5)
    elif kind is AtomKind.AZETA71:
        out = _alternating_double(ctx, 7)
    elif kind is AtomKind.ZETA62:
        out = _double_series(ctx, 2, Fraction(0), 6, Fraction(1))
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unsupported atom {atom}")
    ctx._atoms[atom] = out
    return out


def eval_expr(expr: ConstExpr, ctx: EvalContext, atom_values: dict[Atom, MPFloat] | None = None) -> MPFloat:
    """Numeric value of a ConstExpr; ``atom_values`` overrides individual atoms."""
    total = ctx.wrap(ctx.mp.zero)
    for mono, coeff in expr.items():
        term = ctx.wrap(ctx.mp.one)
        for atom, e in mono:
            v = atom_values[atom] if atom_values and atom in atom_values else eval_atom(atom, ctx)
            for _ in range(e):
                term = term * v
        total = total + term * coeff
    return total


# --------------------------------------------------------------------------
# Linear sums and double values
# --------------------------------------------------------------------------

# (t-shift b, Hurwitz shift c) for each linear family:
#   T_{p,q} = sum_k (k-1/2)^-p zeta(q, k+1/2)
#   Sbar_{p,q} = sum_k (k-1/2)^-p zeta(q, k)
#   R_{p,q} = sum_k k^-p zeta(q, k+1/2)
_SHIFTS = {
    Family.T_SUM: (-HALF, HALF),
    Family.S_SUM: (-HALF, Fraction(0)),
    Family.R_SUM: (Fraction(0), HALF),
}


def eval_euler_sum(idx: SumIndex, ctx: EvalContext) -> MPFloat:
    """T_{p,q}, Sbar_{p,q} or R_{p,q} to the context precision."""
    if idx.family not in _SHIFTS:
        return eval_double_value(idx, ctx)
    cached = ctx._sums.get(idx)
    if cached is not None:
        return cached
    b, c = _SHIFTS[idx.family]
    out = _double_series(ctx, idx.p, b, idx.q, c)
    ctx._sums[idx] = out
    return out


def eval_double_value(idx: SumIndex, ctx: EvalContext) -> MPFloat:
    """t(q,p) = 2^-(p+q) T_{p,q} and T(q,p) = 2^(2-p-q) Sbar_{p,q}."""
    w = idx.p + idx.q
    if idx.family is Family.DOUBLE_t:
        return eval_euler_sum(SumIndex(Family.T_SUM, idx.p, idx.q), ctx) * Fraction(1, 2**w)
    if idx.family is Family.DOUBLE_T:
        return eval_euler_sum(SumIndex(Family.S_SUM, idx.p, idx.q), ctx) * Fraction(4, 2**w)
    raise ValueError(f"{idx} is not a double value")


def eval_terms(terms: Sequence[tuple[Fraction, SumIndex]], ctx: EvalContext) -> MPFloat:
    total = ctx.wrap(ctx.mp.zero)
    for w, idx in terms:
        total = total + eval_euler_sum(idx, ctx) * w
    return total


# --------------------------------------------------------------------------
# Plain summation: harmonic state, rigorous tail bounds, direct partial sums
# --------------------------------------------------------------------------

class HarmonicState:
    """Running H_n^(r) and h_n^(r) for a set of orders, one O(1) update per step.

    Every power-of-two step the running values are compared against a fresh
    summation; drift beyond a few ulps raises ``AssertionError``.
    """

    def __init__(self, ctx: EvalContext, orders: Sequence[int], *, self_check: bool = True):
        self.ctx = ctx
        self.orders = tuple(sorted(set(orders)))
        self.n = 0
        self.H = {r: ctx.mp.zero for r in self.orders}
        self.h = {r: ctx.mp.zero for r in self.orders}
        self.self_check = self_check

    def advance(self) -> None:
        self.n += 1
        mp = self.ctx.mp
        n = mp.mpf(self.n)
        for r in self.orders:
            self.H[r] += n ** (-r)
            self.h[r] += (n - 0.5) ** (-r)
        if self.self_check and self.n & (self.n - 1) == 0:
            self.check()

    def check(self) -> None:
        mp = self.ctx.mp
        for r in self.orders:
            fresh_H = mp.fsum(mp.mpf(k) ** (-r) for k in range(1, self.n + 1))
            fresh_h = mp.fsum((mp.mpf(k) - 0.5) ** (-r) for k in range(1, self.n + 1))
            tol = 8 * self.n * self.ctx.eps * max(1.0, float(fresh_h))
            assert abs(self.H[r] - fresh_H) <= tol, ("H", r, self.n)
            assert abs(self.h[r] - fresh_h) <= tol, ("h", r, self.n)


def tail_bound(family: Family | str, p: int, q: int, N: int) -> float:
    """Upper bound on sum_{n>N} of the plain summand of T/Sbar/R_{p,q}.

    Harmonic factors are bounded by psi-type inequalities
    (h_n <= ln(4n+2) + gamma, H_n <= ln(n+1/2) + gamma + 1/24) for p = 1
    and by their limits tbar(p), zeta(p) for p >= 2; the remaining decreasing
    function is compared with its integral.
    """
    family = Family(family)
    if N < 2:
        raise ValueError("tail_bound needs N >= 2")
    if q < 2:
        raise ValueError("tail_bound needs q >= 2")
    from mpmath import zeta as _z

    def limit(pp: int, odd: bool) -> float:
        z = float(_z(pp))
        return (2**pp - 1) * z if odd else z

    k = q - 1
    if family is Family.T_SUM:
        # summand h_{n-1}^(p) / y^q with y = n - 1/2 >= N + 1/2
        Y = N - 0.5
        if p == 1:
            a = math.log(4 * Y) + EULER_GAMMA
            return (a / k + 1 / k**2) * Y ** (-k)
        return limit(p, True) * Y ** (-k) / k
    if family is Family.S_SUM:
        if p == 1:
            a = math.log(4 * N) + EULER_GAMMA
            return (a / k + 1 / k**2) * N ** (-k) + N ** (-q) / (2 * q)
        return limit(p, True) * N ** (-k) / k
    if family is Family.R_SUM:
        Y = N - 0.5
        if p == 1:
            a = math.log(Y) + EULER_GAMMA + 1 / 24
            return (a / k + 1 / k**2) * Y ** (-k)
        return limit(p, False) * Y ** (-k) / k
    raise ValueError(f"no plain tail bound for family {family}")


def terms_needed(family: Family | str, p: int, q: int, tol: float, cap: int = 10**7) -> int:
    """Smallest N (to a factor of 2 search) with tail_bound <= tol."""
    lo, hi = 2, 2
    while tail_bound(family, p, q, hi) > tol:
        lo, hi = hi, hi * 2
        if hi > cap:
            raise PrecisionUnreachable(
                f"{Family(family).value}_{{{p},{q}}}: plain summation would need more than {cap} terms"
            )
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_bound(family, p, q, mid) > tol:
            lo = mid
        else:
            hi = mid
    return hi


def eval_euler_sum_direct(idx: SumIndex, ctx: EvalContext, N: int) -> MPFloat:
    """Plain partial sum to N terms; error field is the rigorous tail bound."""
    if idx.family not in _SHIFTS:
        raise ValueError("direct summation is only defined for T, Sbar and R")
    if N > ctx.term_cap:
        raise PrecisionUnreachable(f"N={N} exceeds the term cap {ctx.term_cap}")
    mp = ctx.mp
    state = HarmonicState(ctx, [idx.p])
    total = mp.zero
    for n in range(1, N + 1):
        if idx.family is Family.S_SUM:
            state.advance()
            total += state.h[idx.p] / mp.mpf(n) ** idx.q
        else:
            harmonic = state.h if idx.family is Family.T_SUM else state.H
            total += harmonic[idx.p] / (mp.mpf(n) - 0.5) ** idx.q
            state.advance()
    err = tail_bound(idx.family, idx.p, idx.q, N) + 4 * N * ctx.eps * float(abs(total))
    return ctx.wrap(total, err)


# --------------------------------------------------------------------------
# Literal oracle
# --------------------------------------------------------------------------

ORACLE_KINDS = ("t", "T", "zeta", "azeta")
_LD_EPS = float(np.finfo(np.longdouble).eps)


def _ld_to_mpf(ctx: EvalContext, x) -> object:
    return ctx.mp.mpf(np.format_float_positional(x, unique=True, trim="-"))


def eval_double_oracle(kind: str, p: int, q: int, terms: int, ctx: EvalContext | None = None) -> MPFloat:
    """Literal double summation of the defining series, in extended precision.

    ``kind`` selects t(q,p), T(q,p) (with its congruence conditions), the
    double zeta zeta(q,p), or the alternating zeta(q-bar, p).  ``terms`` is the
    largest integer index visited.  Positive series return the partial sum,
    whose error field bounds the (one-sided) tail plus rounding; the
    alternating one returns the mean of two consecutive partial sums.
    """
    if kind not in ORACLE_KINDS:
        raise ValueError(f"unknown oracle kind {kind!r}; expected one of {ORACLE_KINDS}")
    if terms < 10:
        raise ValueError("oracle needs terms >= 10")
    if q < 2:
        raise ValueError("oracle needs outer argument q >= 2")
    if ctx is None:
        ctx = EvalContext(20, 10)
    ld = np.longdouble
    n = np.arange(1, terms + 1, dtype=ld)
    inner_w = n ** ld(-p)
    outer_w = n ** ld(-q)
    if kind == "t":
        odd = (np.arange(1, terms + 1) % 2) == 1
        u_in = np.where(odd, inner_w, 0)
        below = np.cumsum(u_in) - u_in  # strictly smaller odd integers
        value = np.sum(np.where(odd, outer_w * below, 0))
        M = (terms + 1) // 2
        bound = tail_bound(Family.T_SUM, p, q, M) / 2 ** (p + q)
    elif kind == "T":
        idx = np.arange(1, terms + 1)
        u_in = np.where(idx % 2 == 1, inner_w, 0)
        below = np.cumsum(u_in) - u_in
        value = 4 * np.sum(np.where(idx % 2 == 0, outer_w * below, 0))
        bound = tail_bound(Family.S_SUM, p, q, terms // 2) * 4 / 2 ** (p + q)
    elif kind == "zeta":
        below = np.cumsum(inner_w) - inner_w
        value = np.sum(outer_w * below)
        if p == 1:
            a = math.log(terms + 0.5) + EULER_GAMMA + 1 / 24
            bound = (a / (q - 1) + 1 / (q - 1) ** 2) * (terms - 0.5) ** (1 - q)
        else:
            from mpmath import zeta as _z

            bound = float(_z(p)) * terms ** (1 - q) / (q - 1)
    else:
        below = np.cumsum(inner_w) - inner_w
        sign = np.where(np.arange(1, terms + 1) % 2 == 0, ld(1), ld(-1))
        partial = np.cumsum(sign * outer_w * below)
        # consecutive partial sums bracket the limit once terms decrease
        value = (partial[-1] + partial[-2]) / 2
        bound = float(abs(partial[-1] - partial[-2])) / 2
    value_mp = _ld_to_mpf(ctx, value)
    rounding = 2 * terms * _LD_EPS * float(abs(value))
    return MPFloat(value_mp, 64, bound + rounding)
