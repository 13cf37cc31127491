"""Exact rational machinery: Bernoulli and Genocchi numbers, derivative
polynomials of tanh, truncated power series and the convolution identities
linking them.

Every quantity here is a :class:`fractions.Fraction` (or a Python ``int``),
so all checks are exact: a residual is either ``0`` or the identity fails.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable

BigRational = Fraction

__all__ = [
    "BigRational",
    "IntPoly",
    "RatSeries",
    "SeriesTruncationError",
    "binom",
    "bernoulli",
    "bernoulli_poly",
    "genocchi",
    "zeta_even_over_pi",
    "derivative_poly",
    "tanh_series",
    "compose_poly_tanh",
    "pn_coefficient",
    "rho",
    "linearization_coefficient",
    "check_linearization",
    "check_conv_eGG_eBG",
    "check_conv_BG_GG",
]


def binom(a: int, b: int) -> int:
    """Binomial coefficient that vanishes outside ``0 <= b <= a``."""
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


# --------------------------------------------------------------------------
# Bernoulli / Genocchi numbers
# --------------------------------------------------------------------------

class _BernoulliTable:
    """Growable memo of B_0, B_1, ... with B_1 = -1/2.

    Extension happens under a lock; entries never change once written, so
    readers only need the lock when the table is too short.
    """

    def __init__(self) -> None:
        self._values: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
        self._lock = threading.Lock()

    def __getitem__(self, n: int) -> Fraction:
        values = self._values
        if n < len(values):
            return values[n]
        with self._lock:
            values = self._values
            while len(values) <= n:
                m = len(values)
                if m % 2 == 1:
                    values.append(Fraction(0))
                    continue
                s = sum(comb(m + 1, k) * values[k] for k in range(m))
                values.append(-s / (m + 1))
            return values[n]


_BERNOULLI = _BernoulliTable()


def bernoulli(n: int) -> Fraction:
    """Return the Bernoulli number B_n from ``t/(e^t - 1)`` (so B_1 = -1/2)."""
    if n < 0:
        raise ValueError(f"bernoulli index must be >= 0, got {n}")
    return _BERNOULLI[n]


def genocchi(n: int) -> Fraction:
    """Return G_n = 2(1 - 2^n) B_n, the coefficients of ``2t/(e^t + 1)``."""
    if n < 0:
        raise ValueError(f"genocchi index must be >= 0, got {n}")
    return 2 * (1 - 2**n) * bernoulli(n)


@lru_cache(maxsize=None)
def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    """Bernoulli polynomial B_n(x) at a rational point."""
    x = Fraction(x)
    return sum(comb(n, k) * bernoulli(k) * x ** (n - k) for k in range(n + 1))


def zeta_even_over_pi(k: int) -> Fraction:
    """The rational zeta(2k) / pi^(2k)."""
    if k < 1:
        raise ValueError("zeta(2k) needs k >= 1")
    n = 2 * k
    return (-1) ** (k + 1) * bernoulli(n) * 2**n / (2 * factorial(n))


# --------------------------------------------------------------------------
# Integer polynomials
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPoly:
    """Dense integer polynomial in ``y``; ``coeffs[i]`` multiplies ``y**i``."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(v) for v in c))

    @classmethod
    def from_list(cls, coeffs: Iterable[int]) -> "IntPoly":
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(tuple(self[i] + other[i] for i in range(n)))

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if not self.coeffs or not other.coeffs:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def __call__(self, y):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * y + c
        return acc

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                var = "y" if i == 1 else f"y^{i}"
                body = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


_ONE_MINUS_Y2 = IntPoly((1, 0, -1))


@lru_cache(maxsize=None)
def derivative_poly(n: int) -> IntPoly:
    """P_n with P_n(tanh t) = d^n/dt^n tanh t, via P_{n+1} = (1 - y^2) P_n'."""
    if n < 0:
        raise ValueError("derivative_poly needs n >= 0")
    if n == 0:
        return IntPoly((0, 1))
    return _ONE_MINUS_Y2 * derivative_poly(n - 1).derivative()


# --------------------------------------------------------------------------
# Truncated rational power series
# --------------------------------------------------------------------------

class SeriesTruncationError(IndexError):
    """Raised when a coefficient beyond the validity order is requested."""


@dataclass(frozen=True)
class RatSeries:
    """Power series in ``t`` known exactly up to ``t**order``."""

    coeffs: tuple[Fraction, ...]
    order: int

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValueError("order must be >= 0")
        c = [Fraction(v) for v in self.coeffs[: self.order + 1]]
        c += [Fraction(0)] * (self.order + 1 - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def constant(cls, value, order: int) -> "RatSeries":
        return cls((Fraction(value),), order)

    def __getitem__(self, k: int) -> Fraction:
        if k < 0:
            raise IndexError(k)
        if k > self.order:
            raise SeriesTruncationError(
                f"coefficient t^{k} requested but series is valid only to t^{self.order}"
            )
        return self.coeffs[k]

    def __add__(self, other: "RatSeries") -> "RatSeries":
        order = min(self.order, other.order)
        return RatSeries(
            tuple(self.coeffs[k] + other.coeffs[k] for k in range(order + 1)), order
        )

    def __neg__(self) -> "RatSeries":
        return RatSeries(tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other: "RatSeries") -> "RatSeries":
        return self + (-other)

    def scale(self, c) -> "RatSeries":
        c = Fraction(c)
        return RatSeries(tuple(c * v for v in self.coeffs), self.order)

    def __mul__(self, other: "RatSeries") -> "RatSeries":
        order = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(order + 1):
            out.append(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)))
        return RatSeries(tuple(out), order)

    def derivative(self) -> "RatSeries":
        # Differentiation loses one order of validity.
        if self.order == 0:
            raise SeriesTruncationError("cannot differentiate an order-0 series")
        return RatSeries(
            tuple(k * self.coeffs[k] for k in range(1, self.order + 1)), self.order - 1
        )

    def compose_poly(self, poly: IntPoly) -> "RatSeries":
        """Series of ``poly(self)``; valid to the same order since poly is finite."""
        acc = RatSeries.constant(0, self.order)
        for c in reversed(poly.coeffs):
            acc = acc * self + RatSeries.constant(c, self.order)
        return acc


@lru_cache(maxsize=None)
def tanh_series(order: int) -> RatSeries:
    """tanh t = -sum_{n>=1} G_{2n} (2t)^{2n-1} / (2n)!, up to t**order."""
    if order < 1:
        raise ValueError("tanh_series needs order >= 1")
    coeffs = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1, 2):
        n2 = k + 1
        coeffs[k] = -genocchi(n2) * Fraction(2**k, factorial(n2))
    return RatSeries(tuple(coeffs), order)


@lru_cache(maxsize=None)
def _compose_cached(poly: IntPoly, order: int) -> RatSeries:
    if order == 0:
        return RatSeries.constant(poly(0), 0)
    return tanh_series(order).compose_poly(poly)


def compose_poly_tanh(poly: IntPoly, order: int) -> RatSeries:
    """Truncated series of ``poly(tanh t)`` up to t**order."""
    if order < 0:
        raise ValueError("order must be >= 0")
    return _compose_cached(poly, order)


def pn_coefficient(n: int, k: int) -> Fraction:
    """Closed form of [t^k] P_n(tanh t) in terms of Genocchi numbers."""
    j = k + n + 1
    value = -genocchi(j) / j * Fraction(2 ** (k + n), factorial(k))
    if n == 0 and k == 0:
        value += 1
    return value


# --------------------------------------------------------------------------
# Linearization and convolution identities
# --------------------------------------------------------------------------

def rho(m: int, n: int, k: int) -> Fraction:
    """Linearization coefficients of P_m P_n in the basis P_j."""
    if min(m, n, k) < 0:
        raise ValueError("rho needs m, n, k >= 0")
    if k == 0:
        return Fraction(factorial(m) * factorial(n), factorial(m + n + 1))
    top = m + n + 1 - 2 * k
    return Fraction((-1) ** m * binom(n, top) + (-1) ** n * binom(m, top))


def linearization_coefficient(m: int, n: int, l: int) -> Fraction:
    """Closed form of [t^l] P_m(tanh t) P_n(tanh t)."""
    s = l + m + n
    inner = rho(m, n, 0) * genocchi(s + 2) / (s + 2)
    for k in range(1, (m + n) // 2 + 1):
        inner += rho(m, n, k) * bernoulli(2 * k) * genocchi(s - 2 * k + 2) / (
            (2 * k) * (s - 2 * k + 2)
        )
    value = Fraction(2 ** (s + 1), factorial(l)) * inner
    if l == m == n == 0:
        value += 1
    return value


def check_linearization(m: int, n: int, order: int) -> Fraction:
    """Largest |series coefficient - closed form| over t^0 .. t^order."""
    if order < 0:
        raise ValueError("order must be >= 0")
    product = compose_poly_tanh(derivative_poly(m), order) * compose_poly_tanh(
        derivative_poly(n), order
    )
    return max(
        abs(product[l] - linearization_coefficient(m, n, l)) for l in range(order + 1)
    )


def conv_eGG_eBG_sides(
    n: int, alpha: int, gamma: int, delta: int, epsilon: int
) -> tuple[Fraction, Fraction]:
    """Both sides of the Genocchi-Genocchi / Bernoulli-Genocchi convolution."""
    if min(n, alpha, gamma) < 0:
        raise ValueError("n, alpha, gamma must be >= 0")
    if delta not in (0, 1) or epsilon not in (0, 1):
        raise ValueError("delta and epsilon must be 0 or 1")
    top = 2 * n + 2 - delta - epsilon
    lhs = Fraction(0)
    for k in range(n + 1):
        lhs += (
            binom(top, 2 * k + 1 - delta)
            * genocchi(2 * k + 2 * alpha + 2) / (k + alpha + 1)
            * genocchi(2 * n - 2 * k + 2 * gamma + 2) / (n - k + gamma + 1)
        )
    a, c = 2 * alpha + delta, 2 * gamma + epsilon
    s = n + alpha + gamma + 2
    rhs = 4 * rho(a, c, 0) * genocchi(2 * s) / s
    for k in range(1, alpha + gamma + (delta + epsilon) // 2 + 1):
        rhs += 2 * rho(a, c, k) * bernoulli(2 * k) / k * genocchi(2 * s - 2 * k) / (s - k)
    return lhs, rhs


def check_conv_eGG_eBG(n: int, alpha: int, gamma: int, delta: int, epsilon: int) -> Fraction:
    lhs, rhs = conv_eGG_eBG_sides(n, alpha, gamma, delta, epsilon)
    return lhs - rhs


def conv_BG_GG_sides(n: int, q: int) -> tuple[Fraction, Fraction]:
    """Both sides of the Bernoulli-Genocchi convolution used for the p-odd case."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if q < 2:
        raise ValueError(f"the convolution is stated for q >= 2, got q={q}")
    lhs = Fraction(0)
    for i in range(q):
        lhs += comb(q - 1, i) * bernoulli(q + i) * genocchi(2 * n + q - i) / (
            (q + i) * (2 * n + q - i)
        )
    for i in range(2 * n + 1):
        lhs += Fraction((-1) ** i * comb(2 * n, i), 4) * genocchi(q + i) * genocchi(
            2 * n + q - i
        ) / ((q + i) * (2 * n + q - i))
    rhs = Fraction((-1) ** q, q * comb(2 * q, q)) * genocchi(2 * n + 2 * q) / (2 * n + 2 * q)
    return lhs, rhs


def check_conv_BG_GG(n: int, q: int) -> Fraction:
    lhs, rhs = conv_BG_GG_sides(n, q)
    return lhs - rhs


