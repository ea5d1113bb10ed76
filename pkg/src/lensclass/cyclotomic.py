"""Exact arithmetic in the cyclotomic fields Q(ζ_n).

An element is a polynomial in ζ of degree < φ(n) with integer coefficients
over a single positive integer denominator.  Reduction is modulo the n-th
cyclotomic polynomial, so equality and zero tests are exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd

from .modular import factorize

__all__ = ["cyclotomic_polynomial", "CyclotomicNumber", "mobius"]


def mobius(n: int) -> int:
    f = factorize(n) if n > 1 else {}
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def _divisors(n: int) -> list[int]:
    return [m for m in range(1, n + 1) if n % m == 0]


def _mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _exact_div(num: list[int], den: list[int]) -> list[int]:
    """num / den for a monic-or-±1-leading integer divisor that divides exactly."""
    num = list(num)
    lead = den[-1]
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c, r = divmod(num[i + len(den) - 1], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[i] = c
        for j, y in enumerate(den):
            num[i + j] -= c * y
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Φ_n as coefficients, constant term first: ∏_{m | n} (x^m - 1)^{μ(n/m)}."""
    if n < 1:
        raise ValueError("conductor must be >= 1")
    num, den = [1], [1]
    for m in _divisors(n):
        mu = mobius(n // m)
        if mu == 0:
            continue
        factor = [-1] + [0] * (m - 1) + [1]
        if mu == 1:
            num = _mul(num, factor)
        else:
            den = _mul(den, factor)
    return tuple(_exact_div(num, den))


def _reduce(coeffs: list[int], n: int) -> list[int]:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            # Φ is monic: subtract t·x^(i-deg)·Φ
            base = i - deg
            for j in range(deg + 1):
                c[base + j] -= t * phi[j]
    c = c[:deg] + [0] * max(0, deg - len(c))
    return c


def _poly_divmod_q(a: list[Fraction], b: list[Fraction]):
    a = list(a)
    while b and b[-1] == 0:
        b = b[:-1]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] / b[-1]
        q[i] = c
        for j, y in enumerate(b):
            a[i + j] -= c * y
    r = a[:len(b) - 1]
    while r and r[-1] == 0:
        r.pop()
    return q, r


def _sub_q(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


class CyclotomicNumber:
    """An element of Q(ζ_n), ζ_n = exp(2πi/n).

    >>> z = CyclotomicNumber.zeta(5)
    >>> (z ** 5) == CyclotomicNumber.from_int(5, 1)
    True
    >>> sum((z ** j for j in range(1, 5)), CyclotomicNumber.from_int(5, 0)).is_zero()
    False
    """

    __slots__ = ("n", "coeffs", "den")

    def __init__(self, n: int, coeffs, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        coeffs = _reduce([int(c) for c in coeffs], n)
        if den < 0:
            coeffs, den = [-c for c in coeffs], -den
        g = reduce(gcd, coeffs, den)
        self.n = n
        self.coeffs = tuple(c // g for c in coeffs)
        self.den = den // g

    # constructors -------------------------------------------------------

    @classmethod
    def from_int(cls, n: int, value: int) -> "CyclotomicNumber":
        return cls(n, [value])

    @classmethod
    def from_fraction(cls, n: int, value: Fraction) -> "CyclotomicNumber":
        value = Fraction(value)
        return cls(n, [value.numerator], value.denominator)

    @classmethod
    def zeta(cls, n: int, power: int = 1) -> "CyclotomicNumber":
        power %= n
        return cls(n, [0] * power + [1])

    @classmethod
    def inverse_zeta_minus_one(cls, n: int, power: int) -> "CyclotomicNumber":
        """1 / (ζ^power - 1) without a Euclidean inverse.

        For x^n = 1, x != 1:  (x - 1)·Σ_{m<n} m·x^m = n.
        """
        power %= n
        if power == 0:
            raise ZeroDivisionError("ζ^0 - 1 = 0")
        coeffs = [0] * n
        for m in range(1, n):
            coeffs[m * power % n] += m
        return cls(n, coeffs, n)

    @classmethod
    def _from_fractions(cls, n: int, fr: list[Fraction]) -> "CyclotomicNumber":
        den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fr), 1)
        return cls(n, [f.numerator * (den // f.denominator) for f in fr], den)

    def _fractions(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.coeffs]

    # arithmetic ---------------------------------------------------------

    def _check(self, other):
        if isinstance(other, int):
            return CyclotomicNumber.from_int(self.n, other)
        if isinstance(other, Fraction):
            return CyclotomicNumber.from_fraction(self.n, other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"conductor mismatch: {self.n} vs {other.n}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CyclotomicNumber(
            self.n,
            [a * other.den + b * self.den for a, b in zip(self.coeffs, other.coeffs)],
            self.den * other.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.n, [-c for c in self.coeffs], self.den)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CyclotomicNumber(self.n, _mul(list(self.coeffs), list(other.coeffs)),
                                self.den * other.den)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber.from_int(self.n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse via the extended Euclidean algorithm over Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(ζ_%d)" % self.n)
        a = [Fraction(x) for x in cyclotomic_polynomial(self.n)]
        b = self._fractions()
        while b and b[-1] == 0:
            b.pop()
        # invariant: s0·self ≡ a, s1·self ≡ b (mod Φ)
        s0, s1 = [], [Fraction(1)]
        while len(b) > 1:
            q, r = _poly_divmod_q(a, b)
            a, b = b, r
            s0, s1 = s1, _sub_q(s0, _mul(q, s1))
        c = b[0]
        return CyclotomicNumber._from_fractions(self.n, [x / c for x in s1] or [Fraction(0)])

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    # structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(self.coeffs[0] if self.coeffs else 0, self.den)

    def galois(self, a: int) -> "CyclotomicNumber":
        """Image under ζ -> ζ^a (a a unit mod n)."""
        if gcd(a, self.n) != 1:
            raise ValueError(f"{a} is not a unit mod {self.n}")
        out = [0] * self.n
        for i, c in enumerate(self.coeffs):
            out[i * a % self.n] += c
        return CyclotomicNumber(self.n, out, self.den)

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1)

    def __eq__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs and self.den == other.den

    def __hash__(self):
        return hash((self.n, self.coeffs, self.den))

    def __complex__(self):
        import cmath
        z = cmath.exp(2j * cmath.pi / self.n)
        return sum(c * z ** i for i, c in enumerate(self.coeffs)) / self.den

    def to_json(self) -> dict:
        return {"conductor": self.n, "numerator": list(self.coeffs), "denominator": self.den}

    @classmethod
    def from_json(cls, obj: dict) -> "CyclotomicNumber":
        return cls(obj["conductor"], obj["numerator"], obj["denominator"])

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        body = " + ".join(terms) or "0"
        if self.den != 1:
            body = f"({body})/{self.den}"
        return f"CyclotomicNumber[{self.n}]({body})"
