"""Exact root-rational numbers and factorial helpers.

Every multi-j value lives in the set of numbers ``q * sqrt(r)`` with ``q``
rational and ``r`` a square-free positive integer.  That set is closed under
multiplication; sums are only formed between values sharing a radicand.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from sympy import factorint, primerange

__all__ = [
    "RootRational",
    "ZERO",
    "ONE",
    "TRIANGLE_ZERO",
    "RadicandMismatch",
    "delta",
    "triangle_violation",
    "factorial_exponents",
    "sqrt_factorial_ratio",
]


class RadicandMismatch(ArithmeticError):
    """Raised when adding root-rationals whose radicands differ."""


def _square_free_split(n: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``n == s * s * f`` and ``f`` square-free."""
    if n == 1:
        return 1, 1
    s = f = 1
    for p, e in factorint(n).items():
        s *= p ** (e // 2)
        if e % 2:
            f *= p
    return s, f


class RootRational:
    """Exact value ``coeff * sqrt(radicand)``.

    The radicand is always a square-free positive integer; a rational
    radicand ``r/s`` is absorbed as ``sqrt(r*s) / s``.  Zero is stored as
    ``coeff == 0, radicand == 1``.
    """

    __slots__ = ("coeff", "radicand")

    def __init__(self, coeff: int | Fraction = 0, radicand: int | Fraction = 1):
        coeff = Fraction(coeff)
        radicand = Fraction(radicand)
        if radicand <= 0:
            raise ValueError(f"radicand must be positive, got {radicand}")
        if coeff == 0:
            object.__setattr__(self, "coeff", Fraction(0))
            object.__setattr__(self, "radicand", 1)
            return
        num = radicand.numerator * radicand.denominator
        coeff /= radicand.denominator
        s, f = _square_free_split(num)
        object.__setattr__(self, "coeff", coeff * s)
        object.__setattr__(self, "radicand", f)

    @classmethod
    def _raw(cls, coeff: Fraction, radicand: int) -> "RootRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeff", coeff)
        object.__setattr__(obj, "radicand", radicand if coeff else 1)
        return obj

    @classmethod
    def from_prime_powers(cls, coeff: int | Fraction, half_exponents: Mapping[int, int]) -> "RootRational":
        """Build ``coeff * prod p**(e/2)`` without factoring anything.

        ``half_exponents`` maps primes to doubled exponents (negative allowed).
        """
        coeff = Fraction(coeff)
        if coeff == 0:
            return ZERO
        num = den = rad = 1
        for p, e in half_exponents.items():
            if e == 0:
                continue
            q, r = divmod(e, 2)
            if r:  # divmod floors, so p**(-3/2) becomes p**-2 * sqrt(p)
                rad *= p
            if q > 0:
                num *= p**q
            elif q < 0:
                den *= p ** (-q)
        return cls._raw(coeff * Fraction(num, den), rad)

    def __setattr__(self, name, value):
        raise AttributeError("RootRational is immutable")

    # arithmetic ---------------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, RootRational):
            if isinstance(other, (int, Fraction)):
                return RootRational._raw(self.coeff * other, self.radicand)
            return NotImplemented
        if not self.coeff or not other.coeff:
            return ZERO
        g = math.gcd(self.radicand, other.radicand)
        rad = (self.radicand // g) * (other.radicand // g)
        return RootRational._raw(self.coeff * other.coeff * g, rad)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RootRational._raw(self.coeff / other, self.radicand)
        if not isinstance(other, RootRational):
            return NotImplemented
        if not other.coeff:
            raise ZeroDivisionError("division by zero root-rational")
        # 1/(c sqrt r) = sqrt(r) / (c r)
        inv = RootRational._raw(1 / (other.coeff * other.radicand), other.radicand)
        return self * inv

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RootRational._raw(Fraction(other), 1)
        if not isinstance(other, RootRational):
            return NotImplemented
        if not other.coeff:
            return self
        if not self.coeff:
            return other
        if self.radicand != other.radicand:
            raise RadicandMismatch(f"cannot add {self} and {other}")
        return RootRational._raw(self.coeff + other.coeff, self.radicand)

    __radd__ = __add__

    def __neg__(self):
        return RootRational._raw(-self.coeff, self.radicand)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RootRational._raw(Fraction(other), 1)
        return self + (-other)

    def square(self) -> Fraction:
        return self.coeff * self.coeff * self.radicand

    def sign(self) -> int:
        return (self.coeff > 0) - (self.coeff < 0)

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __bool__(self):
        return self.coeff != 0

    # comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.radicand == 1 and self.coeff == other
        if not isinstance(other, RootRational):
            return NotImplemented
        return self.coeff == other.coeff and self.radicand == other.radicand

    def __hash__(self):
        return hash((self.coeff, self.radicand))

    def __float__(self):
        return float(self.coeff) * math.sqrt(self.radicand)

    # text ---------------------------------------------------------------

    def __repr__(self):
        return f"RootRational({str(self)!r})"

    def __str__(self):
        c, r = self.coeff, self.radicand
        if r == 1:
            return str(c)
        if c == 1:
            return f"sqrt({r})"
        if c == -1:
            return f"-sqrt({r})"
        return f"{c} * sqrt({r})"

    _TEXT = re.compile(
        r"""^\s*(?:(?P<c>[+-]?\d+(?:/\d+)?)\s*(?P<star>\*\s*)?)?
            (?:(?P<neg>-)?\s*sqrt\(\s*(?P<r>\d+(?:/\d+)?)\s*\))?\s*$""",
        re.X,
    )

    @classmethod
    def parse(cls, text: str) -> "RootRational":
        """Inverse of ``str``; also accepts ``p/q * sqrt(r/s)`` with any radicand."""
        m = cls._TEXT.match(text)
        if not m or (m.group("c") is None and m.group("r") is None):
            raise ValueError(f"not a root-rational: {text!r}")
        if (m.group("c") is not None and m.group("neg")) or (m.group("star") and m.group("r") is None):
            raise ValueError(f"not a root-rational: {text!r}")
        coeff = Fraction(m.group("c")) if m.group("c") is not None else Fraction(1)
        if m.group("neg"):
            coeff = -coeff
        if m.group("r") is None:
            return cls(coeff)
        return cls(coeff, Fraction(m.group("r")))


ZERO = RootRational._raw(Fraction(0), 1)
ONE = RootRational._raw(Fraction(1), 1)
# Returned by delta() on a triangle or parity violation; equal to ZERO but
# distinguishable by identity.
TRIANGLE_ZERO = RootRational._raw(Fraction(0), 1)


@lru_cache(maxsize=None)
def _primes_upto(n: int) -> tuple[int, ...]:
    return tuple(primerange(2, n + 1))


@lru_cache(maxsize=4096)
def factorial_exponents(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n!`` via Legendre's formula."""
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    out = []
    for p in _primes_upto(n):
        e, q = 0, n
        while q:
            q //= p
            e += q
        out.append((p, e))
    return tuple(out)


def sqrt_factorial_ratio(num: Iterable[int] = (), den: Iterable[int] = ()) -> RootRational:
    """Exact ``sqrt(prod(n! for n in num) / prod(d! for d in den))``."""
    exps: Counter[int] = Counter()
    for n in num:
        for p, e in factorial_exponents(n):
            exps[p] += e
    for d in den:
        for p, e in factorial_exponents(d):
            exps[p] -= e
    return RootRational.from_prime_powers(1, exps)


def triangle_violation(ta: int, tb: int, tc: int) -> str | None:
    """Why doubled momenta ``(2a, 2b, 2c)`` cannot couple, or ``None``."""
    if (ta + tb + tc) % 2:
        return "parity"
    if ta + tb < tc or tb + tc < ta or tc + ta < tb:
        return "triangle"
    return None


@lru_cache(maxsize=65536)
def delta(ta: int, tb: int, tc: int) -> RootRational:
    """Triangle coefficient for doubled momenta; ``TRIANGLE_ZERO`` if they cannot couple."""
    if min(ta, tb, tc) < 0 or triangle_violation(ta, tb, tc):
        return TRIANGLE_ZERO
    s = (ta + tb + tc) // 2
    return sqrt_factorial_ratio((s - tc, s - ta, s - tb), (s + 1,))
