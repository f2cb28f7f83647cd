"""Exact scalar arithmetic: Z/p^N integers with a power-of-p denominator.

A PAdic holds mantissa * p^(-denom_exp) with the mantissa known modulo
p^prec, so the value is known modulo p^(prec - denom_exp).  Every operation
is exact modular integer arithmetic; precision only shrinks, never lies.
p is restricted to odd primes throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class PrecisionError(ArithmeticError):
    """Requested operation cannot be resolved at the available precision."""


def _check_odd_prime(p: int) -> None:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")
    for q in range(3, int(math.isqrt(p)) + 1, 2):
        if p % q == 0:
            raise ValueError(f"p must be an odd prime, got {p}")


def vp_int(n: int, p: int) -> int | None:
    """p-adic valuation of an integer; None for 0."""
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class Valuation:
    """Valuation of a PAdic: value is None for the +infinity marker.

    indistinguishable_from_zero is set when the element vanishes to full
    working precision; +infinity then only means "not resolvable here".
    """

    value: int | None
    indistinguishable_from_zero: bool = False

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __repr__(self):
        return "v(+inf)" if self.value is None else f"v({self.value})"


class PAdic:
    """Element of p^(-e) * Z/p^N for an odd prime p."""

    __slots__ = ("p", "prec", "mantissa", "denom_exp")

    def __init__(self, p: int, prec: int, mantissa: int, denom_exp: int = 0):
        _check_odd_prime(p)
        if prec < 1:
            raise PrecisionError(f"need positive precision, got {prec}")
        if denom_exp < 0:
            raise ValueError("denominator exponent must be nonnegative")
        if denom_exp >= prec:
            raise PrecisionError(
                f"denom_exp {denom_exp} >= precision {prec}: no effective digits left"
            )
        mantissa %= p**prec
        # canonical form: p | mantissa and e > 0 cancel
        while denom_exp > 0 and mantissa % p == 0 and prec > 1:
            mantissa //= p
            denom_exp -= 1
            prec -= 1
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "mantissa", mantissa)
        object.__setattr__(self, "denom_exp", denom_exp)

    def __setattr__(self, *a):
        raise AttributeError("PAdic is immutable")

    # ---------------- constructors ----------------

    @classmethod
    def zero(cls, p: int, prec: int) -> "PAdic":
        return cls(p, prec, 0)

    @classmethod
    def one(cls, p: int, prec: int) -> "PAdic":
        return cls(p, prec, 1)

    @classmethod
    def from_int(cls, n: int, p: int, prec: int) -> "PAdic":
        return cls(p, prec, n)

    # ---------------- predicates ----------------

    @property
    def effective_prec(self) -> int:
        return self.prec - self.denom_exp

    def is_zero(self) -> bool:
        """True when indistinguishable from zero at this precision."""
        return self.mantissa == 0

    def is_unit(self) -> bool:
        return self.denom_exp == 0 and self.mantissa % self.p != 0

    # ---------------- arithmetic ----------------

    def _coerce(self, other) -> "PAdic":
        if isinstance(other, PAdic):
            if other.p != self.p:
                raise ValueError("mixed primes")
            return other
        if isinstance(other, int):
            return PAdic(self.p, self.prec + self.denom_exp, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        e = max(self.denom_exp, o.denom_exp)
        abs_prec = min(self.prec - self.denom_exp, o.prec - o.denom_exp)
        prec = abs_prec + e
        m = self.mantissa * p ** (e - self.denom_exp) + o.mantissa * p ** (e - o.denom_exp)
        return PAdic(p, prec, m, e)

    __radd__ = __add__

    def __neg__(self):
        return PAdic(self.p, self.prec, -self.mantissa, self.denom_exp)

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prec = min(self.prec, o.prec)
        e = self.denom_exp + o.denom_exp
        if e >= prec:
            raise PrecisionError("product denominator exhausts precision")
        return PAdic(self.p, prec, self.mantissa * o.mantissa, e)

    __rmul__ = __mul__

    def inverse(self) -> "PAdic":
        v = vp_int(self.mantissa, self.p)
        if v is None:
            raise PrecisionError("inverting an element indistinguishable from zero")
        p = self.p
        if v == 0:
            inv = pow(self.mantissa, -1, p**self.prec)
            # 1/(m p^-e) = p^e * m^-1
            return PAdic(p, self.prec, inv * p**self.denom_exp)
        # mantissa = p^v * u: value = u p^(v-e), inverse = u^-1 p^(e-v)
        unit = self.mantissa // p**v
        new_prec = self.prec - v
        e = v - self.denom_exp  # valuation of self
        if e >= 0:
            if e >= new_prec:
                raise PrecisionError("inverse denominator exhausts precision")
            return PAdic(p, new_prec, pow(unit, -1, p**new_prec), e)
        return PAdic(p, new_prec - e, pow(unit, -1, p ** (new_prec - e)) * p ** (-e))

    def __truediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else o * self.inverse()

    def shift(self, k: int) -> "PAdic":
        """Multiply by p^k (k may be negative)."""
        p = self.p
        if k >= 0:
            return PAdic(p, self.prec + k, self.mantissa * p**k, self.denom_exp)
        e = self.denom_exp - k
        if e >= self.prec:
            raise PrecisionError(f"shift by p^{k} exhausts precision")
        return PAdic(p, self.prec, self.mantissa, e)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        r = PAdic.one(self.p, self.prec + self.denom_exp * max(n, 1))
        b = self
        while n:
            if n & 1:
                r = r * b
            n >>= 1
            if n:
                b = b * b
        return r

    # ---------------- queries ----------------

    def valuation(self) -> Valuation:
        v = vp_int(self.mantissa, self.p)
        if v is None:
            return Valuation(None, indistinguishable_from_zero=True)
        return Valuation(v - self.denom_exp)

    def lift(self) -> int:
        """Integer representative of mantissa in [0, p^prec)."""
        return self.mantissa

    def reduce_prec(self, new_prec: int) -> "PAdic":
        if new_prec > self.prec:
            raise PrecisionError("cannot gain precision")
        return PAdic(self.p, new_prec, self.mantissa % self.p**new_prec, self.denom_exp)

    def __eq__(self, other):
        """Equality at the common precision (zero-at-precision compares equal)."""
        if isinstance(other, int):
            other = PAdic(self.p, self.prec + self.denom_exp, other)
        if not isinstance(other, PAdic):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("PAdic compares at precision; not hashable")

    def __repr__(self):
        e = self.denom_exp
        tail = f"/p^{e}" if e else ""
        return f"{self.mantissa}{tail} (mod {self.p}^{self.prec - e})"


# ---------------- module-level operations ----------------


def padic_from_rational(num: int, den: int, p: int, prec: int) -> PAdic:
    """The class of num/den, with the p-part of den held as denom_exp."""
    _check_odd_prime(p)
    if den == 0:
        raise ZeroDivisionError("denominator is zero")
    if num == 0:
        return PAdic.zero(p, prec)
    a = vp_int(num, p)
    b = vp_int(den, p)
    u, w = num // p**a, den // p**b
    if a >= b:
        m = u * p ** (a - b) * pow(w, -1, p**prec)
        return PAdic(p, prec, m)
    e = b - a
    if e >= prec:
        raise PrecisionError(f"denominator p^{e} exhausts precision {prec}")
    return PAdic(p, prec, u * pow(w, -1, p**prec), e)


def valuation(x: PAdic) -> Valuation:
    return x.valuation()


def teichmuller_lift(a: int, p: int, prec: int) -> PAdic:
    """The (p-1)st root of unity congruent to a mod p, via x -> x^p iteration."""
    _check_odd_prime(p)
    a %= p
    if a == 0:
        raise ValueError("no Teichmuller lift of 0")
    mod = p**prec
    x = a
    while True:
        y = pow(x, p, mod)
        if y == x:
            return PAdic(p, prec, x)
        x = y


def binomial_padic(c: PAdic, n: int) -> PAdic:
    """C(c, n) = c(c-1)...(c-n+1)/n!.

    The mantissa representative is treated exactly, so the only loss is the
    v_p(n!) digits consumed by the division; the result reports precision
    c.prec - v_p(n!) (PrecisionError when nothing is left).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = c.p
    if n == 0:
        return PAdic.one(p, c.prec)
    fact = math.factorial(n)
    vfact = vp_int(fact, p)
    if c.denom_exp == 0:
        # integral c: exact integer binomial of the representative, correct
        # mod p^(prec - v_p(n!))
        out_prec = c.prec - vfact
        if out_prec < 1:
            raise PrecisionError(
                f"dividing by {n}! needs {vfact} guard digits, only {c.prec} held"
            )
        rep = c.mantissa + p**c.prec  # keep representative >= n
        while rep < n:
            rep += p**c.prec
        val = math.comb(rep, n)
        return PAdic(p, out_prec, val)
    # non-integral c: product formula with denominators
    num = PAdic.one(p, c.prec + c.denom_exp)
    for i in range(n):
        num = num * (c - i)
    unit = fact // p**vfact
    out = num.shift(-vfact) if vfact else num
    return out * PAdic(p, out.prec, pow(unit, -1, p**out.prec))
