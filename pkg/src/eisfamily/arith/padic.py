"""Truncated p-adic numbers with pessimistic precision tracking.

A :class:`PAdicNumber` stores ``p**val * unit`` known modulo ``p**prec``.
The unit part is kept modulo ``p**(prec - val)``.  A number that vanishes
to its known precision is stored with ``unit == 0`` and ``val == prec``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Union


def vp(x, p: int) -> Optional[int]:
    """Exact p-adic valuation of an integer or rational; ``None`` for zero."""
    if isinstance(x, Fraction):
        if x == 0:
            return None
        return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)
    x = int(x)
    if x == 0:
        return None
    return _vp_int(x, p)


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class ValOrBound:
    """A valuation that is either known exactly or only bounded below.

    ``exact=False`` means the quantity vanished to all known precision and
    ``value`` is the precision it was known to.
    """

    value: Fraction
    exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    @classmethod
    def at_least(cls, value) -> "ValOrBound":
        return cls(Fraction(value), exact=False)

    def satisfies(self, bound) -> Optional[bool]:
        """True/False when decidable, ``None`` when the data cannot tell."""
        bound = Fraction(bound)
        if self.exact:
            return self.value >= bound
        return True if self.value >= bound else None

    def to_json(self):
        body = {"num": self.value.numerator, "den": self.value.denominator}
        return body if self.exact else {"at_least": body}

    @classmethod
    def from_json(cls, obj) -> "ValOrBound":
        if "at_least" in obj:
            inner = obj["at_least"]
            return cls.at_least(Fraction(inner["num"], inner["den"]))
        return cls(Fraction(obj["num"], obj["den"]))

    def __str__(self):
        return str(self.value) if self.exact else f">={self.value}"


def vmin(vals: Iterable[Optional[ValOrBound]]) -> Optional[ValOrBound]:
    """Valuation of a vector from the valuations of its entries.

    ``None`` entries are exact zeros and are ignored.  Returns ``None`` for
    the exact zero vector.
    """
    vals = list(vals)
    exact = [v.value for v in vals if v is not None and v.exact]
    bounds = [v.value for v in vals if v is not None and not v.exact]
    if not exact and not bounds:
        return None
    if exact:
        m = min(exact)
        if not bounds or m < min(bounds):
            return ValOrBound(m)
        return ValOrBound.at_least(min(bounds))
    return ValOrBound.at_least(min(bounds))


def _inv_mod(a: int, m: int) -> int:
    return pow(a, -1, m) if m > 1 else 0


@dataclass(frozen=True)
class PAdicNumber:
    p: int
    unit: int
    val: int
    prec: int

    def __post_init__(self):
        if self.unit == 0:
            if self.val != self.prec:
                raise ValueError("zero p-adic number must have val == prec")
        else:
            if self.val >= self.prec:
                raise ValueError("nonzero p-adic number must have val < prec")
            if self.unit % self.p == 0:
                raise ValueError("unit part divisible by p")

    # construction

    @classmethod
    def zero(cls, p: int, prec: int) -> "PAdicNumber":
        return cls(p, 0, prec, prec)

    @classmethod
    def from_rational(cls, x, p: int, prec: int) -> "PAdicNumber":
        """Reduce an exact integer or rational with p-integral unit part."""
        x = Fraction(x)
        v = vp(x, p)
        if v is None or v >= prec:
            return cls.zero(p, prec)
        num, den = x.numerator, x.denominator
        if v >= 0:
            num //= p**v
        else:
            den //= p ** (-v)
        mod = p ** (prec - v)
        return cls(p, num * _inv_mod(den, mod) % mod, v, prec)

    @classmethod
    def _normalized(cls, p: int, value: int, v: int, prec: int) -> "PAdicNumber":
        """Build from ``p**v * value`` (value any integer) known mod p**prec."""
        if prec <= v:
            return cls.zero(p, prec)
        value %= p ** (prec - v)
        if value == 0:
            return cls.zero(p, prec)
        while value % p == 0:
            value //= p
            v += 1
        return cls(p, value % p ** (prec - v), v, prec)

    # queries

    def is_zero(self) -> bool:
        return self.unit == 0

    def valuation(self) -> ValOrBound:
        if self.unit == 0:
            return ValOrBound.at_least(self.prec)
        return ValOrBound(self.val)

    def to_fraction(self) -> Fraction:
        """The canonical representative ``p**val * unit``."""
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def agrees_with(self, x) -> bool:
        """Whether an exact rational is congruent to ``self`` mod p**prec."""
        diff = Fraction(x) - self.to_fraction()
        v = vp(diff, self.p)
        return v is None or v >= self.prec

    def lift_precision(self, prec: int) -> "PAdicNumber":
        """Reduce the known precision (never raises it)."""
        if prec >= self.prec:
            return self
        return PAdicNumber._normalized(self.p, self.unit, self.val, prec)

    # coercion

    def _coerce(self, other, *, for_mul: bool) -> "PAdicNumber":
        if isinstance(other, PAdicNumber):
            if other.p != self.p:
                raise ValueError("p-adic numbers over different primes")
            return other
        if isinstance(other, (int, Rational)):
            if not for_mul:
                return PAdicNumber.from_rational(other, self.p, self.prec)
            # keep the relative precision of self
            rel = self.prec - self.val
            v = vp(Fraction(other), self.p)
            return PAdicNumber.from_rational(other, self.p, (0 if v is None else v) + rel)
        return NotImplemented

    # arithmetic

    def __neg__(self):
        if self.unit == 0:
            return self
        return PAdicNumber(self.p, (-self.unit) % self.p ** (self.prec - self.val), self.val, self.prec)

    def __add__(self, other):
        other = self._coerce(other, for_mul=False)
        if other is NotImplemented:
            return NotImplemented
        prec = min(self.prec, other.prec)
        v = min(self.val, other.val)
        total = self.unit * self.p ** (self.val - v) + other.unit * self.p ** (other.val - v)
        return PAdicNumber._normalized(self.p, total, v, prec)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other, for_mul=False)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other, for_mul=False)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other, for_mul=True)
        if other is NotImplemented:
            return NotImplemented
        prec = min(self.prec + other.val, other.prec + self.val)
        if self.unit == 0 or other.unit == 0:
            return PAdicNumber.zero(self.p, prec)
        return PAdicNumber._normalized(self.p, self.unit * other.unit, self.val + other.val, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PAdicNumber":
        if self.unit == 0:
            raise ZeroDivisionError("p-adic number is zero to its precision")
        rel = self.prec - self.val
        return PAdicNumber(self.p, _inv_mod(self.unit, self.p**rel), -self.val, rel - self.val)

    def __truediv__(self, other):
        other = self._coerce(other, for_mul=True)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other, for_mul=True)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = PAdicNumber.from_rational(1, self.p, self.prec - self.val)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # serialization

    def to_json(self):
        return {"p": self.p, "val": self.val, "unit": str(self.unit), "prec": self.prec}

    @classmethod
    def from_json(cls, obj) -> "PAdicNumber":
        return cls(int(obj["p"]), int(obj["unit"]), int(obj["val"]), int(obj["prec"]))

    def __repr__(self):
        if self.unit == 0:
            return f"O({self.p}^{self.prec})"
        return f"{self.p}^{self.val}*{self.unit} + O({self.p}^{self.prec})"


Number = Union[int, Fraction, PAdicNumber]


def valuation(x, p: int) -> Optional[ValOrBound]:
    """Valuation of any supported coefficient; ``None`` for an exact zero."""
    if isinstance(x, (int, Fraction)):
        v = vp(x, p)
        return None if v is None else ValOrBound(v)
    return x.valuation()


def w_of_k(p: int, k: int, prec: Optional[int] = None):
    """``(1+p)**k - 1``; exact integer, or a :class:`PAdicNumber` if ``prec`` is given."""
    w = (1 + p) ** k - 1
    if prec is None:
        return w
    return PAdicNumber.from_rational(w, p, prec)
