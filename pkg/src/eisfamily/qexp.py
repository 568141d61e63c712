"""Truncated q-expansions over a pluggable coefficient ring.

Coefficients may be ``int``, ``Fraction``, :class:`CyclotomicElement`,
:class:`PAdicNumber` or :class:`CycloPAdicNumber`; anything supporting
``+``, ``-`` and ``*`` with itself and with integers works.  A series
``QSeries(coeffs)`` represents ``sum c_n q^n + O(q^N)`` with ``N = prec``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

from .arith import CyclotomicElement, PAdicNumber

GENUS_ZERO_PRIMES = (5, 7, 13)


def _is_exact_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    if isinstance(x, CyclotomicElement):
        return x.is_zero()
    return False


def _encode(c):
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return str(c)
    return c.to_json()


class QSeries:
    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Iterable, prec: int = None):
        coeffs = list(coeffs)
        if prec is None:
            prec = len(coeffs)
        if prec < 1:
            raise ValueError("q-precision must be >= 1")
        if len(coeffs) > prec:
            coeffs = coeffs[:prec]
        elif len(coeffs) < prec:
            coeffs += [0] * (prec - len(coeffs))
        self.coeffs: Tuple = tuple(coeffs)
        self.prec = prec

    @classmethod
    def one(cls, prec: int) -> "QSeries":
        return cls([1], prec)

    @classmethod
    def monomial(cls, n: int, prec: int, c=1) -> "QSeries":
        return cls([0] * n + [c], prec)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return self.prec

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.prec == other.prec and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        return f"QSeries([{head}{', ...' if self.prec > 6 else ''}], prec={self.prec})"

    def truncate(self, prec: int) -> "QSeries":
        if prec > self.prec:
            raise ValueError(f"cannot extend q-precision {self.prec} to {prec}")
        return QSeries(self.coeffs[:prec], prec)

    def map(self, fn) -> "QSeries":
        return QSeries([fn(c) for c in self.coeffs], self.prec)

    def shift(self, k: int) -> "QSeries":
        """Multiply by q**k (k >= 0); precision grows by k."""
        return QSeries([0] * k + list(self.coeffs), self.prec + k)

    def valuation(self) -> int:
        """Index of the first coefficient that is not an exact zero."""
        for n, c in enumerate(self.coeffs):
            if not _is_exact_zero(c):
                return n
        return self.prec

    # ring operations

    def __add__(self, other):
        if not isinstance(other, QSeries):
            c = list(self.coeffs)
            c[0] = c[0] + other
            return QSeries(c, self.prec)
        n = min(self.prec, other.prec)
        return QSeries([self.coeffs[i] + other.coeffs[i] for i in range(n)], n)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries([c * other for c in self.coeffs], self.prec)
        n = min(self.prec, other.prec)
        a = [(i, x) for i, x in enumerate(self.coeffs[:n]) if not _is_exact_zero(x)]
        b = [(j, y) for j, y in enumerate(other.coeffs[:n]) if not _is_exact_zero(y)]
        out: List = [0] * n
        for i, x in a:
            for j, y in b:
                if i + j >= n:
                    break
                out[i + j] = out[i + j] + x * y
        return QSeries(out, n)

    def __rmul__(self, other):
        return QSeries([other * c for c in self.coeffs], self.prec)

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            return self.invert() ** (-e)
        result = QSeries.one(self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def invert(self) -> "QSeries":
        """Multiplicative inverse; the constant term must be a unit."""
        c0 = self.coeffs[0]
        inv0 = _unit_inverse(c0)
        n = self.prec
        a = [(i, x) for i, x in enumerate(self.coeffs) if i > 0 and not _is_exact_zero(x)]
        b: List = [inv0] + [0] * (n - 1)
        for m in range(1, n):
            s = 0
            for i, x in a:
                if i > m:
                    break
                y = b[m - i]
                if not _is_exact_zero(y):
                    s = s + x * y
            if not _is_exact_zero(s):
                b[m] = -(s * inv0) if inv0 != 1 else -s
        return QSeries(b, n)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.invert()
        return self * _unit_inverse(other)

    def to_json(self):
        return {"prec": self.prec, "coeffs": [_encode(c) for c in self.coeffs]}


def _unit_inverse(c):
    if isinstance(c, int):
        if c in (1, -1):
            return c
        raise ZeroDivisionError(f"constant term {c} is not a unit in Z")
    if isinstance(c, Fraction):
        if c == 0:
            raise ZeroDivisionError("constant term is zero")
        return 1 / c
    if isinstance(c, PAdicNumber):
        if c.is_zero() or c.val != 0:
            raise ZeroDivisionError("constant term is not a p-adic unit")
        return c.inverse()
    if isinstance(c, CyclotomicElement):
        return c.inverse()
    raise ZeroDivisionError(f"cannot invert constant term of type {type(c).__name__}")


def frobenius_V(f: QSeries, p: int) -> QSeries:
    """q -> q**p."""
    n = p * (f.prec - 1) + 1
    out: List = [0] * n
    for i, c in enumerate(f.coeffs):
        out[p * i] = c
    return QSeries(out, n)


def atkin_U(f: QSeries, p: int) -> QSeries:
    """Keep every p-th coefficient."""
    n = -(-f.prec // p)
    return QSeries(f.coeffs[::p][:n], n)


def eta_quotient(factors: Sequence[Tuple[int, int]], prec: int) -> QSeries:
    """Integer series prod (1 - q^m)^e over ``factors = [(m, e), ...]``.

    Each factor is applied by repeated multiplication or division by the
    binomial 1 - q^m, so the result is exact over Z.
    """
    c = [1] + [0] * (prec - 1)
    for m, e in factors:
        if m <= 0:
            raise ValueError("factor index must be positive")
        if m >= prec:
            continue
        for _ in range(abs(e)):
            if e > 0:
                for n in range(prec - 1, m - 1, -1):
                    c[n] -= c[n - m]
            else:
                for n in range(m, prec):
                    c[n] += c[n - m]
    return QSeries(c, prec)


def hauptmodul_factors(p: int, prec: int) -> List[Tuple[int, int]]:
    if p not in GENUS_ZERO_PRIMES:
        raise ValueError(f"p={p} is not a supported genus-zero prime {GENUS_ZERO_PRIMES}")
    e = 24 // (p - 1)
    factors = []
    for n in range(1, prec):
        factors.append((n, -e))
        if p * n < prec:
            factors.append((p * n, e))
    return factors


@lru_cache(maxsize=64)
def hauptmodul(p: int, prec: int) -> QSeries:
    """f_p = q * prod (1 - q^{pn})^e (1 - q^n)^{-e}, e = 24/(p-1), to O(q^prec)."""
    if prec < 1:
        raise ValueError("q-precision must be >= 1")
    body = eta_quotient(hauptmodul_factors(p, prec), max(prec - 1, 1))
    return body.shift(1).truncate(prec)
