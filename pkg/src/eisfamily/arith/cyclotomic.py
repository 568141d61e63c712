"""Arithmetic in Q(zeta_p) and in its completion at the prime above p.

Exact elements live in the zeta-basis ``1, zeta, ..., zeta**(p-2)`` with
rational coordinates.  The completion is totally ramified of degree p-1
with uniformizer ``pi = zeta - 1``; truncated elements are stored in the
pi-basis, where the valuation is read off from the leading index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from numbers import Rational
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .padic import ValOrBound, _inv_mod, vp


class CyclotomicElement:
    """Exact element of Q(zeta_p), immutable."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence):
        coeffs = [Fraction(c) for c in coeffs]
        if len(coeffs) > p - 1:
            coeffs = _reduce_zeta(p, coeffs)
        coeffs += [Fraction(0)] * (p - 1 - len(coeffs))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicElement is immutable")

    @classmethod
    def rational(cls, p: int, x) -> "CyclotomicElement":
        return cls(p, [x])

    @classmethod
    def zeta(cls, p: int, e: int = 1) -> "CyclotomicElement":
        e %= p
        c = [0] * p
        c[e] = 1
        return cls(p, c)

    @classmethod
    def from_exponent_sums(cls, p: int, sums: Dict[int, object]) -> "CyclotomicElement":
        """``sum_e sums[e] * zeta**e``."""
        c = [Fraction(0)] * p
        for e, s in sums.items():
            c[e % p] += s
        return cls(p, c)

    # structure

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, CyclotomicElement):
            return self.p == other.p and self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.coeffs == CyclotomicElement.rational(self.p, other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def _lift(self, other) -> "CyclotomicElement":
        if isinstance(other, CyclotomicElement):
            if other.p != self.p:
                raise ValueError("elements of different cyclotomic fields")
            return other
        if isinstance(other, (int, Rational)):
            return CyclotomicElement.rational(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return CyclotomicElement(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            other = Fraction(other)
            return CyclotomicElement(self.p, [a * other for a in self.coeffs])
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        prod = [Fraction(0)] * p
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    prod[(i + j) % p] += a * b
        return CyclotomicElement(p, prod)

    __rmul__ = __mul__

    def conjugate(self, a: int) -> "CyclotomicElement":
        """Image under the automorphism zeta -> zeta**a (p does not divide a)."""
        if a % self.p == 0:
            raise ValueError("a must be prime to p")
        c = [Fraction(0)] * self.p
        for i, x in enumerate(self.coeffs):
            c[(i * a) % self.p] += x
        return CyclotomicElement(self.p, c)

    def norm(self) -> Fraction:
        result = self
        for a in range(2, self.p):
            result = result * self.conjugate(a)
        return result.coeffs[0]

    def inverse(self) -> "CyclotomicElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        others = CyclotomicElement.rational(self.p, 1)
        for a in range(2, self.p):
            others = others * self.conjugate(a)
        n = (self * others).coeffs[0]
        return others * (1 / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / Fraction(other))
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CyclotomicElement.rational(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # valuation

    def pi_coords(self) -> Tuple[Fraction, ...]:
        """Coordinates in the basis ``1, pi, ..., pi**(p-2)`` with pi = zeta - 1."""
        p = self.p
        out = [Fraction(0)] * (p - 1)
        for k, a in enumerate(self.coeffs):
            if a:
                for i in range(k + 1):
                    out[i] += a * comb(k, i)
        return tuple(out)

    def pi_valuation(self) -> Optional[int]:
        """Valuation in units of v(pi) = 1/(p-1); ``None`` for zero."""
        best = None
        for i, c in enumerate(self.pi_coords()):
            v = vp(c, self.p)
            if v is not None:
                cand = (self.p - 1) * v + i
                best = cand if best is None else min(best, cand)
        return best

    def valuation(self) -> Optional[ValOrBound]:
        v = self.pi_valuation()
        return None if v is None else ValOrBound(Fraction(v, self.p - 1))

    # serialization

    def to_json(self):
        return {"p": self.p, "zeta_coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"({c})*z^{i}")
        return " + ".join(terms) if terms else "0"


def _reduce_zeta(p: int, coeffs: List[Fraction]) -> List[Fraction]:
    """Reduce a polynomial in zeta modulo zeta**p - 1 and Phi_p."""
    c = [Fraction(0)] * p
    for i, x in enumerate(coeffs):
        c[i % p] += x
    top = c[p - 1]
    return [x - top for x in c[: p - 1]]


@lru_cache(maxsize=None)
def _pi_relation(p: int) -> Tuple[int, ...]:
    """Integers r_0..r_{p-2} with pi**(p-1) = sum r_i pi**i."""
    return tuple(-comb(p, k) for k in range(1, p))


@dataclass(frozen=True)
class CycloPAdicNumber:
    """Element ``p**pshift * sum coeffs[i] * pi**i`` known modulo ``pi**prec``.

    Valuations and precisions are counted in units of v(pi) = 1/(p-1).
    """

    p: int
    coeffs: Tuple[int, ...]
    pshift: int
    prec: int

    @classmethod
    def _normalized(cls, p: int, coeffs: Sequence[int], pshift: int, prec: int) -> "CycloPAdicNumber":
        e = p - 1
        coeffs = list(coeffs)
        while True:
            for i in range(e):
                k = -((i - prec + e * pshift) // e)  # ceil((prec - e*pshift - i) / e)
                coeffs[i] = coeffs[i] % p**k if k > 0 else 0
            if not any(coeffs):
                return cls(p, (0,) * e, 0, prec)
            if all(c % p == 0 for c in coeffs):
                coeffs = [c // p for c in coeffs]
                pshift += 1
                continue
            return cls(p, tuple(coeffs), pshift, prec)

    @classmethod
    def from_exact(cls, x: CyclotomicElement, prec: int) -> "CycloPAdicNumber":
        p = x.p
        pc = x.pi_coords()
        vals = [vp(c, p) for c in pc]
        present = [v for v in vals if v is not None]
        if not present:
            return cls(p, (0,) * (p - 1), 0, prec)
        shift = min(present)
        k = max(1, -(-(prec - (p - 1) * shift) // (p - 1)) + 1)
        mod = p**k
        coeffs = []
        for c in pc:
            c = c / Fraction(p) ** shift
            coeffs.append(c.numerator * _inv_mod(c.denominator, mod) % mod)
        return cls._normalized(p, coeffs, shift, prec)

    @classmethod
    def from_rational(cls, p: int, x, prec: int) -> "CycloPAdicNumber":
        return cls.from_exact(CyclotomicElement.rational(p, x), prec)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def pi_valuation(self) -> Optional[int]:
        best = None
        for i, c in enumerate(self.coeffs):
            if c:
                cand = (self.p - 1) * (self.pshift + vp(c, self.p)) + i
                best = cand if best is None else min(best, cand)
        return best

    def _vpi_or_prec(self) -> int:
        v = self.pi_valuation()
        return self.prec if v is None else v

    def valuation(self) -> ValOrBound:
        v = self.pi_valuation()
        if v is None:
            return ValOrBound.at_least(Fraction(self.prec, self.p - 1))
        return ValOrBound(Fraction(v, self.p - 1))

    def residue(self) -> int:
        """Reduction modulo pi, an element of F_p (requires integrality)."""
        v = self._vpi_or_prec()
        if v < 0:
            raise ValueError("element is not integral")
        if self.prec < 1:
            raise ValueError("no precision left for a residue")
        if self.pshift > 0:
            return 0
        return self.coeffs[0] % self.p

    def _coerce(self, other) -> "CycloPAdicNumber":
        if isinstance(other, CycloPAdicNumber):
            if other.p != self.p:
                raise ValueError("different primes")
            return other
        if isinstance(other, CyclotomicElement):
            return CycloPAdicNumber.from_exact(other, self.prec)
        if isinstance(other, (int, Rational)):
            return CycloPAdicNumber.from_rational(self.p, other, self.prec)
        return NotImplemented

    def __neg__(self):
        return CycloPAdicNumber._normalized(self.p, [-c for c in self.coeffs], self.pshift, self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other if other.prec <= self.prec else CycloPAdicNumber._normalized(
                self.p, other.coeffs, other.pshift, self.prec)
        if other.is_zero():
            return self if self.prec <= other.prec else CycloPAdicNumber._normalized(
                self.p, self.coeffs, self.pshift, other.prec)
        e = min(self.pshift, other.pshift)
        a = [c * self.p ** (self.pshift - e) for c in self.coeffs]
        b = [c * self.p ** (other.pshift - e) for c in other.coeffs]
        return CycloPAdicNumber._normalized(
            self.p, [x + y for x, y in zip(a, b)], e, min(self.prec, other.prec))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, bool):
            v = vp(Fraction(other), self.p)
            rel = self.prec - self._vpi_or_prec()
            other = CycloPAdicNumber.from_rational(
                self.p, other, (0 if v is None else (self.p - 1) * v) + rel)
        else:
            other = self._coerce(other)
            if other is NotImplemented:
                return NotImplemented
        prec = min(self.prec + other._vpi_or_prec(), other.prec + self._vpi_or_prec())
        p = self.p
        if self.is_zero() or other.is_zero():
            return CycloPAdicNumber(p, (0,) * (p - 1), 0, prec)
        prod = [0] * (2 * p - 3)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        rel = _pi_relation(p)
        for d in range(len(prod) - 1, p - 2, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                base = d - (p - 1)
                for i, r in enumerate(rel):
                    prod[base + i] += c * r
        return CycloPAdicNumber._normalized(p, prod[: p - 1], self.pshift + other.pshift, prec)

    __rmul__ = __mul__

    def to_json(self):
        return {"p": self.p, "pi_coeffs": [str(c) for c in self.coeffs],
                "pshift": self.pshift, "pi_prec": self.prec}


class DirichletCharacter:
    """Dirichlet character of modulus 1, p or p**2 with values in mu_p.

    ``exponents`` maps each unit residue d to e with chi(d) = zeta_p**e.
    """

    def __init__(self, p: int, modulus: int, exponents: Dict[int, int]):
        if modulus not in (1, p, p * p):
            raise ValueError("modulus must be 1, p or p^2")
        self.p = p
        self.modulus = modulus
        self.exponents = {d % modulus if modulus > 1 else 0: e % p for d, e in exponents.items()}

    @classmethod
    def trivial(cls, p: int, modulus: int = 1) -> "DirichletCharacter":
        units = [d for d in range(modulus) if d % p != 0] if modulus > 1 else [0]
        return cls(p, modulus, {d: 0 for d in units})

    @classmethod
    def from_generators(cls, p: int, images: Iterable[Tuple[int, int]]) -> "DirichletCharacter":
        """Character mod p**2 from (generator, zeta-exponent) pairs.

        Raises ``ValueError`` if the images are inconsistent with the group
        relations or the generators do not generate (Z/p^2)^*.
        """
        mod = p * p
        images = [(g % mod, e % p) for g, e in images]
        for g, _ in images:
            if g % p == 0:
                raise ValueError(f"generator {g} is not a unit mod {mod}")
        table = {1: 0}
        frontier = [1]
        while frontier:
            nxt = []
            for x in frontier:
                for g, e in images:
                    y = x * g % mod
                    ey = (table[x] + e) % p
                    if y in table:
                        if table[y] != ey:
                            raise ValueError("generator images inconsistent with generator orders")
                    else:
                        table[y] = ey
                        nxt.append(y)
            frontier = nxt
        if len(table) != p * (p - 1):
            raise ValueError("generators do not generate (Z/p^2)^*")
        return cls(p, mod, table)

    @classmethod
    def from_exponent(cls, p: int, a: int) -> "DirichletCharacter":
        """The character mod p**2 with chi(1+p) = zeta**a, trivial on mu_{p-1}."""
        return cls.from_generators(p, [(teichmuller_generator(p), 0), (1 + p, a)])

    def exponent(self, d: int) -> Optional[int]:
        if d % self.p == 0:
            return None
        return self.exponents[d % self.modulus if self.modulus > 1 else 0]

    def __call__(self, d: int) -> CyclotomicElement:
        return char_eval(self, d)

    def is_trivial(self) -> bool:
        return not any(self.exponents.values())

    @property
    def conductor(self) -> int:
        if self.is_trivial():
            return 1
        return self.modulus

    def to_json(self):
        return {"p": self.p, "modulus": self.modulus,
                "exponent_at_1_plus_p": self.exponent(1 + self.p) if self.modulus == self.p**2 else 0}

    def __repr__(self):
        return f"DirichletCharacter(p={self.p}, modulus={self.modulus}, chi(1+p)=zeta^{self.exponent(1 + self.p)})"


def char_eval(chi: DirichletCharacter, d: int) -> CyclotomicElement:
    e = chi.exponent(d)
    if e is None:
        return CyclotomicElement.rational(chi.p, 0)
    return CyclotomicElement.zeta(chi.p, e)


def teichmuller_generator(p: int) -> int:
    """A generator of the (p-1)st roots of unity in (Z/p^2)^*."""
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            return pow(g, p, p * p)
    return 1


def _prime_factors(n: int) -> List[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out
