"""Bernoulli numbers, Bernoulli polynomials and generalized Bernoulli numbers."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import List

from .cyclotomic import CyclotomicElement, DirichletCharacter

_B: List[Fraction] = [Fraction(1)]


def bernoulli(k: int) -> Fraction:
    """B_k with B_1 = -1/2, from sum_{j<=m} C(m+1, j) B_j = 0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    while len(_B) <= k:
        m = len(_B)
        s = sum(comb(m + 1, j) * _B[j] for j in range(m))
        _B.append(-s / (m + 1))
    return _B[k]


@lru_cache(maxsize=None)
def _bernoulli_poly_coeffs(k: int):
    # B_k(x) = sum_j C(k, j) B_j x^(k-j)
    return tuple(comb(k, j) * bernoulli(j) for j in range(k + 1))


def bernoulli_poly(k: int, x) -> Fraction:
    x = Fraction(x)
    return sum((c * x ** (k - j) for j, c in enumerate(_bernoulli_poly_coeffs(k))), Fraction(0))


def gen_bernoulli(k: int, chi: DirichletCharacter) -> CyclotomicElement:
    """B_{k,chi} = f^(k-1) sum_{a=1}^{f} chi(a) B_k(a/f), f the modulus of chi."""
    if k < 0:
        raise ValueError("k must be >= 0")
    f = chi.modulus
    sums = {}
    for a in range(1, f + 1):
        e = chi.exponent(a)
        if e is None:
            continue
        sums[e] = sums.get(e, Fraction(0)) + bernoulli_poly(k, Fraction(a, f))
    scale = Fraction(f) ** (k - 1)
    return CyclotomicElement.from_exponent_sums(chi.p, {e: s * scale for e, s in sums.items()})
