from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from eisfamily.arith import (
    CycloPAdicNumber,
    CyclotomicElement,
    DirichletCharacter,
    PAdicNumber,
    ValOrBound,
    bernoulli,
    bernoulli_poly,
    gen_bernoulli,
    teichmuller_generator,
    valuation,
    vmin,
    vp,
    w_of_k,
)

PRIMES = [5, 7, 13]
rationals = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4)


def bernoulli_from_egf(n):
    """B_0..B_n from x/(e^x - 1) = sum B_k x^k / k!, by power series division."""
    # e^x - 1 = x * sum x^k/(k+1)!
    d = [Fraction(1, factorial(k + 1)) for k in range(n + 1)]
    q = []
    for k in range(n + 1):
        s = Fraction(int(k == 0)) - sum(q[j] * d[k - j] for j in range(k))
        q.append(s / d[0])
    return [q[k] * factorial(k) for k in range(n + 1)]


def test_vp_basics():
    assert vp(0, 5) is None
    assert vp(250, 5) == 3
    assert vp(Fraction(3, 25), 5) == -2
    assert valuation(0, 5) is None
    assert valuation(Fraction(10, 3), 5) == ValOrBound(1)


def test_valorbound_json_and_satisfies():
    a, b = ValOrBound(Fraction(3, 4)), ValOrBound.at_least(5)
    assert ValOrBound.from_json(a.to_json()) == a
    assert ValOrBound.from_json(b.to_json()) == b
    assert a.satisfies(Fraction(1, 2)) is True
    assert a.satisfies(1) is False
    assert b.satisfies(4) is True
    assert b.satisfies(6) is None


def test_vmin_ignores_exact_zeros():
    assert vmin([None, ValOrBound(2), ValOrBound.at_least(1)]) == ValOrBound.at_least(1)
    assert vmin([None, None]) is None
    assert vmin([ValOrBound(0), ValOrBound.at_least(3)]) == ValOrBound(0)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PRIMES), rationals, rationals, st.integers(5, 30))
def test_padic_ring_ops_agree_with_rationals(p, x, y, prec):
    a, b = PAdicNumber.from_rational(x, p, prec), PAdicNumber.from_rational(y, p, prec)
    assert (a + b).agrees_with(x + y)
    assert (a - b).agrees_with(x - y)
    assert (a * b).agrees_with(x * y)
    if y != 0 and not (a * b).is_zero() and not b.is_zero():
        assert (a / b).agrees_with(x / y)


def test_padic_precision_bookkeeping():
    p = 5
    a = PAdicNumber.from_rational(25, p, 10)  # 25 + O(5^10)
    b = PAdicNumber.from_rational(Fraction(1, 5), p, 4)
    assert (a * b).prec == min(10 - 1, 4 + 2)
    assert (a + b).prec == 4
    inv = a.inverse()
    assert inv.val == -2 and inv.prec - inv.val == a.prec - a.val
    z = PAdicNumber.from_rational(5**12, p, 10)
    assert z.is_zero() and z.valuation() == ValOrBound.at_least(10)
    assert PAdicNumber.from_json(a.to_json()) == a


def test_w_of_k():
    assert w_of_k(5, 4) == 6**4 - 1
    assert vp(w_of_k(5, 20), 5) == 2


def test_bernoulli_against_generating_function():
    oracle = bernoulli_from_egf(40)
    assert [bernoulli(k) for k in range(41)] == oracle
    assert bernoulli(12) == Fraction(-691, 2730)


def test_bernoulli_poly():
    for k in range(1, 10):
        for x in (Fraction(0), Fraction(1, 3), Fraction(5, 7)):
            # B_k(x+1) - B_k(x) = k x^(k-1)
            assert bernoulli_poly(k, x + 1) - bernoulli_poly(k, x) == k * x ** (k - 1)


@pytest.mark.parametrize("p", PRIMES)
def test_generalized_bernoulli_trivial_mod_p(p):
    # B_{k,chi0} for chi0 trivial mod p equals (1 - p^(k-1)) B_k
    chi0 = DirichletCharacter.trivial(p, p)
    for k in range(2, 12, 2):
        got = gen_bernoulli(k, chi0)
        assert got == CyclotomicElement.rational(p, (1 - Fraction(p) ** (k - 1)) * bernoulli(k))


def test_generalized_bernoulli_sum_over_characters():
    # sum_a chi_a(d) is p when d is a (p-1)st root of unity mod p^2, else 0
    p, k = 5, 4
    total = CyclotomicElement.rational(p, 0)
    for a in range(p):
        chi = DirichletCharacter.from_exponent(p, a)
        total = total + gen_bernoulli(k, chi)
    expected = Fraction(0)
    f = p * p
    for a in range(1, f + 1):
        if a % p and pow(a, p - 1, f) == 1:
            expected += p * bernoulli_poly(k, Fraction(a, f))
    assert total == CyclotomicElement.rational(p, expected * Fraction(f) ** (k - 1))


cyclo = st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=20), min_size=5, max_size=5)


@settings(max_examples=100, deadline=None)
@given(cyclo, cyclo)
def test_cyclotomic_field_ops(xs, ys):
    p = 5
    x, y = CyclotomicElement(p, xs), CyclotomicElement(p, ys)
    assert x * y == y * x
    assert (x + y) - y == x
    if not x.is_zero():
        assert x * x.inverse() == CyclotomicElement.rational(p, 1)


@settings(max_examples=100, deadline=None)
@given(cyclo)
def test_valuation_matches_norm(xs):
    # v(x) = v_p(N(x)) / (p-1) in a totally ramified extension of degree p-1
    p = 5
    x = CyclotomicElement(p, xs)
    if x.is_zero():
        assert x.valuation() is None
        return
    assert x.valuation().value == Fraction(vp(x.norm(), p), p - 1)


def test_zeta_minus_one_is_uniformiser():
    for p in PRIMES:
        pi = CyclotomicElement.zeta(p) - 1
        assert pi.valuation() == ValOrBound(Fraction(1, p - 1))
        assert (pi ** (p - 1)).valuation() == ValOrBound(1)


def test_cyclo_padic_from_exact_and_arith():
    p = 5
    pi = CyclotomicElement.zeta(p) - 1
    x = pi**3 * 7 + CyclotomicElement.rational(p, 25)
    y = CyclotomicElement.zeta(p, 2) * Fraction(1, 3)
    X, Y = CycloPAdicNumber.from_exact(x, 40), CycloPAdicNumber.from_exact(y, 40)
    assert X.valuation() == x.valuation()
    assert (X * Y).valuation() == (x * y).valuation()
    assert (X + Y).valuation() == (x + y).valuation()
    assert CycloPAdicNumber.from_exact(CyclotomicElement.rational(p, 1), 10).residue() == 1
    assert CycloPAdicNumber.from_exact(pi, 10).residue() == 0
    assert CycloPAdicNumber.from_rational(p, 5**20, 40).valuation() == ValOrBound.at_least(10)


@pytest.mark.parametrize("p", PRIMES)
def test_character_structure(p):
    g = teichmuller_generator(p)
    assert pow(g, p - 1, p * p) == 1 and g % p != 1
    for a in range(1, p):
        chi = DirichletCharacter.from_exponent(p, a)
        assert chi.conductor == p * p
        assert chi(1 + p) == CyclotomicElement.zeta(p, a)
        assert chi(p) == CyclotomicElement.rational(p, 0)
        for d in range(1, 3 * p):
            for e in range(1, 2 * p):
                if d % p and e % p:
                    assert chi(d * e) == chi(d) * chi(e)
    assert DirichletCharacter.from_exponent(p, 0).conductor == 1


def test_character_from_generators():
    chi = DirichletCharacter.from_generators(5, [(7, 0), (6, 1)])
    assert chi.exponent(6) == 1 and chi.exponent(7) == 0
    with pytest.raises(ValueError):
        DirichletCharacter.from_generators(5, [(7, 1), (6, 1)])  # 7 has order 4, zeta^4 != 1
    with pytest.raises(ValueError):
        DirichletCharacter.from_generators(5, [(6, 1)])
