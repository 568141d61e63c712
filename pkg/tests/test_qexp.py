import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from eisfamily.arith import PAdicNumber
from eisfamily.qexp import QSeries, atkin_U, eta_quotient, frobenius_V, hauptmodul

ints = st.lists(st.integers(-100, 100), min_size=1, max_size=15)


def naive_mul(a, b, n):
    return [sum(a[i] * b[k - i] for i in range(k + 1) if i < len(a) and k - i < len(b)) for k in range(n)]


@settings(max_examples=100, deadline=None)
@given(ints, ints)
def test_mul_matches_naive_convolution(a, b):
    n = min(len(a), len(b))
    assert list((QSeries(a) * QSeries(b)).coeffs) == naive_mul(a, b, n)


@settings(max_examples=100, deadline=None)
@given(ints)
def test_invert_rational(a):
    a = [Fraction(1)] + [Fraction(x, 3) for x in a]
    f = QSeries(a)
    assert f * f.invert() == QSeries.one(f.prec)


def test_invert_padic():
    p, prec = 5, 12
    f = QSeries([PAdicNumber.from_rational(x, p, prec) for x in (2, 5, Fraction(1, 3), 7, 11)])
    g = f * f.invert()
    assert g[0].agrees_with(1)
    assert all(c.agrees_with(0) for c in g.coeffs[1:])


def test_invert_nonunit_raises():
    with pytest.raises(ZeroDivisionError):
        QSeries([2, 1]).invert()


@settings(max_examples=100, deadline=None)
@given(ints, st.sampled_from([5, 7, 13]))
def test_U_after_V_is_identity(a, p):
    f = QSeries(a)
    assert atkin_U(frobenius_V(f, p), p) == f


@settings(max_examples=50, deadline=None)
@given(ints, st.lists(st.integers(-100, 100), min_size=40, max_size=40), st.sampled_from([5, 7]))
def test_coleman_trick(a, b, p):
    # U(V(F) G) = F U(G)
    F, G = QSeries(a), QSeries(b)
    lhs = atkin_U(frobenius_V(F, p).truncate(min(G.prec, p * (F.prec - 1) + 1)) * G, p)
    rhs = F * atkin_U(G, p)
    n = min(lhs.prec, rhs.prec)
    assert lhs.truncate(n) == rhs.truncate(n)


def test_eta_quotient_is_euler_product():
    # prod (1 - q^n) = sum (-1)^k q^{k(3k-1)/2}
    prec = 60
    e = eta_quotient([(n, 1) for n in range(1, prec)], prec)
    expected = [0] * prec
    for k in range(-10, 11):
        m = k * (3 * k - 1) // 2
        if 0 <= m < prec:
            expected[m] += (-1) ** k
    assert list(e.coeffs) == expected


def naive_hauptmodul(p, prec):
    e = 24 // (p - 1)
    body = [1] + [0] * (prec - 1)
    for n in range(1, prec):
        for _ in range(e):
            # multiply by (1 - q^{pn}) and by 1/(1 - q^n) = sum q^{kn}
            body = naive_mul(body, [1 if m % n == 0 else 0 for m in range(prec)], prec)
            if p * n < prec:
                body = naive_mul(body, [1] + [0] * (p * n - 1) + [-1], prec)
    return [0] + body[: prec - 1]


@pytest.mark.parametrize("p", [5, 7, 13])
def test_hauptmodul_against_naive_product(p):
    prec = 25
    assert list(hauptmodul(p, prec).coeffs) == naive_hauptmodul(p, prec)


def test_hauptmodul_p5_values():
    assert list(hauptmodul(5, 6).coeffs) == [0, 1, 6, 27, 98, 315]


def test_hauptmodul_rejects_other_primes():
    with pytest.raises(ValueError):
        hauptmodul(11, 10)


def test_precision_truncates_to_minimum():
    a = QSeries([1, 2, 3, 4], 4)
    b = QSeries([1, 1], 2)
    assert (a + b).prec == 2 and (a * b).prec == 2
    assert frobenius_V(a, 5).prec == 16
    assert atkin_U(QSeries(list(range(11))), 5).coeffs == (0, 5, 10)
    assert QSeries(random.Random(0).sample(range(9), 9)).shift(2).prec == 11
