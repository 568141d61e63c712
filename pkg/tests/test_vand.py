import random
from fractions import Fraction
from itertools import combinations, islice

import pytest
from hypothesis import given, settings, strategies as st

from eisfamily.arith import PAdicNumber, vp
from eisfamily.vand import (
    NodeSet,
    f_bound,
    inverse_vandermonde,
    inverse_vandermonde_exact,
    max_v_S,
    optimal_set,
    row_losses,
    solve_with_precision,
)


def gauss_inverse(xs):
    """Inverse of V with V[j][i] = x_j^i by Gauss-Jordan elimination over Q."""
    n = len(xs)
    A = [[Fraction(x) ** i for i in range(n)] + [Fraction(int(r == c)) for c in range(n)]
         for r, x in enumerate(xs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [a * inv for a in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


def brute_f(p, n):
    """f(n) from its definition, by direct counting."""
    total, i = 0, 1
    while (p - 1) * p ** (i - 1) <= n - 1:
        total += (n - 1) // ((p - 1) * p ** (i - 1))
        i += 1
    return total


def test_f_small_values():
    assert f_bound(5, 21) == 6
    assert f_bound(5, 1) == 0
    assert f_bound(5, 25) == 7
    assert [f_bound(7, n) for n in (6, 7, 13, 43)] == [0, 1, 2, 8]


@pytest.mark.parametrize("p", [5, 7, 13])
def test_f_matches_definition(p):
    for n in range(1, 200):
        assert f_bound(p, n) == brute_f(p, n)


@pytest.mark.parametrize("p", [5, 7, 13])
def test_optimal_set_attains_f(p):
    for n in range(1, 41):
        assert max_v_S(p, optimal_set(p, n).nodes) == f_bound(p, n)


@pytest.mark.parametrize("p", [5, 7])
def test_exhaustive_small_subsets(p):
    # every n-subset of units below p^2 + p has max_x v(S, x) >= f(n)
    units = [x for x in range(1, p * p + p) if x % p]
    for n in (2, 3, p, p + 1):
        for S in islice(combinations(units, n), 2000):
            assert max_v_S(p, S) >= f_bound(p, n)


def test_nodeset_validation():
    with pytest.raises(ValueError):
        NodeSet(5, (1, 5))
    with pytest.raises(ValueError):
        NodeSet(5, (1, 1))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=7, unique=True))
def test_symmetric_formula_matches_elimination(xs):
    assert inverse_vandermonde_exact(xs) == gauss_inverse(xs)


def test_row_losses_equal_f_for_optimal_nodes():
    for p in (5, 7):
        for n in (5, 10, 21, 25):
            xs = optimal_set(p, n).nodes
            assert max(row_losses(p, inverse_vandermonde_exact(xs))) == f_bound(p, n)


def test_padic_inverse_times_V_is_identity():
    p, prec = 5, 20
    rng = random.Random(1)
    xs = []
    while len(xs) < 6:
        x = rng.randrange(1, p**20)
        if x % p and x not in xs:
            xs.append(x)
    inv = inverse_vandermonde(NodeSet(p, xs), prec)
    n = len(xs)
    for i in range(n):
        for k in range(n):
            s = sum((inv[i][j] * xs[j] ** k for j in range(1, n)), inv[i][0] * xs[0] ** k)
            assert s.agrees_with(int(i == k))


def test_solve_recovers_polynomial():
    p, prec = 5, 30
    nodes = optimal_set(p, 10)
    coeffs = [Fraction(3 * j + 1, 7) for j in range(10)]
    ys = [PAdicNumber.from_rational(sum(c * x**j for j, c in enumerate(coeffs)), p, prec) for x in nodes]
    res = solve_with_precision(nodes, ys)
    assert max(res.row_loss) == f_bound(p, 10)
    for b, c, m in zip(res.solution, coeffs, res.guaranteed_precision):
        assert m == b.prec and m >= prec - f_bound(p, 10)
        assert b.agrees_with(c)
    assert not res.exhausted


def test_solve_reports_exhaustion():
    p = 5
    nodes = optimal_set(p, 25)
    ys = [PAdicNumber.from_rational(1, p, 3) for _ in nodes]
    res = solve_with_precision(nodes, ys)
    assert res.exhausted
