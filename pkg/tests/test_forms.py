import random
from fractions import Fraction

import pytest

from eisfamily.arith import DirichletCharacter, CyclotomicElement, PAdicNumber, vp
from eisfamily.forms import (
    InsufficientPrecision,
    _eisenstein_star_from_character,
    classical_ratio,
    delta,
    dim_Mk,
    e_star_ratio,
    eisenstein_level1,
    eisenstein_star_character,
    eisenstein_star_classical,
    katz_decompose,
    katz_phi,
    katz_required_precision,
    miller_basis,
    miller_basis_weight,
    t_compose,
    t_expand,
)
from eisfamily.qexp import QSeries, frobenius_V


def test_dimensions():
    assert [dim_Mk(k) for k in (0, 2, 4, 12, 14, 24, 36)] == [1, 0, 1, 2, 1, 3, 4]
    assert dim_Mk(3) == 0


def test_level_one_series():
    assert list(eisenstein_level1(4, 5).coeffs) == [1, 240, 2160, 6720, 17520]
    assert list(eisenstein_level1(6, 4).coeffs) == [1, -504, -16632, -122976]
    assert list(delta(7).coeffs) == [0, 1, -24, 252, -1472, 4830, -6048]


def test_e4_squared_is_e8():
    assert eisenstein_level1(4, 30) ** 2 == eisenstein_level1(8, 30)


@pytest.mark.parametrize("k", [12, 24, 36, 48])
def test_miller_basis_is_echelon_and_integral(k):
    d = dim_Mk(k)
    basis = miller_basis_weight(k, d + 10)
    for j, g in enumerate(basis):
        assert list(g.coeffs[:d]) == [int(i == j) for i in range(d)]
        assert all(isinstance(c, int) for c in g.coeffs)


def test_miller_block_structure():
    sizes5 = [len(miller_basis(5, i)) for i in range(8)]
    assert sizes5 == [1, 0, 0, 1, 0, 0, 1, 0]
    sizes7 = [len(miller_basis(7, i)) for i in range(8)]
    assert [sizes7[i] for i in (3, 5, 7)] == [0, 0, 0]
    assert miller_basis(7, 2).indices() == range(1, 2)


def oracle_estar(p, k, prec):
    """(E_k - p^(k-1) V E_k) / (1 - p^(k-1))."""
    e = eisenstein_level1(k, prec)
    ve = frobenius_V(e, p).truncate(prec)
    pk = Fraction(p) ** (k - 1)
    return (e - ve * pk) * (1 / (1 - pk))


@pytest.mark.parametrize("p,k", [(5, 4), (5, 8), (5, 20), (7, 6), (7, 12), (13, 12)])
def test_estar_matches_stabilisation_oracle(p, k):
    assert eisenstein_star_classical(p, k, 30) == oracle_estar(p, k, 30)


def test_estar_p5_k4_values():
    e = eisenstein_star_classical(5, 4, 4)
    assert list(e.coeffs) == [1, Fraction(-60, 31), Fraction(-540, 31), Fraction(-1680, 31)]


@pytest.mark.parametrize("p,k", [(5, 4), (5, 8), (7, 6)])
def test_character_path_with_trivial_character_mod_p(p, k):
    chi0 = DirichletCharacter.trivial(p, p)
    via_char = _eisenstein_star_from_character(p, k, chi0, 20)
    direct = eisenstein_star_classical(p, k, 20)
    assert via_char == direct.map(lambda c: CyclotomicElement.rational(p, c))


def test_character_series_requires_conductor_p2():
    with pytest.raises(ValueError):
        eisenstein_star_character(5, 4, DirichletCharacter.trivial(5, 5), 10)
    chi = DirichletCharacter.from_exponent(5, 1)
    e = eisenstein_star_character(5, 4, chi, 6)
    assert e[5] == e[1]  # the divisor 5 of 5 is dropped


@pytest.mark.parametrize("p", [5, 7, 13])
def test_E_p_minus_1_is_one_mod_p(p):
    e = eisenstein_level1(p - 1, 40)
    assert e[0] == 1
    assert all(c == 0 or vp(c, p) >= 1 for c in e.coeffs[1:])


@pytest.mark.parametrize("p", [5, 7])
def test_e_star_n_congruent_to_one_mod_p2(p):
    for n in range(1, 11):
        estar, _ = e_star_ratio(p, n, 20)
        assert estar[0] == 1
        assert all(c == 0 or vp(c, p) >= 2 for c in estar.coeffs[1:])


@pytest.mark.parametrize("p,depth", [(5, 12), (7, 8)])
def test_katz_phi_round_trip(p, depth):
    rng = random.Random(p * 100 + depth)
    prec = katz_required_precision(p, depth)
    for _ in range(20):
        coords = [[Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in miller_basis(p, i).forms]
                  for i in range(depth + 1)]
        F = katz_phi(p, coords, prec)
        back = katz_decompose(p, F, depth)
        assert [list(c) for c in back.coords] == coords


def test_katz_decompose_padic_has_no_loss():
    p, depth = 5, 9
    prec = katz_required_precision(p, depth)
    F = classical_ratio(p, 8, prec).map(lambda c: PAdicNumber.from_rational(c, p, 20))
    exp = katz_decompose(p, F, depth)
    assert all(c.prec >= 20 for block in exp.coords for c in block)


def test_katz_insufficient_precision():
    with pytest.raises(InsufficientPrecision):
        katz_decompose(5, QSeries([1, 2]), 30)


@pytest.mark.parametrize("p", [5, 7, 13])
def test_t_expansion_round_trip(p):
    F = classical_ratio(p, p - 1, 15)
    u = t_expand(p, F)
    assert t_compose(p, u, 15) == F


def test_classical_ratio_structure():
    for k in (4, 8, 12):
        r = classical_ratio(5, k, 12)
        assert r[0] == 1
        assert r[1] == eisenstein_star_classical(5, k, 12)[1]
