# U_p in the scaled Hauptmodul basis, and the "rescaled" reduction of the
# t-expansion near the boundary of weight space.

from fractions import Fraction

from eisfamily.arith import DirichletCharacter
from eisfamily.family import (
    WeightCharacter,
    rescaled_reduction,
    u_matrix_weight0,
    u_matrix_weight_kappa,
)

# weight 0: m_ij = [t^j] U(t^i), integral and zero for j < i/5
for row in u_matrix_weight0(5, 5):
    print("  ", row)

# classical weight 4: the first slopes are 0 (Eisenstein), 1 (the newform), 3 (E_4(5z))
mat = u_matrix_weight_kappa(WeightCharacter.classical(5, 4), 0, 12, slopes=True)
print("weight 4 slopes:", [(str(s), m) for s, m in mat.slopes])
print("slopes stable under truncation:", mat.stable_slopes)

# a boundary weight, v(w) = 1/4, with c of valuation 12 r / (p - 1)
kappa = WeightCharacter.with_character(5, 4, DirichletCharacter.from_exponent(5, 1))
mat = u_matrix_weight_kappa(kappa, Fraction(1, 3), 10, slopes=True)
print("x^4 chi slopes:", [(str(s), m) for s, m in mat.slopes])

# c_n = u_n / w^(gamma n) reduced mod the maximal ideal, gamma = 11/40
for a in (1, 2, 3):
    k = WeightCharacter.with_character(5, 4, DirichletCharacter.from_exponent(5, a))
    rep = rescaled_reduction(k, Fraction(11, 40), 12)
    print(f"chi(6) = zeta^{a}: residues {rep.residues}, best gamma {rep.best_gamma}")
