# The constant c_p = 1 is too optimistic: a single character twist at p = 5 shows it.
#
# kappa = x^4 * chi with chi(7) = 1 and chi(6) = zeta_5.  Everything below is exact
# arithmetic in Q(zeta_5); valuations are read off in units of 1/4.

from eisfamily.arith import DirichletCharacter
from eisfamily.family import WeightCharacter, counterexample
from eisfamily.forms import t_expand

chi = DirichletCharacter.from_generators(5, [(7, 0), (6, 1)])
kappa = WeightCharacter.with_character(5, 4, chi)
print("w(kappa) has valuation", kappa.w_valuation())  # 1/4

# first few coefficients of E*_kappa, over Q(zeta_5)
e = kappa.eisenstein(4)
for n, c in enumerate(e.coeffs):
    print(f"  [q^{n}] E*_kappa = {c}")

# expand E*_kappa / V(E*_kappa) in powers of the Hauptmodul t = f_5
u = t_expand(5, kappa.ratio(13), 13)
print("t-coefficient valuations:", [str(x.valuation().value) for x in u])

# if c_p = 1 were allowed, v(u_i) >= 12/(p-1) * min(1, v(w)) * i = (3/4) i
rep = counterexample()
print(f"v_5(u_10) = {rep.observed}, implied bound {rep.implied_bound}, refuted: {rep.refutes}")
