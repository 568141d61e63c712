# Build the two-variable table a_nj of E*_kappa / V(E*_kappa) at p = 5 and check
# how fast the Katz coefficients decay in i.
#
# 25 interpolation weights k = 4m (m prime to 5), 40 q-rows, 25 digits.

from fractions import Fraction

from eisfamily.family import (
    classical_ratio,
    formal_hauptmodul,
    formal_katz,
    formal_w_expansion,
    specialize_row,
    verify_bound,
)

table = formal_w_expansion(5, 40, 25, 25)
print("row losses of the interpolation:", table.config["row_loss"])
print("guaranteed digits of a_nj by j:", [a.prec for a in table.entries[1]])

# a few valuations of the q-table itself
for n in range(1, 6):
    print(f"  n={n}:", " ".join(str(table.valuation(n, j)) for j in range(10)))

# held-out weight: the polynomial in w reproduces the direct computation
k = 4 * 33
direct = classical_ratio(5, k, 40)
ok = all(specialize_row(table, n, k).agrees_with(direct[n]) for n in range(40))
print(f"specialization at k={k} agrees with the direct series:", ok)

# Katz expansion to depth 30, then the bound v(b_ij) >= c i - j
katz = formal_katz(table, 30)
for c in ("thmA", "prop34", Fraction(1, 5)):
    rep = verify_bound(katz, c)
    print(f"c = {rep.constant}: {len(rep.violations)} violations, "
          f"{rep.checked} exact entries, {rep.satisfied_by_precision} only bounded")
print("empirical best constant min (v + j)/i:", verify_bound(katz).empirical_constant)

# the same data in powers of f_5, bounded by d = 12 c / (p - 1)
haupt = formal_hauptmodul(table, 20)
print("Hauptmodul basis, thmA:", verify_bound(haupt, "thmA").ok)

# valuation table as CSV (">=P" marks entries known only to precision P)
lines = katz.valuation_csv().splitlines()
for line in [lines[0]] + lines[1::3][:6]:
    print("  ", ",".join(line.split(",")[:9]))
