"""Two-variable expansions of the Eisenstein family E*_kappa / V(E*_kappa).

The coefficients a_nj of ``sum_n (sum_j a_nj w^j) q^n`` are recovered by
interpolating exact q-expansions at classical weights k = (p-1) m, with m
running over the first J naturals prime to p.  With x = w(k)/p these
nodes have the same pairwise difference valuations as that optimal set,
so the worst row of the inverse Vandermonde matrix loses exactly f(J)
digits.  The unknowns are c_j = a_nj p^j for j < J; the discarded tail
is O(p^J), so the working precision is min(M, J).
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .arith import (
    CycloPAdicNumber,
    CyclotomicElement,
    DirichletCharacter,
    PAdicNumber,
    ValOrBound,
    valuation,
    vmin,
    vp,
)
from .forms import (
    InsufficientPrecision,
    classical_ratio,
    eisenstein_star_character,
    katz_decompose,
    katz_required_precision,
    t_expand,
)
from .qexp import QSeries, atkin_U, frobenius_V, hauptmodul
from .vand import (
    NodeSet,
    PrecisionExhausted,
    f_bound,
    inverse_vandermonde_exact,
    optimal_set,
    row_losses,
    solve_with_precision,
)

BASES = ("q", "katz", "hauptmodul")


# ---------------------------------------------------------------------------
# constants


def c_thmA(p: int) -> Fraction:
    """(2/3) (1 - p/(p-1)^2) / (p+1)."""
    return Fraction(2, 3) * (1 - Fraction(p, (p - 1) ** 2)) / (p + 1)


def c_prop34(p: int) -> Fraction:
    """(p^2 - 3p + 1) / (p (p^2 - 1)), valid for p = 5, 7."""
    return Fraction(p * p - 3 * p + 1, p * (p * p - 1))


def hauptmodul_constant(p: int, c) -> Fraction:
    """d_p = 12/(p-1) * c_p, the exponent for expansions in f_p."""
    return Fraction(12, p - 1) * Fraction(c)


def resolve_constant(p: int, spec) -> Tuple[str, Fraction]:
    """Map 'thmA' / 'prop34' / a rational (or its string) to (label, value)."""
    if isinstance(spec, str):
        key = spec.strip()
        if key.lower() == "thma":
            return "thmA", c_thmA(p)
        if key.lower() == "prop34":
            return "prop34", c_prop34(p)
        try:
            value = Fraction(key)
        except ValueError:
            raise ValueError(f"unknown constant {spec!r}; use thmA, prop34 or a rational") from None
        return f"custom:{value}", value
    value = Fraction(spec)
    return f"custom:{value}", value


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class WeightCharacter:
    """Either a classical weight k with (p-1) | k, or x^k0 * chi with chi of conductor p^2."""

    p: int
    k: Optional[int] = None
    k0: Optional[int] = None
    chi: Optional[DirichletCharacter] = field(default=None, compare=False)

    def __post_init__(self):
        if self.k is not None:
            if self.k <= 0 or self.k % (self.p - 1):
                raise ValueError(f"classical weight must be a positive multiple of {self.p - 1}")
        elif self.chi is None or self.k0 is None:
            raise ValueError("give either k or (k0, chi)")
        elif self.chi.conductor != self.p**2:
            raise ValueError("character must have conductor p^2")

    @classmethod
    def classical(cls, p: int, k: int) -> "WeightCharacter":
        return cls(p, k=k)

    @classmethod
    def with_character(cls, p: int, k0: int, chi: DirichletCharacter) -> "WeightCharacter":
        return cls(p, k0=k0, chi=chi)

    @property
    def is_classical(self) -> bool:
        return self.k is not None

    def w(self) -> Union[int, CyclotomicElement]:
        """w(kappa) = kappa(1+p) - 1."""
        if self.is_classical:
            return (1 + self.p) ** self.k - 1
        return self.chi(1 + self.p) * (1 + self.p) ** self.k0 - 1

    def w_valuation(self) -> Fraction:
        return valuation(self.w(), self.p).value

    def ratio(self, prec: int) -> QSeries:
        """q-expansion of E*_kappa / V(E*_kappa)."""
        if self.is_classical:
            return classical_ratio(self.p, self.k, prec)
        e = eisenstein_star_character(self.p, self.k0, self.chi, prec)
        return e * frobenius_V(e, self.p).truncate(prec).invert()

    def eisenstein(self, prec: int) -> QSeries:
        from .forms import eisenstein_star_classical
        if self.is_classical:
            return eisenstein_star_classical(self.p, self.k, prec)
        return eisenstein_star_character(self.p, self.k0, self.chi, prec)

    def to_json(self):
        if self.is_classical:
            return {"p": self.p, "k": self.k}
        return {"p": self.p, "k0": self.k0, "chi": self.chi.to_json()}

    @property
    def label(self) -> str:
        if self.is_classical:
            return f"k={self.k}"
        return f"x^{self.k0}*chi(1+p=zeta^{self.chi.exponent(1 + self.p)})"


# ---------------------------------------------------------------------------
# family tables


@dataclass(frozen=True)
class SpecializedColumn:
    """Coefficients of the family at one fixed weight (w specialized)."""

    label: str
    w_valuation: Fraction
    values: Tuple[Optional[ValOrBound], ...]

    def to_json(self):
        return {
            "label": self.label,
            "w_val": {"num": self.w_valuation.numerator, "den": self.w_valuation.denominator},
            "values": [None if v is None else v.to_json() for v in self.values],
        }

    @classmethod
    def from_json(cls, obj) -> "SpecializedColumn":
        wv = Fraction(obj["w_val"]["num"], obj["w_val"]["den"])
        return cls(obj["label"], wv, tuple(None if v is None else ValOrBound.from_json(v) for v in obj["values"]))


@dataclass(frozen=True)
class FamilyTable:
    """entries[r][j]: coefficient of w^j in row r (q^n, Katz block i, or t^i).

    For the katz basis each entry is the tuple of Miller coordinates of b_ij.
    """

    p: int
    basis: str
    entries: Tuple[Tuple, ...]
    config: Dict = field(default_factory=dict, compare=False)
    specialized: Tuple[SpecializedColumn, ...] = ()

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"basis must be one of {BASES}")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def w_degree(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def valuation(self, r: int, j: int) -> Optional[ValOrBound]:
        e = self.entries[r][j]
        if self.basis == "katz":
            return vmin(c.valuation() for c in e)
        return e.valuation()

    def precision(self, r: int, j: int) -> Optional[int]:
        e = self.entries[r][j]
        if self.basis == "katz":
            return min((c.prec for c in e), default=None)
        return e.prec

    def determined(self, r: int, j: int) -> bool:
        m = self.precision(r, j)
        return m is None or m > 0

    def column(self, j: int) -> List:
        return [row[j] for row in self.entries]

    def with_specialized(self, *cols: SpecializedColumn) -> "FamilyTable":
        return FamilyTable(self.p, self.basis, self.entries, self.config, self.specialized + tuple(cols))

    # serialization

    def to_json(self):
        if self.basis == "katz":
            body = [[[c.to_json() for c in e] for e in row] for row in self.entries]
        else:
            body = [[e.to_json() for e in row] for row in self.entries]
        return {
            "p": self.p,
            "basis": self.basis,
            "rows": self.rows,
            "w_degree": self.w_degree,
            "config": self.config,
            "entries": body,
            "specialized": [s.to_json() for s in self.specialized],
        }

    @classmethod
    def from_json(cls, obj) -> "FamilyTable":
        basis = obj["basis"]
        if basis == "katz":
            entries = tuple(tuple(tuple(PAdicNumber.from_json(c) for c in e) for e in row)
                            for row in obj["entries"])
        else:
            entries = tuple(tuple(PAdicNumber.from_json(e) for e in row) for row in obj["entries"])
        spec = tuple(SpecializedColumn.from_json(s) for s in obj.get("specialized", []))
        return cls(int(obj["p"]), basis, entries, dict(obj.get("config", {})), spec)

    def valuation_csv(self) -> str:
        """Rows r, columns j; cells 'v', '>=P', or empty for an empty Katz block."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["row"] + [f"j={j}" for j in range(self.w_degree)])
        for r in range(self.rows):
            cells = []
            for j in range(self.w_degree):
                v = self.valuation(r, j)
                cells.append("" if v is None else str(v))
            writer.writerow([r] + cells)
        return buf.getvalue()


def _node_weights(p: int, J: int) -> Tuple[List[int], List[int]]:
    ms = list(optimal_set(p, J).nodes)
    return ms, [(p - 1) * m for m in ms]


def _ratio_coeffs(p: int, k: int, N: int, W: int) -> List[PAdicNumber]:
    r = classical_ratio(p, k, N)
    return [PAdicNumber.from_rational(c, p, W) for c in r.coeffs]


def formal_w_expansion(p: int, N: int, J: int, M: int, workers: int = 1) -> FamilyTable:
    """Interpolate a_nj for n < N, j < J from classical specializations.

    Entry (n, j) carries guaranteed precision min(M, J) - loss_j - j where
    loss_j is the exact row loss of the inverse Vandermonde matrix.
    """
    if J < 1 or N < 1 or M < 1:
        raise ValueError("N, J, M must be >= 1")
    W = min(M, J)
    ms, ks = _node_weights(p, J)
    xs = [((1 + p) ** k - 1) // p for k in ks]
    nodes = NodeSet(p, xs)
    inv = inverse_vandermonde_exact(xs)
    losses = row_losses(p, inv)
    if all(W - loss - j <= 0 for j, loss in enumerate(losses)):
        raise PrecisionExhausted(
            f"no coefficient survives: working precision {W}, worst row loss {max(losses)}",
            stage="interpolation",
        )
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            values = list(ex.map(lambda k: _ratio_coeffs(p, k, N, W), ks))
    else:
        values = [_ratio_coeffs(p, k, N, W) for k in ks]
    rows = []
    for n in range(N):
        res = solve_with_precision(nodes, [values[i][n] for i in range(J)], inv=inv)
        rows.append(tuple(c * Fraction(1, p**j) for j, c in enumerate(res.solution)))
    config = {
        "p": p, "rows": N, "w_degree": J, "padic_precision": M, "working_precision": W,
        "node_m": ms, "node_weights": ks, "row_loss": losses, "f_bound": f_bound(p, J),
    }
    return FamilyTable(p, "q", tuple(rows), config)


def formal_katz(table: FamilyTable, depth: int) -> FamilyTable:
    """Katz-decompose every w-column; the result has rows i = 0..depth."""
    if table.basis != "q":
        raise ValueError("formal_katz needs a q-basis table")
    need = katz_required_precision(table.p, depth)
    if table.rows < need:
        raise InsufficientPrecision(f"Katz depth {depth} needs {need} q-rows, table has {table.rows}")
    cols = []
    for j in range(table.w_degree):
        col = QSeries(table.column(j), table.rows)
        cols.append(katz_decompose(table.p, col, depth).coords)
    entries = tuple(tuple(cols[j][i] for j in range(table.w_degree)) for i in range(depth + 1))
    return FamilyTable(table.p, "katz", entries, dict(table.config, katz_depth=depth), table.specialized)


def formal_hauptmodul(table: FamilyTable, n_terms: Optional[int] = None) -> FamilyTable:
    """Expand every w-column in powers of the Hauptmodul f_p."""
    if table.basis != "q":
        raise ValueError("formal_hauptmodul needs a q-basis table")
    n = table.rows if n_terms is None else n_terms
    cols = [t_expand(table.p, QSeries(table.column(j), table.rows), n) for j in range(table.w_degree)]
    entries = tuple(tuple(cols[j][i] for j in range(table.w_degree)) for i in range(n))
    return FamilyTable(table.p, "hauptmodul", entries, dict(table.config, t_terms=n), table.specialized)


def specialize_row(table: FamilyTable, n: int, k: int) -> PAdicNumber:
    """sum_j a_nj w(k)^j, truncated to what the table and its tail guarantee."""
    if table.basis != "q":
        raise ValueError("specialize_row needs a q-basis table")
    p = table.p
    w = (1 + p) ** k - 1
    tail = table.w_degree * vp(w, p)
    acc = PAdicNumber.zero(p, tail)
    for j, a in enumerate(table.entries[n]):
        acc = acc + a * w**j
    return acc.lift_precision(min(acc.prec, tail))


# ---------------------------------------------------------------------------
# bound verification


@dataclass
class BoundReport:
    label: str
    constant: Fraction
    basis: str
    violations: List[Dict] = field(default_factory=list)
    checked: int = 0
    satisfied_by_precision: int = 0
    undetermined: int = 0
    empty: int = 0
    empirical_constant: Optional[Fraction] = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self):
        frac = lambda x: None if x is None else {"num": x.numerator, "den": x.denominator}
        return {
            "constant": {"label": self.label, **frac(self.constant)},
            "basis": self.basis,
            "violations": self.violations,
            "checked": self.checked,
            "satisfied_by_precision": self.satisfied_by_precision,
            "undetermined": self.undetermined,
            "empty": self.empty,
            "empirical_constant": frac(self.empirical_constant),
        }


def verify_bound(table: FamilyTable, constant="thmA") -> BoundReport:
    """Check v(entry_ij) >= c*i - j (katz) or d*i - j with d = 12c/(p-1) (hauptmodul).

    Specialized columns are checked against slope * min(1, v(w)) * i.
    The empirical constant is min over exact entries with i > 0 of
    (v + j) / i, rescaled back to a Katz-style constant for hauptmodul tables.
    """
    if table.basis not in ("katz", "hauptmodul"):
        raise ValueError("verify_bound needs a katz or hauptmodul table")
    label, c = resolve_constant(table.p, constant)
    scale = Fraction(1) if table.basis == "katz" else Fraction(12, table.p - 1)
    slope = c * scale
    rep = BoundReport(label, c, table.basis)
    best = None
    for i in range(table.rows):
        for j in range(table.w_degree):
            v = table.valuation(i, j)
            if v is None:
                rep.empty += 1
                continue
            bound = slope * i - j
            verdict = v.satisfies(bound)
            if v.exact:
                rep.checked += 1
                if i > 0:
                    ratio = (v.value + j) / i / scale
                    best = ratio if best is None else min(best, ratio)
                if not verdict:
                    rep.violations.append({"i": i, "j": j, "observed": str(v.value), "required": str(bound)})
            elif verdict:
                rep.satisfied_by_precision += 1
            else:
                rep.undetermined += 1
    for col in table.specialized:
        colslope = slope * min(Fraction(1), col.w_valuation)
        for i, v in enumerate(col.values):
            if v is None:
                rep.empty += 1
                continue
            bound = colslope * i
            verdict = v.satisfies(bound)
            if v.exact:
                rep.checked += 1
                if not verdict:
                    rep.violations.append({"column": col.label, "i": i,
                                           "observed": str(v.value), "required": str(bound)})
            elif verdict:
                rep.satisfied_by_precision += 1
            else:
                rep.undetermined += 1
    rep.empirical_constant = best
    return rep


# ---------------------------------------------------------------------------
# the c_p = 1 counterexample


@dataclass
class CounterexampleReport:
    p: int
    k0: int
    chi_exponent: int
    q_precision: int
    pi_precision: int
    w_valuation: Fraction
    valuations: List[ValOrBound]
    index: int = 10

    @property
    def implied_slope(self) -> Fraction:
        """Slope implied for t-coefficients if c_p = 1: 12/(p-1) * min(1, v(w))."""
        return Fraction(12, self.p - 1) * min(Fraction(1), self.w_valuation)

    @property
    def observed(self) -> ValOrBound:
        return self.valuations[self.index]

    @property
    def implied_bound(self) -> Fraction:
        return self.implied_slope * self.index

    @property
    def refutes(self) -> bool:
        """True when the observed valuation is exact and below the implied bound."""
        v = self.observed
        return v.exact and v.value < self.implied_bound

    def column(self) -> SpecializedColumn:
        return SpecializedColumn(f"counterexample(p={self.p},k0={self.k0},a={self.chi_exponent})",
                                 self.w_valuation, tuple(self.valuations))

    def to_json(self):
        return {
            "p": self.p, "k0": self.k0, "chi_exponent": self.chi_exponent,
            "q_precision": self.q_precision, "pi_precision": self.pi_precision,
            "w_valuation": str(self.w_valuation),
            "t_valuations": [v.to_json() for v in self.valuations],
            "index": self.index,
            "observed": str(self.observed),
            "implied_bound_if_c_equals_1": str(self.implied_bound),
            "refutes_c_equals_1": self.refutes,
        }


def counterexample(p: int = 5, N: int = 13, pi_precision: int = 40, k0: int = 4,
                   exponent: int = 1, index: int = 10) -> CounterexampleReport:
    """t-expansion valuations of E*_kappa/V(E*_kappa), kappa = x^k0 chi, chi(1+p) = zeta^exponent.

    The default is p = 5, chi(7) = 1, chi(6) = zeta, kappa = x^4 chi.
    """
    if N <= index:
        raise InsufficientPrecision(f"need N > {index} q-coefficients")
    chi = DirichletCharacter.from_exponent(p, exponent)
    kappa = WeightCharacter.with_character(p, k0, chi)
    u = t_expand(p, kappa.ratio(N), N)
    vals = [CycloPAdicNumber.from_exact(x, pi_precision).valuation() for x in u]
    if not vals[index].exact:
        raise PrecisionExhausted(
            f"u_{index} vanishes to pi-precision {pi_precision}", stage="counterexample")
    return CounterexampleReport(p, k0, exponent, N, pi_precision, kappa.w_valuation(), vals, index)


# ---------------------------------------------------------------------------
# U_p matrices


def u_matrix_weight0(p: int, size: int, prec: Optional[int] = None) -> List[List[int]]:
    """m_ij = [t^j] U(f_p^i) for i, j < size."""
    if prec is None:
        prec = p * size
    if prec < p * size:
        raise InsufficientPrecision(f"U(t^i) to {size} terms needs q-precision {p * size}")
    t = hauptmodul(p, prec)
    out = []
    power = QSeries.one(prec)
    for i in range(size):
        u = atkin_U(power, p)
        out.append([int(x) for x in t_expand(p, u, size)])
        power = power * t
    return out


@dataclass
class UMatrix:
    p: int
    kappa: WeightCharacter
    r: Fraction
    scale_valuation: Fraction
    entries: List[List]
    slopes: Optional[List[Tuple]] = None
    stable_slopes: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.entries)

    def scaled_valuation(self, i: int, j: int) -> Optional[ValOrBound]:
        """Valuation of c^(i-j) * entry(i, j)."""
        v = valuation(self.entries[i][j], self.p)
        if v is None:
            return None
        return ValOrBound(v.value + (i - j) * self.scale_valuation)

    def to_json(self):
        enc = lambda x: str(x) if isinstance(x, (int, Fraction)) else x.to_json()
        out = {
            "p": self.p, "kappa": self.kappa.to_json(), "r": str(self.r),
            "scale_valuation": str(self.scale_valuation),
            "entries": [[enc(x) for x in row] for row in self.entries],
            "scaled_valuations": [[None if self.scaled_valuation(i, j) is None
                                   else str(self.scaled_valuation(i, j).value)
                                   for j in range(self.size)] for i in range(self.size)],
        }
        if self.slopes is not None:
            out["slopes"] = [[str(s), m] for s, m in self.slopes]
            out["stable_slopes"] = self.stable_slopes
            out["disclaimer"] = ("slopes are exact for the truncated matrix; only the first "
                                 "stable_slopes agree with a smaller truncation")
        return out


def u_matrix_weight_kappa(kappa: WeightCharacter, r=0, size: int = 8, slopes: bool = False) -> UMatrix:
    """Matrix of U on the basis V(E*_kappa) (c f_p)^i, v(c) = 12 r/(p-1).

    Row i is c^(i-j) [t^j] (g_kappa(t) sum_l m_il t^l) with g_kappa the
    t-expansion of E*_kappa/V(E*_kappa).  Entries are stored unscaled;
    the c-scaling is a diagonal conjugation and only enters valuations.
    """
    p = kappa.p
    r = Fraction(r)
    if not (0 <= r < Fraction(p, p + 1)):
        raise ValueError(f"r must lie in [0, {p}/{p + 1})")
    g = t_expand(p, kappa.ratio(size), size)
    m = u_matrix_weight0(p, size)
    entries = []
    for i in range(size):
        row = []
        for j in range(size):
            acc = 0
            for l in range(j + 1):
                if m[i][l]:
                    acc = acc + g[j - l] * m[i][l]
            row.append(acc)
        entries.append(row)
    out = UMatrix(p, kappa, r, Fraction(12, p - 1) * r, entries)
    if slopes:
        out.slopes = newton_slopes(p, charpoly(entries))
        smaller = max(1, size - max(1, size // 4))
        sub = newton_slopes(p, charpoly([row[:smaller] for row in entries[:smaller]]))
        out.stable_slopes = _common_prefix(_expand(out.slopes), _expand(sub))
    return out


def _expand(slopes):
    return [s for s, mult in slopes for _ in range(mult)]


def _common_prefix(a, b) -> int:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


def charpoly(A: Sequence[Sequence]) -> List:
    """Coefficients (constant first) of det(X I - A), division-free (Berkowitz)."""
    n = len(A)
    if n == 0:
        return [1]
    # vector of polynomial coefficients, highest degree first
    poly = [1, -A[0][0]]
    for k in range(1, n):
        R = [A[k][j] for j in range(k)]
        C = [A[i][k] for i in range(k)]
        Asub = [row[:k] for row in A[:k]]
        a = A[k][k]
        # Toeplitz column: 1, -a, -R C, -R A C, -R A^2 C, ...
        col = [1, -a]
        vec = C
        for _ in range(k):
            s = 0
            for x, y in zip(R, vec):
                s = s + x * y
            col.append(-s)
            vec = [sum((Asub[i][j] * vec[j] for j in range(k)), 0) for i in range(k)]
        new = []
        for i in range(k + 2):
            s = 0
            for j in range(min(i, len(poly) - 1) + 1):
                if i - j < len(col):
                    s = s + col[i - j] * poly[j]
            new.append(s)
        poly = new
    return list(reversed(poly))


def newton_slopes(p: int, coeffs: Sequence) -> List[Tuple]:
    """Root valuations of sum coeffs[k] X^k as (valuation, multiplicity), ascending.

    Roots at zero (vanishing low coefficients) are reported last as 'inf'.
    """
    pts = []
    for k, c in enumerate(coeffs):
        v = valuation(c, p)
        if v is not None:
            pts.append((k, v.value))
    if not pts:
        return []
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = [(Fraction(y1 - y2, x2 - x1), x2 - x1) for (x1, y1), (x2, y2) in zip(hull, hull[1:])]
    out.reverse()
    if pts[0][0] > 0:
        out.append(("inf", pts[0][0]))
    return out


# ---------------------------------------------------------------------------
# rescaled reduction


@dataclass
class ReductionReport:
    kappa: WeightCharacter
    gamma: Fraction
    w_valuation: Fraction
    residues: List[Optional[int]]
    valuations: List[Optional[ValOrBound]]
    anomalies: List[Dict]
    best_gamma: Optional[Fraction]

    def to_json(self):
        return {
            "kappa": self.kappa.to_json(),
            "gamma": str(self.gamma),
            "w_valuation": str(self.w_valuation),
            "residues": self.residues,
            "c_valuations": [None if v is None else v.to_json() for v in self.valuations],
            "anomalies": self.anomalies,
            "best_gamma": None if self.best_gamma is None else str(self.best_gamma),
        }


def rescaled_reduction(kappa: WeightCharacter, gamma=None, n_max: int = 12,
                       pi_precision: int = 64) -> ReductionReport:
    """Reductions of c_n = u_n(kappa) w^(-gamma n) modulo the maximal ideal.

    u_n(kappa) is the exact t-expansion at kappa.  c_n reduces to 0 when its
    valuation is positive; a unit c_n with gamma*n integral reduces to a
    residue in F_p.  A unit c_n with gamma*n not integral, or a negative
    valuation, contradicts the bound behind gamma and is listed as an anomaly.
    """
    p = kappa.p
    gamma = hauptmodul_constant(p, c_prop34(p)) if gamma is None else Fraction(gamma)
    vw = kappa.w_valuation()
    if not (0 < vw < 1):
        raise ValueError("rescaled reduction needs 0 < v(w(kappa)) < 1")
    u = t_expand(p, kappa.ratio(n_max + 1), n_max + 1)
    w = kappa.w()
    residues, vals, anomalies = [], [], []
    best = None
    for n, un in enumerate(u):
        vu = valuation(un, p)
        if vu is None:
            residues.append(0)
            vals.append(None)
            continue
        vc = vu.value - gamma * n * vw
        vals.append(ValOrBound(vc))
        if n > 0:
            cand = vu.value / (n * vw)
            best = cand if best is None else min(best, cand)
        if vc > 0:
            residues.append(0)
        elif vc == 0 and (gamma * n).denominator == 1:
            cn = un / w ** int(gamma * n)
            residues.append(CycloPAdicNumber.from_exact(_as_cyclo(p, cn), pi_precision).residue())
        else:
            residues.append(None)
            anomalies.append({"n": n, "c_valuation": str(vc), "gamma_n": str(gamma * n)})
    return ReductionReport(kappa, gamma, vw, residues, vals, anomalies, best)


def _as_cyclo(p: int, x) -> CyclotomicElement:
    if isinstance(x, CyclotomicElement):
        return x
    return CyclotomicElement.rational(p, x)
