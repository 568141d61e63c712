"""Eisenstein series, Victor Miller bases and Katz / Hauptmodul decompositions.

All classical q-expansions are computed exactly (``int`` or ``Fraction``
coefficients, or :class:`CyclotomicElement` for nebentypus series);
p-adic reduction happens only in the consumers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from .arith import (
    CyclotomicElement,
    DirichletCharacter,
    ValOrBound,
    bernoulli,
    gen_bernoulli,
    valuation,
    vmin,
)
from .qexp import QSeries, eta_quotient, frobenius_V, hauptmodul


class InsufficientPrecision(ValueError):
    """Raised when a q-expansion is too short for the requested output."""


# ---------------------------------------------------------------------------
# level one


def dim_Mk(k: int) -> int:
    """Dimension of weight-k modular forms on SL_2(Z)."""
    if k < 0 or k % 2 or k == 2:
        return 0
    if k % 12 == 2:
        return k // 12
    return k // 12 + 1


@lru_cache(maxsize=None)
def _sigma_table(power: int, prec: int) -> Tuple[int, ...]:
    s = [0] * prec
    for d in range(1, prec):
        dp = d**power
        for n in range(d, prec, d):
            s[n] += dp
    return tuple(s)


def _sigma_star(power: int, p: int, prec: int, weight=None) -> List:
    """sum_{d | n, p does not divide d} weight(d) * d**power, for n < prec."""
    s = [0] * prec
    for d in range(1, prec):
        if d % p == 0:
            continue
        term = d**power if weight is None else weight(d) * d**power
        for n in range(d, prec, d):
            s[n] += term
    return s


def eisenstein_level1(k: int, prec: int) -> QSeries:
    """Normalized E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n."""
    if k < 4 or k % 2:
        raise ValueError("E_k needs even k >= 4")
    factor = -Fraction(2 * k) / bernoulli(k)
    sig = _sigma_table(k - 1, prec)
    coeffs = [Fraction(1)] + [factor * sig[n] for n in range(1, prec)]
    if factor.denominator == 1:
        coeffs = [int(c) for c in coeffs]
    return QSeries(coeffs, prec)


@lru_cache(maxsize=None)
def delta(prec: int) -> QSeries:
    """Ramanujan's Delta = q prod (1 - q^n)^24."""
    body = eta_quotient([(n, 24) for n in range(1, max(prec - 1, 1))], max(prec - 1, 1))
    return body.shift(1).truncate(prec)


@lru_cache(maxsize=None)
def _E4(prec):
    return eisenstein_level1(4, prec)


@lru_cache(maxsize=None)
def _E6(prec):
    return eisenstein_level1(6, prec)


@lru_cache(maxsize=None)
def miller_basis_weight(k: int, prec: int) -> Tuple[QSeries, ...]:
    """Victor Miller basis g_j = q^j + O(q^d) of M_k(Z), j < d = dim M_k.

    Built from the monomials E4^a E6^b Delta^c (leading term q^c) by
    integral row reduction with unit pivots.
    """
    d = dim_Mk(k)
    if d == 0:
        return ()
    if k == 0:
        return (QSeries.one(prec),)
    if prec < d:
        raise InsufficientPrecision(f"need q-precision >= {d} for weight {k}")
    rows: List[List[int]] = []
    for c in range(d):
        rest = k - 12 * c
        b = 0 if rest % 4 == 0 else 1
        a = (rest - 6 * b) // 4
        m = (_E4(prec) ** a) * (_E6(prec) ** b) * (delta(prec) ** c)
        rows.append(list(m.coeffs))
    for c in range(d - 1, -1, -1):
        for r in range(c):
            f = rows[r][c]
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return tuple(QSeries(r, prec) for r in rows)


# ---------------------------------------------------------------------------
# Eisenstein series for Gamma_0(p) and with nebentypus


def eisenstein_star_classical(p: int, k: int, prec: int) -> QSeries:
    """E*_k = 1 + 2/((1 - p^(k-1)) zeta(1-k)) sum sigma*_{k-1}(n) q^n."""
    if k % (p - 1) or k < 4:
        raise ValueError(f"k={k} must be a positive multiple of p-1={p - 1} with k >= 4")
    zeta_1mk = -bernoulli(k) / k
    factor = Fraction(2) / ((1 - Fraction(p) ** (k - 1)) * zeta_1mk)
    sig = _sigma_star(k - 1, p, prec)
    return QSeries([Fraction(1)] + [factor * sig[n] for n in range(1, prec)], prec)


def _eisenstein_star_from_character(p: int, k0: int, chi: DirichletCharacter, prec: int) -> QSeries:
    L = -gen_bernoulli(k0, chi) / k0
    factor = 2 / L
    sums: List[dict] = [dict() for _ in range(prec)]
    for d in range(1, prec):
        e = chi.exponent(d)
        if e is None:
            continue
        term = d ** (k0 - 1)
        for n in range(d, prec, d):
            sums[n][e] = sums[n].get(e, 0) + term
    coeffs = [CyclotomicElement.rational(p, 1)]
    for n in range(1, prec):
        coeffs.append(factor * CyclotomicElement.from_exponent_sums(p, sums[n]))
    return QSeries(coeffs, prec)


def eisenstein_star_character(p: int, k0: int, chi: DirichletCharacter, prec: int) -> QSeries:
    """E*_kappa for kappa = x^k0 * chi, chi of conductor p^2 trivial on mu_{p-1}.

    The constant is 2/L(1-k0, chi) with L(1-k0, chi) = -B_{k0,chi}/k0; there is
    no Euler factor since chi(p) = 0.
    """
    if chi.p != p or chi.conductor != p * p:
        raise ValueError("character must have conductor p^2")
    if k0 < 2:
        raise ValueError("k0 must be >= 2")
    return _eisenstein_star_from_character(p, k0, chi, prec)


def e_star_ratio(p: int, n: int, prec: int) -> Tuple[QSeries, QSeries]:
    """(e*_n, e_n) = (E*_{n(p-1)}, E_{n(p-1)}) / E_{p-1}^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = n * (p - 1)
    inv = eisenstein_level1(p - 1, prec).invert() ** n
    return eisenstein_star_classical(p, k, prec) * inv, eisenstein_level1(k, prec) * inv


# ---------------------------------------------------------------------------
# Katz expansions


@dataclass(frozen=True)
class MillerBlock:
    p: int
    i: int
    start: int
    stop: int
    forms: Tuple[QSeries, ...]

    def __len__(self):
        return len(self.forms)

    def indices(self) -> range:
        return range(self.start, self.stop)


def miller_block_bounds(p: int, i: int) -> Tuple[int, int]:
    return dim_Mk((i - 1) * (p - 1)), dim_Mk(i * (p - 1))


def miller_basis(p: int, i: int, prec: Optional[int] = None) -> MillerBlock:
    """Basis g_{i,j}, d_{(i-1)(p-1)} <= j < d_{i(p-1)}, of the complement B_i."""
    if p < 5 or i < 0:
        raise ValueError("need p >= 5 and i >= 0")
    start, stop = miller_block_bounds(p, i)
    if prec is None:
        prec = max(stop, 1)
    basis = miller_basis_weight(i * (p - 1), prec)
    return MillerBlock(p, i, start, stop, tuple(basis[start:stop]))


@lru_cache(maxsize=None)
def _katz_rows(p: int, depth: int, prec: int) -> Tuple[Tuple[int, int, QSeries], ...]:
    """(i, j, g_{i,j} * E_{p-1}^{-i}) for every basis index up to depth."""
    einv = eisenstein_level1(p - 1, prec).invert()
    rows = []
    power = QSeries.one(prec)
    for i in range(depth + 1):
        block = miller_basis(p, i, prec)
        for j, g in zip(block.indices(), block.forms):
            rows.append((i, j, g * power))
        power = power * einv
    return tuple(rows)


@dataclass(frozen=True)
class KatzExpansion:
    """b_0..b_depth, each given by its coordinates in the Miller block."""

    p: int
    depth: int
    coords: Tuple[Tuple, ...]

    def block_valuation(self, i: int) -> Optional[ValOrBound]:
        """min over coordinates; ``None`` for an empty block or exact zero."""
        return vmin(valuation(c, self.p) for c in self.coords[i])

    def valuations(self) -> List[Optional[ValOrBound]]:
        return [self.block_valuation(i) for i in range(self.depth + 1)]

    def form(self, i: int, prec: Optional[int] = None) -> QSeries:
        """b_i as a q-expansion."""
        block = miller_basis(self.p, i, prec)
        out = QSeries([0], block.forms[0].prec if block.forms else (prec or 1))
        for c, g in zip(self.coords[i], block.forms):
            out = out + g * c
        return out

    def to_json(self):
        blocks = []
        for i, cs in enumerate(self.coords):
            v = self.block_valuation(i)
            blocks.append({
                "i": i,
                "coords": [_encode_coeff(c) for c in cs],
                "val": [None if valuation(c, self.p) is None else valuation(c, self.p).to_json() for c in cs],
                "block_val": None if v is None else v.to_json(),
            })
        return {"p": self.p, "depth": self.depth, "blocks": blocks}


def _encode_coeff(c):
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return str(c)
    return c.to_json()


def katz_required_precision(p: int, depth: int) -> int:
    return dim_Mk(depth * (p - 1))


def katz_decompose(p: int, F: QSeries, depth: int) -> KatzExpansion:
    """Inverse of phi: (b_i) -> sum b_i E_{p-1}^{-i}, by unipotent back-substitution."""
    need = katz_required_precision(p, depth)
    if F.prec < need:
        raise InsufficientPrecision(f"Katz depth {depth} needs q-precision {need}, got {F.prec}")
    prec = max(need, 1)
    rows = _katz_rows(p, depth, prec)
    residual = list(F.coeffs[:prec])
    coords: List[List] = [[] for _ in range(depth + 1)]
    for i, j, series in rows:
        x = residual[j]
        coords[i].append(x)
        for n in range(j + 1, prec):
            c = series.coeffs[n]
            if c:
                residual[n] = residual[n] - x * c
    return KatzExpansion(p, depth, tuple(tuple(c) for c in coords))


def katz_phi(p: int, coords: Sequence[Sequence], prec: int) -> QSeries:
    """phi((b_i)) = sum_i b_i E_{p-1}^{-i}, the Katz tuple given in Miller coordinates."""
    einv = eisenstein_level1(p - 1, prec).invert()
    out = QSeries([0], prec)
    power = QSeries.one(prec)
    for i, cs in enumerate(coords):
        block = miller_basis(p, i, prec)
        if len(cs) != len(block):
            raise ValueError(f"block {i} has {len(block)} coordinates, got {len(cs)}")
        for c, g in zip(cs, block.forms):
            out = out + (g * power) * c
        power = power * einv
    return out


# ---------------------------------------------------------------------------
# Hauptmodul expansions


def t_expand(p: int, F: QSeries, n_terms: Optional[int] = None) -> List:
    """Coefficients u_i with F = sum u_i f_p^i + O(q^N)."""
    n = F.prec if n_terms is None else n_terms
    if n > F.prec:
        raise InsufficientPrecision(f"{n} t-coefficients need q-precision {n}, got {F.prec}")
    t = hauptmodul(p, n)
    residual = list(F.coeffs[:n])
    power = QSeries.one(n).coeffs
    out = []
    for i in range(n):
        u = residual[i]
        out.append(u)
        for m in range(i + 1, n):
            c = power[m]
            if c:
                residual[m] = residual[m] - u * c
        if i + 1 < n:
            power = _mul_trunc(power, t.coeffs, n)
    return out


def _mul_trunc(a: Sequence[int], b: Sequence[int], n: int) -> Tuple[int, ...]:
    out = [0] * n
    for i, x in enumerate(a):
        if x:
            for j in range(n - i):
                y = b[j]
                if y:
                    out[i + j] += x * y
    return tuple(out)


def t_compose(p: int, u: Sequence, prec: int) -> QSeries:
    """sum u_i f_p^i as a q-series (inverse of :func:`t_expand`)."""
    t = hauptmodul(p, prec)
    out = QSeries([0], prec)
    power = QSeries.one(prec)
    for c in u[:prec]:
        out = out + power * c
        power = power * t
    return out


def classical_ratio(p: int, k: int, prec: int) -> QSeries:
    """E*_k / V(E*_k) to q-precision prec."""
    e = eisenstein_star_classical(p, k, prec)
    ve = frobenius_V(e, p).truncate(prec)
    return e * ve.invert()
