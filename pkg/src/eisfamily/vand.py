"""Valuations of inverse Vandermonde matrices over p-adic units.

The inverse is built entry by entry from elementary symmetric polynomials
with exact integer numerators and product-of-differences denominators, so
the p-adic loss of every row is known exactly before reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from .arith import PAdicNumber, vp


class PrecisionExhausted(ArithmeticError):
    """No p-adic digits survive a computation stage."""

    def __init__(self, message: str, stage: str = ""):
        super().__init__(message)
        self.stage = stage


def f_bound(p: int, n: int) -> int:
    """f(n) = sum_{i >= 1} floor((n-1) / ((p-1) p^(i-1)))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    total, d = 0, p - 1
    while d <= n - 1:
        total += (n - 1) // d
        d *= p
    return total


@dataclass(frozen=True)
class NodeSet:
    p: int
    nodes: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(x) for x in self.nodes))
        if any(x % self.p == 0 for x in self.nodes):
            raise ValueError("nodes must be prime to p")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("nodes must be pairwise distinct")

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)


def v_S_x(p: int, S: Sequence[int], x: int) -> int:
    """v(S, x) = sum over s in S, s != x of v_p(x - s)."""
    S = list(S)
    if x not in S:
        raise ValueError(f"{x} is not in S")
    return sum(vp(x - s, p) for s in S if s != x)


def max_v_S(p: int, S: Sequence[int]) -> int:
    return max(v_S_x(p, S, x) for x in S)


def optimal_set(p: int, n: int) -> NodeSet:
    """The first n natural numbers prime to p."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out, m = [], 1
    while len(out) < n:
        if m % p:
            out.append(m)
        m += 1
    return NodeSet(p, tuple(out))


def _poly_from_roots(roots: Sequence[int]) -> List[int]:
    """Coefficients (constant first) of prod (T - r)."""
    c = [1]
    for r in roots:
        nxt = [0] * (len(c) + 1)
        for i, a in enumerate(c):
            nxt[i + 1] += a
            nxt[i] -= r * a
        c = nxt
    return c


def inverse_vandermonde_exact(xs: Sequence[int]) -> List[List[Fraction]]:
    """V(x_0..x_{n-1})^{-1} as exact rationals.

    Entry (i, j) is (-1)^(n-1-i) s_{n-1-i}(x without x_j) / prod_{l != j}(x_j - x_l),
    which is the coefficient of T^i in prod_{l != j}(T - x_l) over that product.
    """
    xs = [int(x) for x in xs]
    n = len(xs)
    if len(set(xs)) != n:
        raise ValueError("coincident nodes")
    inv = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        others = xs[:j] + xs[j + 1:]
        num = _poly_from_roots(others)
        den = 1
        for x in others:
            den *= xs[j] - x
        for i in range(n):
            inv[i][j] = Fraction(num[i], den)
    return inv


def row_losses(p: int, inv: Sequence[Sequence[Fraction]]) -> List[int]:
    """Per-row max of -v_p(entry) (0 if no entry has negative valuation)."""
    out = []
    for row in inv:
        vals = [vp(e, p) for e in row if e != 0]
        out.append(max(0, -min(vals)) if vals else 0)
    return out


def inverse_vandermonde(nodes: NodeSet, prec: int) -> List[List[PAdicNumber]]:
    """p-adic inverse; every entry carries relative precision ``prec``."""
    inv = inverse_vandermonde_exact(nodes.nodes)
    out = []
    for row in inv:
        out.append([
            PAdicNumber.from_rational(e, nodes.p, (vp(e, nodes.p) or 0) + prec) for e in row
        ])
    return out


@dataclass(frozen=True)
class SolveResult:
    solution: Tuple[PAdicNumber, ...]
    guaranteed_precision: Tuple[int, ...]
    row_loss: Tuple[int, ...]
    exhausted: Tuple[int, ...] = field(default=())

    def to_json(self):
        return {
            "solution": [b.to_json() for b in self.solution],
            "guaranteed_precision": list(self.guaranteed_precision),
            "row_loss": list(self.row_loss),
            "exhausted": list(self.exhausted),
        }


def solve_with_precision(nodes: NodeSet, values: Sequence[PAdicNumber], inv=None) -> SolveResult:
    """Solve V b = y for b; each b_i is known to the precision of y minus its row loss.

    Rows whose guaranteed precision is <= 0 are listed in ``exhausted``.
    ``inv`` may pass a precomputed exact inverse for the same nodes.
    """
    p = nodes.p
    if len(values) != len(nodes):
        raise ValueError("need one value per node")
    if inv is None:
        inv = inverse_vandermonde_exact(nodes.nodes)
    losses = row_losses(p, inv)
    top = max(y.prec for y in values)
    sol, prec = [], []
    for i, row in enumerate(inv):
        acc = PAdicNumber.zero(p, top - losses[i]) if all(e == 0 for e in row) else None
        for e, y in zip(row, values):
            if e == 0:
                continue
            ep = PAdicNumber.from_rational(e, p, vp(e, p) + top + losses[i] + 1)
            term = ep * y
            acc = term if acc is None else acc + term
        sol.append(acc)
        prec.append(acc.prec)
    exhausted = tuple(i for i, m in enumerate(prec) if m <= 0)
    return SolveResult(tuple(sol), tuple(prec), tuple(losses), exhausted)

