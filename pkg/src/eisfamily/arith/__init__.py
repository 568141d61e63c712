"""Exact rationals, truncated p-adics and the ramified cyclotomic extension."""

from .bernoulli import bernoulli, bernoulli_poly, gen_bernoulli
from .cyclotomic import (
    CycloPAdicNumber,
    CyclotomicElement,
    DirichletCharacter,
    char_eval,
    teichmuller_generator,
)
from .padic import PAdicNumber, ValOrBound, valuation, vmin, vp, w_of_k


def val(x):
    """Valuation of a truncated p-adic or cyclotomic p-adic number."""
    return x.valuation()


__all__ = [
    "bernoulli",
    "bernoulli_poly",
    "gen_bernoulli",
    "CycloPAdicNumber",
    "CyclotomicElement",
    "DirichletCharacter",
    "char_eval",
    "teichmuller_generator",
    "PAdicNumber",
    "ValOrBound",
    "val",
    "valuation",
    "vmin",
    "vp",
    "w_of_k",
]
