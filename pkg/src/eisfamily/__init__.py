"""Overconvergence of the p-adic Eisenstein family, computed exactly."""

from . import arith, family, forms, qexp, vand
from .family import (
    FamilyTable,
    WeightCharacter,
    counterexample,
    formal_hauptmodul,
    formal_katz,
    formal_w_expansion,
    rescaled_reduction,
    u_matrix_weight0,
    u_matrix_weight_kappa,
    verify_bound,
)
from .forms import InsufficientPrecision
from .vand import PrecisionExhausted

__version__ = "0.1.0"

__all__ = [
    "arith", "family", "forms", "qexp", "vand",
    "FamilyTable", "WeightCharacter", "counterexample", "formal_hauptmodul",
    "formal_katz", "formal_w_expansion", "rescaled_reduction", "u_matrix_weight0",
    "u_matrix_weight_kappa", "verify_bound", "InsufficientPrecision", "PrecisionExhausted",
]
