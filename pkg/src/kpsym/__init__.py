"""Modular data, fusion rules and automorphism invariants of (A_r1 + ... + A_rs)^(1)."""
from .weights import AlgebraSpec, WeightTable, enumerate_weights
from .modular import ModularData, build_modular_data, modular_data
from .autoinv import AutoInvForm, classify, is_automorphism_invariant
from .search import search_all

__all__ = ["AlgebraSpec", "WeightTable", "enumerate_weights", "ModularData",
           "build_modular_data", "modular_data", "AutoInvForm", "classify",
           "is_automorphism_invariant", "search_all"]
__version__ = "0.1.0"
