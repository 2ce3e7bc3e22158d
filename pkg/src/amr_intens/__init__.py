"""Compositional translation of AMR graphs into simply-typed lambda calculus,
with intensional ``:content`` semantics, Cooper-storage scope and a finite
model checker."""

from .amr import Constant, Instance, RoleName, VarRef, free, validate
from .evaluator import EnumerationBound, Model, entails, enumerate_models, evaluate
from .penman import normalize_inverse_roles, parse, to_penman, to_triples
from .scope import StoredValue, close_v2, derive_reading, pop, translate_scoped
from .stlc import alpha_eq, beta_normalize, equiv_mod_ac_alpha, pretty, read_term, type_of
from .translate_ext import close_v1, translate_ext, translate_ext_closed
from .translate_int import and_w, close_int, exists_w, translate_int, translate_int_closed

__all__ = [
    "Constant", "Instance", "RoleName", "VarRef", "free", "validate",
    "EnumerationBound", "Model", "entails", "enumerate_models", "evaluate",
    "normalize_inverse_roles", "parse", "to_penman", "to_triples",
    "StoredValue", "close_v2", "derive_reading", "pop", "translate_scoped",
    "alpha_eq", "beta_normalize", "equiv_mod_ac_alpha", "pretty", "read_term", "type_of",
    "close_v1", "translate_ext", "translate_ext_closed",
    "and_w", "close_int", "exists_w", "translate_int", "translate_int_closed",
]
