"""Extensional translation of basic AMRs into conjunctive first-order terms."""
from __future__ import annotations

from typing import Iterable

from .amr import AmrNode, Constant, Instance, VarRef, ensure_valid, free
from .penman import normalize_inverse_roles
from .stlc import (
    App,
    Const,
    E,
    Lam,
    T,
    Term,
    Var,
    arrow,
    beta_normalize,
    conj,
    exists,
    fresh_name,
    free_var_order,
    reassociate,
)

PRED_TYPE = arrow(E, T)
ROLE_TYPE = arrow(E, E, T)

SCOPE_CONCEPT = "scope"


class TranslationError(ValueError):
    """The graph has no interpretation under the requested rules."""

    def __init__(self, message: str, var: str = None):
        super().__init__(message)
        self.var = var


class RegimeError(TranslationError):
    pass


class ClosureError(TranslationError):
    pass


def check_extensional(graph: AmrNode) -> None:
    if not isinstance(graph, Instance):
        return
    if graph.concept == SCOPE_CONCEPT:
        raise RegimeError(f"scope node {graph.var} needs the scope regime", graph.var)
    for role, arg in graph.roles:
        if role.base == "content":
            raise RegimeError(f":content on {graph.var} needs the intensional regime", graph.var)
        if role.base == "quant":
            raise RegimeError(f":quant on {graph.var} needs the scope regime", graph.var)
        check_extensional(arg)


def _binder_name(graph: AmrNode) -> str:
    from .amr import declared_vars

    return fresh_name("x", set(declared_vars(graph)))


def translate_ext(graph: AmrNode) -> Term:
    """Open formula for a basic AMR; instance variables are left free."""
    check_extensional(graph)
    ensure_valid(graph)
    graph = normalize_inverse_roles(graph)
    x = Var(_binder_name(graph), E)
    return reassociate(beta_normalize(_tr(graph, x)))


def _tr(node: AmrNode, x: Var) -> Term:
    if isinstance(node, Constant):
        return Const(node.symbol, E)
    if isinstance(node, VarRef):
        return Var(node.var, E)
    me = Var(node.var, E)
    head = App(Const(node.concept, PRED_TYPE), me)
    if not node.roles:
        return head
    seq = Lam(x, conj(*(App(_role(role.base, arg, x), x) for role, arg in node.roles)))
    return conj(head, App(seq, me))


def _role(base: str, arg: AmrNode, x: Var) -> Term:
    rel = App(App(Const(base, ROLE_TYPE), x), _tr(arg, x) if not isinstance(arg, Instance) else Var(arg.var, E))
    if isinstance(arg, Instance):
        return Lam(x, conj(rel, _tr(arg, x)))
    return Lam(x, rel)


def close_v1(term: Term, variables: Iterable[str]) -> Term:
    """Existentially bind exactly ``variables``, in order of first occurrence."""
    wanted = set(variables)
    ordered = [v for v in free_var_order(term) if v.name in wanted and v.type == E]
    missing = wanted - {v.name for v in ordered}
    if missing:
        name = sorted(missing)[0]
        raise ClosureError(f"cannot bind {name}: it does not occur free in the term", name)
    return exists(ordered, term)


def translate_ext_closed(graph: AmrNode) -> Term:
    return close_v1(translate_ext(graph), free(graph))
