"""Intensional translation: world-lifted connectives and the ``:content`` role.

Predicates become ``e -> s -> t`` and roles ``e -> e -> s -> t``; an AMR
translates to a property of worlds. ``:content A`` relates an event to the
closed proposition ``A`` through the constant ``cont``, so whatever ``A``
says is evaluated at a shifted world.
"""
from __future__ import annotations

from collections import Counter
from typing import Iterable

from .amr import AmrNode, Constant, Instance, VarRef, declared_vars, ensure_valid, instances
from .penman import normalize_inverse_roles
from .stlc import (
    PROP,
    S,
    App,
    Const,
    E,
    Exists,
    Lam,
    T,
    Term,
    Top,
    TypeMismatch,
    Var,
    And,
    arrow,
    beta_normalize,
    free_var_order,
    free_vars,
    fresh_name,
    name_worlds,
    reassociate,
)
from .translate_ext import SCOPE_CONCEPT, ClosureError, RegimeError, TranslationError

IPRED_TYPE = arrow(E, S, T)
IROLE_TYPE = arrow(E, E, S, T)
CONT_TYPE = arrow(E, PROP, PROP)
CONT = Const("cont", CONT_TYPE)

TRUE_W = Lam(Var("w", S), Top)


class ContentError(TranslationError):
    """``:content`` whose argument is not an instance assignment."""


def _world(*terms: Term) -> Var:
    avoid = set()
    for t in terms:
        avoid |= {v.name for v in free_vars(t)}
    return Var(fresh_name("w", avoid), S)


def _expect_prop(term: Term, what: str) -> None:
    if term.type != PROP:
        raise TypeMismatch(f"{what} must have type s -> t, got {term.type}", term, PROP, term.type)


def and_w(*terms: Term) -> Term:
    """Pointwise conjunction ``λw. a(w) ∧ b(w) ∧ ...`` of propositions."""
    for t in terms:
        _expect_prop(t, "operand of and_w")
    w = _world(*terms)
    body = Top
    for t in terms:
        body = App(t, w) if body == Top else And(body, App(t, w))
    return beta_normalize(Lam(w, body))


def exists_w(x: Var, body: Term) -> Term:
    """``λw. ∃x (body(w))``."""
    _expect_prop(body, "body of exists_w")
    w = _world(body, x)
    return beta_normalize(Lam(w, Exists(x, App(body, w))))


def close_int(term: Term, variables: Iterable[str]) -> Term:
    """World-lifted close: ``exists_w`` over ``variables`` by first occurrence."""
    _expect_prop(term, "argument of close")
    wanted = set(variables)
    ordered = [v for v in free_var_order(term) if v.name in wanted and v.type == E]
    missing = wanted - {v.name for v in ordered}
    if missing:
        name = sorted(missing)[0]
        raise ClosureError(f"cannot bind {name}: it does not occur free in the term", name)
    for v in reversed(ordered):
        term = exists_w(v, term)
    return term


def closable_vars(graph: AmrNode) -> frozenset:
    """Instance variables bound by a close at this level.

    Like ``free`` but does not look inside ``:content`` arguments or scope
    nodes: those are closed where they are interpreted.
    """
    if not isinstance(graph, Instance) or graph.concept == SCOPE_CONCEPT:
        return frozenset()
    out = {graph.var}
    for role, arg in graph.roles:
        if role.base != "content":
            out |= closable_vars(arg)
    return frozenset(out)


def check_content_targets(graph: AmrNode) -> None:
    """Reject ``:content`` pointing at a bare variable or constant."""
    if not isinstance(graph, Instance):
        return
    for role, arg in graph.roles:
        if role.base == "content":
            if role.inverted:
                raise ContentError(f":content-of on {graph.var} is not interpretable", graph.var)
            if isinstance(arg, VarRef):
                raise ContentError(f"content embeds variable {arg.var}", arg.var)
            if isinstance(arg, Constant):
                raise ContentError(f"content embeds constant {arg.symbol}", arg.symbol)
        check_content_targets(arg)


def _mentions(graph: AmrNode, skip_scope_args: bool) -> Counter:
    out = Counter()
    if isinstance(graph, VarRef):
        out[graph.var] += 1
    elif isinstance(graph, Instance):
        for role, arg in graph.roles:
            if skip_scope_args and graph.concept == SCOPE_CONCEPT and role.base.startswith("ARG"):
                continue
            out += _mentions(arg, skip_scope_args)
    return out


def check_content_scoping(graph: AmrNode, scope_regime: bool = False) -> None:
    """Reject a variable instance-assigned inside a ``:content`` argument but
    mentioned outside it: the content's own close binds it, so the outer
    mention could not corefer. Scope-node arguments are exempt in the scope
    regime, where the store carries the binding out.
    """
    total = _mentions(graph, scope_regime)
    for node in instances(graph):
        for role, arg in node.roles:
            if role.base != "content" or not isinstance(arg, Instance):
                continue
            local = _mentions(arg, scope_regime)
            for var in declared_vars(arg):
                if total[var] > local[var]:
                    raise ContentError(
                        f"{var} is instance-assigned inside the content of {node.var} but mentioned outside it",
                        var,
                    )


def _check_regime(graph: AmrNode) -> None:
    if not isinstance(graph, Instance):
        return
    if graph.concept == SCOPE_CONCEPT:
        raise RegimeError(f"scope node {graph.var} needs the scope regime", graph.var)
    for role, arg in graph.roles:
        if role.base == "quant":
            raise RegimeError(f":quant on {graph.var} needs the scope regime", graph.var)
        _check_regime(arg)


def pred(concept: str, x: Term) -> Term:
    w = Var("w", S)
    return Lam(w, App(App(Const(concept, IPRED_TYPE), x), w))


def rel(base: str, x: Term, y: Term) -> Term:
    w = _world(x, y)
    return Lam(w, App(App(App(Const(base, IROLE_TYPE), x), y), w))


def translate_int(graph: AmrNode) -> Term:
    """Open proposition (type s -> t) for a graph without scope constructs."""
    check_content_targets(graph)
    _check_regime(graph)
    ensure_valid(graph)
    graph = normalize_inverse_roles(graph)
    check_content_scoping(graph)
    x = Var(fresh_name("x", set(declared_vars(graph))), E)
    return finish(_tr(graph, x))


def finish(term: Term) -> Term:
    return name_worlds(reassociate(beta_normalize(term)))


def translate_int_closed(graph: AmrNode) -> Term:
    check_content_targets(graph)
    open_term = translate_int(graph)
    return finish(close_int(open_term, closable_vars(normalize_inverse_roles(graph))))


def _tr(node: AmrNode, x: Var) -> Term:
    if isinstance(node, Constant):
        return Const(node.symbol, E)
    if isinstance(node, VarRef):
        return Var(node.var, E)
    me = Var(node.var, E)
    head = pred(node.concept, me)
    if not node.roles:
        return head
    contributions = [beta_normalize(App(_role(role.base, arg, x), me)) for role, arg in node.roles]
    return and_w(head, *contributions)


def _role(base: str, arg: AmrNode, x: Var) -> Term:
    if base == "content":
        if not isinstance(arg, Instance):
            raise ContentError(f"content embeds {'variable' if isinstance(arg, VarRef) else 'constant'} "
                               f"{getattr(arg, 'var', getattr(arg, 'symbol', '?'))}")
        inner = close_int(beta_normalize(_tr(arg, x)), closable_vars(arg))
        return Lam(x, App(App(CONT, x), inner))
    target = Var(arg.var, E) if isinstance(arg, Instance) else _tr(arg, x)
    if isinstance(arg, Instance):
        return Lam(x, and_w(rel(base, x, target), beta_normalize(_tr(arg, x))))
    return Lam(x, rel(base, x, target))


def outer_world_leaks(term: Term) -> list:
    """World variables that occur free inside a ``cont`` content argument.

    A well-formed intensional translation never evaluates material under
    ``cont`` at the world of the attitude event itself.
    """
    leaks = []

    def walk(t, outer_worlds):
        if isinstance(t, Lam):
            inner = outer_worlds | {t.var} if t.var.type == S else outer_worlds
            walk(t.body, inner)
        elif isinstance(t, Exists):
            walk(t.body, outer_worlds)
        elif isinstance(t, And):
            walk(t.left, outer_worlds)
            walk(t.right, outer_worlds)
        elif isinstance(t, App):
            head = t
            args = []
            while isinstance(head, App):
                args.append(head.arg)
                head = head.fun
            args.reverse()
            if head == CONT and len(args) >= 2:
                content = args[1]
                leaks.extend(v for v in free_vars(content) if v in outer_worlds)
                walk(content, frozenset())
                for a in args[2:]:
                    walk(a, outer_worlds)
                return
            walk(head, outer_worlds)
            for a in args:
                walk(a, outer_worlds)

    walk(term, frozenset())
    return leaks
