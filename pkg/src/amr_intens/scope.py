"""Cooper storage for ``:quant`` and ``scope`` nodes.

An AMR now denotes a pair: a store of delayed quantifiers keyed by the
variable they bind, and an ordinary value. A ``:quant`` node puts its
quantifier into the store and contributes ⊤; a scope node retrieves the
quantifiers of its ``:ARG0 .. :ARGn`` variables, ``:ARG0`` outermost,
over the closed value of its ``:pred`` graph.

Both regimes are supported: extensional (ordinary values of type t) and
intensional (type s -> t, where ``:content`` is allowed).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from .amr import AmrNode, Constant, Instance, VarRef, declared_vars, ensure_valid, instances
from .determiners import DEFAULT, EXT, INT, DeterminerTable, UnknownDeterminer, gq_type
from .penman import normalize_inverse_roles
from .stlc import (
    App,
    Const,
    E,
    Exists,
    Lam,
    Term,
    Top,
    Var,
    beta_normalize,
    conj,
    free_vars,
    fresh_name,
    pretty,
    reassociate,
    subterms,
)
from .translate_ext import PRED_TYPE, ROLE_TYPE, SCOPE_CONCEPT, TranslationError, close_v1
from .translate_int import (
    CONT,
    TRUE_W,
    and_w,
    check_content_scoping,
    check_content_targets,
    close_int,
    closable_vars,
    finish,
    pred as ipred,
    rel as irel,
)

REGIMES = (EXT, INT)
_ARG = re.compile(r"^ARG(\d+)$")


class ScopeError(TranslationError):
    pass


class StoreCollision(ScopeError):
    pass


class PopError(ScopeError):
    pass


class ResidualStore(ScopeError):
    def __init__(self, message, keys):
        super().__init__(message, keys[0] if keys else None)
        self.keys = keys


class ResidualFreeVariables(ScopeError):
    def __init__(self, message, names):
        super().__init__(message, names[0] if names else None)
        self.names = names


@dataclass(frozen=True)
class Store:
    items: Tuple[Tuple[str, Term], ...] = ()

    def keys(self) -> List[str]:
        return [k for k, _ in self.items]

    def __contains__(self, var: str) -> bool:
        return any(k == var for k, _ in self.items)

    def __getitem__(self, var: str) -> Term:
        for k, v in self.items:
            if k == var:
                return v
        raise KeyError(var)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def without(self, var: str) -> "Store":
        return Store(tuple((k, v) for k, v in self.items if k != var))

    def union(self, other: "Store") -> "Store":
        for k, _ in other.items:
            if k in self:
                raise StoreCollision(f"variable {k} is stored twice", k)
        return Store(self.items + other.items)

    def add(self, var: str, gq: Term) -> "Store":
        return self.union(Store(((var, gq),)))

    def __str__(self):
        return "{" + ", ".join(f"({k}, {pretty(v)})" for k, v in self.items) + "}"


EMPTY = Store()


@dataclass(frozen=True)
class StoredValue:
    store: Store
    ordinary: Term

    def __str__(self):
        return f"{self.store} . {pretty(self.ordinary)}"


# --- regime helpers -------------------------------------------------------


def _top(regime):
    return Top if regime == EXT else TRUE_W


def _conj(regime, *terms):
    if regime == EXT:
        return reassociate(conj(*terms))
    terms = [t for t in terms if not _is_true(t)]
    if not terms:
        return TRUE_W
    if len(terms) == 1:
        return terms[0]
    return reassociate(and_w(*terms))


def _is_true(term):
    return term == Top or (isinstance(term, Lam) and term.body == Top)


def _pred(regime, concept, x):
    if regime == EXT:
        return App(Const(concept, PRED_TYPE), x)
    return ipred(concept, x)


def _rel(regime, base, x, y):
    if regime == EXT:
        return App(App(Const(base, ROLE_TYPE), x), y)
    return irel(base, x, y)


def _close(regime, term, variables):
    return close_v1(term, variables) if regime == EXT else close_int(term, variables)


# --- operations -----------------------------------------------------------


def close_v2(value: StoredValue, variables: Iterable[str], regime: str = EXT) -> StoredValue:
    """Existentially bind ``variables`` minus the store keys; store unchanged."""
    keys = set(value.store.keys())
    bind = [v for v in variables if v not in keys]
    return StoredValue(value.store, _close(regime, value.ordinary, bind))


def pop(var: str, value: StoredValue, determiners: DeterminerTable = DEFAULT) -> StoredValue:
    """Retrieve the quantifier stored for ``var`` and apply it to ``λvar. ordinary``."""
    if var not in value.store:
        if not value.store.keys():
            raise PopError(f"cannot pop {var}: the store is empty", var)
        raise PopError(f"cannot pop {var}: not in store {value.store}", var)
    gq = _unfold(value.store[var], var, determiners)
    result = beta_normalize(App(gq, Lam(Var(var, E), value.ordinary)))
    return StoredValue(value.store.without(var), reassociate(result))


def _unfold(term: Term, var: str, determiners: DeterminerTable) -> Term:
    """Replace a definable determiner head by its lambda definition."""
    if isinstance(term, App) and isinstance(term.fun, Const):
        det = determiners.for_const(term.fun.name)
        if det is not None:
            regime = EXT if term.type == gq_type(EXT) else INT
            if term.fun.type == det.denotation(regime).type:
                definition = det.definition(regime, var)
                if definition is not None:
                    return App(definition, term.arg)
    return term


def scope_targets(graph: AmrNode) -> List[str]:
    """Variables named by ``:ARGi`` of any scope node in the graph."""
    out = []
    for node in instances(graph):
        if node.concept == SCOPE_CONCEPT:
            for role, arg in node.roles:
                if _ARG.match(role.base) and isinstance(arg, VarRef):
                    out.append(arg.var)
    return out


class _Translator:
    def __init__(self, regime: str, determiners: DeterminerTable, implicit: Iterable[str]):
        if regime not in REGIMES:
            raise ValueError(f"unknown regime {regime!r}")
        self.regime = regime
        self.table = determiners
        self.implicit = set(implicit)

    def node(self, node: AmrNode, pending: frozenset) -> StoredValue:
        if isinstance(node, Constant):
            return StoredValue(EMPTY, Const(node.symbol, E))
        if isinstance(node, VarRef):
            return StoredValue(EMPTY, Var(node.var, E))
        if node.concept == SCOPE_CONCEPT:
            return self.scope_node(node, pending)
        me = Var(node.var, E)
        quant = [arg for role, arg in node.roles if role.base == "quant"]
        others = [(role, arg) for role, arg in node.roles if role.base != "quant"]
        det = None
        if len(quant) > 1:
            raise ScopeError(f"{node.var} has more than one :quant", node.var)
        if quant:
            if not isinstance(quant[0], Constant):
                raise ScopeError(f":quant of {node.var} must be a determiner constant", node.var)
            try:
                det = self.table.lookup(quant[0].symbol)
            except UnknownDeterminer as exc:
                raise ScopeError(str(exc), node.var) from None
        elif node.var in self.implicit:
            det = self.table.lookup("some")
        store, contributions = self.roles(node, others, pending)
        body = _conj(self.regime, _pred(self.regime, node.concept, me), *contributions)
        if det is None:
            return StoredValue(store, body)
        gq = App(det.denotation(self.regime), Lam(me, body))
        if not others:
            # D(P) rather than D(λx. P(x))
            gq = App(det.denotation(self.regime), Const(node.concept, gq.arg.type))
        return StoredValue(store.add(node.var, gq), _top(self.regime))

    def roles(self, node: Instance, roles, pending) -> Tuple[Store, List[Term]]:
        me = Var(node.var, E)
        store = EMPTY
        out = []
        for role, arg in roles:
            if role.base == "content":
                if self.regime != INT:
                    raise ScopeError(f":content on {node.var} needs the intensional regime", node.var)
                inner = self.content(arg, pending)
                store = store.union(inner.store)
                out.append(App(App(CONT, me), inner.ordinary))
                continue
            if isinstance(arg, Instance):
                sub = self.node(arg, pending)
                store = store.union(sub.store)
                target = Var(arg.var, E)
                out.append(_conj(self.regime, _rel(self.regime, role.base, me, target), sub.ordinary))
            else:
                target = Const(arg.symbol, E) if isinstance(arg, Constant) else Var(arg.var, E)
                out.append(_rel(self.regime, role.base, me, target))
        return store, out

    def content(self, arg: AmrNode, pending) -> StoredValue:
        value = self.node(arg, pending)
        value = close_v2(value, closable_vars(arg), self.regime)
        # quantifiers nobody above will retrieve take scope inside the content
        for key in reversed(value.store.keys()):
            if key not in pending:
                value = pop(key, value, self.table)
        return value

    def scope_node(self, node: Instance, pending) -> StoredValue:
        args = []
        preds = []
        for role, arg in node.roles:
            m = _ARG.match(role.base)
            if role.base == "pred":
                preds.append(arg)
            elif m and not role.inverted:
                if not isinstance(arg, VarRef):
                    raise ScopeError(f"scope node {node.var}: {role} must be a bare variable", node.var)
                args.append((int(m.group(1)), arg.var))
            else:
                raise ScopeError(f"scope node {node.var}: unexpected role {role}", node.var)
        if len(preds) != 1:
            what = "missing" if not preds else "duplicated"
            raise ScopeError(f"scope node {node.var}: :pred {what}", node.var)
        body = preds[0]
        if not isinstance(body, Instance):
            raise ScopeError(f"scope node {node.var}: :pred must be a graph", node.var)
        targets = [v for _, v in sorted(args)]
        if len(set(targets)) != len(targets):
            raise ScopeError(f"scope node {node.var}: a variable is scoped twice", node.var)
        value = self.node(body, pending | frozenset(targets))
        value = close_v2(value, closable_vars(body), self.regime)
        for var in reversed(targets):
            value = pop(var, value, self.table)
        inside = set(declared_vars(body))
        leftover = sorted(
            v.name
            for v in free_vars(value.ordinary)
            if v.type == E and v.name in inside and v.name not in value.store
        )
        if leftover:
            raise ResidualFreeVariables(
                f"scope node {node.var}: {', '.join(leftover)} left free after popping "
                f"{', '.join(targets)}; a quantifier mentioning it was retrieved outside its binder",
                leftover,
            )
        return value


def _prepare(graph: AmrNode, regime: str) -> AmrNode:
    if regime == INT:
        check_content_targets(graph)
    ensure_valid(graph)
    graph = normalize_inverse_roles(graph)
    if regime == INT:
        check_content_scoping(graph, scope_regime=True)
    return graph


def translate_scoped(graph: AmrNode, regime: str = EXT, determiners: DeterminerTable = DEFAULT) -> StoredValue:
    graph = _prepare(graph, regime)
    tr = _Translator(regime, determiners, scope_targets(graph))
    value = tr.node(graph, frozenset())
    return StoredValue(value.store, reassociate(value.ordinary))


def derive_reading(graph: AmrNode, regime: str = INT, determiners: DeterminerTable = DEFAULT) -> Term:
    """Closed formula: scoped translation, a final close, and an empty-store check."""
    graph = _prepare(graph, regime)
    tr = _Translator(regime, determiners, scope_targets(graph))
    value = tr.node(graph, frozenset())
    value = close_v2(value, closable_vars(graph), regime)
    if len(value.store):
        keys = value.store.keys()
        raise ResidualStore(
            f"quantifiers for {', '.join(keys)} were stored but never retrieved by a scope node", keys
        )
    leftover = sorted(v.name for v in free_vars(value.ordinary) if v.type == E)
    if leftover:
        raise ResidualFreeVariables(f"{', '.join(leftover)} left free in the reading", leftover)
    return finish(value.ordinary)


# --- checks ---------------------------------------------------------------


def event_variables(graph: AmrNode) -> set:
    """Instances that look like events: a sense-numbered concept or :ARGn roles."""
    out = set()
    for node in instances(graph):
        if node.concept == SCOPE_CONCEPT:
            continue
        if re.search(r"-\d+$", node.concept) or any(_ARG.match(r.base) for r, _ in node.roles):
            out.add(node.var)
    return out


def event_scope_violations(term: Term, graph: AmrNode) -> List[str]:
    """Events of a scope node's :pred bound outside a quantifier that node pops.

    Returns one message per violation; empty when every event existential
    sits inside all binders of the quantifiers retrieved by its scope node.
    """
    problems = []
    for node in instances(graph):
        if node.concept != SCOPE_CONCEPT:
            continue
        body = next((a for r, a in node.roles if r.base == "pred"), None)
        targets = {a.var for r, a in node.roles if _ARG.match(r.base) and isinstance(a, VarRef)}
        events = event_variables(body) if body is not None else set()
        found = set()

        def walk(t, enclosing):
            if isinstance(t, Exists) and t.var.name in events:
                found.add(t.var.name)
                missing = targets - enclosing
                if missing:
                    problems.append(
                        f"event {t.var.name} is not in the scope of {', '.join(sorted(missing))}"
                    )
            if isinstance(t, (Lam, Exists)):
                walk(t.body, enclosing | {t.var.name})
            elif isinstance(t, App):
                walk(t.fun, enclosing)
                walk(t.arg, enclosing)
            elif hasattr(t, "left"):
                walk(t.left, enclosing)
                walk(t.right, enclosing)

        walk(term, frozenset())
        for e in sorted(events - found):
            problems.append(f"event {e} is never existentially bound")
    return problems
