"""Reading and writing AMR graphs in Penman notation."""
from __future__ import annotations

import re
from collections import namedtuple
from typing import List, Optional

from .amr import (
    AmrNode,
    Constant,
    Instance,
    RoleName,
    Span,
    VarRef,
    ensure_valid,
    instances,
    node_target,
    normalized_edges,
)

VAR_RE = re.compile(r"^[a-z][A-Za-z0-9]*$")
CONCEPT_RE = re.compile(r"^[A-Za-z][A-Za-z0-9-]*$")
NUMBER_RE = re.compile(r"^[+-]?\d+(\.\d+)?$")
IDENT_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_.-]*$")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<slash>/)
  | (?P<role>:[A-Za-z0-9-]+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<symbol>[^\s()/:"\#]+)
    """,
    re.VERBOSE,
)


class PenmanError(ValueError):
    """A problem with Penman input, located by a character span."""

    def __init__(self, message: str, span: Optional[Span] = None):
        self.span = span
        where = f" at {span}" if span is not None else ""
        super().__init__(message + where)
        self.message = message


class LexError(PenmanError):
    pass


class UnbalancedParens(PenmanError):
    pass


class DuplicateInstance(PenmanError):
    pass


class MissingArgument(PenmanError):
    pass


class EmptyGraph(PenmanError):
    pass


class NormalizationError(ValueError):
    def __init__(self, message: str, var: str):
        super().__init__(message)
        self.var = var


Token = namedtuple("Token", "kind text span")


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LexError(f"unexpected character {text[pos]!r}", Span(pos, pos + 1))
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), Span(m.start(), m.end())))
        pos = m.end()
    return tokens


def _is_constant_symbol(text: str) -> bool:
    return text in ("-", "+") or bool(NUMBER_RE.match(text) or IDENT_RE.match(text))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Optional[Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def eof_span(self) -> Span:
        return Span(len(self.text), len(self.text))

    def take(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok is None:
            if kind == "rparen":
                raise UnbalancedParens("missing ')'", self.eof_span())
            raise PenmanError(f"expected {what}, got end of input", self.eof_span())
        if tok.kind != kind:
            raise PenmanError(f"expected {what}, got {tok.text!r}", tok.span)
        self.i += 1
        return tok

    def node(self):
        # raw node: ("node", var, concept, roles, span); bare args stay unresolved
        lp = self.take("lparen", "'('")
        var = self.take("symbol", "variable")
        if not VAR_RE.match(var.text):
            raise LexError(f"bad variable name {var.text!r}", var.span)
        self.take("slash", "'/'")
        concept = self.take("symbol", "concept")
        if not CONCEPT_RE.match(concept.text):
            raise LexError(f"bad concept {concept.text!r}", concept.span)
        roles = []
        while True:
            tok = self.peek()
            if tok is None:
                raise UnbalancedParens("missing ')'", self.eof_span())
            if tok.kind == "rparen":
                self.i += 1
                break
            if tok.kind != "role":
                raise PenmanError(f"expected role or ')', got {tok.text!r}", tok.span)
            self.i += 1
            try:
                role = RoleName.parse(tok.text)
            except ValueError as exc:
                raise LexError(str(exc), tok.span) from None
            roles.append((role, self.arg(tok)))
        return ("node", var.text, concept.text, roles, Span(lp.span.start, tok.span.end))

    def arg(self, role_tok: Token):
        tok = self.peek()
        if tok is None or tok.kind in ("rparen", "role"):
            raise MissingArgument(f"role {role_tok.text} has no argument", role_tok.span)
        if tok.kind == "lparen":
            return self.node()
        if tok.kind == "string":
            self.i += 1
            return ("const", tok.text, tok.span)
        if tok.kind == "symbol":
            self.i += 1
            if not (_is_constant_symbol(tok.text) or VAR_RE.match(tok.text)):
                raise LexError(f"bad symbol {tok.text!r}", tok.span)
            return ("bare", tok.text, tok.span)
        raise PenmanError(f"unexpected {tok.text!r}", tok.span)

    def graph(self):
        tok = self.peek()
        if tok is None:
            raise EmptyGraph("empty graph", self.eof_span())
        if tok.kind == "rparen":
            raise UnbalancedParens("unexpected ')'", tok.span)
        return self.node()


def _resolve(raw, declared: set) -> AmrNode:
    kind = raw[0]
    if kind == "const":
        return Constant(raw[1], raw[2])
    if kind == "bare":
        if raw[1] in declared:
            return VarRef(raw[1], raw[2])
        return Constant(raw[1], raw[2])
    _, var, concept, roles, span = raw
    return Instance(var, concept, tuple((r, _resolve(a, declared)) for r, a in roles), span)


def _collect_declared(raw, out: dict):
    if raw[0] != "node":
        return
    _, var, _, roles, span = raw
    if var in out:
        raise DuplicateInstance(f"duplicate instance assignment for {var}", span)
    out[var] = span
    for _, arg in roles:
        _collect_declared(arg, out)


def _build(raw) -> AmrNode:
    declared = {}
    _collect_declared(raw, declared)
    return _resolve(raw, set(declared))


def parse(text: str) -> AmrNode:
    """Parse exactly one Penman graph."""
    p = _Parser(text)
    raw = p.graph()
    extra = p.peek()
    if extra is not None:
        if extra.kind == "rparen":
            raise UnbalancedParens("unexpected ')'", extra.span)
        raise PenmanError(f"trailing input {extra.text!r}", extra.span)
    return _build(raw)


def parse_batch(text: str) -> List[AmrNode]:
    """Parse a sequence of graphs, e.g. blank-line separated corpus entries."""
    p = _Parser(text)
    graphs = []
    while p.peek() is not None:
        graphs.append(_build(p.graph()))
    if not graphs:
        raise EmptyGraph("empty graph", p.eof_span())
    return graphs


def _format_arg(arg: AmrNode, depth: int, indent: Optional[int]) -> str:
    if isinstance(arg, Instance):
        return _format(arg, depth, indent)
    if isinstance(arg, VarRef):
        return arg.var
    return arg.symbol


def _format(node: Instance, depth: int, indent: Optional[int]) -> str:
    head = f"({node.var} / {node.concept}"
    parts = [f"{role} {_format_arg(arg, depth + 1, indent)}" for role, arg in node.roles]
    if not parts:
        return head + ")"
    if indent is None:
        return head + " " + " ".join(parts) + ")"
    pad = "\n" + " " * (indent * (depth + 1))
    return head + pad + pad.join(parts) + ")"


def to_penman(graph: AmrNode, indent: Optional[int] = 4) -> str:
    """Serialize a graph; ``indent=None`` gives a single line."""
    if not isinstance(graph, Instance):
        return _format_arg(graph, 0, indent)
    return _format(graph, 0, indent)


def normalize_inverse_roles(graph: AmrNode) -> AmrNode:
    """Rewrite every ``:R-of`` edge as ``:R`` in the other direction.

    Graphs without inverse roles come back unchanged. Otherwise the tree is
    rebuilt over the normalized edges. An instance that sat under an ordinary
    role keeps its place; one that sat under an inverse role moves to its
    first mention in depth-first order, every other mention being a bare
    variable. When flipping an edge gives the root a parent, the tree is
    re-rooted at the unique parentless node; if there is none, or several,
    some node would be orphaned and NormalizationError names it.
    """
    if not isinstance(graph, Instance) or not any(r.inverted for n in instances(graph) for r, _ in n.roles):
        return graph
    ensure_valid(graph)
    concept = {}
    spans = {}
    home = {}  # var -> (parent var, index of the role among the parent's roles)
    constants = {}
    for node in instances(graph):
        concept[node.var] = node.concept
        spans[node.var] = node.span
        for i, (role, arg) in enumerate(node.roles):
            if isinstance(arg, Instance) and not role.inverted:
                home[arg.var] = (node.var, i)
            elif isinstance(arg, Constant):
                constants.setdefault(arg.symbol, arg)

    # out-edges per source, tagged with the original position of ordinary edges
    out_edges = {v: [] for v in concept}
    for node in instances(graph):
        for i, (role, arg) in enumerate(node.roles):
            tgt = node_target(arg)
            if role.inverted:
                out_edges[tgt].append((role.base, node.var, None))
            else:
                out_edges[node.var].append((role.base, tgt, (node.var, i)))
    def attempt(root: str):
        placed = set()

        def build(var: str) -> Instance:
            placed.add(var)
            roles = []
            for base, tgt, origin in out_edges[var]:
                role = RoleName(base)
                if tgt not in concept:
                    roles.append((role, constants[tgt]))
                elif tgt in placed or tgt == root:
                    roles.append((role, VarRef(tgt)))
                elif tgt in home and home[tgt] != origin:
                    roles.append((role, VarRef(tgt)))  # placed at its own position
                else:
                    roles.append((role, build(tgt)))
            return Instance(var, concept[var], tuple(roles), spans[var])

        result = build(root)
        return result, [v for v in concept if v not in placed]

    result, orphans = attempt(graph.var)
    if not orphans:
        return result
    # the old root gained a parent: re-root at the single node nothing points to
    pointed = {tgt for _, _, tgt in normalized_edges(graph)}
    sources = [v for v in concept if v not in pointed]
    if len(sources) == 1:
        rerooted, rest = attempt(sources[0])
        if not rest:
            return rerooted
    raise NormalizationError(
        f"normalizing inverse roles detaches {orphans[0]} from root {graph.var}", orphans[0]
    )


Triple = namedtuple("Triple", "relation source target")


def _triple_str(self):
    return f"{self.relation}({self.source}, {self.target})"


Triple.__str__ = _triple_str


def to_triples(graph: AmrNode) -> List[Triple]:
    """Flatten a graph into instance and role triples (inverse roles normalized)."""
    graph = normalize_inverse_roles(graph)
    if not isinstance(graph, Instance):
        return []
    out = [Triple("instance", graph.var, graph.concept)]

    def walk(node: Instance):
        for role, arg in node.roles:
            if isinstance(arg, Instance):
                out.append(Triple("instance", arg.var, arg.concept))
            out.append(Triple(role.base, node.var, node_target(arg)))
            if isinstance(arg, Instance):
                walk(arg)

    walk(graph)
    return out
