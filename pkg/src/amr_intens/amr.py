"""Recursive AMR syntax: constants, variables, instance assignments.

A graph is a tree of ``Instance`` nodes whose role arguments are either
further instances, bare variable references (re-entrancies) or constants.
Source spans are carried along for error reporting but never take part in
equality, so two graphs parsed from differently formatted text compare
equal when they have the same structure.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Tuple, Union

_ROLE_BASE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9-]*$")

# roles that are syntax rather than relations; they have no inverse
NON_INVERTIBLE = frozenset({"quant", "pred"})


@dataclass(frozen=True)
class Span:
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"span start {self.start} > end {self.end}")

    def __str__(self):
        return f"{self.start}-{self.end}"


@dataclass(frozen=True)
class RoleName:
    """A role label such as ``:ARG0`` or ``:ARG1-of``."""

    base: str
    inverted: bool = False

    def __post_init__(self):
        if not self.base or not _ROLE_BASE.match(self.base):
            raise ValueError(f"bad role name {self.base!r}")
        if self.inverted and self.base in NON_INVERTIBLE:
            raise ValueError(f":{self.base} cannot be inverted")

    @classmethod
    def parse(cls, label: str) -> "RoleName":
        label = label[1:] if label.startswith(":") else label
        if label.endswith("-of") and len(label) > 3:
            return cls(label[:-3], True)
        return cls(label)

    def flipped(self) -> "RoleName":
        return RoleName(self.base, not self.inverted)

    def __str__(self):
        return ":" + self.base + ("-of" if self.inverted else "")


@dataclass(frozen=True)
class Constant:
    symbol: str
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class VarRef:
    var: str
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Instance:
    var: str
    concept: str
    roles: Tuple[Tuple[RoleName, "AmrNode"], ...] = ()
    span: Optional[Span] = field(default=None, compare=False, repr=False)

    def role_values(self, base: str) -> list:
        return [arg for role, arg in self.roles if role.base == base and not role.inverted]


AmrNode = Union[Constant, VarRef, Instance]


def instances(graph: AmrNode) -> Iterator[Instance]:
    """Yield every instance node, depth-first pre-order."""
    if isinstance(graph, Instance):
        yield graph
        for _, arg in graph.roles:
            yield from instances(arg)


def declared_vars(graph: AmrNode) -> list:
    return [node.var for node in instances(graph)]


def var_refs(graph: AmrNode) -> Iterator[VarRef]:
    if isinstance(graph, VarRef):
        yield graph
    elif isinstance(graph, Instance):
        for _, arg in graph.roles:
            yield from var_refs(arg)


def free(graph: AmrNode) -> frozenset:
    """Variables introduced by instance assignments in ``graph``.

    Bare variables are deliberately left out: a re-entrant mention must not
    be bound before the place where its instance assignment occurs.
    """
    if isinstance(graph, Instance):
        out = {graph.var}
        for _, arg in graph.roles:
            out |= free(arg)
        return frozenset(out)
    return frozenset()


def node_target(arg: AmrNode) -> str:
    """The variable or constant symbol a role argument points at."""
    if isinstance(arg, Instance):
        return arg.var
    if isinstance(arg, VarRef):
        return arg.var
    return arg.symbol


@dataclass(frozen=True)
class Violation:
    kind: str  # "duplicate" | "dangling" | "cycle" | "constant-source"
    var: str
    message: str

    def __str__(self):
        return self.message


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid"
        return "; ".join(str(v) for v in self.violations)


class InvalidGraph(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


def normalized_edges(graph: AmrNode) -> list:
    """Role edges as (source, role base, target) with inverse roles flipped.

    Targets are variable names or constant symbols. Edges keep pre-order
    source order.
    """
    edges = []

    def walk(node):
        if not isinstance(node, Instance):
            return
        for role, arg in node.roles:
            target = node_target(arg)
            if role.inverted:
                edges.append((target, role.base, node.var))
            else:
                edges.append((node.var, role.base, target))
            walk(arg)

    walk(graph)
    return edges


def validate(graph: AmrNode) -> ValidationReport:
    violations = []
    seen = set()
    for node in instances(graph):
        if node.var in seen:
            violations.append(
                Violation("duplicate", node.var, f"variable {node.var} has more than one instance assignment")
            )
        seen.add(node.var)
    reported = set()
    for ref in var_refs(graph):
        if ref.var not in seen and ref.var not in reported:
            reported.add(ref.var)
            violations.append(Violation("dangling", ref.var, f"variable {ref.var} is never instance-assigned"))

    succ = {v: [] for v in seen}
    for node in instances(graph):
        for role, arg in node.roles:
            if role.inverted and isinstance(arg, Constant):
                violations.append(
                    Violation(
                        "constant-source",
                        node.var,
                        f"inverse role {role} on {node.var} points at constant {arg.symbol}",
                    )
                )
    for src, _, tgt in normalized_edges(graph):
        if src in succ and tgt in seen:
            succ[src].append(tgt)

    # iterative DFS with colours; report one variable per cycle found
    state = {}
    for start in declared_vars(graph):
        if state.get(start):
            continue
        stack = [(start, iter(succ.get(start, ())))]
        state[start] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[v] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                violations.append(Violation("cycle", nxt, f"cycle through variable {nxt}"))
            elif not state.get(nxt):
                state[nxt] = 1
                stack.append((nxt, iter(succ.get(nxt, ()))))
    return ValidationReport(tuple(violations))


def ensure_valid(graph: AmrNode) -> None:
    report = validate(graph)
    if not report.ok:
        raise InvalidGraph(report)
