"""Seeded generators shared by the property tests and the acceptance run."""
from __future__ import annotations

import random
from pathlib import Path
from typing import Iterator, List, Optional

from amr_intens.evaluator import Model
from amr_intens.amr import Constant, Instance, RoleName, VarRef, validate
from amr_intens.penman import NormalizationError, normalize_inverse_roles, parse
from amr_intens.stlc import (
    PROP, And, App, Arrow, Const, E, Exists, Lam, S, T, Top, Var, arrow,
)

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / f"{name}.amr").read_text(encoding="utf-8")


def fixture(name: str):
    return parse(fixture_text(name))


# --- AMR graphs -----------------------------------------------------------

NOUNS = ["boy", "girl", "dog", "violin", "class", "professor", "city"]
EVENTS = ["hug-01", "see-01", "buy-01", "want-01", "sick-05", "dance-01"]
ATTITUDES = ["believe-01", "hope-01", "think-01"]
ROLES = ["ARG0", "ARG1", "ARG2", "mod", "domain", "location"]
CONSTANTS = ["-", "+", "2", "17", '"Ohio"', "interrogative"]


class _GraphBuilder:
    def __init__(self, rng: random.Random, max_nodes: int, inverse: bool, content: bool, constants: bool):
        self.rng = rng
        self.max_nodes = max_nodes
        self.inverse = inverse
        self.content = content
        self.constants = constants
        self.count = 0
        self.finished: List[str] = []

    def fresh(self, concept: str) -> str:
        self.count += 1
        return f"{concept[0]}{self.count}"

    def node(self, depth: int) -> Instance:
        rng = self.rng
        concept = rng.choice(EVENTS + NOUNS + (ATTITUDES if self.content else []))
        var = self.fresh(concept)
        roles = []
        n_roles = 0 if depth > 3 else rng.randint(0, 3)
        if self.content and concept in ATTITUDES and self.count < self.max_nodes:
            roles.append((RoleName("content"), self.node(depth + 1)))
        for _ in range(n_roles):
            base = rng.choice(ROLES)
            kind = rng.random()
            if kind < 0.5 and self.count < self.max_nodes:
                inverted = self.inverse and rng.random() < 0.25
                roles.append((RoleName(base, inverted), self.node(depth + 1)))
            elif kind < 0.8 and self.finished:
                # only completed subtrees are safe re-entrancy targets
                inverted = self.inverse and rng.random() < 0.25
                roles.append((RoleName(base, inverted), VarRef(rng.choice(self.finished))))
            elif self.constants:
                roles.append((RoleName(base), Constant(rng.choice(CONSTANTS))))
        rng.shuffle(roles)
        self.finished.append(var)
        return Instance(var, concept, tuple(roles))


def random_graph(
    rng: random.Random,
    max_nodes: int = 7,
    inverse: bool = True,
    content: bool = False,
    constants: bool = True,
) -> Instance:
    """A valid, normalizable graph (rejection-sampled)."""
    while True:
        g = _GraphBuilder(rng, max_nodes, inverse, content, constants).node(0)
        if not validate(g).ok:
            continue
        try:
            normalize_inverse_roles(g)
        except NormalizationError:
            continue
        return g


def graphs(n: int, seed: int = 0, **kwargs) -> Iterator[Instance]:
    rng = random.Random(seed)
    for _ in range(n):
        yield random_graph(rng, **kwargs)


def content_target_ok(g) -> bool:
    """True when ``g`` has an intensional translation."""
    from amr_intens.translate_int import ContentError, check_content_scoping, check_content_targets

    try:
        check_content_targets(g)
        check_content_scoping(normalize_inverse_roles(g))
    except ContentError:
        return False
    return True


# --- scope graphs ---------------------------------------------------------

DETERMINERS = ["every", "a", "some", "2", None]


def random_scope_graph(rng: random.Random, attitude: bool = False) -> Instance:
    """A scope node over an event with quantified (or implicitly existential) arguments."""
    n_args = rng.randint(1, 3)
    args = []
    for i in range(n_args):
        noun = rng.choice(NOUNS)
        var = f"{noun[0]}{i}"
        det = rng.choice(DETERMINERS)
        roles = ((RoleName("quant"), Constant(det)),) if det else ()
        args.append(Instance(var, noun, roles))
    event = Instance("e", rng.choice(EVENTS), tuple((RoleName(f"ARG{i}"), a) for i, a in enumerate(args)))
    order = [a.var for a in args]
    rng.shuffle(order)
    targets = order[: rng.randint(1, len(order))]
    # quantified arguments the scope node does not mention would stay stored
    leftovers = [a for a in args if a.var not in targets and a.roles]
    targets += [a.var for a in leftovers]
    body = event
    if attitude:
        body = Instance("h", "hope-01", ((RoleName("ARG0"), Instance("x", "boy")), (RoleName("content"), event)))
    roles = tuple((RoleName(f"ARG{i}"), VarRef(v)) for i, v in enumerate(targets))
    return Instance("s", "scope", roles + ((RoleName("pred"), body),))


# --- lambda terms ---------------------------------------------------------

_VAR_NAMES = {E: ["x", "y", "z"], S: ["w", "w2"], arrow(E, T): ["P", "Q"]}
_CONST_NAMES = {
    E: ["j", "m"],
    S: ["now"],
    T: ["rain"],
    arrow(E, T): ["boy", "dog"],
    arrow(E, E, T): ["ARG0"],
    arrow(E, S, T): ["sick"],
    arrow(arrow(E, T), T): ["everything"],
}
_ARG_TYPES = [E, S, arrow(E, T)]


class _TermBuilder:
    def __init__(self, rng: random.Random, free_e: bool):
        self.rng = rng
        self.free_e = free_e

    def term(self, ty, ctx: List[Var], depth: int):
        rng = self.rng
        options = []
        vars_ = [v for v in ctx if v.type == ty]
        if ty == E and self.free_e:
            vars_ = vars_ + [Var("u", E)]
        if vars_:
            options.append(lambda: rng.choice(vars_))
        if ty in _CONST_NAMES:
            options.append(lambda: Const(rng.choice(_CONST_NAMES[ty]), ty))
        if ty == T:
            options.append(lambda: Top)
        if depth > 0:
            if isinstance(ty, Arrow) and ty.src in _VAR_NAMES:
                options.append(lambda: self.lam(ty, ctx, depth))
            options.append(lambda: self.redex(ty, ctx, depth))
            if ty == T:
                options.append(lambda: And(self.term(T, ctx, depth - 1), self.term(T, ctx, depth - 1)))
                options.append(lambda: self.exists(ctx, depth))
        if not options:
            return self.lam(ty, ctx, max(depth, 1))
        return rng.choice(options)()

    def lam(self, ty, ctx, depth):
        v = Var(self.rng.choice(_VAR_NAMES[ty.src]), ty.src)
        return Lam(v, self.term(ty.dst, ctx + [v], depth - 1))

    def exists(self, ctx, depth):
        v = Var(self.rng.choice(_VAR_NAMES[E]), E)
        return Exists(v, self.term(T, ctx + [v], depth - 1))

    def redex(self, ty, ctx, depth):
        a = self.rng.choice(_ARG_TYPES)
        v = Var(self.rng.choice(_VAR_NAMES[a]), a)
        fun = Lam(v, self.term(ty, ctx + [v], depth - 1))
        return App(fun, self.term(a, ctx, depth - 1))


def random_term(rng: random.Random, ty=T, depth: int = 4, free_e: bool = False):
    return _TermBuilder(rng, free_e).term(ty, [], depth)


def terms(n: int, seed: int = 0, free_e: bool = False) -> Iterator:
    rng = random.Random(seed)
    types = [T, PROP, arrow(E, T), arrow(E, PROP)]
    for _ in range(n):
        yield random_term(rng, rng.choice(types), rng.randint(1, 5), free_e)


# --- witness models -------------------------------------------------------


def witness_de_dicto_only() -> Model:
    """The boy hopes (at w0) to buy a violin; violins exist only in his hope world w1."""
    w0, w1 = "w0", "w1"
    return Model(
        worlds=(w0, w1),
        domain=("d0", "d1", "d2"),
        predicates={
            ("boy", w0): frozenset({"d0"}),
            ("hope-01", w0): frozenset({"d1"}),
            ("buy-01", w1): frozenset({"d1"}),
            ("violin", w1): frozenset({"d2"}),
        },
        roles={
            ("ARG0", w0): frozenset({("d1", "d0")}),
            ("ARG0", w1): frozenset({("d1", "d0")}),
            ("ARG1", w1): frozenset({("d1", "d2")}),
        },
        content={("d1", w0): frozenset({w1})},
    )


def witness_actual_violin() -> Model:
    """As above, but the violin also exists at w0."""
    m = witness_de_dicto_only()
    preds = dict(m.predicates)
    preds[("violin", "w0")] = frozenset({"d2"})
    return Model(m.worlds, m.domain, preds, m.roles, m.content)
