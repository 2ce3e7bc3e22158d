"""Finite intensional models, term evaluation and bounded entailment.

A model has a few worlds and individuals, per-world extensions for
predicates and roles, and for each (individual, world) the set of worlds
compatible with that individual's content. ``cont(x)(p)(w)`` holds when
``p`` is true at every world in content(x, w).

Entailment is checked exhaustively over every model up to a size bound.
A verdict of "entailed" only means no counterexample exists within that
bound.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from .determiners import DEFAULT, EXT, INT, DeterminerTable, det_type
from .stlc import PROP, App, And, Arrow, Const, E, Exists, Lam, S, T, Term, Var, _Top, arrow, subterms
from .translate_int import CONT_TYPE

PRED_TYPES = {arrow(E, T): EXT, arrow(E, S, T): INT}
ROLE_TYPES = {arrow(E, E, T): EXT, arrow(E, E, S, T): INT}

DEFAULT_CAP = 2_000_000


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    predicates: Tuple[str, ...] = ()
    roles: Tuple[str, ...] = ()
    content: bool = False
    constants: Tuple[str, ...] = ()

    def merge(self, other: "Signature") -> "Signature":
        return Signature(
            tuple(sorted(set(self.predicates) | set(other.predicates))),
            tuple(sorted(set(self.roles) | set(other.roles))),
            self.content or other.content,
            tuple(sorted(set(self.constants) | set(other.constants))),
        )


def classify(const: Const, determiners: DeterminerTable = DEFAULT) -> Tuple[str, str]:
    """(kind, regime) of a constant, kind one of pred/role/cont/entity/det."""
    ty = const.type
    if const.name == "cont" and ty == CONT_TYPE:
        return "cont", INT
    if ty in PRED_TYPES:
        return "pred", PRED_TYPES[ty]
    if ty in ROLE_TYPES:
        return "role", ROLE_TYPES[ty]
    if ty == E:
        return "entity", EXT
    det = determiners.for_const(const.name)
    if det is not None:
        for regime in (EXT, INT):
            if ty == det_type(regime):
                return "det", regime
    raise EvalError(f"unknown constant {const.name} of type {ty}")


def signature_of(*terms: Term, determiners: DeterminerTable = DEFAULT) -> Signature:
    preds, roles, consts = set(), set(), set()
    content = False
    for term in terms:
        for sub in subterms(term):
            if isinstance(sub, Const):
                kind, _ = classify(sub, determiners)
                if kind == "pred":
                    preds.add(sub.name)
                elif kind == "role":
                    roles.add(sub.name)
                elif kind == "cont":
                    content = True
                elif kind == "entity":
                    consts.add(sub.name)
    return Signature(tuple(sorted(preds)), tuple(sorted(roles)), content, tuple(sorted(consts)))


@dataclass(frozen=True)
class Model:
    worlds: Tuple[str, ...]
    domain: Tuple[str, ...]
    predicates: Dict[Tuple[str, str], FrozenSet[str]] = field(default_factory=dict, hash=False)
    roles: Dict[Tuple[str, str], FrozenSet[Tuple[str, str]]] = field(default_factory=dict, hash=False)
    content: Dict[Tuple[str, str], FrozenSet[str]] = field(default_factory=dict, hash=False)
    constants: Dict[str, str] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if not self.worlds or not self.domain:
            raise ValueError("a model needs at least one world and one individual")
        ws, ds = set(self.worlds), set(self.domain)
        for (name, w), ext in self.predicates.items():
            if w not in ws or not set(ext) <= ds:
                raise ValueError(f"extension of {name} at {w} leaves the model")
        for (name, w), ext in self.roles.items():
            if w not in ws or not all(a in ds and b in ds for a, b in ext):
                raise ValueError(f"extension of {name} at {w} leaves the model")
        for (d, w), worlds in self.content.items():
            if d not in ds or w not in ws or not set(worlds) <= ws:
                raise ValueError(f"content of {d} at {w} leaves the model")
        for name, d in self.constants.items():
            if d not in ds:
                raise ValueError(f"constant {name} denotes {d}, not in the domain")

    def pred(self, name: str, world: str) -> FrozenSet[str]:
        return self.predicates.get((name, world), frozenset())

    def role(self, name: str, world: str) -> FrozenSet[Tuple[str, str]]:
        return self.roles.get((name, world), frozenset())

    def content_of(self, individual: str, world: str) -> FrozenSet[str]:
        return self.content.get((individual, world), frozenset())

    def to_json(self) -> dict:
        preds: Dict[str, Dict[str, list]] = {}
        for (name, w), ext in sorted(self.predicates.items()):
            if ext:
                preds.setdefault(name, {})[w] = sorted(ext)
        roles: Dict[str, Dict[str, list]] = {}
        for (name, w), ext in sorted(self.roles.items()):
            if ext:
                roles.setdefault(name, {})[w] = [list(p) for p in sorted(ext)]
        content: Dict[str, Dict[str, list]] = {}
        for (d, w), ws in sorted(self.content.items()):
            if ws:
                content.setdefault(d, {})[w] = sorted(ws)
        return {
            "worlds": list(self.worlds),
            "domain": list(self.domain),
            "predicates": preds,
            "roles": roles,
            "content": content,
            "constants": dict(sorted(self.constants.items())),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "Model":
        return cls(
            tuple(data["worlds"]),
            tuple(data["domain"]),
            {(n, w): frozenset(ext) for n, by_w in data.get("predicates", {}).items() for w, ext in by_w.items()},
            {
                (n, w): frozenset(tuple(p) for p in ext)
                for n, by_w in data.get("roles", {}).items()
                for w, ext in by_w.items()
            },
            {(d, w): frozenset(ws) for d, by_w in data.get("content", {}).items() for w, ws in by_w.items()},
            dict(data.get("constants", {})),
        )


def world_names(n: int) -> Tuple[str, ...]:
    return tuple(f"w{i}" for i in range(n))


def individual_names(n: int) -> Tuple[str, ...]:
    return tuple(f"d{i}" for i in range(n))


# --- evaluation -----------------------------------------------------------


def evaluate(model: Model, world: str, term: Term, determiners: DeterminerTable = DEFAULT) -> bool:
    """Truth value of a closed term of type t or s -> t at ``world``."""
    if world not in model.worlds:
        raise EvalError(f"unknown world {world}")
    if term.type not in (T, PROP):
        raise EvalError(f"cannot evaluate a term of type {term.type}")
    value = _Denoter(model, world, determiners).den(term, {})
    if term.type == PROP:
        value = value(world)
    return bool(value)


# the name the interface uses
eval = evaluate  # noqa: A001


class _Denoter:
    def __init__(self, model: Model, world: str, determiners: DeterminerTable):
        self.m = model
        self.world = world
        self.dets = determiners

    def den(self, t: Term, env: dict):
        if isinstance(t, Var):
            if t not in env:
                raise EvalError(f"free variable {t.name} in evaluated term")
            return env[t]
        if isinstance(t, Const):
            return self.const(t)
        if isinstance(t, _Top):
            return True
        if isinstance(t, App):
            return self.den(t.fun, env)(self.den(t.arg, env))
        if isinstance(t, And):
            return self.den(t.left, env) and self.den(t.right, env)
        if isinstance(t, Exists):
            return any(self.den(t.body, {**env, t.var: d}) for d in self.m.domain)
        if isinstance(t, Lam):
            return lambda v, t=t, env=env: self.den(t.body, {**env, t.var: v})
        raise EvalError(f"cannot evaluate {t!r}")

    def const(self, c: Const):
        kind, regime = classify(c, self.dets)
        m, here = self.m, self.world
        name = c.name
        if kind == "pred":
            if regime == EXT:
                return lambda x: x in m.pred(name, here)
            return lambda x: lambda w: x in m.pred(name, w)
        if kind == "role":
            if regime == EXT:
                return lambda x: lambda y: (x, y) in m.role(name, here)
            return lambda x: lambda y: lambda w: (x, y) in m.role(name, w)
        if kind == "cont":
            return lambda x: lambda p: lambda w: all(p(v) for v in m.content_of(x, w))
        if kind == "entity":
            if name not in m.constants:
                raise EvalError(f"constant {name} has no denotation in the model")
            return m.constants[name]
        det = self.dets.for_const(name)
        dom = m.domain
        if regime == EXT:
            return lambda P: lambda Q: det.holds({d for d in dom if P(d)}, {d for d in dom if Q(d)})
        return lambda P: lambda Q: lambda w: det.holds(
            {d for d in dom if P(d)(w)}, {d for d in dom if Q(d)(w)}
        )


# --- enumeration ----------------------------------------------------------


@dataclass(frozen=True)
class EnumerationBound:
    worlds: int
    individuals: int
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.worlds < 1 or self.individuals < 1:
            raise ValueError("bounds must be at least 1")

    def sizes(self) -> List[Tuple[int, int]]:
        """Every (worlds, individuals) pair within the bound, smallest first."""
        return [(w, i) for w in range(1, self.worlds + 1) for i in range(1, self.individuals + 1)]


def atoms(signature: Signature, worlds, domain) -> List[tuple]:
    """Boolean model atoms in enumeration order (first is most significant)."""
    out = []
    for p in signature.predicates:
        for w in worlds:
            for d in domain:
                out.append(("pred", p, w, d))
    for r in signature.roles:
        for w in worlds:
            for a in domain:
                for b in domain:
                    out.append(("role", r, w, a, b))
    if signature.content:
        for d in domain:
            for w in worlds:
                for v in worlds:
                    out.append(("content", d, w, v))
    return out


def model_count(signature: Signature, n_worlds: int, n_individuals: int) -> int:
    """2^(P·W·D + R·W·D² + [cont]·D·W²) · D^K for P predicates, R roles, K constants."""
    w, d = n_worlds, n_individuals
    bits = len(signature.predicates) * w * d + len(signature.roles) * w * d * d
    if signature.content:
        bits += d * w * w
    return 2**bits * d ** len(signature.constants)


def build_model(signature: Signature, worlds, domain, truth: Dict[tuple, bool], constants: Dict[str, str]) -> Model:
    preds: Dict[Tuple[str, str], set] = {(p, w): set() for p in signature.predicates for w in worlds}
    roles: Dict[Tuple[str, str], set] = {(r, w): set() for r in signature.roles for w in worlds}
    content: Dict[Tuple[str, str], set] = {}
    if signature.content:
        content = {(d, w): set() for d in domain for w in worlds}
    for atom, value in truth.items():
        if not value:
            continue
        if atom[0] == "pred":
            preds[(atom[1], atom[2])].add(atom[3])
        elif atom[0] == "role":
            roles[(atom[1], atom[2])].add((atom[3], atom[4]))
        else:
            content[(atom[1], atom[2])].add(atom[3])
    return Model(
        tuple(worlds),
        tuple(domain),
        {k: frozenset(v) for k, v in preds.items()},
        {k: frozenset(v) for k, v in roles.items()},
        {k: frozenset(v) for k, v in content.items()},
        dict(constants),
    )


def enumerate_models(
    signature: Signature, bound: EnumerationBound, cap: Optional[int] = None
) -> Iterator[Model]:
    """Every model with exactly ``bound.worlds`` worlds and ``bound.individuals``
    individuals, in a fixed order; refuses when there are more than ``cap``."""
    cap = bound.cap if cap is None else cap
    total = model_count(signature, bound.worlds, bound.individuals)
    if total > cap:
        raise EvalError(f"{total} models exceed the enumeration cap of {cap}")
    worlds = world_names(bound.worlds)
    domain = individual_names(bound.individuals)
    order = atoms(signature, worlds, domain)
    choices = [(False, True)] * len(order) + [domain] * len(signature.constants)
    for combo in itertools.product(*choices):
        truth = dict(zip(order, combo[: len(order)]))
        consts = dict(zip(signature.constants, combo[len(order):]))
        yield build_model(signature, worlds, domain, truth, consts)


# --- entailment -----------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    entailed: bool
    counterexample: Optional[Model] = None
    bound: Optional[EnumerationBound] = None
    actual: Optional[str] = None

    def __bool__(self):
        return self.entailed

    def __str__(self):
        if self.entailed:
            return "entailed-within-bound"
        return "counterexample"

    def to_json(self) -> dict:
        out = {"verdict": str(self)}
        if self.bound is not None:
            out["bound"] = {"worlds": self.bound.worlds, "individuals": self.bound.individuals}
        if self.counterexample is not None:
            out["actual"] = self.actual
            out["counterexample"] = self.counterexample.to_json()
        return out


def _check_pair(premise: Term, conclusion: Term):
    for t in (premise, conclusion):
        if t.type not in (T, PROP):
            raise EvalError(f"entailment needs formulas of type t or s -> t, got {t.type}")


def entails(
    premise: Term,
    conclusion: Term,
    bound: EnumerationBound,
    actual: Optional[str] = None,
    method: str = "sat",
    determiners: DeterminerTable = DEFAULT,
) -> Verdict:
    """Look for a model within ``bound`` where ``premise`` holds at the actual
    world and ``conclusion`` fails there.

    Sizes are tried smallest first; within a size the first counterexample
    in ``enumerate_models`` order is returned. ``method="enumerate"`` walks
    the models one by one; ``method="sat"`` finds the same model with a SAT
    solver and is the only practical choice beyond tiny bounds.
    """
    if bound is None:
        raise EvalError("a bound is required")
    _check_pair(premise, conclusion)
    sig = signature_of(premise, conclusion, determiners=determiners)
    for n_worlds, n_individuals in bound.sizes():
        worlds = world_names(n_worlds)
        here = actual or worlds[0]
        if here not in worlds:
            continue
        if method == "enumerate":
            size = EnumerationBound(n_worlds, n_individuals, bound.cap)
            for model in enumerate_models(sig, size):
                if evaluate(model, here, premise, determiners) and not evaluate(
                    model, here, conclusion, determiners
                ):
                    return Verdict(False, model, bound, here)
        elif method == "sat":
            from .sat import first_model

            model = first_model(sig, worlds, individual_names(n_individuals), here, premise, conclusion, determiners)
            if model is not None:
                return Verdict(False, model, bound, here)
        else:
            raise ValueError(f"unknown method {method!r}")
    return Verdict(True, None, bound, actual)


def equivalent(a: Term, b: Term, bound: EnumerationBound, **kwargs) -> bool:
    """Mutual entailment within ``bound``."""
    return bool(entails(a, b, bound, **kwargs)) and bool(entails(b, a, bound, **kwargs))


def distinguishing_model(a: Term, b: Term, bound: EnumerationBound, **kwargs) -> Optional[Model]:
    for p, c in ((a, b), (b, a)):
        verdict = entails(p, c, bound, **kwargs)
        if not verdict:
            return verdict.counterexample
    return None
