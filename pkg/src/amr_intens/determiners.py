"""Determiner table: AMR ``:quant`` values to generalized-quantifier constants.

Each entry has a kind that fixes its meaning:

``every``      restrictor is a subset of the scope
``exists``     restrictor and scope overlap (``a``, ``some``)
``at-least``   at least ``n`` things are in both (numerals)

Existential determiners also carry a lambda definition, which is unfolded
when the quantifier leaves the store, so ``a(violin)`` retrieved over
``φ`` becomes ``∃v (violin(v) ∧ φ)``.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Dict, Mapping, Optional

from .stlc import PROP, S, And, App, Const, E, Exists, Lam, T, Term, Var, arrow

ENV_VAR = "AMR_INTENS_DETERMINERS"

KINDS = ("every", "exists", "at-least")

_NUMBER_WORDS = ["zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"]

EXT = "extensional"
INT = "intensional"


def restrictor_type(regime: str):
    return arrow(E, T) if regime == EXT else arrow(E, PROP)


def gq_type(regime: str):
    """Type of a stored quantifier, D(P)."""
    return arrow(restrictor_type(regime), T if regime == EXT else PROP)


def det_type(regime: str):
    return arrow(restrictor_type(regime), gq_type(regime))


@dataclass(frozen=True)
class DeterminerConst:
    name: str  # the AMR constant, e.g. "every" or "2"
    const: str  # the STLC constant name
    kind: str
    n: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown determiner kind {self.kind!r}")

    def denotation(self, regime: str) -> Const:
        return Const(self.const, det_type(regime))

    def definition(self, regime: str, var: str = "x") -> Optional[Term]:
        """Lambda term for definable determiners, None for primitive ones."""
        if self.kind != "exists":
            return None
        r = Var("P", restrictor_type(regime))
        s = Var("Q", restrictor_type(regime))
        x = Var(var, E)
        if regime == EXT:
            return Lam(r, Lam(s, Exists(x, And(App(r, x), App(s, x)))))
        w = Var("w", S)
        return Lam(r, Lam(s, Lam(w, Exists(x, And(App(App(r, x), w), App(App(s, x), w))))))

    def holds(self, restrictor: set, scope: set) -> bool:
        """Truth of D(restrictor)(scope) over extensions."""
        if self.kind == "every":
            return restrictor <= scope
        if self.kind == "exists":
            return bool(restrictor & scope)
        return len(restrictor & scope) >= self.n


class UnknownDeterminer(KeyError):
    def __str__(self):
        return f"unknown determiner {self.args[0]!r}"


class DeterminerTable:
    def __init__(self, entries: Mapping[str, DeterminerConst]):
        self.by_name: Dict[str, DeterminerConst] = dict(entries)
        self.by_const: Dict[str, DeterminerConst] = {d.const: d for d in entries.values()}

    def lookup(self, symbol: str) -> DeterminerConst:
        if symbol in self.by_name:
            return self.by_name[symbol]
        if symbol.isdigit() and int(symbol) > 0:
            n = int(symbol)
            const = _NUMBER_WORDS[n] if n < len(_NUMBER_WORDS) else f"at-least-{n}"
            return DeterminerConst(symbol, const, "at-least", n)
        raise UnknownDeterminer(symbol)

    def for_const(self, const: str) -> Optional[DeterminerConst]:
        if const in self.by_const:
            return self.by_const[const]
        if const in _NUMBER_WORDS[1:]:
            return self.lookup(str(_NUMBER_WORDS.index(const)))
        if const.startswith("at-least-") and const[9:].isdigit():
            return self.lookup(const[9:])
        return None

    def with_overrides(self, overrides: Mapping[str, dict]) -> "DeterminerTable":
        entries = dict(self.by_name)
        for name, spec in overrides.items():
            entries[name] = DeterminerConst(
                name, spec.get("const", name), spec["kind"], int(spec.get("n", 1))
            )
        return DeterminerTable(entries)


DEFAULT = DeterminerTable(
    {
        "every": DeterminerConst("every", "every", "every"),
        "all": DeterminerConst("all", "every", "every"),
        "a": DeterminerConst("a", "a", "exists"),
        "some": DeterminerConst("some", "some", "exists"),
    }
)


def load_table(path: Optional[str] = None) -> DeterminerTable:
    """Default table, overridden by the JSON file at ``path`` or ``$AMR_INTENS_DETERMINERS``.

    The file maps AMR determiner symbols to ``{"const": ..., "kind": ..., "n": ...}``.
    """
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return DEFAULT
    with open(path, encoding="utf-8") as fh:
        return DEFAULT.with_overrides(json.load(fh))
