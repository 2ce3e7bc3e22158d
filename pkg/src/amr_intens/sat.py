"""Bounded model search by grounding terms to propositional logic.

Each Boolean model atom of ``evaluator.atoms`` becomes a SAT variable
(numbered in enumeration order); quantifiers and ``cont`` are expanded over
the finite domain and worlds, and a Tseitin encoding feeds the solver.
Fixing atoms one at a time, false before true, recovers the first
counterexample in enumeration order without walking the models.
"""
from __future__ import annotations

import itertools
from typing import Dict, List, Optional

from pysat.solvers import Solver

from .determiners import EXT, DeterminerTable
from .evaluator import EvalError, Signature, atoms, build_model, classify
from .stlc import PROP, And, App, Const, Exists, Lam, Term, Var, _Top

SOLVER = "cadical153"


class _Cnf:
    """Tseitin builder; literals are ints, constants are Python bools."""

    def __init__(self, first_free: int):
        self.top = first_free - 1
        self.clauses: List[List[int]] = []
        self._cache: Dict[tuple, int] = {}

    def new(self) -> int:
        self.top += 1
        return self.top

    @staticmethod
    def neg(a):
        if isinstance(a, bool):
            return not a
        return -a

    def and_(self, items):
        lits = set()
        for a in items:
            if a is False:
                return False
            if a is True:
                continue
            lits.add(a)
        if not lits:
            return True
        if len(lits) == 1:
            return next(iter(lits))
        if any(-a in lits for a in lits):
            return False
        key = ("and", frozenset(lits))
        if key in self._cache:
            return self._cache[key]
        v = self.new()
        for a in lits:
            self.clauses.append([-v, a])
        self.clauses.append([v] + [-a for a in lits])
        self._cache[key] = v
        return v

    def or_(self, items):
        return self.neg(self.and_([self.neg(a) for a in items]))


class _Grounder:
    def __init__(self, cnf: _Cnf, ids: Dict[tuple, int], worlds, domain, here, consts, dets: DeterminerTable):
        self.cnf = cnf
        self.ids = ids
        self.worlds = worlds
        self.domain = domain
        self.here = here
        self.consts = consts
        self.dets = dets

    def atom(self, key):
        return self.ids[key]

    def den(self, t: Term, env):
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
            return self.cnf.and_([self.den(t.left, env), self.den(t.right, env)])
        if isinstance(t, Exists):
            return self.cnf.or_([self.den(t.body, {**env, t.var: d}) for d in self.domain])
        if isinstance(t, Lam):
            return lambda v, t=t, env=env: self.den(t.body, {**env, t.var: v})
        raise EvalError(f"cannot ground {t!r}")

    def const(self, c: Const):
        kind, regime = classify(c, self.dets)
        name, here, cnf, atom = c.name, self.here, self.cnf, self.atom
        if kind == "pred":
            if regime == EXT:
                return lambda x: atom(("pred", name, here, x))
            return lambda x: lambda w: atom(("pred", name, w, x))
        if kind == "role":
            if regime == EXT:
                return lambda x: lambda y: atom(("role", name, here, x, y))
            return lambda x: lambda y: lambda w: atom(("role", name, w, x, y))
        if kind == "cont":
            return lambda x: lambda p: lambda w: cnf.and_(
                [cnf.or_([-atom(("content", x, w, v)), p(v)]) for v in self.worlds]
            )
        if kind == "entity":
            return self.consts[name]
        det = self.dets.for_const(name)
        if regime == EXT:
            return lambda P: lambda Q: self.quantify(det, [P(d) for d in self.domain], [Q(d) for d in self.domain])
        return lambda P: lambda Q: lambda w: self.quantify(
            det, [P(d)(w) for d in self.domain], [Q(d)(w) for d in self.domain]
        )

    def quantify(self, det, restr, scope):
        cnf = self.cnf
        if det.kind == "every":
            return cnf.and_([cnf.or_([cnf.neg(r), s]) for r, s in zip(restr, scope)])
        both = [cnf.and_([r, s]) for r, s in zip(restr, scope)]
        n = 1 if det.kind == "exists" else det.n
        if n > len(both):
            return False
        return cnf.or_([cnf.and_(list(group)) for group in itertools.combinations(both, n)])


def first_model(
    signature: Signature,
    worlds,
    domain,
    here: str,
    premise: Term,
    conclusion: Term,
    determiners: DeterminerTable,
):
    """First model (in enumeration order) where premise holds and conclusion
    fails at ``here``, or None."""
    order = atoms(signature, worlds, domain)
    ids = {a: i + 1 for i, a in enumerate(order)}
    cnf = _Cnf(len(order) + 1)
    # one-hot choice of denotation for each individual constant
    const_lits = {c: {d: cnf.new() for d in domain} for c in signature.constants}
    for c, by_d in const_lits.items():
        lits = list(by_d.values())
        cnf.clauses.append(lits)
        cnf.clauses.extend([-a, -b] for a, b in itertools.combinations(lits, 2))

    def ground(term, consts):
        g = _Grounder(cnf, ids, worlds, domain, here, consts, determiners)
        value = g.den(term, {})
        return value(here) if term.type == PROP else value

    cases = []
    for combo in itertools.product(domain, repeat=len(signature.constants)):
        consts = dict(zip(signature.constants, combo))
        guard = [const_lits[c][d] for c, d in consts.items()]
        goal = cnf.and_([ground(premise, consts), cnf.neg(ground(conclusion, consts))])
        cases.append(cnf.and_(guard + [goal]))
    root = cnf.or_(cases)
    if root is False:
        return None
    if root is not True:
        cnf.clauses.append([root])

    with Solver(name=SOLVER, bootstrap_with=cnf.clauses) as solver:
        if not solver.solve():
            return None
        fixed: List[int] = []
        for i in range(1, len(order) + 1):
            lit = -i if solver.solve(assumptions=fixed + [-i]) else i
            fixed.append(lit)
        chosen = {}
        for c in signature.constants:
            for d in domain:
                if solver.solve(assumptions=fixed + [const_lits[c][d]]):
                    fixed.append(const_lits[c][d])
                    chosen[c] = d
                    break
    truth = {a: fixed[ids[a] - 1] > 0 for a in order}
    return build_model(signature, worlds, domain, truth, chosen)
