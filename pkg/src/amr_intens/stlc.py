"""Simply-typed lambda calculus with first-class conjunction and existentials.

Terms are immutable and type-checked on construction: building an
ill-typed term raises ``TypeMismatch``, so every ``Term`` in circulation
has a type available as ``term.type``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union


# --- types -----------------------------------------------------------------


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Arrow:
    src: "SimpleType"
    dst: "SimpleType"

    def __str__(self):
        left = f"({self.src})" if isinstance(self.src, Arrow) else str(self.src)
        return f"{left} -> {self.dst}"


SimpleType = Union[Base, Arrow]

E = Base("e")
T = Base("t")
S = Base("s")


def arrow(*types: SimpleType) -> SimpleType:
    """Right-associative arrow: ``arrow(e, e, t)`` is e -> (e -> t)."""
    if len(types) == 1:
        return types[0]
    return Arrow(types[0], arrow(*types[1:]))


PROP = Arrow(S, T)  # s -> t


def parse_type(text: str) -> SimpleType:
    tokens = re.findall(r"->|[()]|[est]", text.replace(" ", ""))
    if "".join(tokens) != text.replace(" ", ""):
        raise ValueError(f"bad type {text!r}")
    pos = 0

    def atom():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            ty = arr()
            if tokens[pos] != ")":
                raise ValueError(f"bad type {text!r}")
            pos += 1
            return ty
        return {"e": E, "t": T, "s": S}[tok]

    def arr():
        nonlocal pos
        left = atom()
        if pos < len(tokens) and tokens[pos] == "->":
            pos += 1
            return Arrow(left, arr())
        return left

    ty = arr()
    if pos != len(tokens):
        raise ValueError(f"bad type {text!r}")
    return ty


# --- terms -----------------------------------------------------------------


class TypeMismatch(TypeError):
    def __init__(self, message: str, subterm=None, expected=None, actual=None):
        super().__init__(message)
        self.subterm = subterm
        self.expected = expected
        self.actual = actual


class _Term:
    type: SimpleType

    def __call__(self, *args: "Term") -> "Term":
        out = self
        for a in args:
            out = App(out, a)
        return out

    def __and__(self, other: "Term") -> "Term":
        return And(self, other)

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True, eq=True)
class Var(_Term):
    name: str
    type: SimpleType = E

    def __repr__(self):
        return f"Var({self.name!r}, {self.type})"


@dataclass(frozen=True, eq=True)
class Const(_Term):
    name: str
    type: SimpleType = E

    def __repr__(self):
        return f"Const({self.name!r}, {self.type})"


@dataclass(frozen=True, eq=True)
class Lam(_Term):
    var: Var
    body: "Term"
    type: SimpleType = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "type", Arrow(self.var.type, self.body.type))


@dataclass(frozen=True, eq=True)
class App(_Term):
    fun: "Term"
    arg: "Term"
    type: SimpleType = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        ft = self.fun.type
        if not isinstance(ft, Arrow):
            raise TypeMismatch(
                f"cannot apply {pretty(self.fun)} of type {ft}", self.fun, "a function type", ft
            )
        if ft.src != self.arg.type:
            raise TypeMismatch(
                f"{pretty(self.fun)} expects {ft.src}, got {pretty(self.arg)} of type {self.arg.type}",
                self.arg,
                ft.src,
                self.arg.type,
            )
        object.__setattr__(self, "type", ft.dst)


@dataclass(frozen=True, eq=True)
class And(_Term):
    left: "Term"
    right: "Term"
    type: SimpleType = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        for side in (self.left, self.right):
            if side.type != T:
                raise TypeMismatch(f"conjunct {pretty(side)} has type {side.type}", side, T, side.type)
        object.__setattr__(self, "type", T)


@dataclass(frozen=True, eq=True)
class Exists(_Term):
    var: Var
    body: "Term"
    type: SimpleType = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.var.type != E:
            raise TypeMismatch(f"existential over {self.var.name} of type {self.var.type}", self.var, E, self.var.type)
        if self.body.type != T:
            raise TypeMismatch(f"existential body has type {self.body.type}", self.body, T, self.body.type)
        object.__setattr__(self, "type", T)


@dataclass(frozen=True, eq=True)
class _Top(_Term):
    type: SimpleType = field(default=T, init=False, compare=False, repr=False)

    def __repr__(self):
        return "Top"


Top = _Top()

Term = Union[Var, Const, Lam, App, And, Exists, _Top]


def type_of(term: Term) -> SimpleType:
    return term.type


def conj(*terms: Term) -> Term:
    """Left-nested conjunction of ``terms`` with ⊤ dropped."""
    parts = [t for t in terms if t != Top]
    if not parts:
        return Top
    out = parts[0]
    for t in parts[1:]:
        out = And(out, t)
    return out


def exists(variables: Iterable[Var], body: Term) -> Term:
    for v in reversed(list(variables)):
        body = Exists(v, body)
    return body


def lam(variables: Iterable[Var], body: Term) -> Term:
    for v in reversed(list(variables)):
        body = Lam(v, body)
    return body


# --- variables and substitution ------------------------------------------


def free_vars(term: Term) -> frozenset:
    if isinstance(term, Var):
        return frozenset({term})
    if isinstance(term, (Lam, Exists)):
        return free_vars(term.body) - {term.var}
    if isinstance(term, App):
        return free_vars(term.fun) | free_vars(term.arg)
    if isinstance(term, And):
        return free_vars(term.left) | free_vars(term.right)
    return frozenset()


def free_var_order(term: Term) -> List[Var]:
    """Free variables in order of first occurrence (left to right)."""
    seen: Dict[Var, None] = {}

    def walk(t, bound):
        if isinstance(t, Var):
            if t not in bound:
                seen.setdefault(t)
        elif isinstance(t, (Lam, Exists)):
            walk(t.body, bound | {t.var})
        elif isinstance(t, App):
            walk(t.fun, bound)
            walk(t.arg, bound)
        elif isinstance(t, And):
            walk(t.left, bound)
            walk(t.right, bound)

    walk(term, frozenset())
    return list(seen)


def all_names(term: Term) -> set:
    """Every variable name occurring in ``term``, bound or free."""
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, (Lam, Exists)):
        return {term.var.name} | all_names(term.body)
    if isinstance(term, App):
        return all_names(term.fun) | all_names(term.arg)
    if isinstance(term, And):
        return all_names(term.left) | all_names(term.right)
    return set()


_SUFFIX = re.compile(r"^(.*?)(\d*)$")


def fresh_name(base: str, avoid) -> str:
    """``base`` itself if free, else the smallest ``base2``, ``base3``, ..."""
    stem = _SUFFIX.match(base).group(1) or base
    if base not in avoid:
        return base
    for i in itertools.count(2):
        cand = f"{stem}{i}"
        if cand not in avoid:
            return cand


def substitute(term: Term, var: Var, value: Term) -> Term:
    """Capture-avoiding ``term[var := value]``."""
    return _subst(term, var, value, {v.name for v in free_vars(value)})


def _subst(term, var, value, value_fv_names):
    if isinstance(term, Var):
        return value if term == var else term
    if isinstance(term, (Const, _Top)):
        return term
    if isinstance(term, App):
        return App(_subst(term.fun, var, value, value_fv_names), _subst(term.arg, var, value, value_fv_names))
    if isinstance(term, And):
        return And(_subst(term.left, var, value, value_fv_names), _subst(term.right, var, value, value_fv_names))
    # binder
    bound = term.var
    if bound == var or var not in free_vars(term.body):
        return term
    body = term.body
    if bound.name in value_fv_names:
        avoid = value_fv_names | all_names(body) | {var.name}
        renamed = Var(fresh_name(bound.name, avoid), bound.type)
        body = _subst(body, bound, renamed, {renamed.name})
        bound = renamed
    return type(term)(bound, _subst(body, var, value, value_fv_names))


def rename_bound(term: Term, old: Var, new: Var) -> Term:
    return substitute(term, old, new)


# --- normalization -------------------------------------------------------


def beta_normalize(term: Term) -> Term:
    """Full beta-normal form; also removes ⊤ conjuncts."""
    if isinstance(term, (Var, Const, _Top)):
        return term
    if isinstance(term, Lam):
        return Lam(term.var, beta_normalize(term.body))
    if isinstance(term, Exists):
        return Exists(term.var, beta_normalize(term.body))
    if isinstance(term, And):
        left = beta_normalize(term.left)
        right = beta_normalize(term.right)
        if left == Top:
            return right
        if right == Top:
            return left
        return And(left, right)
    fun = beta_normalize(term.fun)
    if isinstance(fun, Lam):
        return beta_normalize(substitute(fun.body, fun.var, term.arg))
    return App(fun, beta_normalize(term.arg))


def reassociate(term: Term) -> Term:
    """Rebuild every conjunction chain left-nested, keeping conjunct order."""
    if isinstance(term, And):
        return conj(*(reassociate(c) for c in conjuncts(term)))
    if isinstance(term, Lam):
        return Lam(term.var, reassociate(term.body))
    if isinstance(term, Exists):
        return Exists(term.var, reassociate(term.body))
    if isinstance(term, App):
        return App(reassociate(term.fun), reassociate(term.arg))
    return term


def conjuncts(term: Term) -> List[Term]:
    if isinstance(term, And):
        return conjuncts(term.left) + conjuncts(term.right)
    return [term]


def name_worlds(term: Term, stem: str = "w") -> Term:
    """Rename world binders by nesting depth: w, w2, w3, ...

    Names already used for non-world variables are skipped.
    """
    taken = {n for n in all_names_typed(term) if n[1] != S}
    avoid = {n for n, _ in taken}
    names = []
    for i in itertools.count(1):
        cand = stem if i == 1 else f"{stem}{i}"
        if cand not in avoid:
            names.append(cand)
        if len(names) > _world_depth(term):
            break

    def walk(t, depth):
        if isinstance(t, Lam):
            if t.var.type == S:
                new = Var(names[depth], S)
                body = substitute(t.body, t.var, new) if new != t.var else t.body
                return Lam(new, walk(body, depth + 1))
            return Lam(t.var, walk(t.body, depth))
        if isinstance(t, Exists):
            return Exists(t.var, walk(t.body, depth))
        if isinstance(t, App):
            return App(walk(t.fun, depth), walk(t.arg, depth))
        if isinstance(t, And):
            return And(walk(t.left, depth), walk(t.right, depth))
        return t

    return walk(term, 0)


def all_names_typed(term: Term) -> set:
    if isinstance(term, Var):
        return {(term.name, term.type)}
    if isinstance(term, (Lam, Exists)):
        return {(term.var.name, term.var.type)} | all_names_typed(term.body)
    if isinstance(term, App):
        return all_names_typed(term.fun) | all_names_typed(term.arg)
    if isinstance(term, And):
        return all_names_typed(term.left) | all_names_typed(term.right)
    return set()


def _world_depth(term: Term) -> int:
    if isinstance(term, Lam):
        return _world_depth(term.body) + (term.var.type == S)
    if isinstance(term, Exists):
        return _world_depth(term.body)
    if isinstance(term, App):
        return max(_world_depth(term.fun), _world_depth(term.arg))
    if isinstance(term, And):
        return max(_world_depth(term.left), _world_depth(term.right))
    return 0


# --- equivalence ---------------------------------------------------------


def alpha_eq(a: Term, b: Term) -> bool:
    return _debruijn(a, {}, 0) == _debruijn(b, {}, 0)


def _debruijn(t, env, depth):
    if isinstance(t, Var):
        if t in env:
            return ("b", depth - env[t], str(t.type))
        return ("v", t.name, str(t.type))
    if isinstance(t, Const):
        return ("c", t.name, str(t.type))
    if t is Top or isinstance(t, _Top):
        return ("top",)
    if isinstance(t, App):
        return ("app", _debruijn(t.fun, env, depth), _debruijn(t.arg, env, depth))
    if isinstance(t, And):
        return ("and", _debruijn(t.left, env, depth), _debruijn(t.right, env, depth))
    kind = "lam" if isinstance(t, Lam) else "ex"
    inner = dict(env)
    inner[t.var] = depth + 1
    return (kind, str(t.var.type), _debruijn(t.body, inner, depth + 1))


def equiv_mod_ac_alpha(a: Term, b: Term) -> bool:
    """Equality up to bound-variable renaming, associativity/commutativity
    of conjunction, ⊤ units, and regrouping of existential prefixes.

    Existentials are pulled out of conjunctions before comparison
    (``φ ∧ ∃x ψ`` and ``∃x (φ ∧ ψ)`` compare equal). Bound variables are
    renamed apart first, so this never captures.
    """
    return a.type == b.type and canonical(a) == canonical(b)


def canonical(term: Term) -> str:
    """A string that is identical for terms equal modulo AC, alpha and ∃-grouping."""
    counter = itertools.count()
    return _canon(term, {}, 0, counter)


class _Hole:
    """Placeholder binder used while searching for a canonical naming."""

    __slots__ = ("label",)

    def __init__(self, label):
        self.label = label


def _canon(t, env, depth, counter):
    if isinstance(t, Var):
        if t in env:
            return env[t]
        return f"{t.name}:{t.type}"
    if isinstance(t, Const):
        return f"'{t.name}:{t.type}"
    if isinstance(t, Lam):
        name = f"L{depth}"
        inner = dict(env)
        inner[t.var] = name
        return f"(\\{name}:{t.var.type}.{_canon(t.body, inner, depth + 1, counter)})"
    if isinstance(t, App):
        return f"{_canon(t.fun, env, depth, counter)}[{_canon(t.arg, env, depth, counter)}]"
    # conjunction / existential / top block
    binders: List[Var] = []
    parts: List[Term] = []
    _flatten_block(t, binders, parts, counter)
    if not binders:
        strs = sorted(_canon(p, env, depth, counter) for p in parts)
        if not strs:
            return "T"
        return strs[0] if len(strs) == 1 else "&{" + ",".join(strs) + "}"
    return _canon_block(binders, parts, env, depth, counter)


def _flatten_block(t, binders, parts, counter):
    if isinstance(t, Exists):
        # rename apart so lifting past sibling conjuncts cannot capture
        fresh = Var(f"#x{next(counter)}", t.var.type)
        binders.append(fresh)
        _flatten_block(substitute(t.body, t.var, fresh), binders, parts, counter)
    elif isinstance(t, And):
        _flatten_block(t.left, binders, parts, counter)
        _flatten_block(t.right, binders, parts, counter)
    elif isinstance(t, _Top):
        pass
    else:
        parts.append(t)


def _canon_block(binders, parts, env, depth, counter):
    # group binders by a naming-independent signature, then try orderings
    # within groups only
    sigs = []
    for b in binders:
        probe = dict(env)
        for other in binders:
            probe[other] = "?"
        probe[b] = "#"
        sig = ",".join(sorted(_canon(p, probe, depth + 1, counter) for p in parts))
        sigs.append(sig)
    order = sorted(range(len(binders)), key=lambda i: sigs[i])
    groups = [list(g) for _, g in itertools.groupby(order, key=lambda i: sigs[i])]
    best = None
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        seq = [i for g in choice for i in g]
        inner = dict(env)
        for pos, i in enumerate(seq):
            inner[binders[i]] = f"X{depth}_{pos}"
        body = ",".join(sorted(_canon(p, inner, depth + 1, counter) for p in parts))
        cand = f"E{len(binders)}{{{body}}}"
        if best is None or cand < best:
            best = cand
    return best


# --- printing --------------------------------------------------------------

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_-]*$")
_NUM = re.compile(r"^[+-]?\d+(\.\d+)?$")


def _atom_name(name: str) -> str:
    if _IDENT.match(name) or _NUM.match(name) or name in ("-", "+") or name.startswith('"'):
        return name
    return '"' + name.replace('"', '\\"') + '"'


def pretty(term: Term, unicode: bool = False) -> str:
    """ASCII rendering: ``\\v . body``, ``exists a b . body``, ``&``, ``true``."""
    return _pp(term, unicode)


def _pp(t, uni):
    if isinstance(t, (Var, Const)):
        return _atom_name(t.name)
    if isinstance(t, _Top):
        return "⊤" if uni else "true"
    if isinstance(t, App):
        head = t
        args = []
        while isinstance(head, App):
            args.append(head.arg)
            head = head.fun
        h = _pp(head, uni)
        if not isinstance(head, (Var, Const, _Top)):
            h = f"({h})"
        return h + "".join(f"({_pp(a, uni)})" for a in reversed(args))
    if isinstance(t, And):
        left = _pp(t.left, uni)
        right = _pp(t.right, uni)
        if isinstance(t.left, (Lam, Exists)):
            left = f"({left})"
        if isinstance(t.right, (Lam, Exists, And)):
            right = f"({right})"
        return f"{left} {'∧' if uni else '&'} {right}"
    if isinstance(t, Lam):
        return (f"λ{t.var.name}. " if uni else f"\\{t.var.name} . ") + _pp(t.body, uni)
    names = []
    body = t
    while isinstance(body, Exists):
        names.append(body.var.name)
        body = body.body
    if uni:
        return f"∃{','.join(names)}. {_pp(body, uni)}"
    return f"exists {' '.join(names)} . {_pp(body, uni)}"


def to_json(term: Term) -> dict:
    """Nested dict AST: kind, type, optional name, children."""
    node = {"kind": type(term).__name__.lstrip("_"), "type": str(term.type)}
    if isinstance(term, (Var, Const)):
        node["name"] = term.name
        node["children"] = []
    elif isinstance(term, (Lam, Exists)):
        node["children"] = [to_json(term.var), to_json(term.body)]
    elif isinstance(term, App):
        node["children"] = [to_json(term.fun), to_json(term.arg)]
    elif isinstance(term, And):
        node["children"] = [to_json(term.left), to_json(term.right)]
    else:
        node["children"] = []
    return node


def subterms(term: Term) -> Iterator[Term]:
    yield term
    if isinstance(term, (Lam, Exists)):
        yield from subterms(term.body)
    elif isinstance(term, App):
        yield from subterms(term.fun)
        yield from subterms(term.arg)
    elif isinstance(term, And):
        yield from subterms(term.left)
        yield from subterms(term.right)


def constants(term: Term) -> Dict[str, SimpleType]:
    out = {}
    for sub in subterms(term):
        if isinstance(sub, Const):
            if out.get(sub.name, sub.type) != sub.type:
                raise TypeMismatch(f"constant {sub.name} used at two types", sub, out[sub.name], sub.type)
            out[sub.name] = sub.type
    return out


# --- reading ---------------------------------------------------------------

_READ_TOKEN = re.compile(
    r"""\s*(?:
      (?P<lam>\\|λ)
    | (?P<dot>\.)
    | (?P<amp>&|∧)
    | (?P<lp>\()
    | (?P<rp>\))
    | (?P<str>"(?:[^"\\]|\\.)*")
    | (?P<num>[+-]?\d+(?:\.\d+)?)
    | (?P<name>[A-Za-z_][A-Za-z0-9_-]*)
    | (?P<sym>[-+])
    )""",
    re.VERBOSE,
)


@dataclass
class _TV:
    id: int


class _Unifier:
    def __init__(self):
        self.parent: Dict[int, object] = {}
        self.n = 0

    def new(self):
        self.n += 1
        return _TV(self.n)

    def find(self, ty):
        while isinstance(ty, _TV) and ty.id in self.parent:
            ty = self.parent[ty.id]
        return ty

    def occurs(self, tv, ty):
        ty = self.find(ty)
        if isinstance(ty, _TV):
            return ty.id == tv.id
        if isinstance(ty, tuple):
            return self.occurs(tv, ty[0]) or self.occurs(tv, ty[1])
        return False

    def unify(self, a, b, where):
        a, b = self.find(a), self.find(b)
        if isinstance(a, _TV) and isinstance(b, _TV) and a.id == b.id:
            return
        if isinstance(b, _TV):
            a, b = b, a
        if isinstance(a, _TV):
            if self.occurs(a, b):
                raise TypeMismatch(f"cannot type {where}: infinite type")
            self.parent[a.id] = b
            return
        if isinstance(a, tuple) and isinstance(b, tuple):
            self.unify(a[0], b[0], where)
            self.unify(a[1], b[1], where)
            return
        if a != b:
            raise TypeMismatch(f"cannot type {where}")

    def resolve(self, ty, default):
        ty = self.find(ty)
        if isinstance(ty, _TV):
            self.parent[ty.id] = default
            return default
        if isinstance(ty, tuple):
            return Arrow(self.resolve(ty[0], default), self.resolve(ty[1], default))
        return ty


def _lift(ty: SimpleType):
    if isinstance(ty, Arrow):
        return (_lift(ty.src), _lift(ty.dst))
    return ty


_WORLDISH = re.compile(r"^w\d*$")


def read_term(
    text: str,
    signature: Optional[Dict[str, SimpleType]] = None,
    constants: Iterable[str] = (),
    variables: Iterable[str] = (),
) -> Term:
    """Parse the ASCII syntax produced by ``pretty`` back into a term.

    Types are inferred by unification. ``signature`` fixes the types of
    named constants. An unbound identifier becomes an individual variable
    when it infers to type e and a constant otherwise; names listed in
    ``constants`` are always constants and names listed in ``variables``
    are always free individual variables. Lambda binders left open default to
    s when named ``w``/``w2``/... and to e otherwise; any other open type
    becomes t.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _READ_TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot read term at {text[pos:pos + 20]!r}")
        tokens.append((m.lastgroup, m.group(m.lastgroup)))
        pos = m.end()
    tokens.append(("eof", ""))
    signature = dict(signature or {})
    forced = set(constants)
    u = _Unifier()
    const_types: Dict[str, object] = {}
    free_types: Dict[str, object] = {v: E for v in variables}
    binder_types: List[Tuple[str, object]] = []
    idx = 0

    def peek():
        return tokens[idx]

    def take(kind):
        nonlocal idx
        tok = tokens[idx]
        if tok[0] != kind:
            raise ValueError(f"expected {kind}, got {tok[1]!r}")
        idx += 1
        return tok[1]

    def starts_binder():
        return peek()[0] == "lam" or peek() == ("name", "exists")

    # every parser returns (node, type); nodes are tuples tagged by kind
    def term(scope):
        if peek()[0] == "lam":
            take("lam")
            name = take("name")
            take("dot")
            tv = u.new()
            binder_types.append((name, tv))
            body = term({**scope, name: tv})
            return ("lam", name, tv, body), (tv, body[1])
        if peek() == ("name", "exists"):
            take("name")
            names = []
            while peek()[0] == "name":
                names.append(take("name"))
            if not names:
                raise ValueError("exists without variables")
            take("dot")
            inner = dict(scope)
            for n in names:
                inner[n] = E
            body = term(inner)
            u.unify(body[1], T, "existential body")
            return ("ex", names, body), T
        return conjunction(scope)

    def conjunction(scope):
        left = application(scope)
        while peek()[0] == "amp":
            take("amp")
            right = term(scope) if starts_binder() else application(scope)
            u.unify(left[1], T, "conjunct")
            u.unify(right[1], T, "conjunct")
            left = ("and", left, right), T
        return left

    def application(scope):
        head = atom(scope)
        while peek()[0] == "lp":
            take("lp")
            arg = term(scope)
            take("rp")
            res = u.new()
            u.unify(head[1], (arg[1], res), "application")
            head = ("app", head, arg), res
        return head

    def atom(scope):
        kind, val = peek()
        if kind == "lp":
            take("lp")
            inner = term(scope)
            take("rp")
            return inner
        if kind == "name" and val == "true":
            take("name")
            return ("top",), T
        if kind == "name" and val in scope and val not in forced:
            take("name")
            return ("bound", val), scope[val]
        if kind in ("name", "str", "num", "sym"):
            take(kind)
            if kind == "name" and val not in forced and val not in signature:
                return ("free", val), free_types.setdefault(val, u.new())
            if val in signature:
                ty = const_types.setdefault(val, _lift(signature[val]))
            else:
                ty = const_types.setdefault(val, u.new() if kind == "name" else E)
            return ("const", val), ty
        raise ValueError(f"unexpected {val!r}")

    raw = term({})
    if peek()[0] != "eof":
        raise ValueError(f"trailing input {peek()[1]!r}")
    for name, tv in binder_types:
        u.resolve(tv, S if _WORLDISH.match(name) else E)

    def build(pair, env):
        node = pair[0]
        kind = node[0]
        if kind == "lam":
            _, name, tv, body = node
            v = Var(name, u.resolve(tv, E))
            return Lam(v, build(body, {**env, name: v}))
        if kind == "ex":
            _, names, body = node
            inner = dict(env)
            vs = []
            for name in names:
                inner[name] = Var(name, E)
                vs.append(inner[name])
            return exists(vs, build(body, inner))
        if kind == "and":
            return And(build(node[1], env), build(node[2], env))
        if kind == "app":
            return App(build(node[1], env), build(node[2], env))
        if kind == "top":
            return Top
        if kind == "bound":
            return env[node[1]]
        if kind == "free":
            ty = u.resolve(free_types[node[1]], T)
            return Var(node[1], ty) if ty == E else Const(node[1], ty)
        return Const(node[1], u.resolve(const_types[node[1]], T))

    return build(raw, {})
