"""Lambda terms in spine form with nameless bound variables.

Terms are immutable and hash-consed only by value: two structurally equal
terms compare and hash equal, and since bound variables are de Bruijn
indices, alpha-equivalent terms are structurally equal.

Every node caches its type, ``lb`` (one plus the largest loose bound index,
0 for terms without loose bound variables) and whether it contains free
variables, so that shifting and substitution can skip closed subterms.
"""

from __future__ import annotations

import contextlib
import contextvars
import itertools
from typing import Iterator, Mapping, Sequence

from .types import BaseType, FunType, I, O, TypeExpr, arrow, drop_args, split_type


class TermError(TypeError):
    """Raised for ill-typed term construction or invalid positions."""


class Term:
    __slots__ = ("ty", "lb", "has_vars", "size", "_hash", "_nf")

    def __repr__(self) -> str:
        return show(self)

    def __hash__(self) -> int:
        return self._hash


class Const(Term):
    __slots__ = ("name",)

    def __init__(self, name: str, ty: TypeExpr):
        self.name = name
        self.ty = ty
        self.lb = 0
        self.has_vars = False
        self.size = 1
        self._hash = hash(("c", name, ty))
        self._nf = True

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (
            type(other) is Const and self._hash == other._hash
            and self.name == other.name and self.ty == other.ty)


class Var(Term):
    """Free variable, identified by a numeric id."""

    __slots__ = ("id",)

    def __init__(self, id: int, ty: TypeExpr):
        self.id = id
        self.ty = ty
        self.lb = 0
        self.has_vars = True
        self.size = 1
        self._hash = hash(("v", id))
        self._nf = True

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is Var and self.id == other.id and self.ty == other.ty)


class Bound(Term):
    __slots__ = ("index",)

    def __init__(self, index: int, ty: TypeExpr):
        if index < 0:
            raise TermError("negative de Bruijn index")
        self.index = index
        self.ty = ty
        self.lb = index + 1
        self.has_vars = False
        self.size = 1
        self._hash = hash(("b", index, ty))
        self._nf = True

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (
            type(other) is Bound and self.index == other.index and self.ty == other.ty)


class Lam(Term):
    __slots__ = ("binder", "body")

    def __init__(self, binder: TypeExpr, body: Term):
        self.binder = binder
        self.body = body
        self.ty = FunType(binder, body.ty)
        self.lb = max(body.lb - 1, 0)
        self.has_vars = body.has_vars
        self.size = body.size + 1
        self._hash = hash(("l", binder, body._hash))
        self._nf = False

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (
            type(other) is Lam and self._hash == other._hash
            and self.binder == other.binder and self.body == other.body)


class App(Term):
    __slots__ = ("head", "args")

    def __init__(self, head: Term, args: Sequence[Term]):
        if isinstance(head, App):
            args = head.args + tuple(args)
            head = head.head
        args = tuple(args)
        if not args:
            raise TermError("application without arguments")
        ty = head.ty
        for a in args:
            if not isinstance(ty, FunType):
                raise TermError(f"{show(head)} of type {head.ty} applied to too many arguments")
            if ty.arg != a.ty:
                raise TermError(
                    f"argument {show(a)} : {a.ty} does not fit {show(head)} : {head.ty}")
            ty = ty.res
        self.head = head
        self.args = args
        self.ty = ty
        self.lb = max([head.lb] + [a.lb for a in args])
        self.has_vars = head.has_vars or any(a.has_vars for a in args)
        self.size = head.size + sum(a.size for a in args)
        self._hash = hash(("a", head._hash, tuple(a._hash for a in args)))
        self._nf = False

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (
            type(other) is App and self._hash == other._hash
            and self.head == other.head and self.args == other.args)


def mk_app(head: Term, args: Sequence[Term]) -> Term:
    return App(head, args) if args else head


def head_args(t: Term) -> tuple[Term, tuple[Term, ...]]:
    if isinstance(t, App):
        return t.head, t.args
    return t, ()


def mk_lams(binders: Sequence[TypeExpr], body: Term) -> Term:
    """Wrap ``body`` in lambdas; ``binders`` lists binder types outermost first."""
    for ty in reversed(binders):
        body = Lam(ty, body)
    return body


def strip_lams(t: Term) -> tuple[list[TypeExpr], Term]:
    binders = []
    while isinstance(t, Lam):
        binders.append(t.binder)
        t = t.body
    return binders, t


# ---------------------------------------------------------------------------
# logical signature

TRUE = Const("$true", O)
NOT = Const("$not", arrow(O, O))
OR = Const("$or", arrow(O, O, O))
FALSE = App(NOT, (TRUE,))
FALSE._nf = True


def pi(ty: TypeExpr) -> Const:
    return Const("$pi", arrow(arrow(ty, O), O))


def eq(ty: TypeExpr) -> Const:
    return Const("$eq", arrow(ty, ty, O))


def choice(ty: TypeExpr) -> Const:
    return Const("$choice", arrow(arrow(ty, O), ty))


LOGICAL_NAMES = frozenset({"$true", "$not", "$or", "$pi", "$eq", "$choice"})


def is_logical(t: Term) -> bool:
    return isinstance(t, Const) and t.name in LOGICAL_NAMES


def is_choice_const(t: Term) -> bool:
    return isinstance(t, Const) and t.name == "$choice"


def quantified_type(pi_const: Const) -> TypeExpr:
    return pi_const.ty.arg.arg


def mk_not(a: Term) -> Term:
    return App(NOT, (a,))


def mk_or(a: Term, b: Term) -> Term:
    return App(OR, (a, b))


def mk_and(a: Term, b: Term) -> Term:
    return mk_not(mk_or(mk_not(a), mk_not(b)))


def mk_imp(a: Term, b: Term) -> Term:
    return mk_or(mk_not(a), b)


def mk_eq(a: Term, b: Term) -> Term:
    if a.ty != b.ty:
        raise TermError(f"equation between {a.ty} and {b.ty}")
    return App(eq(a.ty), (a, b))


def mk_iff(a: Term, b: Term) -> Term:
    return mk_eq(a, b)


def mk_forall(ty: TypeExpr, body: Term) -> Term:
    """``body`` lives under one new binder (index 0)."""
    return App(pi(ty), (Lam(ty, body),))


def mk_exists(ty: TypeExpr, body: Term) -> Term:
    return mk_not(mk_forall(ty, mk_not(body)))


def mk_ors(parts: Sequence[Term]) -> Term:
    if not parts:
        return FALSE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = mk_or(p, out)
    return out


def mk_ands(parts: Sequence[Term]) -> Term:
    if not parts:
        return TRUE
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = mk_and(p, out)
    return out


# ---------------------------------------------------------------------------
# fresh names

class FreshSupply:
    """Mints free-variable ids, fresh symbol names and clause ids.

    One supply per prover run keeps runs reproducible; names listed in
    ``reserved`` are never handed out.
    """

    def __init__(self, reserved: Sequence[str] = ()):
        self._vars = itertools.count(1)
        self._syms = itertools.count(1)
        self._ids = itertools.count(1)
        self.reserved = set(reserved)

    def var(self, ty: TypeExpr) -> Var:
        return Var(next(self._vars), ty)

    def symbol(self, prefix: str, ty: TypeExpr) -> Const:
        while True:
            name = f"{prefix}{next(self._syms)}"
            if name not in self.reserved:
                self.reserved.add(name)
                return Const(name, ty)

    def clause_id(self) -> int:
        return next(self._ids)

    def bump_vars(self, above: int) -> None:
        """Make sure future variable ids exceed ``above``."""
        cur = next(self._vars)
        if cur <= above:
            self._vars = itertools.count(above + 1)
        else:
            self._vars = itertools.count(cur)


_SUPPLY: contextvars.ContextVar[FreshSupply] = contextvars.ContextVar(
    "hoprover_fresh", default=FreshSupply())


def supply() -> FreshSupply:
    return _SUPPLY.get()


@contextlib.contextmanager
def fresh_scope(s: FreshSupply | None = None) -> Iterator[FreshSupply]:
    s = s or FreshSupply()
    token = _SUPPLY.set(s)
    try:
        yield s
    finally:
        _SUPPLY.reset(token)


def fresh_var(ty: TypeExpr) -> Var:
    return supply().var(ty)


# ---------------------------------------------------------------------------
# de Bruijn plumbing

def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Add ``d`` to every loose bound index >= ``cutoff``."""
    if d == 0 or t.lb <= cutoff:
        return t
    if isinstance(t, Bound):
        return Bound(t.index + d, t.ty)
    if isinstance(t, Lam):
        return Lam(t.binder, shift(t.body, d, cutoff + 1))
    if isinstance(t, App):
        return App(shift(t.head, d, cutoff), [shift(a, d, cutoff) for a in t.args])
    return t


def _subst_bound(t: Term, arg: Term, depth: int) -> Term:
    """Replace loose index ``depth`` by ``arg`` and lower the ones above it."""
    if t.lb <= depth:
        return t
    if isinstance(t, Bound):
        if t.index == depth:
            return shift(arg, depth)
        return Bound(t.index - 1, t.ty)
    if isinstance(t, Lam):
        return Lam(t.binder, _subst_bound(t.body, arg, depth + 1))
    if isinstance(t, App):
        return App(_subst_bound(t.head, arg, depth),
                   [_subst_bound(a, arg, depth) for a in t.args])
    return t


def instantiate(body: Term, arg: Term) -> Term:
    """Beta step: ``body`` is the body of a lambda, ``arg`` its argument."""
    return _subst_bound(body, arg, 0)


def loose_in(t: Term, index: int) -> bool:
    if t.lb <= index:
        return False
    if isinstance(t, Bound):
        return t.index == index
    if isinstance(t, Lam):
        return loose_in(t.body, index + 1)
    if isinstance(t, App):
        return loose_in(t.head, index) or any(loose_in(a, index) for a in t.args)
    return False


def loose_indices(t: Term, depth: int = 0) -> set[int]:
    """Loose bound indices of ``t`` (relative to its top)."""
    out: set[int] = set()

    def go(u: Term, d: int):
        if u.lb <= d:
            return
        if isinstance(u, Bound):
            out.add(u.index - d)
        elif isinstance(u, Lam):
            go(u.body, d + 1)
        elif isinstance(u, App):
            go(u.head, d)
            for a in u.args:
                go(a, d)

    go(t, depth)
    return out


# ---------------------------------------------------------------------------
# normalization

def beta_eta_normalize(t: Term) -> Term:
    if t._nf:
        return t
    if isinstance(t, Lam):
        body = beta_eta_normalize(t.body)
        out = _eta_contract(t.binder, body)
    elif isinstance(t, App):
        head = t.head
        if isinstance(head, Lam):
            reduced = instantiate(head.body, t.args[0])
            return beta_eta_normalize(mk_app(reduced, t.args[1:]))
        out = App(head, [beta_eta_normalize(a) for a in t.args])
    else:
        return t
    out._nf = True
    return out


normalize = beta_eta_normalize


def _eta_contract(binder: TypeExpr, body: Term) -> Term:
    if isinstance(body, App):
        last = body.args[-1]
        if isinstance(last, Bound) and last.index == 0:
            rest = body.args[:-1]
            if not loose_in(body.head, 0) and not any(loose_in(a, 0) for a in rest):
                out = shift(mk_app(body.head, rest), -1)
                out._nf = True
                return out
    out = Lam(binder, body)
    out._nf = True
    return out


def eta_expand_once(t: Term) -> Term:
    """``t`` of type a > b becomes ``^[x:a]: t x`` (not re-contracted)."""
    if not isinstance(t.ty, FunType):
        raise TermError("eta expansion of a non-function term")
    if isinstance(t, Lam):
        return t
    return Lam(t.ty.arg, mk_app(shift(t, 1), [Bound(0, t.ty.arg)]))


def apply_term(f: Term, args: Sequence[Term]) -> Term:
    return beta_eta_normalize(mk_app(f, args))


# ---------------------------------------------------------------------------
# free variables and substitution

def free_vars(t: Term) -> dict[int, Var]:
    """Free variables in first-occurrence order."""
    out: dict[int, Var] = {}

    def go(u: Term):
        if not u.has_vars:
            return
        if isinstance(u, Var):
            out.setdefault(u.id, u)
        elif isinstance(u, Lam):
            go(u.body)
        elif isinstance(u, App):
            go(u.head)
            for a in u.args:
                go(a)

    go(t)
    return out


def occurs(var_id: int, t: Term) -> bool:
    if not t.has_vars:
        return False
    if isinstance(t, Var):
        return t.id == var_id
    if isinstance(t, Lam):
        return occurs(var_id, t.body)
    if isinstance(t, App):
        return occurs(var_id, t.head) or any(occurs(var_id, a) for a in t.args)
    return False


def constants(t: Term, acc: dict | None = None) -> dict[tuple, Const]:
    acc = {} if acc is None else acc
    if isinstance(t, Const):
        acc.setdefault((t.name, t.ty), t)
    elif isinstance(t, Lam):
        constants(t.body, acc)
    elif isinstance(t, App):
        constants(t.head, acc)
        for a in t.args:
            constants(a, acc)
    return acc


def replace_vars(t: Term, mapping: Mapping[int, Term]) -> Term:
    """Plain replacement of free variables, without normalizing."""
    if not t.has_vars:
        return t
    if isinstance(t, Var):
        return mapping.get(t.id, t)
    if isinstance(t, Lam):
        return Lam(t.binder, replace_vars(t.body, mapping))
    if isinstance(t, App):
        return App(replace_vars(t.head, mapping), [replace_vars(a, mapping) for a in t.args])
    return t


class Substitution:
    """Finite map from free-variable ids to closed terms of matching type."""

    __slots__ = ("_map", "_vars")

    def __init__(self, bindings: Mapping[Var, Term] | None = None):
        self._map: dict[int, Term] = {}
        self._vars: dict[int, Var] = {}
        for v, t in (bindings or {}).items():
            self._bind(v, t)

    def _bind(self, v: Var, t: Term) -> None:
        if not isinstance(v, Var):
            raise TermError(f"substitution domain must be free variables, got {show(v)}")
        if v.ty != t.ty:
            raise TermError(f"binding {show(v)} : {v.ty} to {show(t)} : {t.ty}")
        if t.lb:
            raise TermError(f"binding {show(v)} to a term with loose bound variables")
        self._map[v.id] = beta_eta_normalize(t)
        self._vars[v.id] = v

    @classmethod
    def single(cls, v: Var, t: Term) -> "Substitution":
        return cls({v: t})

    def __contains__(self, v) -> bool:
        key = v.id if isinstance(v, Var) else v
        return key in self._map

    def __getitem__(self, v) -> Term:
        key = v.id if isinstance(v, Var) else v
        return self._map[key]

    def get(self, v, default=None):
        key = v.id if isinstance(v, Var) else v
        return self._map.get(key, default)

    def __len__(self) -> int:
        return len(self._map)

    def __bool__(self) -> bool:
        return bool(self._map)

    def items(self) -> list[tuple[Var, Term]]:
        return [(self._vars[k], t) for k, t in self._map.items()]

    def domain(self) -> list[Var]:
        return list(self._vars.values())

    def __eq__(self, other):
        return isinstance(other, Substitution) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{show(v)} -> {show(t)}" for v, t in self.items())
        return "{" + inner + "}"

    def apply(self, t: Term) -> Term:
        if not self._map or not t.has_vars:
            return beta_eta_normalize(t)
        return beta_eta_normalize(replace_vars(t, self._map))

    __call__ = apply

    def compose(self, after: "Substitution") -> "Substitution":
        """``after`` applied after ``self`` (``after . self``)."""
        out = Substitution()
        for v, t in self.items():
            out._map[v.id] = after.apply(t)
            out._vars[v.id] = v
        for v, t in after.items():
            if v.id not in out._map:
                out._map[v.id] = t
                out._vars[v.id] = v
        return out

    def restrict(self, ids) -> "Substitution":
        ids = set(ids)
        out = Substitution()
        for v, t in self.items():
            if v.id in ids:
                out._map[v.id] = t
                out._vars[v.id] = v
        return out

    def is_idempotent(self) -> bool:
        return all(self.apply(t) == t for t in self._map.values())


def substitute(t: Term, sigma: Substitution | Mapping[Var, Term]) -> Term:
    if not isinstance(sigma, Substitution):
        sigma = Substitution(sigma)
    return sigma.apply(t)


def abstract(t: Term, v: Var) -> Term:
    """``^[v]: t`` with ``v`` turned into the new bound variable."""

    def go(u: Term, d: int) -> Term:
        if not u.has_vars and u.lb == 0:
            return u
        if isinstance(u, Var):
            return Bound(d, u.ty) if u.id == v.id else u
        if isinstance(u, Bound):
            return Bound(u.index + 1, u.ty) if u.index >= d else u
        if isinstance(u, Lam):
            return Lam(u.binder, go(u.body, d + 1))
        if isinstance(u, App):
            return App(go(u.head, d), [go(a, d) for a in u.args])
        return u

    return Lam(v.ty, go(t, 0))


# ---------------------------------------------------------------------------
# positions

Position = tuple


def subterm_at(t: Term, pos: Sequence[int]) -> Term:
    """Follow ``pos``: 0 descends into a lambda body, i >= 1 picks spine argument i."""
    for step in pos:
        if isinstance(t, Lam) and step == 0:
            t = t.body
        elif isinstance(t, App) and 1 <= step <= len(t.args):
            t = t.args[step - 1]
        else:
            raise TermError(f"invalid position {tuple(pos)}")
    return t


def replace_at(t: Term, pos: Sequence[int], r: Term) -> Term:
    pos = tuple(pos)
    if not pos:
        if r.ty != t.ty:
            raise TermError(f"replacement of type {r.ty} for subterm of type {t.ty}")
        return r
    step, rest = pos[0], pos[1:]
    if isinstance(t, Lam) and step == 0:
        return Lam(t.binder, replace_at(t.body, rest, r))
    if isinstance(t, App) and 1 <= step <= len(t.args):
        args = list(t.args)
        args[step - 1] = replace_at(args[step - 1], rest, r)
        return App(t.head, args)
    raise TermError(f"invalid position {pos}")


def positions(t: Term, prefix: tuple = ()) -> Iterator[tuple[tuple, Term]]:
    """All (position, subterm) pairs, root first, heads excluded."""
    yield prefix, t
    if isinstance(t, Lam):
        yield from positions(t.body, prefix + (0,))
    elif isinstance(t, App):
        for i, a in enumerate(t.args, 1):
            yield from positions(a, prefix + (i,))


# ---------------------------------------------------------------------------
# typing

def type_of(t: Term, context: Sequence[TypeExpr] = ()) -> TypeExpr:
    """Type-check ``t`` completely.  ``context`` lists enclosing binder types,
    innermost last."""
    ctx = list(context)

    def go(u: Term) -> TypeExpr:
        if isinstance(u, (Const, Var)):
            return u.ty
        if isinstance(u, Bound):
            if u.index >= len(ctx):
                raise TermError(f"bound index {u.index} escapes its binders")
            if ctx[-1 - u.index] != u.ty:
                raise TermError(f"bound variable {u.index} annotated {u.ty}, "
                                f"binder has {ctx[-1 - u.index]}")
            return u.ty
        if isinstance(u, Lam):
            ctx.append(u.binder)
            try:
                b = go(u.body)
            finally:
                ctx.pop()
            return FunType(u.binder, b)
        if isinstance(u, App):
            if isinstance(u.head, App):
                raise TermError("spine head is an application")
            ty = go(u.head)
            for a in u.args:
                at = go(a)
                if not isinstance(ty, FunType) or ty.arg != at:
                    raise TermError(f"ill-typed application of {show(u.head)}")
                ty = ty.res
            return ty
        raise TermError(f"not a term: {u!r}")

    return go(t)


def is_normal(t: Term) -> bool:
    return beta_eta_normalize(t) == t


# ---------------------------------------------------------------------------
# debugging printer

_SHOW = {"$true": "T", "$not": "~", "$or": "|", "$pi": "!", "$eq": "=", "$choice": "@+"}


def show(t: Term, names: tuple = ()) -> str:
    if isinstance(t, Const):
        return _SHOW.get(t.name, t.name)
    if isinstance(t, Var):
        return f"V{t.id}"
    if isinstance(t, Bound):
        if t.index < len(names):
            return names[-1 - t.index]
        return f"#{t.index}"
    if isinstance(t, Lam):
        n = f"x{len(names)}"
        return f"(^{n}. {show(t.body, names + (n,))})"
    if isinstance(t, App):
        return "(" + " ".join([show(t.head, names)] + [show(a, names) for a in t.args]) + ")"
    return object.__repr__(t)


__all__ = [
    "App", "Bound", "Const", "Lam", "Term", "TermError", "Var", "Substitution",
    "FreshSupply", "TRUE", "FALSE", "NOT", "OR", "pi", "eq", "choice",
    "beta_eta_normalize", "normalize", "substitute", "subterm_at", "replace_at",
    "type_of", "fresh_var", "fresh_scope", "supply", "I", "O", "BaseType",
]
