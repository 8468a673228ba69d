"""Finite standard models of simple type theory, evaluated with numpy.

Every type denotes a finite set whose elements are numbered: ``$o`` is
{0, 1}, a base type of size ``n`` is {0..n-1}, and a function type
``a > b`` is the set of all tables, an element being the mixed-radix
number ``sum(f(x) * |b|**x)``.  Terms are evaluated for a whole batch of
interpretations at once: values are integer arrays broadcast against the
batch axes, and every binder adds one leading axis.

This is a test oracle: it decides truth in full (standard) models with
small domains, which is enough to catch unsound inference steps and to
look for countermodels of embedded modal formulas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .terms import App, Bound, Const, Lam, Term, Var, constants, free_vars, head_args, shift
from .types import O, BaseType, FunType, TypeExpr

MAX_ELEMENT = 2 ** 62


class TooLarge(Exception):
    """The structure or the interpretation space exceeds the budget."""


def type_size(ty: TypeExpr, sizes: Mapping) -> int:
    if ty == O:
        return 2
    if isinstance(ty, FunType):
        a, b = type_size(ty.arg, sizes), type_size(ty.res, sizes)
        if a * b.bit_length() > 62:
            raise TooLarge(f"type {ty} has more than 2**62 elements")
        return b ** a
    try:
        return sizes[ty]
    except KeyError:
        raise KeyError(f"no domain size given for base type {ty}") from None


_ARITY = {"$true": 0, "$not": 1, "$or": 2, "$eq": 2, "$pi": 1, "$choice": 1}


class Evaluator:
    """Evaluate terms of one signature over a batch of interpretations.

    ``interp`` maps each constant (as a ``Const``) to an integer array;
    all arrays must broadcast together, their common shape forming the
    batch.  Free variables are looked up in ``env``.
    """

    def __init__(self, sizes: Mapping, interp: Mapping[Const, np.ndarray],
                 env: Mapping[int, np.ndarray] | None = None, choice: str = "first"):
        self.sizes = dict(sizes)
        self.interp = dict(interp)
        self.env = dict(env or {})
        self._size_cache: dict = {}
        shapes = [np.shape(v) for v in list(self.interp.values()) + list(self.env.values())]
        self.base_ndim = max((len(s) for s in shapes), default=0)

    def size(self, ty: TypeExpr) -> int:
        n = self._size_cache.get(ty)
        if n is None:
            n = self._size_cache[ty] = type_size(ty, self.sizes)
        return n

    # -- helpers ---------------------------------------------------------------

    def _binder(self, n: int, ndim: int) -> np.ndarray:
        return np.arange(n, dtype=np.int64).reshape((n,) + (1,) * ndim)

    @staticmethod
    def _lead(r, ndim: int) -> np.ndarray:
        r = np.asarray(r, dtype=np.int64)
        return r.reshape((1,) * (ndim + 1 - r.ndim) + r.shape)

    def apply(self, f, a, res: TypeExpr):
        m = self.size(res)
        if m == 1:
            return np.zeros(np.broadcast(f, a).shape, dtype=np.int64)
        return (f // np.power(np.int64(m), a)) % m

    # -- evaluation ------------------------------------------------------------

    def value(self, t: Term, stack: Sequence = (), ndim: int | None = None):
        if ndim is None:
            ndim = self.base_ndim
        return self._ev(t, list(stack), ndim)

    def truth(self, t: Term) -> np.ndarray:
        return np.asarray(self.value(t), dtype=bool)

    def _ev(self, t: Term, stack: list, ndim: int):
        if isinstance(t, Bound):
            return stack[-1 - t.index]
        if isinstance(t, Var):
            return self.env[t.id]
        if isinstance(t, Lam):
            n, m = self.size(t.binder), self.size(t.body.ty)
            x = self._binder(n, ndim)
            r = self._lead(self._ev(t.body, stack + [x], ndim + 1), ndim)
            r = np.broadcast_to(r, (n,) + r.shape[1:])
            w = np.power(np.int64(m), np.arange(n, dtype=np.int64)).reshape((n,) + (1,) * (r.ndim - 1))
            return (r * w).sum(axis=0)
        h, args = head_args(t)
        if isinstance(h, Const) and h.name in _ARITY:
            k = _ARITY[h.name]
            if len(args) < k:
                return self._ev(_eta_expand(t), stack, ndim)
            val = self._logical(h, args[:k], stack, ndim)
            rest, ty = args[k:], _res_type(h.ty, k)
        else:
            if isinstance(h, Const):
                if h not in self.interp:
                    raise KeyError(f"no interpretation for {h.name}")
                val = self.interp[h]
            else:
                val = self._ev(h, stack, ndim)
            rest, ty = args, h.ty
        for a in rest:
            ty = ty.res
            val = self.apply(val, self._ev(a, stack, ndim), ty)
        return val

    def _over(self, p: Term, ty: TypeExpr, stack: list, ndim: int):
        """Values of ``p x`` for every ``x`` of type ``ty``, along a new
        leading axis."""
        n = self.size(ty)
        x = self._binder(n, ndim)
        if isinstance(p, Lam):
            r = self._ev(p.body, stack + [x], ndim + 1)
        else:
            r = self.apply(self._ev(p, stack, ndim), x, p.ty.res)
        r = self._lead(r, ndim)
        return np.broadcast_to(r, (n,) + r.shape[1:])

    def _logical(self, h: Const, args, stack, ndim):
        name = h.name
        if name == "$true":
            return np.int64(1)
        if name == "$not":
            return 1 - self._ev(args[0], stack, ndim)
        if name == "$or":
            return self._ev(args[0], stack, ndim) | self._ev(args[1], stack, ndim)
        if name == "$eq":
            a = self._ev(args[0], stack, ndim)
            b = self._ev(args[1], stack, ndim)
            return (a == b).astype(np.int64)
        if name == "$pi":
            return self._over(args[0], h.ty.arg.arg, stack, ndim).all(axis=0).astype(np.int64)
        # $choice: the first witness, or element 0 when there is none
        return self._over(args[0], h.ty.arg.arg, stack, ndim).argmax(axis=0).astype(np.int64)


def _res_type(ty: TypeExpr, k: int) -> TypeExpr:
    for _ in range(k):
        ty = ty.res
    return ty


def _eta_expand(t: Term) -> Term:
    ty = t.ty
    return Lam(ty.arg, App(shift(t, 1), (Bound(0, ty.arg),)))


# ---------------------------------------------------------------------------
# interpretations

def nonlogical_constants(terms: Iterable[Term]) -> list[Const]:
    acc: dict = {}
    for t in terms:
        constants(t, acc)
    out = [c for c in acc.values() if not c.name.startswith("$")]
    return sorted(out, key=lambda c: (c.name, str(c.ty)))


def base_types_of(terms: Iterable[Term]) -> list[BaseType]:
    seen: list = []

    def walk_ty(ty):
        if isinstance(ty, FunType):
            walk_ty(ty.arg)
            walk_ty(ty.res)
        elif ty != O and ty not in seen:
            seen.append(ty)

    def walk(t):
        walk_ty(t.ty)
        if isinstance(t, Lam):
            walk_ty(t.binder)
            walk(t.body)
        elif isinstance(t, App):
            walk(t.head)
            for a in t.args:
                walk(a)
    for t in terms:
        walk(t)
    return sorted(seen, key=str)


def all_interpretations(consts: Sequence[Const], sizes: Mapping, budget: int,
                        ndim_offset: int = 0) -> tuple[dict, int]:
    """Every interpretation of ``consts`` as one flat batch axis."""
    dims = [type_size(c.ty, sizes) for c in consts]
    total = 1
    for d in dims:
        total *= d
        if total > budget:
            raise TooLarge(f"{total}+ interpretations exceed the budget of {budget}")
    if not consts:
        return {}, 1
    idx = np.unravel_index(np.arange(total, dtype=np.int64), dims)
    shape = (total,) + (1,) * ndim_offset
    return {c: np.asarray(i, dtype=np.int64).reshape(shape) for c, i in zip(consts, idx)}, total


def close(t: Term) -> Term:
    """Universal closure over the free variables of ``t``."""
    from .terms import abstract, mk_app, pi
    for v in reversed(list(free_vars(t).values())):
        t = mk_app(pi(v.ty), [abstract(t, v)])
    return t


@dataclass
class CheckResult:
    ok: bool
    checked: int = 0          # number of domain-size assignments examined
    skipped: int = 0          # assignments over budget
    counterexample: dict | None = None


def size_assignments(types: Sequence, max_size: int, fixed: Mapping | None = None):
    fixed = dict(fixed or {})
    free = [t for t in types if t not in fixed]
    for combo in itertools.product(range(1, max_size + 1), repeat=len(free)):
        d = dict(fixed)
        d.update(zip(free, combo))
        yield d


def entails(premises: Sequence[Term], conclusion: Term, max_size: int = 3,
            budget: int = 1 << 17) -> CheckResult:
    """Does every finite standard model of the premises (domains of size
    at most ``max_size``) extend to a model of the conclusion?

    Constants occurring only in the conclusion are existentially
    quantified, so Skolemisation and other fresh-symbol rules are checked
    for satisfiability preservation.
    """
    premises = [close(p) for p in premises]
    conclusion = close(conclusion)
    old = nonlogical_constants(premises)
    new = [c for c in nonlogical_constants([conclusion]) if c not in old]
    types = base_types_of(list(premises) + [conclusion])
    res = CheckResult(True)
    for sizes in size_assignments(types, max_size):
        try:
            old_i, no = all_interpretations(old, sizes, budget, ndim_offset=1 if new else 0)
            new_i, nn = all_interpretations(new, sizes, budget)
            if no * nn > 4 * budget:
                raise TooLarge("joint interpretation space too large")
            # old constants vary along axis 0, new ones along axis 1
            new_i = {c: v.reshape(1, -1) for c, v in new_i.items()}
            ev = Evaluator(sizes, {**old_i, **new_i})
            hyp = np.ones((), dtype=bool)
            for p in premises:
                hyp = hyp & ev.truth(p)
            concl = ev.truth(conclusion)
            if new:
                concl = np.broadcast_to(concl, np.broadcast_shapes(concl.shape, (1, nn))).any(axis=1)
                hyp = hyp.reshape(-1) if hyp.ndim else hyp
            bad = hyp & ~concl
        except TooLarge:
            res.skipped += 1
            continue
        res.checked += 1
        if bad.any():
            res.ok = False
            k = int(np.argmax(bad.reshape(-1))) if bad.ndim else 0
            res.counterexample = {"sizes": {str(t): n for t, n in sizes.items()},
                                  "index": k}
            return res
    return res


def has_countermodel(axioms: Sequence[Term], conjecture: Term, max_size: int = 3,
                     budget: int = 1 << 17, fixed: Mapping | None = None) -> CheckResult:
    """Search for a finite model of the axioms falsifying the conjecture.
    ``ok`` is True when one was found."""
    axioms = [close(a) for a in axioms]
    conjecture = close(conjecture)
    consts = nonlogical_constants(list(axioms) + [conjecture])
    types = base_types_of(list(axioms) + [conjecture])
    res = CheckResult(False)
    for sizes in size_assignments(types, max_size, fixed):
        try:
            interp, _ = all_interpretations(consts, sizes, budget)
        except TooLarge:
            res.skipped += 1
            continue
        res.checked += 1
        ev = Evaluator(sizes, interp)
        good = ~ev.truth(conjecture)
        for a in axioms:
            good = good & ev.truth(a)
        if np.any(good):
            res.ok = True
            res.counterexample = {"sizes": {str(t): n for t, n in sizes.items()}}
            return res
    return res


# rules whose conclusion is not a consequence of the premises by design
UNCHECKED_RULES = ("Neg",)


def step_formula(step) -> Term:
    from .clausal import clause_formula
    return clause_formula(step.clause) if step.clause is not None else step.formula


def audit_derivation(d, max_size: int = 3, budget: int = 1 << 17) -> list[tuple[str, CheckResult]]:
    """Check every inference of a derivation in finite standard models.

    Returns one ``(step name, result)`` pair per checked step.  Steps whose
    interpretation space exceeds ``budget`` at every domain size report
    ``checked == 0``."""
    by_name = {s.name: s for s in d.steps}
    out = []
    for s in d.steps:
        if s.rule is None or s.rule in UNCHECKED_RULES:
            continue
        prem = [step_formula(by_name[p]) for p in s.parents]
        out.append((s.name, entails(prem, step_formula(s), max_size, budget)))
    return out
