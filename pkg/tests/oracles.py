"""Independent reference implementations used to check the library.

Each oracle is written from the textbook definition, in plain Python and
without numpy, so that it shares no evaluation code with the module it
checks.
"""

from __future__ import annotations

import itertools

from hoprover.terms import App, Bound, Const, Lam, Var, beta_eta_normalize, head_args, mk_app, mk_lams, shift
from hoprover.types import O, BaseType


# ---------------------------------------------------------------------------
# Kripke semantics over explicit sets

def kripke_truth(phi, worlds, rel, val, w) -> bool:
    """Satisfaction of a propositional modal formula at world ``w``.
    ``rel`` is a set of pairs, ``val`` maps atom names to sets of worlds."""
    h, args = head_args(phi)
    name = h.name
    if name == "$true":
        return True
    if name == "$not":
        return not kripke_truth(args[0], worlds, rel, val, w)
    if name == "$or":
        return any(kripke_truth(a, worlds, rel, val, w) for a in args)
    if name == "$eq":
        return kripke_truth(args[0], worlds, rel, val, w) == kripke_truth(args[1], worlds, rel, val, w)
    if name == "$box":
        return all(kripke_truth(args[0], worlds, rel, val, v) for v in worlds if (w, v) in rel)
    if name == "$dia":
        return any(kripke_truth(args[0], worlds, rel, val, v) for v in worlds if (w, v) in rel)
    return w in val[name]


def frame_condition(system: str, worlds, rel) -> bool:
    refl = all((w, w) in rel for w in worlds)
    trans = all((u, x) in rel for (u, v) in rel for (v2, x) in rel if v == v2)
    sym = all((v, u) in rel for (u, v) in rel)
    serial = all(any((w, v) in rel for v in worlds) for w in worlds)
    return {"K": True, "D": serial, "T": refl, "S4": refl and trans,
            "S5": refl and trans and sym}[system]


def kripke_models(system: str, n: int, atoms):
    worlds = range(n)
    pairs = [(u, v) for u in worlds for v in worlds]
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        rel = {pr for pr, bit in zip(pairs, bits) if bit}
        if not frame_condition(system, worlds, rel):
            continue
        subsets = [set(s) for k in range(n + 1) for s in itertools.combinations(worlds, k)]
        for choice in itertools.product(subsets, repeat=len(atoms)):
            yield worlds, rel, dict(zip(atoms, choice))


def kripke_valid_naive(phi, system: str, atoms, max_worlds: int = 3) -> bool:
    for n in range(1, max_worlds + 1):
        for worlds, rel, val in kripke_models(system, n, atoms):
            if not all(kripke_truth(phi, worlds, rel, val, w) for w in worlds):
                return False
    return True


# ---------------------------------------------------------------------------
# standard finite models with functions as explicit tables
#
# Domains are Python lists: $o is [False, True], a base type of size n is
# [0..n-1] and a function type a > b is the list of all tables (tuples of
# values indexed by the position of the argument in dom(a)).  Element k
# of dom(a > b) is the table whose entry at position x is element
# (k // |b|**x) % |b| of dom(b), i.e. the same numbering convention as
# the library, so that interpretations can be exchanged by index.

class TableModel:
    def __init__(self, sizes: dict):
        self.sizes = sizes
        self._dom: dict = {}
        self._pos: dict = {}

    def dom(self, ty) -> list:
        if ty not in self._dom:
            if ty == O:
                d = [False, True]
            elif isinstance(ty, BaseType):
                d = list(range(self.sizes[ty]))
            else:
                da, db = self.dom(ty.arg), self.dom(ty.res)
                d = [tuple(db[(k // len(db) ** x) % len(db)] for x in range(len(da)))
                     for k in range(len(db) ** len(da))]
            self._dom[ty] = d
            self._pos[ty] = {v: i for i, v in enumerate(d)}
        return self._dom[ty]

    def index(self, ty, v) -> int:
        self.dom(ty)
        return self._pos[ty][v]

    def size(self, ty) -> int:
        if ty == O:
            return 2
        if isinstance(ty, BaseType):
            return self.sizes[ty]
        return self.size(ty.res) ** self.size(ty.arg)

    def element(self, ty, k: int):
        """Element number ``k`` of ``dom(ty)``, without listing the domain."""
        if ty == O or isinstance(ty, BaseType):
            return self.dom(ty)[k]
        m = self.size(ty.res)
        return tuple(self.element(ty.res, (k // m ** x) % m) for x in range(self.size(ty.arg)))

    def apply(self, fty, f, x):
        return f[self.index(fty.arg, x)]

    def table(self, ty, fn):
        return tuple(fn(x) for x in self.dom(ty.arg))

    def logical(self, c: Const):
        ty = c.ty
        if c.name == "$true":
            return True
        if c.name == "$not":
            return self.table(ty, lambda x: not x)
        if c.name == "$or":
            return self.table(ty, lambda x: self.table(ty.res, lambda y: x or y))
        if c.name == "$eq":
            return self.table(ty, lambda x: self.table(ty.res, lambda y: x == y))
        if c.name == "$pi":
            return self.table(ty, lambda p: all(p))
        if c.name == "$choice":
            dom = self.dom(ty.res)
            return self.table(ty, lambda p: next((x for x, px in zip(dom, p) if px), dom[0]))
        raise KeyError(c.name)

    def eval(self, t, interp: dict, env=()):
        if isinstance(t, Bound):
            return env[t.index]
        if isinstance(t, Var):
            raise ValueError("open term")
        if isinstance(t, Const):
            return self.logical(t) if t.name.startswith("$") else interp[t.name]
        if isinstance(t, Lam):
            return tuple(self.eval(t.body, interp, (x,) + tuple(env)) for x in self.dom(t.binder))
        f = self.eval(t.head, interp, env)
        ty = t.head.ty
        for a in t.args:
            f = self.apply(ty, f, self.eval(a, interp, env))
            ty = ty.res
        return f


# ---------------------------------------------------------------------------
# clause counting

def distributive_clause_count(t) -> int:
    """Number of clauses the plain distributive CNF of a negation-free
    and/or formula produces (before any simplification)."""
    h, args = head_args(t)
    if isinstance(h, Const) and h.name == "$or":
        return distributive_clause_count(args[0]) * distributive_clause_count(args[1])
    if isinstance(h, Const) and h.name == "$not":
        inner, iargs = head_args(args[0])
        if isinstance(inner, Const) and inner.name == "$or":
            # ~(~a | ~b) encodes a & b
            return sum(distributive_clause_count(_strip_not(x)) for x in iargs)
    return 1


def _strip_not(t):
    h, args = head_args(t)
    if isinstance(h, Const) and h.name == "$not":
        return args[0]
    return t


# ---------------------------------------------------------------------------
# higher-order pattern matching

def _eta(t):
    return Lam(t.ty.arg, App(shift(t, 1), (Bound(0, t.ty.arg),)))


def _renumber(t, mapping, d=0):
    if isinstance(t, Bound):
        if t.index < d:
            return t
        j = t.index - d
        if j not in mapping:
            raise LookupError
        return Bound(mapping[j] + d, t.ty)
    if isinstance(t, Lam):
        return Lam(t.binder, _renumber(t.body, mapping, d + 1))
    if isinstance(t, App):
        return App(_renumber(t.head, mapping, d), [_renumber(a, mapping, d) for a in t.args])
    return t


def pattern_match(pat, tgt, rho: dict) -> bool:
    """Extend ``rho`` (variable id -> closed term) so that ``rho(pat)`` is
    βη-equal to ``tgt``.  ``pat`` must be a higher-order pattern; the free
    variables of ``tgt`` are treated as constants."""
    if pat.ty != tgt.ty:
        return False
    if isinstance(pat, Lam) or isinstance(tgt, Lam):
        p = pat if isinstance(pat, Lam) else _eta(pat)
        t = tgt if isinstance(tgt, Lam) else _eta(tgt)
        return pattern_match(p.body, t.body, rho)
    h, args = head_args(pat)
    if isinstance(h, Var):
        seen = []
        for x in args:
            if not isinstance(x, Bound) or x.index in seen:
                raise ValueError("not a pattern")
            seen.append(x.index)
        if h.id in rho:
            return beta_eta_normalize(mk_app(rho[h.id], args)) == beta_eta_normalize(tgt)
        n = len(seen)
        try:
            body = _renumber(tgt, {j: n - 1 - i for i, j in enumerate(seen)})
        except LookupError:
            return False
        rho[h.id] = beta_eta_normalize(mk_lams([x.ty for x in args], body))
        return True
    th, targs = head_args(tgt)
    if th != h or len(args) != len(targs):
        return False
    return all(pattern_match(x, y, rho) for x, y in zip(args, targs))
