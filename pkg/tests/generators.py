"""Random well-typed terms and unification problems for property tests."""

from __future__ import annotations

import random

from hoprover.terms import (App, Bound, Const, Lam, Substitution, Term, beta_eta_normalize,
                            free_vars, fresh_var)
from hoprover.types import I, O, FunType, arity, arrow, drop_args, split_type

II = arrow(I, I)
III = arrow(I, I, I)
IO = arrow(I, O)

SIGNATURE = [
    Const("a", I), Const("b", I), Const("f", II), Const("g", III),
    Const("h", arrow(II, I)), Const("p", IO), Const("q", O), Const("r", arrow(I, I, O)),
]
VAR_TYPES = [I, I, II, III, IO, O]


def _arg_count(hty, ty):
    for k in range(arity(hty) + 1):
        if drop_args(hty, k) == ty:
            return k
    return None


class TermGen:
    """Random terms over ``SIGNATURE`` and a pool of free variables.

    In pattern mode free variables are only ever applied to distinct
    bound variables, so every generated term is a higher-order pattern.
    """

    def __init__(self, rng: random.Random, variables=None, pattern: bool = False,
                 consts=SIGNATURE):
        self.rng = rng
        self.vars = list(variables) if variables is not None else [fresh_var(t) for t in VAR_TYPES]
        self.pattern = pattern
        self.consts = list(consts)

    def _flex_option(self, v, ty, ctx):
        k = _arg_count(v.ty, ty)
        if k is None:
            return None
        if k == 0:
            return v, []
        if not self.pattern:
            return v, None
        args, used = [], set()
        arg_tys, _ = split_type(v.ty)
        for aty in arg_tys[:k]:
            cands = [i for i, b in enumerate(ctx) if b == aty and i not in used]
            if not cands:
                return None
            i = self.rng.choice(cands)
            used.add(i)
            args.append(Bound(i, aty))
        return v, args

    def term(self, ty, ctx=(), size: int = 6) -> Term:
        rng = self.rng
        ctx = list(ctx)
        if isinstance(ty, FunType) and (size <= 1 or rng.random() < 0.5):
            return Lam(ty.arg, self.term(ty.res, [ty.arg] + ctx, size - 1))
        options = []
        for c in self.consts:
            k = _arg_count(c.ty, ty)
            if k is not None:
                options.append((c, None, k))
        for i, bty in enumerate(ctx):
            k = _arg_count(bty, ty)
            if k is not None:
                options.append((Bound(i, bty), None, k))
        for v in self.vars:
            o = self._flex_option(v, ty, ctx)
            if o is not None:
                options.append((o[0], o[1], _arg_count(v.ty, ty)))
        if size <= 2:
            small = [o for o in options if o[2] == 0 or o[1] is not None]
            options = small or options
        if not options:
            return Lam(ty.arg, self.term(ty.res, [ty.arg] + ctx, size - 1))
        head, fixed, k = rng.choice(options)
        if k == 0:
            return head
        if fixed is not None:
            return App(head, fixed)
        arg_tys, _ = split_type(head.ty)
        budget = max(size - 1, k)
        args = [self.term(aty, ctx, max(1, budget // k + rng.randint(-1, 1))) for aty in arg_tys[:k]]
        return App(head, args)

    def closed(self, ty, size: int = 6) -> Term:
        """A ground (variable-free) term."""
        saved, self.vars = self.vars, []
        try:
            return beta_eta_normalize(self.term(ty, (), size))
        finally:
            self.vars = saved

    def substitution(self, variables, size: int = 4) -> Substitution:
        """Bind a random subset of ``variables`` to random closed-over-vars terms."""
        binds = {}
        for v in variables:
            if self.rng.random() < 0.6:
                binds[v] = beta_eta_normalize(self.term(v.ty, (), self.rng.randint(1, size)))
        return Substitution(binds)


def unification_problem(rng: random.Random, pattern: bool = False, max_size: int = 15):
    """A single well-typed constraint ``(s, t)`` with both sides of size at
    most ``max_size``.  Roughly half the problems are unifiable by
    construction (``t`` is an instance of a variant of ``s``)."""
    gen = TermGen(rng, pattern=pattern)
    tys = [II, III, I] if pattern else [I, I, O, II, IO]
    while True:
        ty = rng.choice(tys)
        s = beta_eta_normalize(gen.term(ty, (), rng.randint(2, 9)))
        if rng.random() < 0.5:
            t = beta_eta_normalize(gen.term(ty, (), rng.randint(2, 9)))
        else:
            t = gen.substitution(list(free_vars(s).values()), 4).apply(s)
            if rng.random() < 0.5:
                s, t = t, s
        if s.size <= max_size and t.size <= max_size:
            return s, t
