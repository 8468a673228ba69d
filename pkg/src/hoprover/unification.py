"""Higher-order unification.

Constraints are pairs of closed, beta-eta normal terms of equal type.
``pattern_unify`` decides the pattern fragment and returns a most general
unifier; ``preunify`` enumerates Huet pre-unifiers breadth first under a
global budget of flex-rigid branching steps.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .terms import (
    App, Bound, Const, Lam, Substitution, Term, Var, beta_eta_normalize, fresh_var,
    head_args, mk_app, mk_lams, occurs, shift,
)
from .types import FunType, arity, drop_args, fun_of, split_type

DEFAULT_DEPTH = 8
MAX_PROBLEM_SIZE = 400

Pair = tuple[Term, Term]


class Outcome(enum.Enum):
    NOT_PATTERN = "NotPattern"
    FAIL = "Fail"


NOT_PATTERN = Outcome.NOT_PATTERN
FAIL = Outcome.FAIL


@dataclass
class UnificationProblem:
    constraints: list[Pair]
    depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        cons = []
        for s, t in self.constraints:
            if s.ty != t.ty:
                raise TypeError(f"constraint between types {s.ty} and {t.ty}")
            cons.append((beta_eta_normalize(s), beta_eta_normalize(t)))
        self.constraints = cons
        if self.depth < 0:
            raise ValueError("depth budget must be non-negative")


@dataclass(frozen=True)
class PreUnifier:
    substitution: Substitution
    residual: tuple[Pair, ...] = field(default=())


def _as_problem(p) -> UnificationProblem:
    if isinstance(p, UnificationProblem):
        return p
    return UnificationProblem(list(p))


# ---------------------------------------------------------------------------
# shared helpers

def _strip(s: Term, t: Term) -> tuple[list, Term, Term]:
    """Strip a common lambda prefix, eta-expanding the shorter side."""
    ctx = []
    while isinstance(s, Lam) or isinstance(t, Lam):
        if isinstance(s, Lam):
            binder = s.binder
        else:
            binder = t.binder
        s = s.body if isinstance(s, Lam) else mk_app(shift(s, 1), [Bound(0, binder)])
        t = t.body if isinstance(t, Lam) else mk_app(shift(t, 1), [Bound(0, binder)])
        ctx.append(binder)
    return ctx, s, t


def _close(ctx: Sequence, body: Term) -> Term:
    return beta_eta_normalize(mk_lams(ctx, body))


def _same_rigid(a: Term, b: Term) -> bool:
    if isinstance(a, Bound) and isinstance(b, Bound):
        return a.index == b.index and a.ty == b.ty
    return a == b


def _arg_types(F: Var, k: int) -> list:
    args, _ = split_type(F.ty)
    return args[:k]


def _bound_args(k: int, tys: Sequence) -> list[Term]:
    """Bound variables for k new binders, outermost first."""
    return [Bound(k - 1 - i, tys[i]) for i in range(k)]


def is_pattern(t: Term) -> bool:
    """Every free-variable head is applied to distinct bound variables."""
    if not t.has_vars:
        return True
    if isinstance(t, Var):
        return True
    if isinstance(t, Lam):
        return is_pattern(t.body)
    if isinstance(t, App):
        if isinstance(t.head, Var):
            seen = set()
            for a in t.args:
                if not isinstance(a, Bound) or a.index in seen:
                    return False
                seen.add(a.index)
            return True
        return all(is_pattern(a) for a in t.args)
    return True


# ---------------------------------------------------------------------------
# pattern unification

class _Fail(Exception):
    pass


class _Prune(Exception):
    def __init__(self, var: Var, binding: Term):
        self.var = var
        self.binding = binding


def _restrict_binding(G: Var, m: int, keep: Sequence[int]) -> Term:
    tys = _arg_types(G, m)
    res = drop_args(G.ty, m)
    H = fresh_var(fun_of([tys[i] for i in keep], res))
    bs = _bound_args(m, tys)
    return beta_eta_normalize(mk_lams(tys, mk_app(H, [bs[i] for i in keep])))


def _invert(F: Var, fargs: Sequence[int], body: Term) -> Term:
    """Solve ``F fargs = body`` for F, where fargs are context indices."""
    k = len(fargs)
    pos = {j: p for p, j in enumerate(fargs)}

    def go(u: Term, d: int) -> Term:
        if u.lb <= d and not u.has_vars:
            return u
        if isinstance(u, Bound):
            if u.index < d:
                return u
            j = u.index - d
            if j in pos:
                return Bound(d + k - 1 - pos[j], u.ty)
            raise _Fail
        if isinstance(u, Var):
            if u.id == F.id:
                raise _Fail
            return u
        if isinstance(u, Lam):
            return Lam(u.binder, go(u.body, d + 1))
        if isinstance(u, App):
            h = u.head
            if isinstance(h, Var):
                if h.id == F.id:
                    raise _Fail
                keep = []
                for i, a in enumerate(u.args):
                    if a.index < d or (a.index - d) in pos:
                        keep.append(i)
                if len(keep) < len(u.args):
                    raise _Prune(h, _restrict_binding(h, len(u.args), keep))
                return App(h, [go(a, d) for a in u.args])
            return App(go(h, d), [go(a, d) for a in u.args])
        return u

    tys = _arg_types(F, k)
    return beta_eta_normalize(mk_lams(tys, go(body, 0)))


def _flexflex_pattern(F: Var, xs: Sequence[int], G: Var, ys: Sequence[int]) -> dict:
    if F.id == G.id:
        keep = [i for i in range(len(xs)) if xs[i] == ys[i]]
        return {F: _restrict_binding(F, len(xs), keep)}
    common = [j for j in xs if j in ys]
    ftys = _arg_types(F, len(xs))
    gtys = _arg_types(G, len(ys))
    res = drop_args(F.ty, len(xs))
    H = fresh_var(fun_of([ftys[xs.index(j)] for j in common], res))
    fb = _bound_args(len(xs), ftys)
    gb = _bound_args(len(ys), gtys)
    f_bind = mk_lams(ftys, mk_app(H, [fb[xs.index(j)] for j in common]))
    g_bind = mk_lams(gtys, mk_app(H, [gb[ys.index(j)] for j in common]))
    return {F: beta_eta_normalize(f_bind), G: beta_eta_normalize(g_bind)}


def pattern_unify(problem) -> Substitution | Outcome:
    """Most general unifier of a pattern problem, ``FAIL`` if none exists,
    ``NOT_PATTERN`` if some flexible subterm lies outside the fragment."""
    problem = _as_problem(problem)
    if not all(is_pattern(s) and is_pattern(t) for s, t in problem.constraints):
        return NOT_PATTERN
    sigma = Substitution()
    work = deque(problem.constraints)
    while work:
        s, t = work.popleft()
        s, t = sigma.apply(s), sigma.apply(t)
        if s == t:
            continue
        ctx, sb, tb = _strip(s, t)
        hs, xs = head_args(sb)
        ht, ys = head_args(tb)
        fs, ft = isinstance(hs, Var), isinstance(ht, Var)
        if not fs and not ft:
            if not _same_rigid(hs, ht) or len(xs) != len(ys):
                return FAIL
            work.extendleft(reversed([(_close(ctx, a), _close(ctx, b)) for a, b in zip(xs, ys)]))
            continue
        if fs and ft:
            binds = _flexflex_pattern(hs, [a.index for a in xs], ht, [b.index for b in ys])
        else:
            if ft:
                hs, xs, tb = ht, ys, sb
            try:
                binds = {hs: _invert(hs, [a.index for a in xs], tb)}
            except _Prune as p:
                sigma = sigma.compose(Substitution({p.var: p.binding}))
                work.appendleft((s, t))
                continue
            except _Fail:
                return FAIL
        sigma = sigma.compose(Substitution(binds))
    return sigma


# ---------------------------------------------------------------------------
# Huet pre-unification

def _imitation(F: Var, k: int, head: Const, m: int) -> Term:
    tys = _arg_types(F, k)
    bs = _bound_args(k, tys)
    htys, _ = split_type(head.ty)
    hs = [fresh_var(fun_of(tys, htys[j])) for j in range(m)]
    body = mk_app(head, [mk_app(H, bs) for H in hs])
    return beta_eta_normalize(mk_lams(tys, body))


def _projections(F: Var, k: int, target) -> Iterator[Term]:
    tys = _arg_types(F, k)
    bs = _bound_args(k, tys)
    for i, ty in enumerate(tys):
        p = arity(ty) - arity(target)
        if p < 0 or drop_args(ty, p) != target:
            continue
        ptys, _ = split_type(ty)
        hs = [fresh_var(fun_of(tys, ptys[j])) for j in range(p)]
        body = mk_app(bs[i], [mk_app(H, bs) for H in hs])
        yield beta_eta_normalize(mk_lams(tys, body))


def _simplify(cons: Iterable[Pair], sigma: Substitution):
    """Decompose rigid-rigid pairs and eliminate first-order variables.

    Returns None on a clash, else (sigma, flex-rigid, flex-flex)."""
    work = deque(cons)
    flexrigid: list = []
    flexflex: list = []
    while work:
        s, t = work.popleft()
        s, t = sigma.apply(s), sigma.apply(t)
        if s == t:
            continue
        ctx, sb, tb = _strip(s, t)
        hs, xs = head_args(sb)
        ht, ys = head_args(tb)
        fs, ft = isinstance(hs, Var), isinstance(ht, Var)
        if not fs and not ft:
            if not _same_rigid(hs, ht) or len(xs) != len(ys):
                return None
            work.extendleft(reversed([(_close(ctx, a), _close(ctx, b)) for a, b in zip(xs, ys)]))
        elif fs and ft:
            flexflex.append((s, t))
        else:
            if ft:
                s, t, sb, tb, hs, xs = t, s, tb, sb, ht, ys
            if not xs and tb.lb == 0 and not occurs(hs.id, tb):
                sigma = sigma.compose(Substitution({hs: tb}))
                work.extend(p[:2] for p in flexrigid)
                work.extend(flexflex)
                flexrigid, flexflex = [], []
                continue
            flexrigid.append((s, t, sb, tb))
    return sigma, flexrigid, flexflex


def preunify(problem, depth: int | None = None, max_nodes: int | None = None
             ) -> Iterator[PreUnifier]:
    """Lazily enumerate pre-unifiers, breadth first.

    Imitation is tried before projections, projections in argument order.
    Every flex-rigid branching step uses one unit of the ``depth`` budget
    shared by the whole problem; ``max_nodes`` caps the search tree size.
    """
    problem = _as_problem(problem)
    budget = problem.depth if depth is None else depth
    queue = deque([(Substitution(), list(problem.constraints), 0)])
    nodes = 0
    while queue:
        sigma, cons, used = queue.popleft()
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            return
        res = _simplify(cons, sigma)
        if res is None:
            continue
        sigma, flexrigid, flexflex = res
        if not flexrigid:
            yield PreUnifier(sigma, tuple(flexflex))
            continue
        if used >= budget:
            continue
        s, t, sb, tb = flexrigid[0]
        F, xs = head_args(sb)
        rh, ys = head_args(tb)
        bindings = []
        if isinstance(rh, Const):
            bindings.append(_imitation(F, len(xs), rh, len(ys)))
        bindings.extend(_projections(F, len(xs), sb.ty))
        rest = [p[:2] for p in flexrigid] + flexflex
        for b in bindings:
            theta = Substitution({F: b})
            new_cons = [(theta.apply(a), theta.apply(c)) for a, c in rest]
            # imitation of self-applications can grow terms exponentially
            if sum(a.size + c.size for a, c in new_cons) > MAX_PROBLEM_SIZE:
                continue
            queue.append((sigma.compose(theta), new_cons, used + 1))


def unify(constraints: Sequence[Pair], depth: int = DEFAULT_DEPTH, limit: int = 4,
          max_nodes: int | None = 400) -> list[PreUnifier]:
    """Pattern unification when it applies, otherwise the first ``limit``
    pre-unifiers."""
    problem = UnificationProblem(list(constraints), depth)
    res = pattern_unify(problem)
    if isinstance(res, Substitution):
        return [PreUnifier(res, ())]
    if res is FAIL:
        return []
    return list(itertools.islice(preunify(problem, max_nodes=max_nodes), limit))


def is_flex(t: Term) -> bool:
    _, body = _strip_lams(t)
    return isinstance(head_args(body)[0], Var)


def _strip_lams(t: Term):
    n = 0
    while isinstance(t, Lam):
        t = t.body
        n += 1
    return n, t


def flexflex_solution(pairs: Sequence[Pair]) -> Substitution:
    """Trivial solution of flex-flex pairs: map each flexible head to a
    constant function returning one fresh variable per result type."""
    sinks: dict = {}
    binds: dict = {}
    for s, t in pairs:
        for side in (s, t):
            n, body = _strip_lams(side)
            h, args = head_args(body)
            if not isinstance(h, Var) or h in binds:
                continue
            tys, res = split_type(h.ty)
            if res not in sinks:
                sinks[res] = fresh_var(res)
            binds[h] = beta_eta_normalize(mk_lams(tys, sinks[res]))
    return Substitution(binds)
