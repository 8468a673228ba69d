"""Inference and contraction rules.

Every rule is a function from premise clauses to new clauses; each new
clause carries an :class:`Inference` naming the rule, its premises and
whatever extra information (substitution, literal index) is needed to
re-derive it.  Generating rules return raw conclusions; solving the
unification constraints they introduce is done by :func:`solve_constraints`.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .clausal import Clause, Inference, Literal, lit_from_atom
from .ordering import greater
from .terms import (FALSE, NOT, OR, TRUE, App, Bound, Const, Lam, Substitution,
                    Term, Var, abstract, beta_eta_normalize, choice, eq,
                    free_vars, head_args, is_logical, mk_and, mk_app, mk_imp, mk_lams, mk_not,
                    mk_or, occurs, pi, positions, replace_at, replace_vars,
                    subterm_at, supply)
from .types import O, FunType, fun_of, split_type
from .unification import DEFAULT_DEPTH, flexflex_solution, unify

REDUNDANT = None


# ---------------------------------------------------------------------------
# helpers

def _flex(t: Term) -> bool:
    while isinstance(t, Lam):
        t = t.body
    return isinstance(head_args(t)[0], Var)


def is_constraint(l: Literal) -> bool:
    """Negative literal with a flexible side: an open unification constraint."""
    return not l.pol and (_flex(l.left) or _flex(l.right))


def rename_apart(c: Clause, avoid: Iterable[int]) -> tuple[Literal, ...]:
    avoid = set(avoid)
    vs = [v for k, v in c.free_vars().items() if k in avoid]
    if not vs:
        return c.lits
    sigma = Substitution({v: supply().var(v.ty) for v in vs})
    return tuple(l.apply(sigma) for l in c.lits)


def derived(lits: Iterable[Literal], rule: str, premises: Sequence, info=None,
            ps_depth: int | None = None) -> Clause:
    if ps_depth is None:
        ps_depth = max((getattr(p, "ps_depth", 0) for p in premises), default=0)
    return Clause(lits, Inference(rule, tuple(premises), info or {}), ps_depth=ps_depth)


def unifiers(pairs: Sequence[tuple[Term, Term]], depth: int = DEFAULT_DEPTH,
             limit: int = 4, max_nodes: int = 400) -> list[Substitution]:
    """Full unifiers: each pre-unifier closed with the trivial solution of
    its flex-flex residue."""
    out = []
    for pu in unify(list(pairs), depth=depth, limit=limit, max_nodes=max_nodes):
        sigma = pu.substitution
        if pu.residual:
            rest = [(sigma.apply(a), sigma.apply(b)) for a, b in pu.residual]
            sigma = sigma.compose(flexflex_solution(rest))
        out.append(sigma)
    return out


def instantiate_clause(c: Clause, sigma: Substitution, rule: str = "Inst") -> Clause:
    return derived([l.apply(sigma) for l in c.lits], rule, (c,), {"subst": sigma})


def solve_constraints(c: Clause, idxs: Sequence[int], depth: int = DEFAULT_DEPTH,
                      limit: int = 4) -> list[Clause]:
    """Eagerly unify the constraint literals ``idxs`` of ``c``; one
    simplified instance per unifier, or none if unification fails."""
    pairs = [(c.lits[i].left, c.lits[i].right) for i in idxs]
    out = []
    for sigma in unifiers(pairs, depth, limit):
        inst = instantiate_clause(c, sigma) if sigma else c
        s = simplify_trivial(inst)
        if s is not REDUNDANT:
            out.append(s)
    return out


# ---------------------------------------------------------------------------
# matching (one-sided, first-order style; pattern variables only)

def match(pat: Term, tgt: Term, sub: dict[int, Term], depth: int = 0) -> bool:
    if not pat.has_vars:
        return pat == tgt
    if isinstance(pat, Var):
        if pat.ty != tgt.ty:
            return False
        bound = sub.get(pat.id)
        if bound is not None:
            return bound == tgt
        if tgt.lb:
            return False
        sub[pat.id] = tgt
        return True
    if isinstance(pat, Lam):
        return isinstance(tgt, Lam) and pat.binder == tgt.binder and match(pat.body, tgt.body, sub, depth + 1)
    if isinstance(pat, App):
        if not isinstance(tgt, App) or len(pat.args) != len(tgt.args):
            return False
        if isinstance(pat.head, Var):
            if pat.head.id in sub:
                return beta_eta_normalize(replace_vars(pat, sub)) == tgt
            if not match(pat.head, tgt.head, sub, depth):
                return False
        elif pat.head != tgt.head:
            return False
        return all(match(a, b, sub, depth) for a, b in zip(pat.args, tgt.args))
    return pat == tgt


def match_literal(pat: Literal, tgt: Literal, sub: dict) -> list[dict]:
    if pat.pol != tgt.pol or pat.ty != tgt.ty:
        return []
    out = []
    for a, b in ((tgt.left, tgt.right), (tgt.right, tgt.left)):
        s = dict(sub)
        if match(pat.left, a, s) and match(pat.right, b, s):
            if s not in out:
                out.append(s)
        if pat.is_boolean:
            break
    return out


def subsumes(c: Clause, d: Clause) -> bool:
    """Is there a substitution mapping the literal multiset of ``c`` into
    that of ``d``?"""
    if len(c.lits) > len(d.lits):
        return False
    if Counter(l.pol for l in c.lits) - Counter(l.pol for l in d.lits):
        return False
    lits = sorted(c.lits, key=lambda l: -l.size)

    def go(i: int, used: frozenset, sub: dict) -> bool:
        if i == len(lits):
            return True
        for j, m in enumerate(d.lits):
            if j in used:
                continue
            for s in match_literal(lits[i], m, sub):
                if go(i + 1, used | {j}, s):
                    return True
        return False

    return go(0, frozenset(), {})


def _sub(sub: dict, vars_: dict) -> Substitution:
    return Substitution({vars_[k]: t for k, t in sub.items() if k in vars_})


# ---------------------------------------------------------------------------
# paramodulation and factoring

def _green_positions(t: Term, prefix=()):
    """Positions not below a flexible head; subterms with loose bound
    variables are reported so callers can skip them."""
    yield prefix, t
    if isinstance(t, Lam):
        yield from _green_positions(t.body, prefix + (0,))
    elif isinstance(t, App) and not isinstance(t.head, Var):
        for i, a in enumerate(t.args, 1):
            yield from _green_positions(a, prefix + (i,))


def paramodulate(c: Clause, d: Clause, var_positions: bool = False) -> list[Clause]:
    """All paramodulants of positive equations of ``c`` into ``d``.

    Equations are used left-to-right and right-to-left unless the ordering
    orients them.  A boolean literal ``[p]^tt`` only paramodulates into the
    root of negative boolean literals (resolution).  Constraint literals
    of ``d`` are rewritten only at the root of their flex side and, unless ``var_positions``, variable positions and flex
    positions below the root of a side are skipped.
    """
    out: list[Clause] = []
    clits = c.lits
    dlits = rename_apart(d, c.free_vars())
    for i, lit in enumerate(clits):
        if not lit.pol:
            continue
        rest_c = clits[:i] + clits[i + 1:]
        dirs = [(lit.left, lit.right)]
        if lit.is_equation and not lit.oriented:
            dirs.append((lit.right, lit.left))
        for dir_, (l, r) in enumerate(dirs):
            if l == TRUE or _flex(l):
                continue
            for j, m in enumerate(dlits):
                constraint = is_constraint(m)
                if constraint and lit.is_boolean:
                    continue
                rest_d = dlits[:j] + dlits[j + 1:]
                if lit.is_boolean:
                    if m.pol or not m.is_boolean or m.left.ty != l.ty:
                        continue
                    targets = [(m.left, m.right, (), m.left)]
                else:
                    sides = [(m.left, m.right)]
                    if not (m.is_boolean or m.oriented):
                        sides.append((m.right, m.left))
                    targets = []
                    for s, t in sides:
                        if s == TRUE:
                            continue
                        if constraint:
                            # only the flex side itself, as a whole
                            if _flex(s) and not isinstance(s, Var) and s.ty == l.ty:
                                targets.append((s, t, (), s))
                            continue
                        for pos, sub in _green_positions(s):
                            if sub.ty != l.ty or sub.lb or sub == TRUE:
                                continue
                            if isinstance(sub, Var) and not var_positions:
                                continue
                            targets.append((s, t, pos, sub))
                for s, t, pos, sub in targets:
                    # flex subterms are only rewritten at the root of a side
                    if (not var_positions and isinstance(head_args(sub)[0], Var)
                            and (pos or isinstance(sub, Var))):
                        continue
                    new_s = replace_at(s, pos, r)
                    lits = list(rest_c) + list(rest_d) + [Literal(new_s, t, m.pol), Literal(sub, l, False)]
                    out.append(derived(lits, "Para", (c, d), {"from": i, "into": j, "pos": pos}))
    return out


def equality_factor(c: Clause) -> list[Clause]:
    out = []
    lits = c.lits
    for i, j in itertools.combinations(range(len(lits)), 2):
        a, b = lits[i], lits[j]
        if a.pol != b.pol or a.ty != b.ty:
            continue
        if not a.pol and not a.is_boolean:
            continue
        rest = [l for k, l in enumerate(lits) if k not in (i, j)]
        orients = [(b.left, b.right)]
        if not b.is_boolean:
            orients.append((b.right, b.left))
        for s, t in orients:
            new = rest + [a, Literal(a.left, s, False), Literal(a.right, t, False)]
            out.append(derived(new, "EqFac", (c,), {"pair": (i, j)}))
    return out


def eq_resolvents(c: Clause, depth: int = DEFAULT_DEPTH, limit: int = 4) -> list[Clause]:
    """Solve each negative literal of ``c`` as a unification constraint."""
    out = []
    for i, l in enumerate(c.lits):
        if l.pol or l.left == l.right:
            continue
        if l.is_boolean and not _flex(l.left):
            continue
        out.extend(solve_constraints(c, [i], depth, limit))
    return out


def decompose(c: Clause, depth: int = DEFAULT_DEPTH, limit: int = 4) -> list[Clause]:
    """Congruence decomposition of negative equations ``[f s̄ ≃ f t̄]^ff``
    between rigid terms with the same non-logical head that do not unify:
    the literal is replaced by the disequations of differing arguments."""
    out = []
    for i, l in enumerate(c.lits):
        if l.pol or l.is_boolean or l.left == l.right:
            continue
        hs, xs = head_args(l.left)
        ht, ys = head_args(l.right)
        if not isinstance(hs, Const) or hs != ht or is_logical(hs) or len(xs) != len(ys):
            continue
        if unifiers([(l.left, l.right)], depth, 1):
            continue
        rest = list(c.lits[:i] + c.lits[i + 1:])
        rest.extend(Literal(a, b, False) for a, b in zip(xs, ys) if a != b)
        out.append(derived(rest, "Decomp", (c,), {"lit": i}))
    return out


# ---------------------------------------------------------------------------
# primitive substitution

@dataclass(frozen=True)
class GeneralBindingSpec:
    """Head set for general bindings: negation and disjunction plus
    quantification and equality at the listed types."""
    use_not: bool = True
    use_or: bool = True
    pi_types: tuple = ()
    eq_types: tuple = ()

    @classmethod
    def for_types(cls, types: Iterable) -> "GeneralBindingSpec":
        ts = tuple(types)
        return cls(True, True, ts, ts)

    @property
    def heads(self) -> tuple[Const, ...]:
        hs = []
        if self.use_not:
            hs.append(NOT)
        if self.use_or:
            hs.append(OR)
        hs.extend(pi(t) for t in self.pi_types)
        hs.extend(eq(t) for t in self.eq_types)
        return tuple(hs)


def general_bindings(ty, spec: GeneralBindingSpec) -> list[Term]:
    """Closed bindings of predicate type ``ty`` headed by the spec's heads,
    with fresh free variables applied to the bound arguments below."""
    args, res = split_type(ty)
    if res != O:
        return []
    k = len(args)
    bvs = [Bound(k - 1 - i, a) for i, a in enumerate(args)]

    def h(target):
        H = supply().var(fun_of(args, target))
        return mk_app(H, bvs)

    out = []
    for head in spec.heads:
        if head == NOT:
            body = mk_not(h(O))
        elif head == OR:
            body = mk_or(h(O), h(O))
        elif head.name == "$pi":
            body = App(head, (h(head.ty.arg),))
        else:
            t = head.ty.arg
            body = App(head, (h(t), h(t)))
        out.append(beta_eta_normalize(mk_lams(args, body)))
    return out


def primitive_substitution(c: Clause, spec: GeneralBindingSpec) -> list[Clause]:
    out = []
    seen = set()
    for l in c.lits:
        if not l.is_boolean:
            continue
        X = head_args(l.left)[0]
        if not isinstance(X, Var) or X.id in seen:
            continue
        seen.add(X.id)
        for b in general_bindings(X.ty, spec):
            sigma = Substitution({X: b})
            out.append(derived([m.apply(sigma) for m in c.lits], "PS", (c,),
                               {"subst": sigma}, ps_depth=c.ps_depth + 1))
    return out


# ---------------------------------------------------------------------------
# extensionality

def _ext_args(l: Literal, skolem: bool, univs: Sequence[Var]) -> list[Term]:
    tys, _ = split_type(l.ty)
    out = []
    for t in tys:
        if skolem:
            sk = supply().symbol("sk", fun_of([u.ty for u in univs], t))
            out.append(mk_app(sk, list(univs)))
        else:
            out.append(supply().var(t))
    return out


def func_ext(c: Clause) -> Clause:
    """Apply both sides of every functional literal to fresh variables
    (positive) or Skolem terms (negative); ``c`` itself if none."""
    if not any(isinstance(l.ty, FunType) for l in c.lits):
        return c
    univs = list(c.free_vars().values())
    lits = []
    for l in c.lits:
        if isinstance(l.ty, FunType):
            xs = _ext_args(l, not l.pol, univs)
            lits.append(Literal(mk_app(l.left, xs), mk_app(l.right, xs), l.pol))
        else:
            lits.append(l)
    return derived(lits, "FuncExt", (c,))


def bool_ext(c: Clause) -> list[Clause]:
    """Expand the first equation between formulas into its two clauses."""
    for i, l in enumerate(c.lits):
        if l.is_equation and l.ty == O:
            rest = list(c.lits[:i] + c.lits[i + 1:])
            p, q = l.left, l.right
            if l.pol:
                rows = [(False, True), (True, False)]
            else:
                rows = [(True, True), (False, False)]
            return [derived(rest + [lit_from_atom(p, a), lit_from_atom(q, b)], "BoolExt", (c,))
                    for a, b in rows]
    return []


# ---------------------------------------------------------------------------
# choice, function synthesis, injectivity

def _is_choice_head(h: Term) -> bool:
    if isinstance(h, Const):
        return h.name == "$choice"
    if isinstance(h, Var) and isinstance(h.ty, FunType):
        a = h.ty.arg
        return isinstance(a, FunType) and a.res == O and h.ty.res == a.arg
    return False


def choice_terms(c: Clause) -> list[Term]:
    out: list[Term] = []
    for l in c.lits:
        for side in l.sides():
            for _, t in positions(side):
                if isinstance(t, App) and _is_choice_head(t.head):
                    arg = t.args[0]
                    if arg.lb == 0 and arg not in out:
                        out.append(arg)
    return out


def choice_rule(c: Clause, seen: set | None = None) -> list[Clause]:
    out = []
    for t in choice_terms(c):
        if seen is not None:
            if t in seen:
                continue
            seen.add(t)
        tau = t.ty.arg
        X = supply().var(tau)
        lits = [Literal(mk_app(t, [X]), TRUE, False),
                Literal(mk_app(t, [App(choice(tau), (t,))]), TRUE, True)]
        out.append(derived(lits, "Choice", (c,), {"term": t}))
    return out


def _fs_groups(c: Clause) -> list[tuple[Var, list[tuple[tuple, Term]]]]:
    groups: dict[int, list] = {}
    heads: dict[int, Var] = {}
    for l in c.lits:
        if l.pol or l.is_boolean:
            continue
        for s, t in ((l.left, l.right), (l.right, l.left)):
            h, args = head_args(s)
            if isinstance(h, Var) and args and head_args(t)[0] != h:
                groups.setdefault(h.id, []).append((args, t))
                heads[h.id] = h
                break
    out = []
    for k, rows in groups.items():
        F = heads[k]
        n = len(rows[0][0])
        if any(len(a) != n for a, _ in rows):
            continue
        if any(occurs(F.id, x) for a, t in rows for x in (*a, t)):
            continue
        out.append((F, rows))
    return out


def fs_binding(F: Var, rows) -> Term:
    n = len(rows[0][0])
    arg_tys, _ = split_type(F.ty)
    arg_tys = arg_tys[:n]
    tau = rows[0][1].ty
    xs = [supply().var(t) for t in arg_tys]
    z = supply().var(tau)
    conj = None
    for args, t in rows:
        cond = None
        for x, s in zip(xs, args):
            e = mk_app(eq(x.ty), [x, s])
            cond = e if cond is None else mk_and(cond, e)
        row = mk_imp(cond, mk_app(eq(tau), [z, t]))
        conj = row if conj is None else mk_and(conj, row)
    body = App(choice(tau), (abstract(conj, z),))
    for x in reversed(xs):
        body = abstract(body, x)
    return beta_eta_normalize(body)


def func_synth(c: Clause, require_failure: bool = False,
               depth: int = DEFAULT_DEPTH) -> Clause:
    """Replace the head variable of a group of negative literals by an
    if-then-else table built from choice.  With ``require_failure`` the
    rule only fires when plain unification of the group fails."""
    for F, rows in _fs_groups(c):
        if require_failure:
            pairs = [(mk_app(F, list(a)), t) for a, t in rows]
            if unifiers(pairs, depth, limit=1):
                continue
        sigma = Substitution({F: fs_binding(F, rows)})
        return derived([l.apply(sigma) for l in c.lits], "FS", (c,), {"subst": sigma})
    return c


def inj_rule(c: Clause) -> Clause | None:
    """From ``[f X = f Y]^ff | [X = Y]^tt`` (f injective) postulate a left
    inverse: ``[sk (f X) = X]^tt``."""
    if len(c.lits) != 2:
        return None
    pos = [l for l in c.lits if l.pol]
    neg = [l for l in c.lits if not l.pol]
    if len(pos) != 1 or len(neg) != 1:
        return None
    p, n = pos[0], neg[0]
    if not (isinstance(p.left, Var) and isinstance(p.right, Var)) or p.left == p.right:
        return None
    X, Y = p.left, p.right
    for u, v in ((n.left, n.right), (n.right, n.left)):
        hu, au = head_args(u)
        hv, av = head_args(v)
        if not isinstance(hu, Const) or hu != hv or not au or len(au) != len(av):
            continue
        if au[:-1] != av[:-1] or any(a.has_vars for a in au[:-1]):
            continue
        if {au[-1], av[-1]} != {X, Y}:
            continue
        f = mk_app(hu, list(au[:-1]))
        sk = supply().symbol("inj", FunType(f.ty.res, X.ty))
        Z = supply().var(X.ty)
        return derived([Literal(mk_app(sk, [mk_app(f, [Z])]), Z, True)], "INJ", (c,),
                       {"fun": f})
    return None


# ---------------------------------------------------------------------------
# contraction

def simplify_trivial(c: Clause) -> Clause | None:
    """Drop ``[s = s]^ff`` and duplicate literals; None for tautologies."""
    lits: list[Literal] = []
    changed = False
    for l in c.lits:
        if l.left == l.right:
            if l.pol:
                return REDUNDANT
            changed = True
            continue
        if l in lits:
            changed = True
            continue
        lits.append(l)
    for i, a in enumerate(lits):
        for b in lits[i + 1:]:
            if a.pol != b.pol and (a.left, a.right) in ((b.left, b.right), (b.right, b.left)):
                return REDUNDANT
    if not changed:
        return c
    return derived(lits, "Simp", (c,))


def der_candidates(c: Clause) -> list[Clause]:
    out = []
    for i, l in enumerate(c.lits):
        if l.pol:
            continue
        for x, t in ((l.left, l.right), (l.right, l.left)):
            if isinstance(x, Var) and not occurs(x.id, t):
                sigma = Substitution({x: t})
                rest = [m.apply(sigma) for k, m in enumerate(c.lits) if k != i]
                out.append(derived(rest, "DER", (c,), {"subst": sigma}))
                break
    return out


def destructive_eq_res(c: Clause) -> Clause:
    cands = der_candidates(c)
    return cands[0] if cands else c


class ActiveSet:
    """The processed clauses, with unit clauses indexed separately."""

    def __init__(self, clauses: Iterable[Clause] = ()):
        self.clauses: dict[int, Clause] = {}
        self.units: dict[int, Clause] = {}
        for c in clauses:
            self.add(c)

    def add(self, c: Clause) -> None:
        self.clauses[c.id] = c
        if len(c.lits) == 1:
            self.units[c.id] = c

    def remove(self, c: Clause) -> None:
        self.clauses.pop(c.id, None)
        self.units.pop(c.id, None)

    def __iter__(self):
        return iter(list(self.clauses.values()))

    def __len__(self):
        return len(self.clauses)

    def __contains__(self, c):
        return c.id in self.clauses


def rewrite_with(c: Clause, unit: Clause) -> Clause | None:
    """One rewrite step of ``c`` with the positive unit equation ``unit``."""
    u = unit.lits[0]
    if not u.pol or c.id == unit.id:
        return None
    dirs = [(u.left, u.right)]
    if u.is_equation and not u.oriented:
        dirs.append((u.right, u.left))
    uvars = unit.free_vars()
    for l, r in dirs:
        if isinstance(l, Var) or _flex(l) or l == TRUE:
            continue
        for i, m in enumerate(c.lits):
            for side_idx, side in enumerate((m.left, m.right)):
                if side == TRUE:
                    continue
                for pos, sub in positions(side):
                    if sub.ty != l.ty or sub.lb or sub.size < l.size:
                        continue
                    s: dict = {}
                    if not match(l, sub, s):
                        continue
                    sigma = _sub(s, uvars)
                    lr, rr = sigma.apply(l), sigma.apply(r)
                    if free_vars(rr).keys() - free_vars(lr).keys():
                        continue
                    if not u.oriented and not greater(lr, rr):
                        continue
                    new_side = beta_eta_normalize(replace_at(side, pos, rr))
                    nl = Literal(new_side, m.right, m.pol) if side_idx == 0 else Literal(m.left, new_side, m.pol)
                    lits = list(c.lits)
                    lits[i] = nl
                    return derived(lits, "Rewrite", (c, unit), {"subst": sigma})
    return None


def unit_cut_with(c: Clause, unit: Clause) -> Clause | None:
    u = unit.lits[0]
    if c.id == unit.id:
        return None
    uvars = unit.free_vars()
    neg = Literal(u.left, u.right, not u.pol)
    for i, m in enumerate(c.lits):
        subs = match_literal(neg, m, {})
        if subs:
            lits = [l for k, l in enumerate(c.lits) if k != i]
            return derived(lits, "UnitCut", (c, unit), {"subst": _sub(subs[0], uvars)})
    return None


MAX_CONTRACT_STEPS = 64


def contract(c: Clause, active: ActiveSet | Iterable[Clause] = (),
             subsumption: bool = True) -> Clause | None:
    """Simplify ``c`` to a fixpoint against ``active``.  Returns the
    simplified clause (``c`` itself if nothing applied) or None when ``c``
    is redundant."""
    if not isinstance(active, ActiveSet):
        active = ActiveSet(active)
    for _ in range(MAX_CONTRACT_STEPS):
        s = simplify_trivial(c)
        if s is REDUNDANT:
            return REDUNDANT
        if s is not c:
            c = s
            continue
        d = destructive_eq_res(c)
        if d is not c:
            c = d
            continue
        step = None
        for u in active.units.values():
            step = unit_cut_with(c, u)
            if step is None and u.lits[0].pol:
                step = rewrite_with(c, u)
            if step is not None:
                break
        if step is not None:
            c = step
            continue
        break
    if subsumption and c.lits:
        for d in active:
            if d.id != c.id and subsumes(d, c):
                return REDUNDANT
    return c


# ---------------------------------------------------------------------------
# defined equalities

def _leibniz_bodies(ty) -> list[Term]:
    """Closed definitions ``^[X,Y]: ...`` of Leibniz and Andrews equality
    at type ``ty`` in the shapes produced by the parser."""
    P = FunType(ty, O)
    Q = FunType(ty, FunType(ty, O))
    out = []
    # Leibniz: ![P]: (P @ X) => (P @ Y), both argument orders of the disjunction
    for x, y in ((1, 0), (0, 1)):
        px = App(Bound(0, P), (Bound(x + 1, ty),))
        py = App(Bound(0, P), (Bound(y + 1, ty),))
        for body in (mk_or(mk_not(px), py), mk_or(py, mk_not(px))):
            out.append(Lam(ty, Lam(ty, App(pi(P), (Lam(P, body),)))))
    # Andrews: ![Q]: (![Z]: Q @ Z @ Z) => Q @ X @ Y
    refl = App(pi(ty), (Lam(ty, App(Bound(1, Q), (Bound(0, ty), Bound(0, ty)))),))
    for x, y in ((1, 0), (0, 1)):
        qxy = App(Bound(0, Q), (Bound(x + 1, ty), Bound(y + 1, ty)))
        for body in (mk_or(mk_not(refl), qxy), mk_or(qxy, mk_not(refl))):
            out.append(Lam(ty, Lam(ty, App(pi(Q), (Lam(Q, body),)))))
    return [beta_eta_normalize(b) for b in out]


def defined_equality_type(defn: Term):
    """The type ``t`` when ``defn`` is a Leibniz/Andrews definition of
    equality on ``t``, else None."""
    defn = beta_eta_normalize(defn)
    if not (isinstance(defn, Lam) and isinstance(defn.body, Lam)):
        return None
    ty = defn.binder
    if defn.body.binder != ty or defn.ty != FunType(ty, FunType(ty, O)):
        return None
    if defn in _leibniz_bodies(ty):
        return ty
    return None


def replace_leibniz(t: Term) -> Term:
    """Replace Leibniz-equality subformulas ``![P]: ~(P a) | P b`` by ``a = b``."""
    t = beta_eta_normalize(t)

    def go(u: Term) -> Term:
        if isinstance(u, Lam):
            return Lam(u.binder, go(u.body))
        if not isinstance(u, App):
            return u
        if (isinstance(u.head, Const) and u.head.name == "$pi" and isinstance(u.args[0], Lam)):
            lam = u.args[0]
            P = lam.binder
            if isinstance(P, FunType) and P.res == O:
                r = _leibniz_instance(lam.body, P.arg)
                if r is not None:
                    a, b = r
                    return App(eq(P.arg), (go(a), go(b)))
        return App(go(u.head), [go(a) for a in u.args])

    return beta_eta_normalize(go(t))


def _leibniz_instance(body: Term, ty):
    from .terms import shift, loose_in
    h, args = head_args(body)
    if h != OR or len(args) != 2:
        return None
    for neg, posl in (args, args[::-1]):
        hn, an = head_args(neg)
        if hn != NOT:
            continue
        pa, pb = an[0], posl
        ok = []
        for t in (pa, pb):
            th, ta = head_args(t)
            if th != Bound(0, FunType(ty, O)) or len(ta) != 1 or loose_in(ta[0], 0):
                break
            ok.append(shift(ta[0], -1, 0))
        else:
            return ok[0], ok[1]
    return None


def defined_eq_replace(clauses: Iterable[Clause]) -> list[Clause]:
    """Clauses with Leibniz-style equality subformulas replaced by
    primitive equality; untouched clauses are returned as is."""
    out = []
    for c in clauses:
        lits = [Literal(replace_leibniz(l.left), replace_leibniz(l.right), l.pol) for l in c.lits]
        if all(a == b for a, b in zip(lits, c.lits)):
            out.append(c)
        else:
            out.append(derived(lits, "DefEq", (c,)))
    return out
