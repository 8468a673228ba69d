"""Literals, clauses and the clause normalization pipeline.

A formula is first put in negation normal form as a small tree, then
quantifiers are pushed inward (miniscoping), existentials are replaced by
Skolem terms over the universals in scope, and the quantifier-free
matrix is turned into clauses, optionally introducing definitions for
conjunctions that would blow up under distribution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ordering import greater
from .terms import (FALSE, NOT, OR, TRUE, App, Const, Lam, Term, Var,
                    abstract, beta_eta_normalize, eq, free_vars, head_args,
                    mk_and, mk_app, mk_forall, mk_not, mk_or, pi, replace_vars,
                    show, supply, Substitution)
from .types import O, FunType, fun_of

DEF_THRESHOLD = 4


# ---------------------------------------------------------------------------
# literals and clauses

class Literal:
    """Signed equation ``[left ~ right]^pol``.

    Boolean literals keep ``$true`` on the right.  ``oriented`` records
    whether ``left`` is strictly greater than ``right`` in the heuristic
    ordering (sides are swapped on construction when ``right`` is greater).
    """

    __slots__ = ("left", "right", "pol", "oriented", "_hash")

    def __init__(self, left: Term, right: Term = TRUE, pol: bool = True):
        left = beta_eta_normalize(left)
        right = beta_eta_normalize(right)
        if left.ty != right.ty:
            raise TypeError(f"literal sides differ in type: {left.ty} vs {right.ty}")
        if left == TRUE and right != TRUE:
            left, right = right, left
        if right == TRUE:
            oriented = left != TRUE
        elif greater(left, right):
            oriented = True
        elif greater(right, left):
            left, right, oriented = right, left, True
        else:
            oriented = False
        self.left, self.right, self.pol, self.oriented = left, right, bool(pol), oriented
        self._hash = hash((frozenset((left, right)), self.pol))

    @property
    def is_boolean(self) -> bool:
        return self.right == TRUE

    @property
    def is_equation(self) -> bool:
        return self.right != TRUE

    @property
    def ty(self):
        return self.left.ty

    @property
    def has_vars(self) -> bool:
        return self.left.has_vars or self.right.has_vars

    @property
    def size(self) -> int:
        return self.left.size + self.right.size

    def sides(self) -> tuple[Term, Term]:
        return self.left, self.right

    def negate(self) -> "Literal":
        return Literal(self.left, self.right, not self.pol)

    def map(self, f) -> "Literal":
        return Literal(f(self.left), f(self.right), self.pol)

    def apply(self, sigma: Substitution) -> "Literal":
        if not self.has_vars or not sigma:
            return self
        return Literal(sigma.apply(self.left), sigma.apply(self.right), self.pol)

    def __eq__(self, other):
        if not isinstance(other, Literal):
            return NotImplemented
        if self._hash != other._hash or self.pol != other.pol:
            return False
        return ((self.left == other.left and self.right == other.right)
                or (self.left == other.right and self.right == other.left))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return show_literal(self)


def show_literal(l: Literal) -> str:
    sign = "tt" if l.pol else "ff"
    if l.is_boolean:
        return f"[{show(l.left)}]^{sign}"
    return f"[{show(l.left)} = {show(l.right)}]^{sign}"


def lit_from_atom(atom: Term, pol: bool) -> Literal:
    """Literal for a formula ``atom`` (equations between non-booleans
    become equation literals)."""
    atom = beta_eta_normalize(atom)
    h, args = head_args(atom)
    if isinstance(h, Const) and h.name == "$eq" and len(args) == 2:
        return Literal(args[0], args[1], pol)
    if atom == FALSE:
        return Literal(TRUE, TRUE, not pol)
    return Literal(atom, TRUE, pol)


@dataclass(eq=False)
class Inference:
    """Justification of a derived clause or formula."""
    rule: str
    premises: tuple = ()
    info: dict = field(default_factory=dict)

    @property
    def parents(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.premises)


class Clause:
    """Multiset of literals, read as their disjunction.  Free variables
    are implicitly universally quantified."""

    __slots__ = ("lits", "id", "origin", "_vars", "_weight", "ps_depth")

    def __init__(self, lits: Iterable[Literal], origin: Inference | None = None,
                 id: int | None = None, ps_depth: int = 0):
        self.lits: tuple[Literal, ...] = tuple(lits)
        self.id = supply().clause_id() if id is None else id
        self.origin = origin or Inference("Input")
        self._vars = None
        self._weight = None
        self.ps_depth = ps_depth

    @property
    def name(self) -> str:
        return f"c{self.id}"

    @property
    def is_empty(self) -> bool:
        return not self.lits

    @property
    def weight(self) -> int:
        if self._weight is None:
            self._weight = sum(l.size for l in self.lits)
        return self._weight

    def free_vars(self) -> dict[int, Var]:
        if self._vars is None:
            acc: dict[int, Var] = {}
            for l in self.lits:
                for t in (l.left, l.right):
                    if t.has_vars:
                        for k, v in free_vars(t).items():
                            acc.setdefault(k, v)
            self._vars = acc
        return self._vars

    @property
    def is_ground(self) -> bool:
        return not self.free_vars()

    def key(self) -> tuple:
        """Order-independent identity of the literal multiset."""
        return tuple(sorted(hash(l) for l in self.lits))

    def same_lits(self, other: "Clause") -> bool:
        return lit_multiset_equal(self.lits, other.lits)

    def __len__(self):
        return len(self.lits)

    def __iter__(self):
        return iter(self.lits)

    def __repr__(self):
        body = " | ".join(map(show_literal, self.lits)) or "$false"
        return f"{self.name}: {body}"


def lit_multiset_equal(a: Sequence[Literal], b: Sequence[Literal]) -> bool:
    if len(a) != len(b):
        return False
    rest = list(b)
    for l in a:
        for i, m in enumerate(rest):
            if l == m:
                del rest[i]
                break
        else:
            return False
    return True


class FormulaStep:
    """A formula-level node of a derivation (input or transformed)."""

    __slots__ = ("id", "name", "role", "term", "origin")

    def __init__(self, name: str, role: str, term: Term, origin: Inference | None = None,
                 id: int | None = None):
        self.id = supply().clause_id() if id is None else id
        self.name = name
        self.role = role
        self.term = term
        self.origin = origin or Inference("Input")

    def __repr__(self):
        return f"{self.name}({self.role}): {show(self.term)}"


def clause_formula(c: Clause) -> Term:
    """The closed formula a clause stands for (used by the oracle)."""
    parts = []
    for l in c.lits:
        atom = l.left if l.is_boolean else mk_app(eq(l.ty), [l.left, l.right])
        parts.append(atom if l.pol else mk_not(atom))
    body = parts[0] if parts else FALSE
    for p in parts[1:]:
        body = mk_or(body, p)
    for v in reversed(list(c.free_vars().values())):
        body = mk_app(pi(v.ty), [abstract(body, v)])
    return beta_eta_normalize(body)


# ---------------------------------------------------------------------------
# negation normal form trees
#
#   ("lit", atom, pol)  ("and", [..])  ("or", [..])
#   ("all", var, node)  ("ex", var, node)  ("top",)  ("bot",)

TOP = ("top",)
BOT = ("bot",)


def _is_formula_eq(h, args) -> bool:
    return isinstance(h, Const) and h.name == "$eq" and len(args) == 2 and args[0].ty == O


def to_nnf(t: Term, pol: bool = True):
    t = beta_eta_normalize(t)
    if t == TRUE:
        return TOP if pol else BOT
    h, args = head_args(t)
    if h == NOT and len(args) == 1:
        return to_nnf(args[0], not pol)
    if h == OR and len(args) == 2:
        kids = [to_nnf(args[0], pol), to_nnf(args[1], pol)]
        return ("or", kids) if pol else ("and", kids)
    if isinstance(h, Const) and h.name == "$pi" and len(args) == 1:
        body = args[0]
        ty = h.ty.arg.arg
        v = supply().var(ty)
        inst = beta_eta_normalize(App(body, (v,)))
        return ("all" if pol else "ex", v, to_nnf(inst, pol))
    if _is_formula_eq(h, args):
        a, b = args
        if pol:
            return ("and", [("or", [to_nnf(a, False), to_nnf(b, True)]),
                            ("or", [to_nnf(a, True), to_nnf(b, False)])])
        return ("and", [("or", [to_nnf(a, True), to_nnf(b, True)]),
                        ("or", [to_nnf(a, False), to_nnf(b, False)])])
    return ("lit", t, pol)


def _node_vars(n) -> set[int]:
    k = n[0]
    if k == "lit":
        return set(free_vars(n[1])) if n[1].has_vars else set()
    if k in ("and", "or"):
        out = set()
        for c in n[1]:
            out |= _node_vars(c)
        return out
    if k in ("all", "ex"):
        return _node_vars(n[2]) - {n[1].id}
    return set()


def _junction(kind: str, kids: list):
    flat = []
    for c in kids:
        if c[0] == kind:
            flat.extend(c[1])
        else:
            flat.append(c)
    unit, zero = (TOP, BOT) if kind == "and" else (BOT, TOP)
    flat = [c for c in flat if c != unit]
    if any(c == zero for c in flat):
        return zero
    if not flat:
        return unit
    if len(flat) == 1:
        return flat[0]
    return (kind, flat)


def _mini(n):
    k = n[0]
    if k in ("and", "or"):
        return _junction(k, [_mini(c) for c in n[1]])
    if k in ("all", "ex"):
        return _push(k, n[1], _mini(n[2]))
    return n


def _push(q: str, v: Var, n):
    if v.id not in _node_vars(n):
        return n
    k = n[0]
    through = "and" if q == "all" else "or"
    if k == through:
        return _junction(k, [_push(q, v, c) for c in n[1]])
    if k in ("and", "or"):
        with_v = [c for c in n[1] if v.id in _node_vars(c)]
        rest = [c for c in n[1] if v.id not in _node_vars(c)]
        if rest:
            inner = with_v[0] if len(with_v) == 1 else (k, with_v)
            return _junction(k, rest + [_push(q, v, inner)])
    return (q, v, n)


def _to_term(n) -> Term:
    k = n[0]
    if k == "top":
        return TRUE
    if k == "bot":
        return FALSE
    if k == "lit":
        return n[1] if n[2] else mk_not(n[1])
    if k == "and":
        out = _to_term(n[1][-1])
        for c in reversed(n[1][:-1]):
            out = mk_and(_to_term(c), out)
        return out
    if k == "or":
        out = _to_term(n[1][-1])
        for c in reversed(n[1][:-1]):
            out = mk_or(_to_term(c), out)
        return out
    body = abstract(_to_term(n[2]), n[1])
    if k == "all":
        return App(pi(n[1].ty), (body,))
    return mk_not(App(pi(n[1].ty), (beta_eta_normalize(Lam(body.binder, mk_not(body.body))),)))


def miniscope(f: Term) -> Term:
    """Push quantifiers inward past connectives not mentioning the bound
    variable.  The result is in negation normal form."""
    return beta_eta_normalize(_to_term(_mini(to_nnf(f))))


# ---------------------------------------------------------------------------
# skolemization and CNF

def _skolemize(n, univs: list[Var], mapping: dict[int, Term], skolems: list):
    k = n[0]
    if k == "lit":
        t = n[1]
        if mapping and t.has_vars:
            t = beta_eta_normalize(replace_vars(t, mapping))
        return ("lit", t, n[2])
    if k in ("and", "or"):
        return (k, [_skolemize(c, univs, mapping, skolems) for c in n[1]])
    if k == "all":
        X = supply().var(n[1].ty)
        m = dict(mapping)
        m[n[1].id] = X
        return _skolemize(n[2], univs + [X], m, skolems)
    if k == "ex":
        sk = supply().symbol("sk", fun_of([u.ty for u in univs], n[1].ty))
        skolems.append(sk)
        m = dict(mapping)
        m[n[1].id] = mk_app(sk, univs)
        return _skolemize(n[2], univs, m, skolems)
    return n


def _count(n) -> int:
    k = n[0]
    if k == "lit":
        return 1
    if k == "and":
        return sum(_count(c) for c in n[1])
    if k == "or":
        out = 1
        for c in n[1]:
            out *= _count(c)
        return out
    return 0 if k == "top" else 1


def _cnf(n, definitional: bool, threshold: int, defs: list) -> list[list[Literal]]:
    k = n[0]
    if k == "top":
        return []
    if k == "bot":
        return [[]]
    if k == "lit":
        return [[lit_from_atom(n[1], n[2])]]
    if k == "and":
        return [c for kid in n[1] for c in _cnf(kid, definitional, threshold, defs)]
    parts = [_cnf(kid, definitional, threshold, defs) for kid in n[1]]
    total = 1
    for p in parts:
        total *= len(p)
    if definitional and total > threshold:
        renamed = []
        for kid, p in zip(n[1], parts):
            if len(p) < 2:
                renamed.append(p)
                continue
            xs = _ordered_vars(p)
            d = supply().symbol("def", fun_of([x.ty for x in xs], O))
            atom = mk_app(d, xs)
            defs.append((d, kid))
            for cl in p:
                defs.append([Literal(atom, TRUE, False)] + cl)
            renamed.append([[Literal(atom, TRUE, True)]])
        parts = renamed
    out = []
    for combo in itertools.product(*parts):
        out.append([l for cl in combo for l in cl])
    return out


def _ordered_vars(clauses: list[list[Literal]]) -> list[Var]:
    seen: dict[int, Var] = {}
    for cl in clauses:
        for l in cl:
            for t in l.sides():
                if t.has_vars:
                    for k2, v in free_vars(t).items():
                        seen.setdefault(k2, v)
    return list(seen.values())


def clause_lists(f: Term, mode: str = "definitional", threshold: int = DEF_THRESHOLD,
                 univs: Sequence[Var] = ()) -> list[list[Literal]]:
    """Literal lists of the CNF of ``f``.  Free variables of ``f`` listed in
    ``univs`` count as universals in scope for Skolem terms."""
    if mode not in ("standard", "definitional"):
        raise ValueError(f"unknown clausification mode {mode!r}")
    tree = _mini(to_nnf(f))
    tree = _skolemize(tree, list(univs), {}, [])
    defs: list = []
    main = _cnf(tree, mode == "definitional", threshold, defs)
    out = [cl for cl in main]
    out.extend(d for d in defs if isinstance(d, list))
    return [_dedup(cl) for cl in out]


def _dedup(lits: list[Literal]) -> list[Literal]:
    out: list[Literal] = []
    for l in lits:
        if l not in out:
            out.append(l)
    return out


def clausify(f: Term, mode: str = "definitional", parent=None,
             threshold: int = DEF_THRESHOLD) -> list[Clause]:
    """Clauses of the closed formula ``f`` (already negated if it was a
    conjecture).  Returned in a deterministic order."""
    premises = (parent,) if parent is not None else ()
    univs = list(free_vars(f).values()) if f.has_vars else []
    out = []
    for lits in clause_lists(f, mode, threshold, univs):
        out.append(Clause(lits, Inference("CNF", premises, {"mode": mode})))
    return out


# ---------------------------------------------------------------------------
# loop-level normalization of compound literals

def is_compound(l: Literal) -> bool:
    if l.is_equation:
        return False
    if l.left == TRUE:
        return True
    h, args = head_args(l.left)
    if not isinstance(h, Const):
        return False
    if h == NOT or h == OR:
        return True
    if h.name in ("$pi", "$eq") and len(args) == (1 if h.name == "$pi" else 2):
        return True
    return False


def needs_cnf(c: Clause) -> bool:
    return any(is_compound(l) for l in c.lits)


def cnf_clause(c: Clause) -> list[list[Literal]] | None:
    """Expand compound boolean literals of ``c``.  Returns None when the
    clause is already flat, otherwise the resulting literal lists."""
    if not needs_cnf(c):
        return None
    univs = list(c.free_vars().values())
    work = [list(c.lits)]
    done: list[list[Literal]] = []
    while work:
        lits = work.pop(0)
        idx = next((i for i, l in enumerate(lits) if is_compound(l)), None)
        if idx is None:
            done.append(_dedup(lits))
            continue
        l = lits[idx]
        rest = lits[:idx] + lits[idx + 1:]
        h, args = head_args(l.left)
        if isinstance(h, Const) and h.name == "$eq":
            work.insert(0, rest + [Literal(args[0], args[1], l.pol)])
            continue
        tree = _mini(to_nnf(l.left, l.pol))
        tree = _skolemize(tree, univs, {}, [])
        for cl in reversed(_cnf(tree, False, DEF_THRESHOLD, [])):
            work.insert(0, rest + cl)
    return done


# ---------------------------------------------------------------------------
# heuristic instantiation of finite types

OO = FunType(O, O)


def _bool_instances(ty) -> list[Term]:
    if ty == O:
        return [TRUE, FALSE]
    if ty == OO:
        from .terms import Bound
        return [Lam(O, TRUE), Lam(O, FALSE), Lam(O, Bound(0, O)), NOT]
    return []


def heuristic_instantiate(c: Clause) -> list[Clause]:
    """Instances of ``c`` for every combination of boolean values of its
    variables of type o and o>o; ``[c]`` when there are none."""
    targets = [v for v in c.free_vars().values() if v.ty in (O, OO)]
    if not targets:
        return [c]
    out = []
    for combo in itertools.product(*[_bool_instances(v.ty) for v in targets]):
        sigma = Substitution(dict(zip(targets, combo)))
        out.append(Clause([l.apply(sigma) for l in c.lits],
                          Inference("Inst", (c,), {"subst": sigma}), ps_depth=c.ps_depth))
    return out
