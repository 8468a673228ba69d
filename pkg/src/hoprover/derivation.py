"""Derivations: extraction from the clause graph, reading them back from
TSTP text, and replaying every step."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import calculus as calc
from .clausal import (Clause, FormulaStep, Inference, Literal, clause_lists, cnf_clause,
                      heuristic_instantiate)
from .problem import LogicSpec
from .terms import (NOT, OR, TRUE, App, Bound, Const, FreshSupply, Lam, Substitution, Term,
                    Var, beta_eta_normalize, constants, eq, fresh_scope, free_vars,
                    head_args, mk_not, replace_vars)
from .types import BaseType, FunType, I, O, TypeExpr


class ReplayError(Exception):
    """A derivation is malformed (dangling parent, unknown rule)."""


@dataclass
class ProofStep:
    name: str
    role: str
    formula: Term | None = None
    clause: Clause | None = None
    rule: str | None = None
    parents: tuple[str, ...] = ()
    info: dict = field(default_factory=dict)

    @property
    def is_clause(self) -> bool:
        return self.clause is not None


@dataclass
class Derivation:
    problem_name: str
    steps: list[ProofStep]
    signature: dict[str, TypeExpr] = field(default_factory=dict)
    base_types: list[str] = field(default_factory=list)
    logic: LogicSpec | None = None

    def step(self, name: str) -> ProofStep:
        for s in self.steps:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def conclusion(self) -> ProofStep:
        return self.steps[-1]


LOGICAL = ("$true", "$not", "$or", "$pi", "$eq", "$choice", "$box", "$dia")


def _node_terms(n) -> list[Term]:
    if isinstance(n, Clause):
        return [t for l in n.lits for t in l.sides()]
    return [n.term]


def extract(root: Clause, problem_name: str, base_types: Sequence[str] = (),
            logic: LogicSpec | None = None) -> Derivation:
    """The derivation of ``root`` from the inputs, in creation order."""
    nodes: dict[int, object] = {}
    stack = [root]
    while stack:
        n = stack.pop()
        if n.id in nodes:
            continue
        nodes[n.id] = n
        stack.extend(n.origin.premises)
    order = sorted(nodes.values(), key=lambda n: n.id)
    inputs = {n.name for n in order if isinstance(n, FormulaStep) and n.origin.rule == "Input"}
    names: dict[int, str] = {}
    for n in order:
        if isinstance(n, FormulaStep) and n.origin.rule == "Input":
            names[n.id] = n.name
        else:
            base = f"c{n.id}" if isinstance(n, Clause) else f"f{n.id}"
            while base in inputs:
                base += "_"
            names[n.id] = base
    steps = []
    sig: dict[str, TypeExpr] = {}
    for n in order:
        for t in _node_terms(n):
            for (name, ty), c in constants(t).items():
                if name not in LOGICAL:
                    sig.setdefault(name, ty)
        rule = None if n.origin.rule == "Input" else n.origin.rule
        parents = tuple(names[p.id] for p in n.origin.premises)
        if isinstance(n, Clause):
            steps.append(ProofStep(names[n.id], "plain", None, n, rule, parents, dict(n.origin.info)))
        else:
            steps.append(ProofStep(names[n.id], n.role, n.term, None, rule, parents, dict(n.origin.info)))
    types = list(base_types)
    for ty in sig.values():
        for b in _base_names(ty):
            if b not in types and b not in ("$i", "$o"):
                types.append(b)
    return Derivation(problem_name, steps, sig, types, logic)


def _base_names(ty) -> list[str]:
    if isinstance(ty, BaseType):
        return [ty.name]
    return _base_names(ty.arg) + _base_names(ty.res)


# ---------------------------------------------------------------------------
# variants

def _vmatch(s: Term, t: Term, vmap: dict, cmap: dict, fresh: set) -> bool:
    if isinstance(s, Var):
        if not isinstance(t, Var) or s.ty != t.ty:
            return False
        if s.id in vmap:
            return vmap[s.id] == t.id
        if t.id in vmap.get("_rev", set()):
            return False
        vmap[s.id] = t.id
        vmap.setdefault("_rev", set()).add(t.id)
        return True
    if isinstance(s, Const):
        if s.name in fresh:
            if not isinstance(t, Const) or s.ty != t.ty:
                return False
            if s.name in cmap:
                return cmap[s.name] == t.name
            if t.name in cmap.get("_rev", set()):
                return False
            cmap[s.name] = t.name
            cmap.setdefault("_rev", set()).add(t.name)
            return True
        return s == t
    if isinstance(s, Bound):
        return s == t
    if isinstance(s, Lam):
        return isinstance(t, Lam) and s.binder == t.binder and _vmatch(s.body, t.body, vmap, cmap, fresh)
    if isinstance(s, App):
        return (isinstance(t, App) and len(s.args) == len(t.args)
                and _vmatch(s.head, t.head, vmap, cmap, fresh)
                and all(_vmatch(a, b, vmap, cmap, fresh) for a, b in zip(s.args, t.args)))
    return s == t


def _copy(m: dict) -> dict:
    out = dict(m)
    if "_rev" in out:
        out["_rev"] = set(out["_rev"])
    return out


def lits_variant(a: Sequence[Literal], b: Sequence[Literal], fresh: set = frozenset()) -> bool:
    """Equal up to a bijective renaming of free variables and of the
    constants named in ``fresh``."""
    if len(a) != len(b):
        return False

    def go(i, used, vmap, cmap):
        if i == len(a):
            return True
        la = a[i]
        for j, lb in enumerate(b):
            if j in used or la.pol != lb.pol or la.ty != lb.ty:
                continue
            for l2, r2 in ((lb.left, lb.right), (lb.right, lb.left)):
                vm, cm = _copy(vmap), _copy(cmap)
                if _vmatch(la.left, l2, vm, cm, fresh) and _vmatch(la.right, r2, vm, cm, fresh):
                    if go(i + 1, used | {j}, vm, cm):
                        return True
        return False

    return go(0, frozenset(), {}, {})


def term_variant(a: Term, b: Term, fresh: set = frozenset()) -> bool:
    return _vmatch(a, b, {}, {}, fresh)


# ---------------------------------------------------------------------------
# replay

CLAUSE_RULES = ("Para", "EqFac", "Decomp", "PS", "FuncExt", "BoolExt", "Choice", "FS", "INJ", "Simp",
                "DER", "Rewrite", "UnitCut", "DefEq", "Inst", "CNF")
FORMULA_RULES = ("Neg", "Unfold", "DefEq")


def _fresh_names(step: ProofStep, parents: list[ProofStep]) -> set:
    seen = set()
    for p in parents:
        for t in _step_terms(p):
            seen.update(n for (n, _) in constants(t))
    out = set()
    for t in _step_terms(step):
        out.update(n for (n, _) in constants(t) if n not in seen and n not in LOGICAL)
    return out


def _step_terms(s: ProofStep) -> list[Term]:
    if s.clause is not None:
        return [t for l in s.clause.lits for t in l.sides()]
    return [s.formula]


def _unfold(t: Term, defs: dict[str, Term]) -> Term:
    def go(u):
        if isinstance(u, Const) and u.name in defs and defs[u.name].ty == u.ty:
            return defs[u.name]
        if isinstance(u, Lam):
            return Lam(u.binder, go(u.body))
        if isinstance(u, App):
            return App(go(u.head), [go(a) for a in u.args])
        return u
    return beta_eta_normalize(go(t))


def definition_parts(t: Term):
    """``(symbol, body)`` for a definition ``c = body``, else None."""
    h, args = head_args(t)
    if isinstance(h, Const) and h.name == "$eq" and len(args) == 2 and isinstance(args[0], Const) \
            and args[0].name not in LOGICAL:
        return args[0], args[1]
    return None


def defeq_formula(t: Term, defs: Iterable[Term]) -> Term:
    """Replace defined-equality symbols by primitive equality and Leibniz
    subformulas by equations."""
    mapping = {}
    for d in defs:
        parts = definition_parts(d)
        if parts is None:
            continue
        sym, body = parts
        ty = calc.defined_equality_type(body)
        if ty is not None:
            mapping[sym.name] = eq(ty)
    return calc.replace_leibniz(_unfold(t, mapping))


def unfold_formula(t: Term, defs: Iterable[Term]) -> Term:
    mapping = {}
    for d in defs:
        parts = definition_parts(d)
        if parts is not None:
            mapping[parts[0].name] = parts[1]
    return _unfold(t, mapping)


def rederive(step: ProofStep, parents: list[ProofStep]):
    """Candidate conclusions for ``step`` recomputed from its parents:
    a list of literal tuples (clause steps) or of terms (formula steps)."""
    rule = step.rule
    pcl = [p.clause for p in parents]
    first = parents[0] if parents else None
    if step.clause is None:
        if rule == "Neg":
            return [beta_eta_normalize(mk_not(first.formula))]
        if rule == "Unfold":
            return [unfold_formula(first.formula, [p.formula for p in parents[1:]])]
        if rule == "DefEq":
            return [defeq_formula(first.formula, [p.formula for p in parents[1:]])]
        raise ReplayError(f"{step.name}: unknown formula rule {rule!r}")
    if rule in ("Inst", "PS", "FS"):
        sigma = step.info.get("subst") or Substitution()
        return [tuple(l.apply(sigma) for l in pcl[0].lits)]
    if rule == "CNF":
        if first.clause is not None:
            res = cnf_clause(first.clause)
            return [tuple(ls) for ls in (res or [])]
        mode = step.info.get("mode", "definitional")
        univs = list(free_vars(first.formula).values())
        return [tuple(ls) for ls in clause_lists(first.formula, mode, univs=univs)]
    if rule == "Simp":
        r = calc.simplify_trivial(pcl[0])
        return [] if r is calc.REDUNDANT else [r.lits]
    if rule == "DER":
        return [c.lits for c in calc.der_candidates(pcl[0])]
    if rule == "Rewrite":
        r = calc.rewrite_with(pcl[0], pcl[1])
        return [r.lits] if r is not None else []
    if rule == "UnitCut":
        r = calc.unit_cut_with(pcl[0], pcl[1])
        return [r.lits] if r is not None else []
    if rule == "Para":
        out = [c.lits for c in calc.paramodulate(pcl[0], pcl[1])]
        if not any(lits_variant(step.clause.lits, o) for o in out):
            out += [c.lits for c in calc.paramodulate(pcl[0], pcl[1], var_positions=True)]
        return out
    if rule == "EqFac":
        return [c.lits for c in calc.equality_factor(pcl[0])]
    if rule == "Decomp":
        return [c.lits for c in calc.decompose(pcl[0])]
    if rule == "FuncExt":
        return [calc.func_ext(pcl[0]).lits]
    if rule == "BoolExt":
        return [c.lits for c in calc.bool_ext(pcl[0])]
    if rule == "Choice":
        return [c.lits for c in calc.choice_rule(pcl[0])]
    if rule == "INJ":
        r = calc.inj_rule(pcl[0])
        return [r.lits] if r is not None else []
    if rule == "DefEq":
        return [c.lits for c in calc.defined_eq_replace([pcl[0]])]
    raise ReplayError(f"{step.name}: unknown rule {rule!r}")


ARITY = {"Para": 2, "Rewrite": 2, "UnitCut": 2}


def replay_report(d: Derivation) -> list[str]:
    """Problems found while replaying ``d`` (empty when it checks).
    Raises ReplayError for structural defects."""
    by_name: dict[str, ProofStep] = {}
    problems = []
    reserved = set(d.signature) | {s.name for s in d.steps}
    max_var = 0
    for s in d.steps:
        for t in _step_terms(s):
            for k in free_vars(t):
                max_var = max(max_var, k)
    supply = FreshSupply(reserved)
    supply.bump_vars(max_var + 1000)
    with fresh_scope(supply):
        for s in d.steps:
            for p in s.parents:
                if p not in by_name:
                    raise ReplayError(f"{s.name}: dangling parent {p!r}")
            parents = [by_name[p] for p in s.parents]
            by_name[s.name] = s
            if s.rule is None:
                continue
            if s.rule not in CLAUSE_RULES + FORMULA_RULES:
                raise ReplayError(f"{s.name}: unknown rule {s.rule!r}")
            if not parents:
                raise ReplayError(f"{s.name}: {s.rule} step without parents")
            need = ARITY.get(s.rule, 1)
            if len(parents) < need:
                raise ReplayError(f"{s.name}: {s.rule} needs {need} parents")
            if s.clause is not None and s.rule not in ("CNF",) and any(p.clause is None for p in parents[:need]):
                raise ReplayError(f"{s.name}: {s.rule} expects clause parents")
            cands = rederive(s, parents)
            fresh = _fresh_names(s, parents)
            if s.clause is not None:
                ok = any(lits_variant(s.clause.lits, c, fresh) for c in cands)
            else:
                ok = any(term_variant(s.formula, c, fresh) for c in cands)
            if not ok:
                problems.append(f"{s.name}: conclusion of {s.rule} does not match its parents")
    last = d.steps[-1]
    if last.clause is None or last.clause.lits:
        problems.append(f"{last.name}: derivation does not end in the empty clause")
    return problems


def replay_check(d: Derivation) -> bool:
    """Re-derive every step from its recorded parents.  Malformed
    derivations raise ReplayError; a wrong conclusion gives False."""
    return not replay_report(d)


# ---------------------------------------------------------------------------
# reading TSTP back

def _find(ann, name):
    if not ann:
        return None
    for a in ann:
        if a[0] == "fn" and a[1] == name:
            return a
    return None


def parse_derivation(text: str) -> Derivation:
    from .tptp import Parser, parse_problem, ParseError

    prob = parse_problem(text, "derivation")
    m = re.search(r"% SZS output start Refutation for (\S+)", text)
    pname = m.group(1) if m else prob.name
    steps: list[ProofStep] = []
    for k, f in enumerate(prob.formulas):
        if f.role in ("type", "logic"):
            continue
        inf = None
        if f.annotations:
            a0 = f.annotations[0]
            if a0[0] == "fn" and a0[1] == "inference":
                inf = a0
        if inf is None:
            steps.append(ProofStep(f.name, f.role, f.formula))
            continue
        rule = inf[2][0][1]
        info_items = inf[2][1][1] if inf[2][1][0] == "list" else []
        parents = tuple(p[1] for p in inf[2][2][1])
        is_clause = _find(info_items, "kind") is not None
        vars_: dict[str, Var] = {}
        vs = _find(info_items, "vars")
        if vs is not None:
            vars_.update(_open_binders(vs[2][0][1], prob))
        info: dict = {}
        binds = {}
        for it in info_items:
            if it[0] == "fn" and it[1] == "bind":
                vname = it[2][0][1]
                p = Parser(it[2][1][1], prob.signature, prob.base_types, free=vars_)
                binds[vars_[vname]] = p.parse_formula()
            if it[0] == "fn" and it[1] == "mode":
                info["mode"] = it[2][0][1]
        if binds:
            info["subst"] = Substitution(binds)
        if is_clause:
            lits = _clause_from_source(f.source, prob)
            steps.append(ProofStep(f.name, f.role, None, Clause(lits, id=k + 1), rule, parents, info))
        else:
            steps.append(ProofStep(f.name, f.role, f.formula, None, rule, parents, info))
    sig = {n: t for n, t in prob.signature.items()}
    logic = None
    m = re.search(r"^% modal logic: (.*)$", text, re.M)
    if m:
        from .tptp import parse_logic_spec
        logic = parse_logic_spec(m.group(1))
    return Derivation(pname, steps, sig, list(prob.base_types), logic)


_VNAME = re.compile(r"V(\d+)\Z")


def _open_binders(src: str, prob) -> dict[str, Var]:
    """Free variables declared by a leading ``! [V1:ty, ...]:`` prefix."""
    from .tptp import Parser
    p = Parser(src, prob.signature, prob.base_types)
    out: dict[str, Var] = {}
    depth = 0
    while p.accept("("):
        depth += 1
    if p.tok.text == "!" and p.peek().text == "[":
        p.next()
        p.next()
        while True:
            vt = p.next()
            p.expect(":")
            ty = p.parse_type()
            m = _VNAME.match(vt.text)
            vid = int(m.group(1)) if m else 10 ** 6 + len(out)
            out[vt.text] = Var(vid, ty)
            if not p.accept(","):
                break
        p.expect("]")
    return out


def _clause_from_source(src: str, prob) -> list[Literal]:
    from .tptp import Parser
    free = _open_binders(src, prob)
    p = Parser(src, prob.signature, prob.base_types, free=free)
    depth = 0
    while p.tok.text == "(" and p.peek().text == "!" and free:
        p.next()
        depth += 1
    if free:
        p.next()  # !
        p.next()  # [
        while p.tok.text != "]":
            p.next()
        p.next()
        p.expect(":")
        body = p.parse_unary()
        for _ in range(depth):
            p.expect(")")
    else:
        body = p.parse_formula()
    body = beta_eta_normalize(body)
    if body == beta_eta_normalize(mk_not(TRUE)):
        return []
    parts = []

    def flat(t):
        h, args = head_args(t)
        if h == OR and len(args) == 2:
            flat(args[0])
            flat(args[1])
        else:
            parts.append(t)

    flat(body)
    lits = []
    for t in parts:
        pol = True
        h, args = head_args(t)
        if h == NOT and len(args) == 1:
            pol, t = False, args[0]
            h, args = head_args(t)
        if isinstance(h, Const) and h.name == "$eq" and len(args) == 2:
            lits.append(Literal(args[0], args[1], pol))
        else:
            lits.append(Literal(t, TRUE, pol))
    return lits
