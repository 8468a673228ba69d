"""Given-clause saturation loop.

Preprocessing turns the problem into formula steps (definition handling,
conjecture negation), clausifies them and feeds the clauses into an
unprocessed queue.  Each round picks a clause (lightest or oldest),
contracts it against the active set, and, if it survives, generates
inferences between it and the active clauses.
"""

from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass, field
from typing import Iterable

from . import calculus as calc
from .clausal import (Clause, FormulaStep, Inference, Literal, clausify, cnf_clause,
                      heuristic_instantiate, needs_cnf)
from .derivation import (Derivation, ReplayError, defeq_formula, definition_parts,
                         extract, replay_check, replay_report, unfold_formula)
from .problem import Problem, SZSStatus
from .terms import (FreshSupply, TermError, beta_eta_normalize, constants, fresh_scope,
                    mk_not, type_of)
from .types import O, FunType, split_type

log = logging.getLogger(__name__)

__all__ = ["Config", "ClauseQueue", "clause_select", "ProverState", "saturate",
           "Derivation", "replay_check", "replay_report", "ReplayError", "Result"]


@dataclass
class Config:
    time_limit: float = 60.0
    max_iterations: int = 50_000
    unification_depth: int = 8
    max_unifiers: int = 4
    fs: bool = False
    ps_not: bool = True
    ps_or: bool = True
    ps_pi: bool = True
    ps_eq: bool = True
    ps_max_lits: int = 2
    ps_max_depth: int = 2
    def_threshold: int = 4
    clausify_mode: str = "definitional"
    heuristic_instantiation: bool = True
    pick_ratio: int = 5
    proof: bool = True
    replay: bool = False

    def __post_init__(self):
        if self.time_limit <= 0 or self.max_iterations <= 0:
            raise ValueError("limits must be positive")
        if self.unification_depth < 0 or self.def_threshold <= 0 or self.pick_ratio <= 0:
            raise ValueError("limits must be positive")


def priority(c: Clause) -> int:
    """Symbol weight, plus penalties for extra literals and free variables
    so that ground unit clauses are picked early."""
    return c.weight + 3 * max(len(c.lits) - 1, 0) + len(c.free_vars())


class ClauseQueue:
    """Unprocessed clauses.  ``pick_ratio`` lightest picks are followed by
    one oldest pick; ties in weight go to the lower id."""

    def __init__(self, pick_ratio: int = 5):
        self.ratio = pick_ratio
        self._by_weight: list = []
        self._by_age: list = []
        self._taken: set[int] = set()
        self._count = 0
        self._n = 0

    def push(self, c: Clause) -> None:
        heapq.heappush(self._by_weight, (priority(c), c.id, c))
        heapq.heappush(self._by_age, (c.id, c))
        self._n += 1

    def __len__(self) -> int:
        return self._n

    def __bool__(self) -> bool:
        return self._n > 0

    def _pop(self, heap) -> Clause:
        while True:
            item = heapq.heappop(heap)
            c = item[-1]
            if c.id not in self._taken:
                self._taken.add(c.id)
                self._n -= 1
                return c

    def pop(self) -> Clause:
        if not self._n:
            raise IndexError("pick from an empty clause queue")
        self._count += 1
        if self._count % (self.ratio + 1) == 0:
            return self._pop(self._by_age)
        return self._pop(self._by_weight)


def clause_select(queue: ClauseQueue) -> Clause:
    return queue.pop()


@dataclass
class Result:
    status: SZSStatus
    derivation: Derivation | None = None
    iterations: int = 0
    generated: int = 0
    elapsed: float = 0.0
    message: str = ""


class _OutOfTime(Exception):
    pass


class _Found(Exception):
    def __init__(self, clause: Clause):
        self.clause = clause


class ProverState:
    def __init__(self, cfg: Config, types: Iterable = ()):
        self.cfg = cfg
        self.queue = ClauseQueue(cfg.pick_ratio)
        self.active = calc.ActiveSet()
        self.choice_seen: set = set()
        self.generated = 0
        self.redundant = 0
        self.iterations = 0
        types = list(types)
        self.gb_spec = calc.GeneralBindingSpec(
            cfg.ps_not, cfg.ps_or,
            tuple(types) if cfg.ps_pi else (),
            tuple(types) if cfg.ps_eq else ())
        self.started = time.monotonic()

    # -- normalization of new clauses ------------------------------------
    def add_new(self, c: Clause, depth: int = 0) -> None:
        self.generated += 1
        if c.is_empty:
            raise _Found(c)
        if depth > 20:
            self.queue.push(c)
            return
        if needs_cnf(c):
            for lits in cnf_clause(c):
                self.add_new(calc.derived(lits, "CNF", (c,)), depth + 1)
            return
        s = calc.simplify_trivial(c)
        if s is calc.REDUNDANT:
            self.redundant += 1
            return
        if s is not c:
            self.add_new(s, depth + 1)
            return
        for i, l in enumerate(c.lits):
            if l.is_equation and l.ty == O:
                flex = not l.pol and (calc._flex(l.left) or calc._flex(l.right))
                for d in calc.bool_ext(c):
                    self.add_new(d, depth + 1)
                if not flex:
                    return
                break
        fun = [l for l in c.lits if isinstance(l.ty, FunType)]
        if fun:
            keep = any(not l.pol and (calc._flex(l.left) or calc._flex(l.right)) for l in fun)
            self.add_new(calc.func_ext(c), depth + 1)
            if not keep:
                return
        self.queue.push(c)

    def add_derived(self, raw: Iterable[Clause], constraint_count: int) -> None:
        """Eagerly solve the trailing ``constraint_count`` literals of each
        raw conclusion before adding the results."""
        for c in raw:
            n = len(c.lits)
            idxs = list(range(n - constraint_count, n))
            trivial = all(c.lits[i].left == c.lits[i].right for i in idxs)
            if trivial:
                self.add_new(c)
                continue
            for r in calc.solve_constraints(c, idxs, self.cfg.unification_depth,
                                            self.cfg.max_unifiers):
                self.add_new(r)

    # -- inference generation ---------------------------------------------
    def generate(self, given: Clause) -> None:
        cfg = self.cfg
        for r in calc.eq_resolvents(given, cfg.unification_depth, cfg.max_unifiers):
            self.add_new(r)
        for r in calc.decompose(given, cfg.unification_depth):
            self.add_new(r)
        for d in list(self.active):
            if self.out_of_time():
                raise _OutOfTime
            self.add_derived(calc.paramodulate(given, d), 1)
            if d is not given:
                self.add_derived(calc.paramodulate(d, given), 1)
        self.add_derived(calc.equality_factor(given), 2)
        if len(given.lits) <= cfg.ps_max_lits and given.ps_depth < cfg.ps_max_depth:
            for c in calc.primitive_substitution(given, self.gb_spec):
                self.add_new(c)
        for c in calc.choice_rule(given, self.choice_seen):
            self.add_new(c)
        if cfg.fs:
            c = calc.func_synth(given, require_failure=True, depth=cfg.unification_depth)
            if c is not given:
                self.add_new(c)
        inj = calc.inj_rule(given)
        if inj is not None:
            self.add_new(inj)

    def out_of_time(self) -> bool:
        return time.monotonic() - self.started > self.cfg.time_limit

    def run(self) -> tuple[str, Clause | None]:
        cfg = self.cfg
        while self.queue:
            if self.out_of_time() or self.iterations >= cfg.max_iterations:
                return "timeout", None
            self.iterations += 1
            given = clause_select(self.queue)
            c = calc.contract(given, self.active)
            if c is calc.REDUNDANT:
                self.redundant += 1
                continue
            if c is not given:
                self.add_new(c)
                continue
            if c.is_empty:
                raise _Found(c)
            for d in list(self.active):
                if len(d.lits) >= len(c.lits) and calc.subsumes(c, d):
                    self.active.remove(d)
            self.active.add(c)
            try:
                self.generate(c)
            except _OutOfTime:
                return "timeout", None
        return "saturated", None


# ---------------------------------------------------------------------------
# preprocessing

def _problem_types(problem: Problem, formulas) -> list:
    seen = []

    def add(ty):
        if ty not in seen:
            seen.append(ty)

    from .types import I
    add(I)
    for f in formulas:
        for (_, ty) in constants(f.term):
            args, _ = split_type(ty)
            for a in args:
                add(a)
    for ty in problem.signature.values():
        for a in split_type(ty)[0]:
            add(a)
    return seen


def preprocess(problem: Problem, cfg: Config) -> tuple[list[FormulaStep], set[int]]:
    """Formula steps ready for clausification, and the ids of steps that
    descend from the conjecture."""
    inputs = []
    for f in problem.formulas:
        if f.role in ("type", "logic"):
            continue
        inputs.append(FormulaStep(f.name, f.role, f.formula))
    defs = [s for s in inputs if s.role == "definition" and definition_parts(s.term)]
    eq_defs = [s for s in defs if calc.defined_equality_type(definition_parts(s.term)[1]) is not None]
    other_defs = [s for s in defs if s not in eq_defs]
    work: list[FormulaStep] = []
    conj: set[int] = set()
    for s in inputs:
        if s in defs:
            continue
        cur = s
        if cur.role == "conjecture":
            neg = beta_eta_normalize(mk_not(cur.term))
            cur = FormulaStep(f"neg_{cur.name}", "negated_conjecture", neg, Inference("Neg", (cur,)))
            conj.add(cur.id)
        elif cur.role == "negated_conjecture":
            conj.add(cur.id)
        is_conj = cur.id in conj
        used = [d for d in eq_defs if _mentions(cur.term, definition_parts(d.term)[0].name)]
        t = defeq_formula(cur.term, [d.term for d in used])
        if t != cur.term:
            cur = FormulaStep(f"f_{cur.name}", "plain", t, Inference("DefEq", (cur, *used)))
        for _ in range(len(other_defs) + 1):
            used = [d for d in other_defs if _mentions(cur.term, definition_parts(d.term)[0].name)]
            if not used:
                break
            t = unfold_formula(cur.term, [d.term for d in used])
            cur = FormulaStep(f"f_{cur.name}", "plain", t, Inference("Unfold", (cur, *used)))
        if is_conj:
            conj.add(cur.id)
        work.append(cur)
    return work, conj


def _mentions(t, name: str) -> bool:
    return any(n == name for (n, _) in constants(t))


def _conj_descendant(c, conj_ids: set[int], memo: dict) -> bool:
    stack = [c]
    seen = set()
    while stack:
        n = stack.pop()
        if n.id in conj_ids:
            return True
        if n.id in seen:
            continue
        seen.add(n.id)
        stack.extend(n.origin.premises)
    return False


def saturate(problem: Problem, cfg: Config | None = None) -> tuple[SZSStatus, Derivation | None]:
    r = prove(problem, cfg)
    return r.status, r.derivation


def prove(problem: Problem, cfg: Config | None = None) -> Result:
    """Run the prover on ``problem`` (modal problems are embedded first)."""
    cfg = cfg or Config()
    start = time.monotonic()
    logic = problem.logic
    if problem.logic is not None or problem.modal_ops:
        from .modal import embed_problem
        try:
            problem = embed_problem(problem)
        except ValueError as e:
            return Result(SZSStatus.ERROR, message=str(e))
    reserved = set(problem.signature) | {f.name for f in problem.formulas}
    with fresh_scope(FreshSupply(reserved)):
        try:
            for f in problem.formulas:
                if f.role not in ("type", "logic"):
                    if type_of(f.formula) != O:
                        raise TermError(f"{f.name} is not a formula")
            work, conj = preprocess(problem, cfg)
        except (TermError, TypeError, ValueError) as e:
            return Result(SZSStatus.ERROR, message=str(e))
        state = ProverState(cfg, _problem_types(problem, work))
        state.started = start
        empty = None
        try:
            for s in work:
                for c in clausify(s.term, cfg.clausify_mode, s, cfg.def_threshold):
                    if cfg.heuristic_instantiation:
                        insts = heuristic_instantiate(c)
                        if len(insts) > 16:
                            insts = [c]
                    else:
                        insts = [c]
                    for d in insts:
                        state.add_new(d)
            outcome, _ = state.run()
        except _Found as found:
            empty = found.clause
            outcome = "refuted"
        elapsed = time.monotonic() - start
        if empty is None:
            status = SZSStatus.TIMEOUT if outcome == "timeout" else SZSStatus.GAVE_UP
            return Result(status, None, state.iterations, state.generated, elapsed)
        status = (SZSStatus.THEOREM if _conj_descendant(empty, conj, {})
                  else SZSStatus.CONTRADICTORY_AXIOMS)
        deriv = extract(empty, problem.name, problem.base_types, logic) if cfg.proof or cfg.replay else None
        msg = ""
        if cfg.replay and deriv is not None:
            issues = replay_report(deriv)
            if issues:
                msg = "; ".join(issues)
                log.error("replay failed: %s", msg)
        return Result(status, deriv, state.iterations, state.generated, elapsed, msg)
