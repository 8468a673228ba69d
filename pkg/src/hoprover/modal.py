"""Shallow semantical embedding of mono-modal higher-order logic into HOL,
plus a small explicit Kripke-model evaluator used as a test oracle.

A modal formula of type ``$o`` becomes a predicate on worlds: every ``$o``
in a type is replaced by ``mworld > $o``, connectives act pointwise and
``$box``/``$dia`` quantify over accessible worlds.  Constants are rigid,
so symbols keep their names and only their types are lifted.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .problem import AnnotatedFormula, LogicSpec, Problem
from .terms import (TRUE, App, Bound, Const, Lam, Term, Var, beta_eta_normalize,
                    eq, head_args, mk_and, mk_eq, mk_exists, mk_forall, mk_imp,
                    mk_not, mk_or, pi)
from .types import O, BaseType, FunType, TypeExpr, arrow

log = logging.getLogger(__name__)


@dataclass
class EmbeddingSignature:
    """Fresh symbols introduced by the embedding."""
    world: BaseType
    rel: Const | None                 # absent for the universal S5 relation
    current: Const | None             # only for local consequence
    eiw: dict = field(default_factory=dict)   # base type -> existence predicate

    @property
    def prop(self) -> TypeExpr:
        return FunType(self.world, O)


def _fresh(name: str, taken: set) -> str:
    while name in taken:
        name += "_"
    taken.add(name)
    return name


class Embedding:
    """Translation of terms for one logic and one input signature.

    ``s5`` selects how S5 is encoded: ``"universal"`` drops the relation
    altogether, ``"equivalence"`` keeps ``mrel`` and axiomatises it as an
    equivalence relation.
    """

    def __init__(self, logic: LogicSpec, taken: set, s5: str = "universal"):
        if s5 not in ("universal", "equivalence"):
            raise ValueError(f"unknown S5 encoding {s5!r}")
        self.logic = logic
        self.taken = taken
        self.universal = logic.system == "S5" and s5 == "universal"
        world = BaseType(_fresh("mworld", taken))
        rel = None if self.universal else Const(_fresh("mrel", taken), arrow(world, world, O))
        cur = Const(_fresh("mactual", taken), world) if logic.consequence == "local" else None
        self.sig = EmbeddingSignature(world, rel, cur)

    # -- types --------------------------------------------------------------

    def lift_type(self, ty: TypeExpr) -> TypeExpr:
        if ty == O:
            return self.sig.prop
        if isinstance(ty, FunType):
            return FunType(self.lift_type(ty.arg), self.lift_type(ty.res))
        return ty

    # -- constants ----------------------------------------------------------

    def _eiw(self, ty: BaseType) -> Const:
        c = self.sig.eiw.get(ty)
        if c is None:
            c = Const(_fresh(f"meiw_{ty.name.lstrip('$')}", self.taken), arrow(ty, self.sig.world, O))
            self.sig.eiw[ty] = c
        return c

    def _access(self, w: Term, v: Term) -> Term | None:
        if self.sig.rel is None:
            return None
        return App(self.sig.rel, (w, v))

    def _modal(self, box: bool) -> Term:
        # λφ λw. ∀v. r w v → φ v   /   λφ λw. ∃v. r w v ∧ φ v
        W, mu = self.sig.prop, self.sig.world
        phi_v = App(Bound(2, W), (Bound(0, mu),))
        acc = self._access(Bound(1, mu), Bound(0, mu))
        if box:
            body = phi_v if acc is None else mk_imp(acc, phi_v)
            inner = mk_forall(mu, body)
        else:
            body = phi_v if acc is None else mk_and(acc, phi_v)
            inner = mk_exists(mu, body)
        return Lam(W, Lam(mu, inner))

    def lift_const(self, c: Const) -> Term:
        W, mu = self.sig.prop, self.sig.world
        name = c.name
        if name == "$true":
            return Lam(mu, TRUE)
        if name == "$not":
            return Lam(W, Lam(mu, mk_not(App(Bound(1, W), (Bound(0, mu),)))))
        if name == "$or":
            return Lam(W, Lam(W, Lam(mu, mk_or(App(Bound(2, W), (Bound(0, mu),)),
                                                App(Bound(1, W), (Bound(0, mu),))))))
        if name == "$eq":
            ty = c.ty.arg
            if ty == O:   # equivalence of propositions is evaluated pointwise
                return Lam(W, Lam(W, Lam(mu, mk_eq(App(Bound(2, W), (Bound(0, mu),)),
                                                    App(Bound(1, W), (Bound(0, mu),))))))
            lt = self.lift_type(ty)
            return Lam(lt, Lam(lt, Lam(mu, mk_eq(Bound(2, lt), Bound(1, lt)))))
        if name == "$pi":
            ty = c.ty.arg.arg
            lt = self.lift_type(ty)
            P = FunType(lt, W)
            # under λP λw ∀x:  x = 0, w = 1, P = 2
            body = App(Bound(2, P), (Bound(0, lt), Bound(1, mu)))
            if self.logic.quantification != "constant" and isinstance(ty, BaseType) and ty != O:
                body = mk_imp(App(self._eiw(ty), (Bound(0, lt), Bound(1, mu))), body)
            return Lam(P, Lam(mu, App(pi(lt), (Lam(lt, body),))))
        if name == "$choice":
            raise ValueError("choice is not supported in modal problems")
        if name == "$box":
            return self._modal(True)
        if name == "$dia":
            return self._modal(False)
        return Const(name, self.lift_type(c.ty))

    # -- terms --------------------------------------------------------------

    def lift(self, t: Term) -> Term:
        """Lifted term, before normalisation."""
        if isinstance(t, Const):
            return self.lift_const(t)
        if isinstance(t, Var):
            return Var(t.id, self.lift_type(t.ty))
        if isinstance(t, Bound):
            return Bound(t.index, self.lift_type(t.ty))
        if isinstance(t, Lam):
            return Lam(self.lift_type(t.binder), self.lift(t.body))
        return App(self.lift(t.head), tuple(self.lift(a) for a in t.args))

    def lift_formula(self, phi: Term) -> Term:
        return beta_eta_normalize(self.lift(phi))

    def valid(self, phi: Term) -> Term:
        """φ asserted according to the consequence relation."""
        lifted = self.lift_formula(phi)
        mu = self.sig.world
        if self.sig.current is not None:
            return beta_eta_normalize(App(lifted, (self.sig.current,)))
        return beta_eta_normalize(mk_forall(mu, App(lifted, (Bound(0, mu),))))

    # -- axioms -------------------------------------------------------------

    def frame_axioms(self) -> list[tuple[str, Term]]:
        r = self.sig.rel
        if r is None:
            return []
        mu = self.sig.world
        refl = mk_forall(mu, App(r, (Bound(0, mu), Bound(0, mu))))
        sym = mk_forall(mu, mk_forall(mu, mk_imp(App(r, (Bound(1, mu), Bound(0, mu))),
                                                 App(r, (Bound(0, mu), Bound(1, mu))))))
        # ∀a b c. r a b → r b c → r a c   (a = 2, b = 1, c = 0)
        trans = mk_forall(mu, mk_forall(mu, mk_forall(mu, mk_imp(
            App(r, (Bound(2, mu), Bound(1, mu))),
            mk_imp(App(r, (Bound(1, mu), Bound(0, mu))), App(r, (Bound(2, mu), Bound(0, mu))))))))
        serial = mk_forall(mu, mk_exists(mu, App(r, (Bound(1, mu), Bound(0, mu)))))
        system = self.logic.system
        out = {"K": [], "D": [("serial", serial)], "T": [("reflexive", refl)],
               "S4": [("reflexive", refl), ("transitive", trans)],
               "S5": [("reflexive", refl), ("symmetric", sym), ("transitive", trans)]}[system]
        return [(f"{r.name}_{n}", beta_eta_normalize(t)) for n, t in out]

    def domain_axioms(self) -> list[tuple[str, Term]]:
        out = []
        mu = self.sig.world
        for ty, e in self.sig.eiw.items():
            nonempty = mk_forall(mu, mk_exists(ty, App(e, (Bound(0, ty), Bound(1, mu)))))
            out.append((f"{e.name}_nonempty", nonempty))
            if self.logic.quantification == "cumulative":
                # ∀x w v. eiw x w → r w v → eiw x v   (x = 2, w = 1, v = 0)
                grow = App(e, (Bound(2, ty), Bound(0, mu)))
                acc = self._access(Bound(1, mu), Bound(0, mu))
                if acc is not None:
                    grow = mk_imp(acc, grow)
                body = mk_imp(App(e, (Bound(2, ty), Bound(1, mu))), grow)
                out.append((f"{e.name}_cumulative", mk_forall(ty, mk_forall(mu, mk_forall(mu, body)))))
        return [(n, beta_eta_normalize(t)) for n, t in out]


def embed_problem(p: Problem, s5: str = "universal") -> Problem:
    """Classical HOL problem equivalent to the modal problem ``p``."""
    if p.logic is None:
        if p.modal_ops:
            raise ValueError("modal operators used without a $modal logic header")
        return p
    if not p.modal_ops:
        log.warning("%s: logic header given but no modal operators used", p.name)
    taken = set(p.signature) | set(p.base_types) | {f.name for f in p.formulas}
    emb = Embedding(p.logic, taken, s5)
    out = Problem(name=p.name, base_types=list(p.base_types) + [emb.sig.world.name])
    formulas: list[AnnotatedFormula] = []
    for f in p.formulas:
        if f.role == "logic":
            continue
        if f.role == "type":
            sym, ty = f.formula
            if ty == "$tType":
                formulas.append(AnnotatedFormula(f.name, "type", (sym, ty)))
            else:
                lt = emb.lift_type(ty)
                out.signature[sym] = lt
                formulas.append(AnnotatedFormula(f.name, "type", (sym, lt)))
            continue
        if f.role == "definition":
            lhs, rhs = _definition_sides(f.formula)
            if lhs is not None:
                t = beta_eta_normalize(mk_eq(emb.lift(lhs), emb.lift(rhs)))
                formulas.append(AnnotatedFormula(f.name, f.role, t))
                continue
        formulas.append(AnnotatedFormula(f.name, f.role, emb.valid(f.formula)))
    extra = [(emb.sig.world.name, "type", (emb.sig.world.name, "$tType"))]
    for c in (emb.sig.rel, emb.sig.current):
        if c is not None:
            extra.append((c.name, "type", (c.name, c.ty)))
    extra += [(e.name, "type", (e.name, e.ty)) for e in emb.sig.eiw.values()]
    axioms = emb.frame_axioms() + emb.domain_axioms()
    taken_names = {f.name for f in p.formulas}
    for name, role, payload in extra:
        if role == "type" and payload[1] != "$tType":
            out.signature[payload[0]] = payload[1]
        out.formulas.append(AnnotatedFormula(_fresh(f"ty_{name}", taken_names), role, payload))
    out.formulas.extend(formulas)
    for name, t in axioms:
        out.formulas.append(AnnotatedFormula(_fresh(name, taken_names), "axiom", t))
    out.logic = None
    out.modal_ops = False
    return out


def _definition_sides(t: Term):
    h, args = head_args(t)
    if isinstance(h, Const) and h.name == "$eq" and isinstance(args[0], Const):
        return args
    return None, None


# ---------------------------------------------------------------------------
# explicit Kripke models (propositional oracle)

@dataclass
class KripkeModel:
    """Worlds ``0..n-1``, an accessibility matrix and a valuation giving
    a boolean vector over worlds for each atom."""
    relation: np.ndarray
    valuation: dict

    @property
    def n(self) -> int:
        return self.relation.shape[0]


def kripke_eval(phi: Term, model: KripkeModel) -> np.ndarray:
    """Truth value of a propositional modal formula at every world.

    The relation may carry leading batch axes (shape ``(..., n, n)``) and
    valuations likewise (``(..., n)``); the result then has the broadcast
    batch shape followed by the world axis.
    """
    R = np.asarray(model.relation, dtype=bool)
    n = R.shape[-1]
    val = {k: np.asarray(v, dtype=bool) for k, v in model.valuation.items()}

    def ev(t: Term) -> np.ndarray:
        h, args = head_args(t)
        if not isinstance(h, Const):
            raise ValueError("not a propositional modal formula")
        name = h.name
        if name == "$true" and not args:
            return np.ones(n, dtype=bool)
        if name == "$not" and len(args) == 1:
            return ~ev(args[0])
        if name == "$or" and len(args) == 2:
            return ev(args[0]) | ev(args[1])
        if name == "$eq" and h.ty.arg == O and len(args) == 2:
            return ev(args[0]) == ev(args[1])
        if name == "$box" and len(args) == 1:
            return np.all(~R | ev(args[0])[..., None, :], axis=-1)
        if name == "$dia" and len(args) == 1:
            return np.any(R & ev(args[0])[..., None, :], axis=-1)
        if not args and h.ty == O and not name.startswith("$"):
            return val[name]
        raise ValueError(f"unsupported construct {name} in propositional modal formula")

    return ev(phi)


def frame_ok(R: np.ndarray, system: str) -> bool:
    R = np.asarray(R, dtype=bool)
    refl = bool(np.all(np.diag(R)))
    if system == "K":
        return True
    if system == "D":
        return bool(np.all(R.any(axis=1)))
    if system == "T":
        return refl
    RR = (R.astype(int) @ R.astype(int)) > 0
    trans = bool(np.all(~RR | R))
    if system == "S4":
        return refl and trans
    if system == "S5":
        return refl and trans and bool(np.all(R == R.T))
    raise ValueError(f"unknown system {system!r}")


def frames(system: str, n: int):
    """All accessibility relations on ``n`` worlds in the frame class."""
    for bits in itertools.product((False, True), repeat=n * n):
        R = np.array(bits, dtype=bool).reshape(n, n)
        if frame_ok(R, system):
            yield R


def atoms_of(phi: Term) -> list[str]:
    from .terms import constants
    return sorted(n for (n, ty) in constants(phi) if ty == O and not n.startswith("$"))


def kripke_valid(phi: Term, system: str, max_worlds: int = 3) -> bool:
    """Validity on every frame of the class with at most ``max_worlds``
    worlds, under every valuation."""
    atoms = atoms_of(phi)
    for n in range(1, max_worlds + 1):
        Rs = np.array(list(frames(system, n)), dtype=bool)          # (F, n, n)
        k = len(atoms)
        codes = np.arange(2 ** (n * k))
        bits = ((codes[:, None] >> np.arange(n * k)) & 1).astype(bool)   # (V, n*k)
        val = {a: bits[:, i * n:(i + 1) * n][None, :, :] for i, a in enumerate(atoms)}
        truth = kripke_eval(phi, KripkeModel(Rs[:, None, :, :], val))
        if not np.all(truth):
            return False
    return True


def modal_depth(t: Term) -> int:
    h, args = head_args(t)
    inner = max((modal_depth(a) for a in args), default=0)
    if isinstance(h, Const) and h.name in ("$box", "$dia"):
        return inner + 1
    return inner


def modal_formulas(atoms: Sequence[str] = ("p", "q"), max_size: int = 5, max_depth: int = 2):
    """Propositional modal formulas over ``atoms`` built from ¬, □, ◇, ∧,
    ∨ and → with at most ``max_size`` connectives and atoms, up to modal
    depth ``max_depth``; syntactically equal results are listed once."""
    from .tptp import BOX, DIA
    by_size: dict[int, list[Term]] = {1: [Const(a, O) for a in atoms]}
    for size in range(2, max_size + 1):
        out = []
        for f in by_size[size - 1]:
            out.append(mk_not(f))
            if modal_depth(f) < max_depth:
                out.append(App(BOX, (f,)))
                out.append(App(DIA, (f,)))
        for i in range(1, size - 1):
            for f in by_size[i]:
                for g in by_size[size - 1 - i]:
                    out.extend((mk_and(f, g), mk_or(f, g), mk_imp(f, g)))
        by_size[size] = out
    seen = set()
    for size in range(1, max_size + 1):
        for f in by_size[size]:
            f = beta_eta_normalize(f)
            if f not in seen:
                seen.add(f)
                yield f


def embedded_countermodel(phi: Term, system: str, max_worlds: int = 3,
                          s5: str = "universal", consequence: str = "global"):
    """Search the embedding of ``phi`` (with its frame axioms) for a finite
    HOL countermodel with at most ``max_worlds`` worlds.  Returns the
    oracle's :class:`~hoprover.semantics.CheckResult`; ``ok`` means a
    countermodel exists."""
    from .semantics import has_countermodel
    logic = LogicSpec(system=system, consequence=consequence)
    emb = Embedding(logic, {a for a in atoms_of(phi)}, s5)
    axioms = [t for _, t in emb.frame_axioms() + emb.domain_axioms()]
    return has_countermodel(axioms, emb.valid(phi), max_size=max_worlds)
