import os
import random

from hypothesis import given, settings, strategies as st

from hoprover import calculus as C
from hoprover.clausal import Clause, Literal
from hoprover.problem import SZSStatus
from hoprover.saturation import Config, prove
from hoprover.terms import (App, Bound, Const, Lam, TRUE, beta_eta_normalize, choice, constants,
                            fresh_var, head_args, mk_eq, mk_imp, pi, eq, type_of)
from hoprover.tptp import parse_file, parse_problem
from hoprover.types import I, O, arrow
from hoprover.unification import UnificationProblem, preunify

from conftest import PROBLEMS
from generators import TermGen
from oracles import TableModel

a, b = Const("a", I), Const("b", I)
p = Const("p", arrow(I, O))
IO = arrow(I, O)


def unit(t, pol=True):
    return Clause([Literal(t, TRUE, pol)])


def lits(c):
    return sorted(str(l) for l in c.lits)


def classical(name):
    return parse_file(os.path.join(PROBLEMS, "classical", name))


def rules_used(d):
    return {s.rule for s in d.steps}


# -- paramodulation ------------------------------------------------------------

def test_para_ground():
    (c,) = C.paramodulate(Clause([Literal(a, b, True)]), unit(App(p, (a,))))
    assert lits(c) == sorted([str(Literal(App(p, (b,)))), str(Literal(a, a, False))])
    assert lits(C.contract(c)) == [str(Literal(App(p, (b,))))]


def test_para_into_variable_argument():
    X = fresh_var(I)
    assert C.paramodulate(Clause([Literal(a, b, True)]), unit(App(p, (X,)))) == []
    (c,) = C.paramodulate(Clause([Literal(a, b, True)]), unit(App(p, (X,))), var_positions=True)
    assert lits(c) == sorted([str(Literal(App(p, (b,)))), str(Literal(X, a, False))])
    (u,) = list(preunify(UnificationProblem([(X, a)])))
    assert u.substitution[X] == a


def test_para_needs_positive_equation():
    assert C.paramodulate(unit(App(p, (a,))), unit(App(p, (a,)))) == []


# -- equality factoring --------------------------------------------------------

def test_eqfac_unifies_to_unit():
    X = fresh_var(I)
    out = C.equality_factor(Clause([Literal(App(p, (X,))), Literal(App(p, (a,)))]))
    assert out
    results = {tuple(lits(s)) for c in out
               for s in C.solve_constraints(c, [i for i, l in enumerate(c.lits)
                                              if not l.pol and not l.is_boolean])}
    assert (str(Literal(App(p, (a,)))),) in results


def test_eqfac_degenerate():
    assert C.equality_factor(unit(App(p, (a,)))) == []
    q, r = Const("q", O), Const("r", O)
    assert C.equality_factor(Clause([Literal(q), Literal(r, TRUE, False)])) == []


# -- primitive substitution ----------------------------------------------------

def test_ps_not_binding():
    spec = C.GeneralBindingSpec(use_not=True, use_or=False, pi_types=(), eq_types=())
    (t,) = C.general_bindings(O, spec)
    h, args = head_args(t)
    assert h.name == "$not" and len(args) == 1 and head_args(args[0])[0].__class__.__name__ == "Var"
    X = fresh_var(O)
    (c,) = C.primitive_substitution(unit(X), spec)
    assert c.origin.rule == "PS"


def test_ps_bindings_shapes():
    spec = C.GeneralBindingSpec.for_types([I])
    bindings = C.general_bindings(IO, spec)
    heads = set()
    for t in bindings:
        assert type_of(t) == IO and not t.lb
        assert isinstance(t, Lam)
        heads.add(head_args(t.body)[0])
    assert {pi(I), eq(I)} <= heads
    # λz. Π(λy. H z y): the argument of Π is (an η-form of) H z
    pis = [t for t in bindings if head_args(t.body)[0] == pi(I)]
    assert pis and all(head_args(t.body)[1][0].ty == IO for t in pis)


def test_ps_cantor_end_to_end():
    r = prove(classical("cantor.p"), Config(time_limit=30))
    assert r.status is SZSStatus.THEOREM
    assert "PS" in rules_used(r.derivation)


# -- extensionality ------------------------------------------------------------

def test_func_ext():
    f, g = Const("f", IO), Const("g", IO)
    neg = C.func_ext(Clause([Literal(f, g, False)]))
    (l,) = neg.lits
    sk = l.left.args[0]
    assert not l.pol and isinstance(sk, Const) and l.right.args == (sk,)
    pos = C.func_ext(Clause([Literal(f, g, True)]))
    (l,) = pos.lits
    assert l.pol and l.left.args == l.right.args and l.left.args[0].__class__.__name__ == "Var"


def test_bool_ext():
    q, r = Const("q", O), Const("r", O)
    out = C.bool_ext(Clause([Literal(q, r, True)]))
    assert sorted(tuple(lits(c)) for c in out) == sorted([
        tuple(sorted([str(Literal(q, TRUE, False)), str(Literal(r))])),
        tuple(sorted([str(Literal(q)), str(Literal(r, TRUE, False))]))])
    assert len(C.bool_ext(Clause([Literal(q, r, False)]))) == 2


def test_funext_and_boolext_theorems():
    for name, rule in (("funext.p", "FuncExt"), ("boolext.p", "BoolExt")):
        r = prove(classical(name), Config(time_limit=30))
        assert r.status is SZSStatus.THEOREM
        assert rule in rules_used(r.derivation)


# -- choice --------------------------------------------------------------------

def _check_choice_instance(c, t):
    neg = [l for l in c.lits if not l.pol]
    pos = [l for l in c.lits if l.pol]
    assert len(neg) == 1 and len(pos) == 1
    assert head_args(neg[0].left)[0] == t
    assert pos[0].left == beta_eta_normalize(App(t, (App(choice(I), (t,)),)))


def test_choice_constant():
    (c,) = C.choice_rule(unit(App(p, (App(choice(I), (p,)),))))
    _check_choice_instance(c, p)


def test_choice_variable_head():
    E = fresh_var(arrow(IO, I))
    (c,) = C.choice_rule(unit(App(p, (App(E, (p,)),))))
    _check_choice_instance(c, p)


def test_choice_absent():
    assert C.choice_rule(unit(App(p, (a,)))) == []


def test_choice_theorem():
    r = prove(classical("choice.p"), Config(time_limit=30))
    assert r.status is SZSStatus.THEOREM and "Choice" in rules_used(r.derivation)


# -- function synthesis --------------------------------------------------------

def test_fs_single_row():
    F = fresh_var(arrow(I, I))
    c = C.func_synth(Clause([Literal(App(F, (a,)), b, False)]))
    assert c.origin.rule == "FS"
    x, z = Bound(1, I), Bound(0, I)
    expected = Lam(I, App(choice(I), (Lam(I, mk_imp(mk_eq(x, a), mk_eq(z, b))),)))
    assert c.origin.info["subst"][F] == beta_eta_normalize(expected)


def test_fs_two_rows():
    F = fresh_var(arrow(I, I))
    c = C.func_synth(Clause([Literal(App(F, (a,)), b, False), Literal(App(F, (b,)), a, False)]))
    binding = c.origin.info["subst"][F]
    x, z = Bound(1, I), Bound(0, I)
    rows = [mk_imp(mk_eq(x, a), mk_eq(z, b)), mk_imp(mk_eq(x, b), mk_eq(z, a))]
    from hoprover.terms import mk_and
    expected = Lam(I, App(choice(I), (Lam(I, mk_and(*rows)),)))
    assert binding == beta_eta_normalize(expected)


def test_fs_different_heads_identity():
    F, G = fresh_var(arrow(I, I)), fresh_var(arrow(I, I))
    c = Clause([Literal(App(F, (a,)), b, False), Literal(App(G, (b,)), a, False)])
    out = C.func_synth(c)
    # only one group is synthesised at a time; G's literal is untouched
    assert out.origin.rule == "FS"
    assert str(Literal(App(G, (b,)), a, False)) in lits(out)
    assert C.func_synth(unit(App(p, (a,)))) is not None


def test_fs_gated_problem():
    prob = classical("fs_swap.p")
    assert prove(prob, Config(time_limit=10)).status is not SZSStatus.THEOREM
    r = prove(prob, Config(time_limit=30, fs=True))
    assert r.status is SZSStatus.THEOREM and "FS" in rules_used(r.derivation)


# -- injectivity ---------------------------------------------------------------

def _inj_clause(f):
    X, Y = fresh_var(I), fresh_var(I)
    return Clause([Literal(App(f, (X,)), App(f, (Y,)), False), Literal(X, Y, True)])


def test_inj_left_inverse():
    f = Const("f", arrow(I, I))
    c = C.inj_rule(_inj_clause(f))
    (l,) = c.lits
    sk = l.left.head
    assert l.pol and sk.ty == arrow(I, I) and l.left.args[0].head == f
    assert l.right == l.left.args[0].args[0]


def test_inj_type_bookkeeping():
    f = Const("fo", arrow(I, O))
    c = C.inj_rule(_inj_clause(f))
    assert c.lits[0].left.head.ty == arrow(O, I)


def test_inj_strict_match():
    f = Const("f", arrow(I, I))
    c = _inj_clause(f)
    assert C.inj_rule(Clause(list(c.lits) + [Literal(App(p, (a,)))])) is None


def test_inj_theorem():
    r = prove(classical("injective_inverse.p"), Config(time_limit=30))
    assert r.status is SZSStatus.THEOREM and "INJ" in rules_used(r.derivation)


# -- contraction ---------------------------------------------------------------

def test_contract_drops_trivial_negative():
    q = Const("q", O)
    assert lits(C.contract(Clause([Literal(a, a, False), Literal(q)]))) == [str(Literal(q))]


def test_contract_tautology_is_redundant():
    assert C.contract(Clause([Literal(a, a, True), Literal(App(p, (a,)))])) is None


def test_contract_destructive_equality_resolution():
    X = fresh_var(I)
    c = C.contract(Clause([Literal(X, a, False), Literal(App(p, (X,)))]))
    assert lits(c) == [str(Literal(App(p, (a,))))]


def test_contract_rewrites_with_oriented_unit():
    from hoprover.ordering import greater
    unit_eq = Clause([Literal(a, b, True)])
    assert unit_eq.lits[0].oriented
    big, small = unit_eq.lits[0].left, unit_eq.lits[0].right
    assert greater(big, small)
    out = C.contract(unit(App(p, (big,))), [unit_eq])
    assert lits(out) == [str(Literal(App(p, (small,))))]
    # the reverse direction is never used
    assert lits(C.contract(unit(App(p, (small,))), [unit_eq])) == [str(Literal(App(p, (small,))))]


def test_contract_subsumption_and_unit_cut():
    X = fresh_var(I)
    general = unit(App(p, (X,)))
    assert C.contract(Clause([Literal(App(p, (a,))), Literal(Const("q", O))]), [general]) is None
    cut = C.contract(Clause([Literal(App(p, (a,)), TRUE, False), Literal(Const("q", O))]), [general])
    assert lits(cut) == [str(Literal(Const("q", O)))]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_contract_never_grows(seed):
    rng = random.Random(seed)
    gen = TermGen(rng)
    ls = []
    for _ in range(rng.randint(1, 4)):
        ty = rng.choice([I, O])
        s, t = gen.term(ty, (), 5), gen.term(ty, (), 5)
        ls.append(Literal(s, t, rng.random() < 0.5))
    c = Clause(ls)
    active = [unit(App(p, (gen.closed(I, 3),))), Clause([Literal(gen.closed(I, 3), gen.closed(I, 2), True)])]
    out = C.contract(c, active)
    assert out is None or len(out.lits) <= len(c.lits)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_para_and_eqfac_well_typed(seed):
    rng = random.Random(seed)
    gen = TermGen(rng)

    def lit():
        ty = rng.choice([I, O])
        return Literal(gen.term(ty, (), 5), gen.term(ty, (), 5), rng.random() < 0.6)

    c = Clause([lit() for _ in range(rng.randint(1, 2))])
    d = Clause([lit() for _ in range(rng.randint(1, 2))])
    known = set(c.free_vars()) | set(d.free_vars())
    for e in C.paramodulate(c, d) + C.equality_factor(d):
        for l in e.lits:
            assert type_of(l.left) == type_of(l.right)
        # fresh variables are only introduced by renaming apart
        assert len(e.free_vars()) <= len(known) * 2 + 2


# -- defined equalities --------------------------------------------------------

def test_leibniz_definition_detected_and_equivalent():
    prob = classical("leibniz_def.p")
    defn = prob.definitions[0].formula
    body = head_args(defn)[1][1]
    assert C.defined_equality_type(body) == I
    m = TableModel({I: 2})
    for x in m.dom(I):
        for y in m.dom(I):
            assert m.eval(App(body, (Const("x", I), Const("y", I))), {"x": x, "y": y}) == (x == y)


def test_defined_eq_no_match():
    c = unit(App(p, (a,)))
    assert C.defined_eq_replace([c]) == [c]


def test_leibniz_subformula_replaced():
    P = Bound(0, IO)
    leib = App(pi(IO), (Lam(IO, mk_imp(App(P, (a,)), App(P, (b,)))),))
    (c,) = C.defined_eq_replace([unit(leib)])
    assert c.origin.rule == "DefEq"
    assert c.lits[0].left == mk_eq(a, b) or {c.lits[0].left, c.lits[0].right} == {a, b}


def test_partially_applied_definition():
    text = """
    thf(leq,type,leq:$i>$i>$o).
    thf(leq_def,definition,leq = (^[X:$i,Y:$i]: ![P:$i>$o]: ((P@X) => (P@Y)))).
    thf(a,type,a:$i).
    thf(q,type,q:($i>$o)>$o).
    thf(h,axiom,q @ (leq @ a)).
    thf(c,conjecture,q @ (^[Y:$i]: (a = Y))).
    """
    assert prove(parse_problem(text), Config(time_limit=20)).status is SZSStatus.THEOREM
