import itertools
import random

from hypothesis import given, settings, strategies as st

from hoprover.clausal import Clause, Literal, clause_formula, clausify, heuristic_instantiate, miniscope
from hoprover.semantics import close
from hoprover.terms import (App, Bound, Const, FALSE, TRUE, Var, beta_eta_normalize, constants,
                            fresh_var, mk_and, mk_exists, mk_forall, mk_imp, mk_not, mk_or)
from hoprover.types import BaseType, I, O, arrow

from oracles import TableModel, distributive_clause_count

a = Const("a", I)
p = Const("p", O)
q = Const("q", arrow(I, O))
r = Const("r", arrow(I, I, O))


def x(i=0):
    return Bound(i, I)


# -- miniscoping ---------------------------------------------------------------

def test_miniscope_or():
    f = mk_forall(I, mk_or(p, App(q, (x(),))))
    assert miniscope(f) == beta_eta_normalize(mk_or(p, mk_forall(I, App(q, (x(),)))))


def test_miniscope_and():
    f = mk_forall(I, mk_and(App(q, (x(),)), App(Const("s", arrow(I, O)), (x(),))))
    expected = mk_and(mk_forall(I, App(q, (x(),))),
                      mk_forall(I, App(Const("s", arrow(I, O)), (x(),))))
    assert miniscope(f) == beta_eta_normalize(expected)


def test_miniscope_fixpoint():
    f = beta_eta_normalize(mk_forall(I, App(q, (x(),))))
    assert miniscope(f) == f


# -- clausification ------------------------------------------------------------

def test_clausify_negated_reflexivity():
    cs = clausify(mk_not(App(Const("$eq", arrow(I, I, O)), (a, a))))
    assert len(cs) == 1
    (l,) = cs[0].lits
    assert (l.left, l.right, l.pol) == (a, a, False)


def test_clausify_skolemizes():
    cs = clausify(mk_forall(I, mk_exists(I, App(r, (x(1), x(0))))))
    assert len(cs) == 1
    (l,) = cs[0].lits
    assert l.pol and l.right == TRUE
    head, (X, sk) = l.left.head, l.left.args
    assert head == r and isinstance(X, Var)
    assert isinstance(sk, App) and sk.args == (X,) and sk.head.name.startswith("sk")


def test_definitional_clause_count():
    ps = [Const(f"p{i}", O) for i in range(3)]
    qs = [Const(f"q{i}", O) for i in range(3)]
    f = mk_or(mk_or(mk_and(ps[0], qs[0]), mk_and(ps[1], qs[1])), mk_and(ps[2], qs[2]))
    naive = distributive_clause_count(f)
    assert naive == 8
    assert len(clausify(f, "standard")) == naive
    assert len(clausify(f, "definitional")) <= 1 + 3 * 3


def test_skolems_are_fresh_across_calls():
    f = mk_exists(I, App(q, (x(),)))
    c1, c2 = clausify(f), clausify(f)
    s1 = {n for l in c1[0].lits for n, _ in constants(l.left)}
    s2 = {n for l in c2[0].lits for n, _ in constants(l.left)}
    assert (s1 - {"q"}) and (s1 - {"q"}).isdisjoint(s2 - {"q"})


# -- heuristic instantiation ---------------------------------------------------

def _unit(t):
    return Clause([Literal(t, TRUE, True)])


def test_instantiate_bool_var():
    X = fresh_var(O)
    out = heuristic_instantiate(Clause([Literal(X, TRUE, True), Literal(App(q, (a,)), TRUE, True)]))
    assert sorted(str(c.lits[0].left) for c in out) == sorted([str(TRUE), str(FALSE)])


def test_instantiate_unary_bool_function():
    F = fresh_var(arrow(O, O))
    out = heuristic_instantiate(_unit(App(F, (p,))))
    # λx.T, λx.F, λx.x, λx.~x applied to p
    assert {c.lits[0].left for c in out} == {TRUE, FALSE, p, mk_not(p)}


def test_instantiate_leaves_individuals():
    c = _unit(App(q, (fresh_var(I),)))
    assert heuristic_instantiate(c) == [c]


# -- satisfiability preservation (finite model oracle) -------------------------

def random_formula(rng, depth, nbound):
    if depth == 0 or rng.random() < 0.25:
        atoms = [p]
        if nbound:
            atoms += [App(q, (x(rng.randrange(nbound)),)),
                      App(r, (x(rng.randrange(nbound)), x(rng.randrange(nbound))))]
        atoms += [App(q, (a,))]
        return rng.choice(atoms)
    k = rng.randrange(6)
    sub = lambda: random_formula(rng, depth - 1, nbound)
    if k == 0:
        return mk_not(sub())
    if k == 1:
        return mk_or(sub(), sub())
    if k == 2:
        return mk_and(sub(), sub())
    if k == 3:
        return mk_imp(sub(), sub())
    body = random_formula(rng, depth - 1, nbound + 1)
    return mk_forall(I, body) if k == 4 else mk_exists(I, body)


def _consts(terms):
    out = {}
    for t in terms:
        for (n, ty) in constants(t):
            if not n.startswith("$"):
                out[n] = ty
    return sorted(out.items())


def satisfiable(formulas, n, budget=60000):
    """Is there an interpretation over an ``n``-element ``$i`` making all
    ``formulas`` true?  None when the search space exceeds ``budget``."""
    m = TableModel({I: n})
    cs = _consts(formulas)
    doms = [m.dom(ty) for _, ty in cs]
    total = 1
    for d in doms:
        total *= len(d)
    if total > budget:
        return None
    for vals in itertools.product(*doms):
        interp = dict(zip((c for c, _ in cs), vals))
        if all(m.eval(f, interp) for f in formulas):
            return True
    return False


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_clausify_preserves_satisfiability(seed):
    rng = random.Random(seed)
    f = random_formula(rng, 4, 0)
    neg = beta_eta_normalize(mk_not(f))
    clauses = [close(clause_formula(c)) for c in clausify(neg, rng.choice(["standard", "definitional"]))]
    for n in (1, 2):
        lhs, rhs = satisfiable([neg], n), satisfiable(clauses, n)
        if lhs is not None and rhs is not None:
            assert lhs == rhs, (f, n)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_miniscope_is_equivalence(seed):
    rng = random.Random(seed)
    f = random_formula(rng, 4, 0)
    g = miniscope(f)
    for n in (1, 2):
        assert satisfiable([f, mk_not(g)], n) is False
        assert satisfiable([g, mk_not(f)], n) is False
