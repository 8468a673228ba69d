import itertools
import random

from hypothesis import given, settings, strategies as st

from hoprover.terms import (App, Bound, Const, FreshSupply, Lam, free_vars, fresh_scope, fresh_var,
                            mk_lams)
from hoprover.types import I, arrow
from hoprover.unification import (FAIL, NOT_PATTERN, UnificationProblem, flexflex_solution,
                                  is_flex, pattern_unify, preunify)

from generators import III, unification_problem
from oracles import pattern_match

a, b = Const("a", I), Const("b", I)
f = Const("f", arrow(I, I))
g = Const("g", III)


def check_problem(s, t, depth=8, take=6):
    """Violations of soundness / pattern generality on one constraint.

    Returns ``(violations, kind)`` where kind is ``"pattern"``,
    ``"pattern-fail"`` or ``"general"``."""
    problem = UnificationProblem([(s, t)], depth)
    pvars = {**free_vars(s), **free_vars(t)}
    out = []
    thetas = []
    for u in itertools.islice(preunify(problem), take):
        for x, y in u.residual:
            if not (is_flex(x) and is_flex(y)):
                out.append(f"rigid residual {x} = {y}")
        theta = u.substitution.compose(flexflex_solution(u.residual)) if u.residual else u.substitution
        if theta.apply(s) != theta.apply(t):
            out.append(f"unsound pre-unifier {u} for {s} = {t}")
        thetas.append(theta)
    sigma = pattern_unify(problem)
    if sigma is NOT_PATTERN:
        return out, "general"
    if sigma is FAIL:
        if thetas:
            out.append(f"pattern unification failed but preunify solved {s} = {t}")
        return out, "pattern-fail"
    if sigma.apply(s) != sigma.apply(t):
        out.append(f"pattern unifier {sigma} does not unify {s} = {t}")
    for theta in thetas:
        rho = {}
        try:
            ok = all(pattern_match(sigma.apply(v), theta.apply(v), rho) for v in pvars.values())
        except ValueError:
            ok = False
        if not ok:
            out.append(f"{theta} is not an instance of {sigma} for {s} = {t}")
    return out, "pattern"


# -- spec examples -------------------------------------------------------------

def test_pattern_swap():
    F = fresh_var(III)
    x, y = Bound(1, I), Bound(0, I)
    s, t = mk_lams([I, I], App(F, (x, y))), mk_lams([I, I], App(g, (y, x)))
    sigma = pattern_unify(UnificationProblem([(s, t)]))
    assert sigma[F] == mk_lams([I, I], App(g, (Bound(0, I), Bound(1, I))))
    assert sigma.apply(s) == sigma.apply(t)
    # generality: every pre-unifier up to depth 3 is an instance
    assert check_problem(s, t, depth=3, take=50)[0] == []


def test_pattern_occurs_check():
    F = fresh_var(arrow(I, I))
    x = Bound(0, I)
    s, t = Lam(I, App(F, (x,))), Lam(I, App(f, (App(F, (x,)),)))
    assert pattern_unify(UnificationProblem([(s, t)])) is FAIL


def test_not_a_pattern():
    F = fresh_var(arrow(I, I))
    assert pattern_unify(UnificationProblem([(App(F, (a,)), a)])) is NOT_PATTERN


def test_preunify_projection_and_imitation():
    F = fresh_var(arrow(I, I))
    sols = list(preunify(UnificationProblem([(App(F, (a,)), a)]), depth=1))
    assert sorted(str(u.substitution[F]) for u in sols) == sorted(
        [str(Lam(I, Bound(0, I))), str(Lam(I, a))])
    assert all(not u.residual for u in sols)
    # imitation comes first
    assert sols[0].substitution[F] == Lam(I, a)


def test_preunify_head_clash():
    h = Const("h", arrow(I, I))
    assert list(preunify(UnificationProblem([(App(f, (a,)), App(h, (a,)))]))) == []


def test_preunify_flex_flex_residual():
    F, G = fresh_var(arrow(I, I)), fresh_var(arrow(I, I))
    (u,) = list(preunify(UnificationProblem([(App(F, (a,)), App(G, (b,)))])))
    assert len(u.substitution) == 0
    assert u.residual == ((App(F, (a,)), App(G, (b,))),)


def test_depth_zero_prunes_flex_rigid():
    F = fresh_var(arrow(I, I))
    assert list(preunify(UnificationProblem([(App(F, (a,)), a)]), depth=0)) == []


def test_preunify_deterministic():
    rng = random.Random(7)
    for _ in range(30):
        s, t = unification_problem(rng)
        p = UnificationProblem([(s, t)])
        runs = []
        for _ in range(2):
            supply = FreshSupply()
            supply.bump_vars(10 ** 6)
            with fresh_scope(supply):
                runs.append([u.substitution for u in itertools.islice(preunify(p), 5)])
        assert runs[0] == runs[1]


# -- properties ----------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.booleans())
def test_random_problems(seed, pattern):
    s, t = unification_problem(random.Random(seed), pattern=pattern)
    violations, _ = check_problem(s, t)
    assert violations == []
