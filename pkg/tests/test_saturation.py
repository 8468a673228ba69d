import copy
import dataclasses

import pytest

from hoprover.clausal import Clause, Literal
from hoprover.derivation import ReplayError, replay_check
from hoprover.problem import SZSStatus
from hoprover.saturation import ClauseQueue, Config, clause_select, prove, saturate
from hoprover.terms import App, Const, TRUE
from hoprover.tptp import parse_problem, render_tstp
from hoprover.types import I, O, arrow

REFL = "thf(a, type, a: $i). thf(c, conjecture, (a = a))."


def test_trivial_theorem():
    status, d = saturate(parse_problem(REFL))
    assert status is SZSStatus.THEOREM
    inferences = [s for s in d.steps if s.rule is not None]
    assert len(inferences) <= 3
    assert replay_check(d)


def test_contradictory_axioms():
    text = """thf(p, type, p: $o). thf(q, type, q: $o).
              thf(a1, axiom, p). thf(a2, axiom, ~ p). thf(c, conjecture, q)."""
    status, d = saturate(parse_problem(text))
    assert status is SZSStatus.CONTRADICTORY_AXIOMS
    assert replay_check(d)


def test_non_theorem_not_claimed():
    status, _ = saturate(parse_problem("thf(c, conjecture, ![P:$o]: P)."), Config(time_limit=5))
    assert status in (SZSStatus.GAVE_UP, SZSStatus.TIMEOUT)


def test_iteration_cap_gives_timeout():
    text = """thf(f, type, f: $i > $i). thf(p, type, p: $i > $o).
              thf(a, type, a: $i). thf(b, type, b: $i).
              thf(base, axiom, p @ a). thf(step, axiom, ![X:$i]: ((p @ X) => (p @ (f @ X)))).
              thf(c, conjecture, p @ b)."""
    r = prove(parse_problem(text), Config(max_iterations=50))
    assert r.status is SZSStatus.TIMEOUT
    assert r.iterations <= 50


def test_ill_typed_problem_is_error():
    text = "thf(a, type, a: $i). thf(c, conjecture, a)."
    try:
        status, _ = saturate(parse_problem(text))
    except Exception:
        return      # rejected by the parser already
    assert status is SZSStatus.ERROR


def test_config_validation():
    with pytest.raises(ValueError):
        Config(time_limit=0)
    with pytest.raises(ValueError):
        Config(max_iterations=-1)


# -- replay --------------------------------------------------------------------

def _theorem_derivation():
    text = """thf(a, type, a: $i). thf(b, type, b: $i). thf(p, type, p: $i > $o).
              thf(e, axiom, a = b). thf(h, axiom, p @ a). thf(c, conjecture, p @ b)."""
    status, d = saturate(parse_problem(text))
    assert status is SZSStatus.THEOREM
    return d


def test_replay_accepts_own_derivations():
    assert replay_check(_theorem_derivation())


def test_replay_detects_flipped_literal():
    d = _theorem_derivation()
    d = copy.deepcopy(d)
    for i, s in enumerate(d.steps):
        if s.clause is not None and s.clause.lits and s.rule is not None:
            l = s.clause.lits[0]
            flipped = Clause([Literal(l.left, l.right, not l.pol)] + list(s.clause.lits[1:]),
                             s.clause.origin)
            d.steps[i] = dataclasses.replace(s, clause=flipped)
            break
    else:
        pytest.fail("no clause step to mutate")
    assert replay_check(d) is False


def test_replay_dangling_parent():
    d = copy.deepcopy(_theorem_derivation())
    last = d.steps[-1]
    d.steps[-1] = dataclasses.replace(last, parents=("no_such_step",))
    with pytest.raises(ReplayError):
        replay_check(d)


# -- clause selection ----------------------------------------------------------

def _units(n):
    f = Const("f", arrow(I, I))
    p = Const("p", arrow(I, O))
    t = Const("a", I)
    terms = []
    for _ in range(n):
        terms.append(t)
        t = App(f, (t,))
    # the oldest clause is the heaviest
    return [Clause([Literal(App(p, (s,)), TRUE, True)]) for s in reversed(terms)]


def test_pick_ratio():
    cs = _units(8)
    q = ClauseQueue(pick_ratio=5)
    for c in cs:
        q.push(c)
    picks = [clause_select(q) for _ in range(6)]
    by_weight = sorted(cs, key=lambda c: (c.weight, c.id))
    assert picks[:5] == by_weight[:5]
    remaining = [c for c in cs if c not in picks[:5]]
    assert picks[5] == min(remaining, key=lambda c: c.id)


def test_tie_break_by_id():
    p = Const("p", arrow(I, O))
    c1 = Clause([Literal(App(p, (Const("a", I),)))])
    c2 = Clause([Literal(App(p, (Const("b", I),)))])
    q = ClauseQueue()
    q.push(c2)
    q.push(c1)
    assert clause_select(q) is min((c1, c2), key=lambda c: c.id)


def test_empty_queue():
    with pytest.raises(IndexError):
        clause_select(ClauseQueue())


def test_deterministic_output():
    text = """thf(f, type, f: $i > $i). thf(inj, axiom, ![X:$i,Y:$i]: (((f@X) = (f@Y)) => (X = Y))).
              thf(c, conjecture, ?[G:$i>$i]: ![X:$i]: ((G@(f@X)) = X))."""
    outs = {render_tstp(saturate(parse_problem(text, "inj.p"))[1]) for _ in range(3)}
    assert len(outs) == 1
