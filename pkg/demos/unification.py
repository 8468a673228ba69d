"""Pattern unification and Huet pre-unification side by side.

    python3 demos/unification.py
"""

import itertools

from hoprover.terms import App, Bound, Const, free_vars, fresh_var, mk_lams, show
from hoprover.types import I, arrow
from hoprover.unification import UnificationProblem, pattern_unify, preunify

a, b = Const("a", I), Const("b", I)
f, g = Const("f", arrow(I, I)), Const("g", arrow(I, I, I))
F = fresh_var(arrow(I, I))
G = fresh_var(arrow(I, I, I))
H = fresh_var(arrow(I, I))
x, y = Bound(1, I), Bound(0, I)

problems = [
    ("swap arguments (pattern)", mk_lams([I, I], App(G, (x, y))), mk_lams([I, I], App(g, (y, x)))),
    ("occurs check (pattern)", mk_lams([I], App(F, (y,))), mk_lams([I], App(f, (App(F, (y,)),)))),
    ("F a = a (not a pattern)", App(F, (a,)), a),
    ("F (f a) = f (F a)", App(F, (App(f, (a,)),)), App(f, (App(F, (a,)),))),
    ("flex-flex, left for later", App(F, (a,)), App(H, (b,))),
]

for label, s, t in problems:
    p = UnificationProblem([(s, t)], depth=4)
    print(f"{label}:  {show(s)} = {show(t)}")
    print("   pattern unification:", pattern_unify(p))
    own = set(free_vars(s)) | set(free_vars(t))
    for u in itertools.islice(preunify(p), 4):
        extra = f"   residual {u.residual}" if u.residual else ""
        print("   pre-unifier:", u.substitution.restrict(own), extra)
    print()
