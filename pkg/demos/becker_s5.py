"""The Becker corollary, end to end.

A modal problem with an S5 header is parsed, translated into classical
higher-order logic, refuted, and the refutation is printed as TSTP,
read back and re-checked step by step.

    python3 demos/becker_s5.py
"""

import os

from hoprover import parse_derivation, parse_file, prove, render_tstp, replay_check
from hoprover.modal import embed_problem
from hoprover.tptp import render_term

HERE = os.path.dirname(os.path.abspath(__file__))
problem = parse_file(os.path.join(HERE, "..", "problems", "modal", "becker.p"))

print("logic:", problem.logic)
print("input conjecture:\n  ", render_term(problem.conjecture.formula))

# S5 is read as the universal relation: boxes become plain quantifiers
# over the fresh world type, and no accessibility relation is needed.
classical = embed_problem(problem)
print("embedded conjecture:\n  ", render_term(classical.conjecture.formula))

result = prove(problem)
print(f"\n{result.status.value} after {result.iterations} iterations, "
      f"{result.generated} generated clauses, {result.elapsed:.2f}s\n")
text = render_tstp(result.derivation)
print(text)

back = parse_derivation(text)
print("certificate re-parsed; replay check:", replay_check(back))
