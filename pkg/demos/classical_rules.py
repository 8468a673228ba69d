"""The special-purpose rules at work on small classical problems.

For each problem the script prints the verdict and which inference rules
the final refutation actually used.

    python3 demos/classical_rules.py
"""

import collections
import os

from hoprover import Config, parse_file, prove

HERE = os.path.dirname(os.path.abspath(__file__))
CASES = [
    ("cantor.p", {}, "primitive substitution finds the diagonal set"),
    ("funext.p", {}, "functional extensionality without axioms"),
    ("boolext.p", {}, "boolean extensionality"),
    ("choice.p", {}, "instances of the choice operator"),
    ("injective_inverse.p", {}, "left inverse of an injective function"),
    ("fs_swap.p", {}, "function synthesis is off by default ..."),
    ("fs_swap.p", {"fs": True}, "... and solves the problem when enabled"),
    ("leibniz_def.p", {}, "Leibniz equality replaced by primitive equality"),
]

for name, opts, note in CASES:
    path = os.path.join(HERE, "..", "problems", "classical", name)
    r = prove(parse_file(path), Config(time_limit=20, **opts))
    rules = collections.Counter(s.rule for s in r.derivation.steps if s.rule) if r.derivation else {}
    used = ", ".join(f"{k}x{v}" for k, v in sorted(rules.items()))
    print(f"{name:22} {str(opts or ''):14} {r.status.value:9} {note}")
    if used:
        print(f"{'':22} rules: {used}")
