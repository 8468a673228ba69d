"""One formula, five logics.

Each formula is tried by the prover under K, D, T, S4 and S5 and the
verdict is compared with brute-force validity on all Kripke frames of
the class with at most three worlds.

    python3 demos/modal_cube.py
"""

from hoprover import Config, parse_problem, prove
from hoprover.modal import kripke_valid

SYSTEMS = ("K", "D", "T", "S4", "S5")
FORMULAS = {
    "T   []p => p": "($box @ p) => p",
    "D   []p => <>p": "($box @ p) => ($dia @ p)",
    "4   []p => [][]p": "($box @ p) => ($box @ ($box @ p))",
    "B   p => []<>p": "p => ($box @ ($dia @ p))",
    "5   <>p => []<>p": "($dia @ p) => ($box @ ($dia @ p))",
}


def problem(system, formula):
    return parse_problem(
        f"thf(l, logic, ($modal := [$constants := $rigid, $quantification := $constant, "
        f"$consequence := $global, $modalities := $modal_system_{system}])). "
        f"thf(p, type, p: $o). thf(c, conjecture, ({formula})).")


print(f"{'':20}" + "".join(f"{s:>12}" for s in SYSTEMS))
for label, text in FORMULAS.items():
    row = []
    for system in SYSTEMS:
        p = problem(system, text)
        verdict = prove(p, Config(time_limit=10)).status.value
        oracle = "valid" if kripke_valid(p.conjecture.formula, system) else "invalid"
        mark = "" if (verdict == "Theorem") == (oracle == "valid") else "!"
        row.append(f"{verdict[:7]}/{oracle[:3]}{mark}")
    print(f"{label:20}" + "".join(f"{c:>12}" for c in row))
print("\nentries: prover verdict / finite Kripke oracle ('!' marks a disagreement)")
