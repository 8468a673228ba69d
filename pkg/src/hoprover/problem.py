"""Problem-level data: annotated formulas, signatures, logic headers and
SZS statuses."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from .terms import Term
from .types import TypeExpr


class SZSStatus(enum.Enum):
    THEOREM = "Theorem"
    CONTRADICTORY_AXIOMS = "ContradictoryAxioms"
    COUNTER_SATISFIABLE = "CounterSatisfiable"
    GAVE_UP = "GaveUp"
    TIMEOUT = "Timeout"
    ERROR = "Error"

    def __str__(self) -> str:
        return self.value

    @property
    def is_success(self) -> bool:
        return self in (SZSStatus.THEOREM, SZSStatus.CONTRADICTORY_AXIOMS,
                        SZSStatus.COUNTER_SATISFIABLE)


SYSTEMS = ("K", "D", "T", "S4", "S5")
QUANTIFICATIONS = ("constant", "cumulative", "varying")
CONSEQUENCES = ("global", "local")


@dataclass(frozen=True)
class LogicSpec:
    """A mono-modal logic selected by a ``$modal`` header."""
    system: str = "K"
    quantification: str = "constant"
    constants: str = "rigid"
    consequence: str = "global"

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise ValueError(f"unsupported modal system {self.system!r}")
        if self.quantification not in QUANTIFICATIONS:
            raise ValueError(f"unsupported quantification {self.quantification!r}")
        if self.constants != "rigid":
            raise ValueError("only rigid constants are supported")
        if self.consequence not in CONSEQUENCES:
            raise ValueError(f"unsupported consequence {self.consequence!r}")

    def header(self) -> str:
        return (f"$modal := [$constants := $rigid, $quantification := ${self.quantification}, "
                f"$consequence := ${self.consequence}, $modalities := $modal_system_{self.system}]")


AXIOM_ROLES = ("axiom", "hypothesis", "lemma", "theorem", "plain", "assumption")


@dataclass
class AnnotatedFormula:
    name: str
    role: str
    formula: Any                      # Term, (symbol, TypeExpr) or LogicSpec
    annotations: Any = None
    source: str = ""                  # text of the formula, for re-parsing

    @property
    def is_type(self) -> bool:
        return self.role == "type"


@dataclass
class Problem:
    name: str = "problem"
    formulas: list[AnnotatedFormula] = field(default_factory=list)
    signature: dict[str, TypeExpr] = field(default_factory=dict)
    base_types: list[str] = field(default_factory=list)
    logic: LogicSpec | None = None
    modal_ops: bool = False

    def by_role(self, *roles: str) -> list[AnnotatedFormula]:
        return [f for f in self.formulas if f.role in roles]

    @property
    def axioms(self) -> list[AnnotatedFormula]:
        return self.by_role(*AXIOM_ROLES)

    @property
    def definitions(self) -> list[AnnotatedFormula]:
        return self.by_role("definition")

    @property
    def conjecture(self) -> AnnotatedFormula | None:
        cs = self.by_role("conjecture")
        return cs[0] if cs else None

    @property
    def negated_conjectures(self) -> list[AnnotatedFormula]:
        return self.by_role("negated_conjecture")

    def logical_formulas(self) -> list[AnnotatedFormula]:
        return [f for f in self.formulas if f.role not in ("type", "logic")]

    def terms(self) -> list[Term]:
        return [f.formula for f in self.logical_formulas()]
