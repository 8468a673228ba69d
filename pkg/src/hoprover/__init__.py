"""A small higher-order paramodulation prover with a shallow embedding of
modal logic.

Typical use::

    from hoprover import parse_file, prove, Config
    result = prove(parse_file("problems/classical/cantor.p"), Config(time_limit=10))
    print(result.status)
"""

from .problem import LogicSpec, Problem, SZSStatus
from .saturation import Config, Result, prove, saturate
from .tptp import ParseError, parse_file, parse_problem, render_tstp
from .derivation import Derivation, parse_derivation, replay_check
from .modal import embed_problem, kripke_eval

__all__ = ["Config", "Derivation", "LogicSpec", "ParseError", "Problem", "Result",
           "SZSStatus", "embed_problem", "kripke_eval", "parse_derivation", "parse_file",
           "parse_problem", "prove", "render_tstp", "replay_check", "saturate"]
