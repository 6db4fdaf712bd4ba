"""CTL model checking for one-counter processes."""

from .ctl import Formula, expand, format_formula, lud, parse_formula, size
from .ocp import OneCounterProcess, State, TransitionRule, is_ocn, is_unit_step, parse_ocp, successors
from .oracle import TruthValue3, eval3, eval_definite
from .periodic import UltimatelyPeriodicSet
from .quotient import bound_params, build_quotient, check, label

__all__ = [
    "Formula", "expand", "format_formula", "lud", "parse_formula", "size",
    "OneCounterProcess", "State", "TransitionRule", "is_ocn", "is_unit_step", "parse_ocp", "successors",
    "TruthValue3", "eval3", "eval_definite",
    "UltimatelyPeriodicSet",
    "bound_params", "build_quotient", "check", "label",
]
