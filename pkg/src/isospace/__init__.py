"""Finite games analyzed over constrained probability spaces.

Spaces and constraints live in :mod:`isospace.probspace`, information
measures in :mod:`isospace.infomeasures`, correlation geometry in
:mod:`isospace.corrgeom`, games in :mod:`isospace.gamemodel`, equilibria
and comparison tables in :mod:`isospace.solver` and the built-in examples
in :mod:`isospace.catalog`.
"""

from .catalog import get_game, get_space, get_space_family
from .errors import IsospaceError
from .gamemodel import GameDefinition, SpaceSpec, expected_payoff, parse_spec
from .polynomial import Polynomial
from .probspace import (
    CorrelationFix,
    FunctionalAssignment,
    ParamFix,
    ParamTie,
    ProbabilitySpace,
    joint_distribution,
    resolve,
)
from .solver import backwards_induction, comparison_table, constrained_equilibrium

__all__ = [
    "CorrelationFix", "FunctionalAssignment", "GameDefinition", "IsospaceError", "ParamFix",
    "ParamTie", "Polynomial", "ProbabilitySpace", "SpaceSpec", "backwards_induction",
    "comparison_table", "constrained_equilibrium", "expected_payoff", "get_game", "get_space",
    "get_space_family", "joint_distribution", "parse_spec", "resolve",
]

__version__ = "0.1.0"
