"""Exact solver: game values, optimal agents and best responses."""

from .backend import compiled_available, default_backend
from .best_response import BestResponse, value_against_adversary, value_against_questioner
from .exact import SolveOptions, SolveResult, Solver, game_value
from .policy import OptimalAdversary, OptimalQuestioner, optimal_policy, principal_variation

__all__ = [
    "BestResponse",
    "OptimalAdversary",
    "OptimalQuestioner",
    "SolveOptions",
    "SolveResult",
    "Solver",
    "compiled_available",
    "default_backend",
    "game_value",
    "optimal_policy",
    "principal_variation",
    "value_against_adversary",
    "value_against_questioner",
]
