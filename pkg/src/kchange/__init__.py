"""Exact analysis of query games in which the answerer may change its input k times."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    AdversaryResponse,
    GameState,
    ProblemSpec,
    Timing,
    Transcript,
    apply_move,
    is_certificate,
    play_match,
    restrict,
    validate_problem,
)
from .problems import Family, ProblemKind, build_problem, predicted_value, turan_complement, turan_number  # noqa: E402

__all__ = [
    "AdversaryResponse",
    "Family",
    "GameState",
    "ProblemKind",
    "ProblemSpec",
    "Timing",
    "Transcript",
    "__version__",
    "apply_move",
    "build_problem",
    "is_certificate",
    "play_match",
    "predicted_value",
    "restrict",
    "turan_complement",
    "turan_number",
    "validate_problem",
]
