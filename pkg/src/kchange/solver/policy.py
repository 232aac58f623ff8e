"""Optimal agents read off exact node values.

Tie-breaks, applied everywhere so transcripts are reproducible: the Questioner
takes the lowest-indexed best query; the Adversary prefers not changing, then
the lowest-indexed best replacement; the initial input is the lowest-indexed
input achieving the game value.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Optional

from ..bits import members
from ..core import Adversary, GameState, ProblemSpec, Questioner, Timing, Transcript, play_match
from ..errors import ConfigurationError, UnavailableError
from .exact import SolveOptions, Solver


class _SolverBacked:
    """Agent whose moves come from a ``Solver``; one is built on reset when missing or stale."""

    def _attach(self, solver: Optional[Solver], options: Optional[SolveOptions] = None) -> None:
        self.solver = solver
        self.options = options if options is not None else (solver.options if solver else SolveOptions())

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        super().reset(spec, k, timing)
        if self.solver is None or spec is not self.solver.spec or timing is not self.solver.timing:
            self.solver = Solver(spec, replace(self.options, timing=timing, node_cap=None, time_limit=None))


class OptimalQuestioner(_SolverBacked, Questioner):
    name = "optimal"
    order_sensitive = False

    def __init__(self, solver: Optional[Solver] = None, options: Optional[SolveOptions] = None):
        self._attach(solver, options)

    def memo_key(self, state: GameState):
        return None  # decisions depend on (S, x, c) only

    def query_values(self, state: GameState) -> list[tuple[int, int]]:
        """(query, remaining queries if asked now) for every undetermined query."""
        s, spec = self.solver, self.spec
        S, x, c = state.consistent, state.current, state.changes_left
        out = []
        for q in range(spec.n_queries):
            yes = spec.answers[q]
            sy, sn = S & yes, S & ~yes
            if not sy or not sn:
                continue
            own = sy if yes >> x & 1 else sn
            if self.timing is Timing.AFTER_QUERY:
                m = s.move_value(own, x, c)
                if c > 0:
                    m = max(m, s.adversary_value(sy, c - 1), s.adversary_value(sn, c - 1))
            else:
                m = s.turn_value(own, x, c)
            out.append((q, 1 + m))
        return out

    def next_query(self, state: GameState) -> int:
        vals = self.query_values(state)
        best = min(v for _, v in vals)
        return next(q for q, v in vals if v == best)


class OptimalAdversary(_SolverBacked, Adversary):
    name = "optimal"
    order_sensitive = False

    def __init__(self, solver: Optional[Solver] = None, options: Optional[SolveOptions] = None):
        self._attach(solver, options)

    def memo_key(self, state: GameState):
        return None

    def initial_input(self) -> int:
        s, X, k = self.solver, self.spec.universe, self.k
        vals = [(x, s.turn_value(X, x, k)) for x in members(X)]
        best = max(v for _, v in vals)
        return next(x for x, v in vals if v == best)

    def choose_change(self, state: GameState, q: Optional[int]) -> Optional[int]:
        S, x, c = state.consistent, state.current, state.changes_left
        if self.timing is Timing.AFTER_QUERY:
            yes = self.spec.answers[q]

            def after(z: int, cz: int) -> int:
                return self.solver.move_value(S & yes if yes >> z & 1 else S & ~yes, z, cz)

        else:

            def after(z: int, cz: int) -> int:
                return self.solver.move_value(S, z, cz)

        stay = after(x, c)
        if c == 0:
            return None
        best, choice = stay, None
        for z in members(S):
            if z != x:
                v = after(z, c - 1)
                if v > best:
                    best, choice = v, z
        return choice


def optimal_policy(
    spec: ProblemSpec, k: int, options: Optional[SolveOptions] = None
) -> tuple[OptimalQuestioner, OptimalAdversary]:
    """Agents playing optimally for ``spec`` with ``k`` changes (they share one solver)."""
    if k < 0:
        raise ConfigurationError("k must be non-negative")
    solver = Solver(spec, options)
    return OptimalQuestioner(solver), OptimalAdversary(solver)


def principal_variation_from(solver: Solver, k: int) -> Transcript:
    return play_match(solver.spec, k, OptimalQuestioner(solver), OptimalAdversary(solver), timing=solver.timing)


def principal_variation(spec: ProblemSpec, k: int, options: Optional[SolveOptions] = None) -> Transcript:
    """One optimal-play transcript; its length equals the game value.

    Raises ``UnavailableError`` when the limits in ``options`` stop the solve early.
    """
    solver = Solver(spec, options)
    result = solver.solve(k)
    if not result.complete:
        raise UnavailableError(f"{spec.name}, k={k}: solve incomplete, no principal variation")
    return principal_variation_from(solver, k)
