"""Agents that work for any problem, plus the search-specific questioners."""

from __future__ import annotations

from dataclasses import replace
from typing import Optional

from ..bits import from_indices, members, popcount
from ..core import Adversary, GameState, ProblemSpec, Questioner, Timing
from ..errors import ConfigurationError
from ..problems import Family
from ..solver import SolveOptions, Solver


class Positional:
    """Mixin for agents whose decisions depend only on (consistent set, current input, changes left)."""

    order_sensitive = False

    def memo_key(self, state: GameState):
        return None


class LexQuestioner(Positional, Questioner):
    """Asks the lowest-indexed undetermined query."""

    name = "lex"

    def next_query(self, state: GameState) -> int:
        S = state.consistent
        for q, yes in enumerate(self.spec.answers):
            if S & yes and S & ~yes:
                return q
        raise ConfigurationError("no undetermined query left")


class SingletonQuestioner(Positional, Questioner):
    name = "singleton"
    families = frozenset({Family.SEARCH})

    def next_query(self, state: GameState) -> int:
        return 1 << state.current  # query index = bit vector of the queried elements


class HalvingQuestioner(Positional, Questioner):
    """Asks the set of the lowest ceil(|S|/2) consistent elements (the lowest such query index)."""

    name = "halving"
    families = frozenset({Family.SEARCH})

    def next_query(self, state: GameState) -> int:
        S = state.consistent
        half = (popcount(S) + 1) // 2
        return from_indices(list(members(S))[:half])


class _NeedsSolver:
    def _solver(self, spec: ProblemSpec, timing: Timing, options: Optional[SolveOptions]) -> Solver:
        cached = getattr(self, "_cached_solver", None)
        if cached is None or cached.spec is not spec or cached.timing is not timing:
            opts = replace(options or SolveOptions(), timing=timing, node_cap=None, time_limit=None)
            cached = self._cached_solver = Solver(spec, opts)
        return cached


class StaticAdversary(_NeedsSolver, Positional, Adversary):
    """Never changes; starts from an input with the largest certificate size (lowest index on ties)."""

    name = "static"

    def __init__(self, options: Optional[SolveOptions] = None):
        self.options = options

    def initial_input(self) -> int:
        solver = self._solver(self.spec, Timing.AFTER_QUERY, self.options)
        X = self.spec.universe
        sizes = [solver.turn_value(X, x, 0) for x in members(X)]
        return sizes.index(max(sizes))


class StubbornAdversary(_NeedsSolver, Positional, Adversary):
    """Keeps the consistent set on the unrestricted-optimal side, changing input when that side needs it.

    The answer side maximising the unrestricted value is chosen (the current
    input's side on ties).  If the current input is on the other side a change
    to the lowest input of the chosen side is spent; without changes left the
    current input answers.
    """

    name = "stubborn"
    timings = frozenset({Timing.AFTER_QUERY})

    def __init__(self, options: Optional[SolveOptions] = None):
        self.options = options

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        super().reset(spec, k, timing)
        self.solver = self._solver(spec, timing, self.options)
        self.unlimited = spec.n_queries

    def choose_change(self, state: GameState, q: Optional[int]) -> Optional[int]:
        S, x = state.consistent, state.current
        yes = self.spec.answers[q]
        sides = {True: S & yes, False: S & ~yes}
        own = bool(yes >> x & 1)

        def worth(side: int) -> int:
            if not side:
                return -1
            return self.solver.adversary_value(side, self.unlimited)

        best = own if worth(sides[own]) >= worth(sides[not own]) else not own
        if best == own or state.changes_left == 0:
            return None
        return next(members(sides[best]))


def parse_composition(name: str) -> tuple[int, ...]:
    """``"compose:1,0,2"`` -> ``(1, 0, 2)``."""
    _, _, body = name.partition(":")
    try:
        parts = tuple(int(p) for p in body.split(","))
    except ValueError:
        raise ConfigurationError(f"bad composition {name!r}; expected compose:j1,j2,...") from None
    if not parts or any(j < 0 for j in parts):
        raise ConfigurationError(f"bad composition {name!r}; parts must be non-negative integers")
    return parts


class ComposeQuestioner(Positional, Questioner):
    """Runs optimal play for budgets j_1, j_2, ... in turn.

    Phase i lasts while fewer than T_i = sum_{m<=i} (j_m + 1) changes have been
    used; in it the Questioner plays the optimal move for T_i - 1 - used changes.
    Needs sum (j_i + 1) > k so the Adversary cannot outlast the last phase.
    """

    def __init__(self, parts: tuple[int, ...], options: Optional[SolveOptions] = None):
        self.parts = tuple(parts)
        self.name = "compose:" + ",".join(map(str, self.parts))
        self.options = options
        self.thresholds = []
        total = 0
        for j in self.parts:
            total += j + 1
            self.thresholds.append(total)

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        super().reset(spec, k, timing)
        if self.thresholds[-1] <= k:
            raise ConfigurationError(f"{self.name}: sum of (j_i + 1) = {self.thresholds[-1]} must exceed k = {k}")
        from ..solver import OptimalQuestioner

        opts = replace(self.options or SolveOptions(), timing=timing, node_cap=None, time_limit=None)
        self.inner = OptimalQuestioner(options=opts)
        self.inner.reset(spec, k, timing)

    def phase(self, used: int) -> int:
        return next(i for i, t in enumerate(self.thresholds) if used < t)

    def next_query(self, state: GameState) -> int:
        used = self.k - state.changes_left
        budget = self.thresholds[self.phase(used)] - 1 - used
        return self.inner.next_query(replace(state, changes_left=budget))
