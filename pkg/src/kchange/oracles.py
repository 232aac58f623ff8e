"""Reference computations that share no code with the solver kernels.

Both work from ``spec.oracle`` calls and the referee's ``apply_move``; they are
slow by design and meant for small instances in tests.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Optional

from .bits import members
from .core import AdversaryResponse, GameState, ProblemSpec, Timing, apply_move, change_input, initial_state


class CertificateOracle:
    """Shortest certificates by exhaustive search over query subsets."""

    def __init__(self, spec: ProblemSpec):
        self.spec = spec
        n = len(spec.inputs)
        # agree[x][q]: inputs answering q the way x does, rebuilt from oracle calls
        self.agree = []
        for x in range(n):
            row = []
            for q in range(len(spec.queries)):
                want = spec.oracle(x, q)
                row.append(sum(1 << y for y in range(n) if spec.oracle(y, q) == want))
            self.agree.append(row)
        self.same = [sum(1 << y for y in range(n) if spec.target(y) == spec.target(x)) for x in range(n)]
        self.size = lru_cache(maxsize=None)(self._size)

    def _size(self, S: int, x: int) -> int:
        """Fewest queries whose answers on ``x`` leave only inputs of S with x's target."""
        good = self.same[x]
        if S & ~good == 0:
            return 0
        masks = sorted({S & m for m in self.agree[x] if S & m != S})
        # a query whose surviving set contains another's is never needed
        minimal = [m for m in masks if not any(o != m and o & m == o for o in masks)]
        for r in range(1, len(minimal) + 1):
            for combo in itertools.combinations(minimal, r):
                left = S
                for m in combo:
                    left &= m
                if left & ~good == 0:
                    return r
        raise ValueError("problem does not separate its targets")

    def per_input(self) -> list[int]:
        S = self.spec.universe
        return [self.size(S, x) for x in range(len(self.spec.inputs))]

    def complexity(self) -> int:
        """Largest shortest-certificate size over all inputs (the zero-change game value)."""
        return max(self.per_input())


def certificate_complexity(spec: ProblemSpec) -> int:
    return CertificateOracle(spec).complexity()


def naive_game_value(spec: ProblemSpec, k: int, timing: Optional[Timing] = None) -> int:
    """Game value by plain depth-first minimax over referee moves, without a transposition table.

    Every replacement input is tried explicitly.  Positions with no change left
    are scored by the certificate oracle.  Only cut-offs that cannot alter the
    result are applied.
    """
    timing = Timing(timing or spec.timing)
    cert = CertificateOracle(spec)
    nq = len(spec.queries)

    def undetermined(S: int) -> list[int]:
        out = []
        for q in range(nq):
            seen = {spec.oracle(y, q) for y in members(S)}
            if len(seen) == 2:
                out.append(q)
        return out

    def finished(S: int) -> bool:
        return len({spec.target(y) for y in members(S)}) == 1

    def after_query(state: GameState) -> int:
        """Questioner to move; the Adversary may change after seeing the query."""
        S, x = state.consistent, state.current
        if finished(S):
            return 0
        if state.changes_left == 0:
            return cert.size(S, x)
        best = nq + 1
        for q in undetermined(S):
            worst = 0
            for z in [None] + [y for y in members(S) if y != x]:
                worst = max(worst, 1 + after_query(apply_move(state, q, AdversaryResponse(z), spec)))
                if worst >= best:
                    break
            best = min(best, worst)
            if best == 1:
                break
        return best

    def start_of_turn(state: GameState) -> int:
        """Adversary may change, then the Questioner (seeing the new input) asks."""
        S, x = state.consistent, state.current
        if finished(S):
            return 0
        worst = pick_query(state)
        if state.changes_left:
            for z in members(S):
                if z != x:
                    worst = max(worst, pick_query(change_input(state, z, spec)))
        return worst

    def pick_query(state: GameState) -> int:
        S, x = state.consistent, state.current
        if finished(S):
            return 0
        if state.changes_left == 0:
            return cert.size(S, x)
        return min(1 + start_of_turn(apply_move(state, q, AdversaryResponse(None), spec)) for q in undetermined(S))

    root = after_query if timing is Timing.AFTER_QUERY else start_of_turn
    return max(root(initial_state(spec, k, x)) for x in range(len(spec.inputs)))
