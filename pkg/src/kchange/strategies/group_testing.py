"""Group-testing adversary that halves the region holding the defectives."""

from __future__ import annotations

from typing import Optional

from ..bits import members
from ..core import Adversary, GameState, ProblemSpec, Timing
from ..problems import GROUP_TESTING


class HalfSplitAdversary(Adversary):
    """For its first k answers, keeps the defectives inside a shrinking region R.

    R starts as all elements.  A test A is answered YES iff A covers at least
    half of R, and R becomes R & A or R - A accordingly.  The input is kept when
    it is a nonempty subset of the new R; otherwise it changes to the largest
    consistent input inside R (lowest index on ties).  Later answers come from
    the current input.  The initial input is the lowest d elements.
    """

    name = "half-split"
    families = frozenset(GROUP_TESTING)
    timings = frozenset({Timing.AFTER_QUERY})

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        super().reset(spec, k, timing)
        self.n = spec.kind.n
        self.sets = [frozenset(x) for x in spec.inputs]
        self.index = {s: i for i, s in enumerate(self.sets)}

    def initial_input(self) -> int:
        return self.index[frozenset(range(self.spec.kind.d))]

    def region(self, asked) -> frozenset:
        R = frozenset(range(self.n))
        for q, outcome in asked[: self.k]:
            A = frozenset(self.spec.queries[q])
            R = R & A if outcome else R - A
        return R

    def choose_change(self, state: GameState, q: Optional[int]) -> Optional[int]:
        if state.count >= self.k:
            return None
        R = self.region(state.asked)
        A = frozenset(self.spec.queries[q])
        yes = 2 * len(A & R) >= len(R)
        R = R & A if yes else R - A
        cur = self.sets[state.current]
        if cur and cur <= R:
            return None
        if state.changes_left == 0:
            return None
        inside = [x for x in members(state.consistent) if self.sets[x] <= R and (self.sets[x] or not yes)]
        if not inside:
            return None
        best = max(inside, key=lambda x: (len(self.sets[x]), -x))
        return None if best == state.current else best
