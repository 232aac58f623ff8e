"""Agents for finding the maximum (and minimum) by comparisons."""

from __future__ import annotations

import heapq
import math
from typing import Optional, Sequence

from ..bits import members
from ..core import Adversary, GameState, ProblemSpec, Questioner, Timing
from ..problems import Family
from .generic import Positional
from .sorting import _OrderAgent


class ChainQuestioner(_OrderAgent, Positional, Questioner):
    """Compares neighbours among the elements that can still be extreme.

    The candidates (elements that are the maximum, or for min+max the minimum,
    of some consistent order) are listed in the current order and the first
    neighbouring pair whose outcome is still open is asked.  Without changes
    this walks a_1, a_2, ... up the current order; after a change it restarts
    on the surviving candidates in the new order.
    """

    name = "chain"
    families = frozenset({Family.MINMAX, Family.MAXONLY})

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        super().reset(spec, k, timing)
        self._index(spec)
        self.with_min = spec.kind.family is Family.MINMAX

    def candidates(self, S: int) -> set[int]:
        out = set()
        for x in members(S):
            order = self.spec.inputs[x]
            out.add(order[-1])
            if self.with_min:
                out.add(order[0])
        return out

    def next_query(self, state: GameState) -> int:
        S = state.consistent
        alive = self.candidates(S)
        chain = [v for v in self.order(state.current) if v in alive]
        answers = self.spec.answers
        for a, b in zip(chain, chain[1:]):
            yes = answers[self.query(a, b)]
            if S & yes and S & ~yes:
                return self.query(a, b)
        raise RuntimeError("extremes already certified")


def minmax_partition(n: int, relations: Sequence[tuple[int, int]]) -> tuple[set, set, set, set]:
    """Split elements into (A, B, C, D): out, only smaller, only larger, never compared."""
    smaller, larger = set(), set()
    for lo, hi in relations:
        smaller.add(lo)
        larger.add(hi)
    A = smaller & larger
    return A, smaller - A, larger - A, set(range(n)) - smaller - larger


def minmax_reorder(
    A: set, B: set, C: set, D: set, prior: Sequence[int], relations: Sequence[tuple[int, int]] = ()
) -> tuple[int, ...]:
    """Order with B lowest, then A, then D, then C.

    B, C and D keep their relative order from ``prior``; A is placed in
    lowest-label-first topological order of the ``relations`` among its elements.
    """
    rank = {v: i for i, v in enumerate(prior)}
    succ: dict[int, list[int]] = {v: [] for v in A}
    indeg = {v: 0 for v in A}
    for lo, hi in set(relations):
        if lo in A and hi in A:
            succ[lo].append(hi)
            indeg[hi] += 1
    heap = [v for v in A if indeg[v] == 0]
    heapq.heapify(heap)
    a_order = []
    while heap:
        v = heapq.heappop(heap)
        a_order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)

    def keep(block):
        return sorted(block, key=rank.__getitem__)

    return tuple(keep(B) + a_order + keep(D) + keep(C))


class OutAvoidAdversary(_OrderAgent, Adversary):
    """Keeps elements from going out while it can afford to.

    It holds its order in the block form B < A < D < C, in which a comparison
    makes an element out only when both compared elements lie in B or both in
    C.  After answers move elements between blocks it re-arranges, spending at
    most min(k, ceil(n/2)) changes; afterwards it answers from its last order.
    """

    name = "out-avoid"
    families = frozenset({Family.MINMAX})

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        super().reset(spec, k, timing)
        self._index(spec)
        self.budget = min(k, math.ceil(self.n / 2))

    def memo_key(self, state: GameState):
        return frozenset(state.asked)

    def initial_input(self) -> int:
        return self.input_index[tuple(range(self.n))]

    def choose_change(self, state: GameState, q: Optional[int]) -> Optional[int]:
        if self.k - state.changes_left >= self.budget:
            return None
        relations = self.fixed_relations(state)
        target = minmax_reorder(*minmax_partition(self.n, relations), self.order(state.current), relations)
        x = self.input_index[target]
        if x == state.current or not state.consistent >> x & 1:
            return None
        return x
