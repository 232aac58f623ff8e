"""Sorting agents: the adjacent-pair questioner and the interleaving adversaries.

An order lists element labels from smallest to largest; query ``(a, b)`` with
``a < b`` answers YES iff ``a`` sits below ``b``.
"""

from __future__ import annotations

import heapq
import itertools
import math
from typing import Optional, Sequence

from ..core import Adversary, GameState, ProblemSpec, Questioner, Timing
from ..problems import Family, pairs
from .generic import Positional


class _OrderAgent:
    """Index lookups shared by agents over permutation inputs."""

    def _index(self, spec: ProblemSpec) -> None:
        self.n = len(spec.inputs[0])
        self.pair_index = {p: i for i, p in enumerate(pairs(self.n))}
        self.input_index = {order: i for i, order in enumerate(spec.inputs)}

    def order(self, x: int) -> tuple[int, ...]:
        return self.spec.inputs[x]

    def query(self, a: int, b: int) -> int:
        return self.pair_index[(a, b) if a < b else (b, a)]

    def fixed_relations(self, state: GameState) -> list[tuple[int, int]]:
        """Asked comparisons as (smaller, larger) pairs."""
        out = []
        for q, outcome in state.asked:
            a, b = self.spec.queries[q]
            out.append((a, b) if outcome else (b, a))
        return out


class ChainRepairQuestioner(_OrderAgent, Positional, Questioner):
    """Asks the lowest unasked pair of neighbours in the current order.

    With one change this is the chain-repair schedule: before the change it
    walks up the current chain; after it, every gap of the known chain is
    repaired by comparing the new neighbours in order.  The same rule is the
    general-k scan, registered separately as an exploratory agent.
    """

    name = "chain-repair"
    families = frozenset({Family.SORTING})

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        super().reset(spec, k, timing)
        self._index(spec)

    def next_query(self, state: GameState) -> int:
        order = self.order(state.current)
        asked = state.asked_queries
        for a, b in zip(order, order[1:]):
            q = self.query(a, b)
            if q not in asked:
                return q
        raise RuntimeError("current order already certified")


class AdjacentScanQuestioner(ChainRepairQuestioner):
    name = "adjacent-scan"


def components_of(n: int, relations: Sequence[tuple[int, int]]) -> list[list[int]]:
    """Connected components of the comparison graph, each in lowest-label-first topological order.

    Components are listed by their lowest label.
    """
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in relations:
        parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)

    succ: dict[int, list[int]] = {v: [] for v in range(n)}
    indeg = [0] * n
    for a, b in set(relations):
        succ[a].append(b)
        indeg[b] += 1
    out = []
    for members_ in sorted(groups.values(), key=min):
        heap = [v for v in members_ if indeg[v] == 0]
        heapq.heapify(heap)
        chain = []
        while heap:
            v = heapq.heappop(heap)
            chain.append(v)
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        out.append(chain)
    return out


def _merge_lowest_first(chains: Sequence[Sequence[int]]) -> list[int]:
    """Merge ordered chains, always taking the lowest label among the chain heads."""
    heads = [(c[0], i, 0) for i, c in enumerate(chains) if c]
    heapq.heapify(heads)
    out = []
    while heads:
        v, i, j = heapq.heappop(heads)
        out.append(v)
        if j + 1 < len(chains[i]):
            heapq.heappush(heads, (chains[i][j + 1], i, j + 1))
    return out


def sorting_interleave_reorder(components: Sequence[Sequence[int]]) -> Optional[tuple[int, ...]]:
    """Total order keeping each chain's order with no two elements of one chain adjacent.

    The longest chain (lowest label on ties) becomes a_1 < ... < a_k.  The set of
    other chains with the largest total size below k (lexicographically smallest
    index set on ties) is merged lowest-label-first into b_1, b_2, ... and b_i is
    placed between a_i and a_{i+1}.  Every other chain c_1 < ... < c_m takes the
    top m gaps in increasing order (gap 0 lies below a_1, gap i between a_i and
    a_{i+1}).  Inside a gap lower labels come first.

    With nothing compared (all chains singletons) the identity order is
    returned.  Returns None when no such order exists.
    """
    chains = [list(c) for c in components if c]
    n = sum(len(c) for c in chains)
    if all(len(c) == 1 for c in chains):
        return tuple(sorted(c[0] for c in chains))
    if n <= 2 or len(chains) == 1:
        return None
    ai = max(range(len(chains)), key=lambda i: (len(chains[i]), -min(chains[i])))
    a = chains[ai]
    k = len(a)
    others = [i for i in range(len(chains)) if i != ai]
    best: tuple = (-1, ())
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            total = sum(len(chains[i]) for i in combo)
            if total < k and (total > best[0] or (total == best[0] and combo < best[1])):
                best = (total, combo)
    bset = best[1]
    gaps: list[list[int]] = [[] for _ in range(k + 1)]
    for i, v in enumerate(_merge_lowest_first([chains[i] for i in bset])):
        gaps[i + 1].append(v)
    for ci in others:
        if ci in bset:
            continue
        c = chains[ci]
        m = len(c)
        for i, v in enumerate(c):
            gaps[k - m + i].append(v)
    order: list[int] = []
    for g in range(k + 1):
        if g:
            order.append(a[g - 1])
        order.extend(sorted(gaps[g]))
    position = {v: i for i, v in enumerate(order)}
    for c in chains:
        if any(position[u] + 1 == position[w] for u, w in zip(c, c[1:])):
            return None
    return tuple(order)


class InterleaveAdversary(_OrderAgent, Adversary):
    """Starts from the identity order and spends one change after ceil(n/2) - 1 answers.

    The change moves to the interleaved order of the comparison components, so
    no compared pair is adjacent afterwards and n - 1 further queries are needed.
    """

    name = "interleave"
    families = frozenset({Family.SORTING})

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        super().reset(spec, k, timing)
        self._index(spec)
        self.trigger = math.ceil(self.n / 2) - 1

    def memo_key(self, state: GameState):
        return state.count, frozenset(state.asked)

    def initial_input(self) -> int:
        return self.input_index[tuple(range(self.n))]

    def choose_change(self, state: GameState, q: Optional[int]) -> Optional[int]:
        if state.changes_left == 0 or state.count != self.trigger:
            return None
        return self._reorder(state)

    def _reorder(self, state: GameState) -> Optional[int]:
        comps = components_of(self.n, self.fixed_relations(state))
        order = sorting_interleave_reorder(comps)
        if order is None:
            return None
        x = self.input_index[order]
        if x == state.current or not state.consistent >> x & 1:
            return None
        return x


class BalancedAdversary(InterleaveAdversary):
    """Exploratory general-k adversary.

    Whenever a change is left and a compared pair sits adjacent in the current
    order, it moves to the interleaved order of the current components, which
    spreads the unqueried elements between the known ones.
    """

    name = "balanced"

    def choose_change(self, state: GameState, q: Optional[int]) -> Optional[int]:
        if state.changes_left == 0 or state.count < self.trigger:
            return None
        order = self.order(state.current)
        asked = state.asked_queries
        if not any(self.query(a, b) in asked for a, b in zip(order, order[1:])):
            return None
        return self._reorder(state)
