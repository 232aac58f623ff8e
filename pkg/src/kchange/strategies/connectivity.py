"""Connectivity agents.  Inputs are edge sets; query ``(u, v)`` asks whether uv is an edge."""

from __future__ import annotations

from typing import Optional

from ..core import Adversary, GameState, ProblemSpec, Questioner, Timing
from ..problems import Family, pairs, turan_complement
from .generic import Positional


class _GraphAgent:
    def _index(self, spec: ProblemSpec) -> None:
        self.n = spec.kind.n
        self.plist = pairs(self.n)
        self.pair_index = {p: i for i, p in enumerate(self.plist)}
        self.graphs = [frozenset(g) for g in spec.inputs]
        self.graph_index = {g: i for i, g in enumerate(self.graphs)}

    def components(self, edges) -> list[list[int]]:
        """Components of (range(n), edges), each sorted, listed by lowest label."""
        adj: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        seen: set[int] = set()
        out = []
        for s in range(self.n):
            if s in seen:
                continue
            stack, comp = [s], []
            seen.add(s)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            out.append(sorted(comp))
        return out

    def known(self, state: GameState, outcome: bool) -> list[tuple[int, int]]:
        return [self.spec.queries[q] for q, o in state.asked if o is outcome]


class SpanningForestQuestioner(_GraphAgent, Positional, Questioner):
    """First learns a spanning forest of the current graph, then probes the smallest component's cut.

    Phase 1 asks the lexicographically first edge of the current graph joining
    two components of the known YES edges.  Once the known edges span every
    current component, phase 2 takes the smallest current component (lowest
    label on ties) whose cut still has an unasked pair and asks the first such
    pair; if the graph is connected the first unasked pair is asked.
    """

    name = "spanning-forest"
    families = frozenset({Family.CONNECTIVITY})

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        super().reset(spec, k, timing)
        self._index(spec)

    def next_query(self, state: GameState) -> int:
        current = self.graphs[state.current]
        comp_of = {}
        for i, comp in enumerate(self.components(self.known(state, True))):
            for v in comp:
                comp_of[v] = i
        for p in self.plist:
            if p in current and comp_of[p[0]] != comp_of[p[1]]:
                return self.pair_index[p]
        asked = state.asked_queries
        comps = self.components(current)
        for comp in sorted(comps, key=lambda c: (len(c), c[0])):
            inside = set(comp)
            for p in self.plist:
                if (p[0] in inside) != (p[1] in inside) and self.pair_index[p] not in asked:
                    return self.pair_index[p]
        for q in range(len(self.plist)):
            if q not in asked:
                return q
        raise RuntimeError("every pair already asked")


class TuranComplementAdversary(_GraphAgent, Positional, Adversary):
    """Starts from the complement of the Turan graph T(n, k+2): k+2 balanced cliques.

    When the queried pair is a non-edge and answering NO would certify that the
    graph is disconnected, it spends a change to add that edge and answers YES.
    """

    name = "turan-complement"
    families = frozenset({Family.CONNECTIVITY})
    timings = frozenset({Timing.AFTER_QUERY})

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        super().reset(spec, k, timing)
        self._index(spec)

    def initial_input(self) -> int:
        return self.graph_index[turan_complement(self.n, self.k + 2)]

    def choose_change(self, state: GameState, q: Optional[int]) -> Optional[int]:
        p = self.spec.queries[q]
        current = self.graphs[state.current]
        if state.changes_left == 0 or p in current:
            return None
        after_no = state.consistent & ~self.spec.answers[q]
        cls = self.spec.class_masks["disconnected"]
        if after_no & ~cls:
            return None  # a connected input survives NO
        return self.graph_index[current | {p}]


class NoUnlessDisconnectAdversary(_GraphAgent, Positional, Adversary):
    """Holds a spanning tree and answers NO unless the known answers would then force disconnection.

    A non-tree pair is answered NO.  A tree edge whose removal can still be
    repaired by an unasked pair is swapped for the lexicographically first such
    pair (one change) and answered NO; otherwise, or with no change left, it is
    answered YES.  The initial tree is the lexicographically first one.
    """

    name = "no-unless-disconnect"
    families = frozenset({Family.CONNECTIVITY})
    timings = frozenset({Timing.AFTER_QUERY})

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        super().reset(spec, k, timing)
        self._index(spec)

    def initial_input(self) -> int:
        comp = list(range(self.n))
        tree = []
        for u, v in self.plist:
            if comp[u] != comp[v]:
                old = comp[v]
                comp = [comp[u] if c == old else c for c in comp]
                tree.append((u, v))
        return self.graph_index[frozenset(tree)]

    def choose_change(self, state: GameState, q: Optional[int]) -> Optional[int]:
        p = self.spec.queries[q]
        tree = self.graphs[state.current]
        if p not in tree or state.changes_left == 0:
            return None
        rest = tree - {p}
        sides = self.components(rest)
        side = next(set(c) for c in sides if p[0] in c)
        asked = state.asked_queries
        for r in self.plist:
            if r != p and (r[0] in side) != (r[1] in side) and self.pair_index[r] not in asked:
                return self.graph_index[rest | {r}]
        return None
