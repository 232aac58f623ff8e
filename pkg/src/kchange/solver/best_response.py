"""Best responses to a fixed agent.

Each search enumerates every legal move of the free side and replays the fixed
agent's decisions through the referee rules, memoising on the game position
plus the agent's own ``memo_key``.  The free Questioner may ask any unasked
query, determined ones included; the free Adversary may pick any initial
input and, whenever a change is left, keep its input or switch to any
consistent one.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Optional

from ..bits import members
from ..core import (
    Adversary,
    AdversaryResponse,
    GameState,
    ProblemSpec,
    Questioner,
    Timing,
    apply_move,
    change_input,
    initial_state,
    is_certificate,
)
from ..errors import ForfeitError, IllegalMoveError, LimitError


@dataclass(frozen=True)
class BestResponse:
    """Value of the game when one side is fixed and the other plays perfectly."""

    value: int
    fixed: str
    positions: int


def _timing(spec: ProblemSpec, timing: Optional[Timing]) -> Timing:
    return Timing(timing or spec.timing)


class _Budget:
    def __init__(self, cap: Optional[int]):
        self.cap = cap
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.cap is not None and self.used > self.cap:
            raise LimitError(f"best-response search exceeded {self.cap} positions")


def value_against_adversary(
    spec: ProblemSpec,
    k: int,
    adversary: Adversary,
    timing: Optional[Timing] = None,
    position_cap: Optional[int] = None,
) -> BestResponse:
    """Fewest queries a perfect Questioner needs against ``adversary``."""
    timing = _timing(spec, timing)
    adversary.reset(spec, k, timing)
    x0 = adversary.initial_input()
    try:
        root = initial_state(spec, k, x0)
    except IllegalMoveError as exc:
        raise ForfeitError(adversary.name, str(exc)) from exc
    memo: dict = {}
    budget = _Budget(position_cap)
    nq = spec.n_queries

    def go(state: GameState) -> int:
        if is_certificate(state.consistent, spec):
            return 0
        key = (state.consistent, state.current, state.changes_left, adversary.memo_key(state))
        hit = memo.get(key)
        if hit is not None:
            return hit
        budget.tick()
        change = None
        if timing is Timing.BEFORE_QUERY:
            change = adversary.before_query(state)
            if change is not None:
                try:
                    change_input(state, change, spec)
                except IllegalMoveError as exc:
                    raise ForfeitError(adversary.name, str(exc)) from exc
        best = nq + 1
        for q in range(nq):
            if q in state.asked_queries:
                continue
            resp = adversary.respond(state, q) if timing is Timing.AFTER_QUERY else AdversaryResponse(change)
            try:
                nxt = apply_move(state, q, resp, spec)
            except IllegalMoveError as exc:
                raise ForfeitError(adversary.name, str(exc)) from exc
            best = min(best, 1 + go(nxt))
            if best == 1:
                break
        memo[key] = best
        return best

    with _recursion_room(4 * nq + 100):
        v = go(root)
    return BestResponse(v, adversary.name, len(memo))


def value_against_questioner(
    spec: ProblemSpec,
    k: int,
    questioner: Questioner,
    timing: Optional[Timing] = None,
    position_cap: Optional[int] = None,
) -> BestResponse:
    """Most queries a perfect Adversary can force against ``questioner``."""
    timing = _timing(spec, timing)
    questioner.reset(spec, k, timing)
    memo: dict = {}
    budget = _Budget(position_cap)
    nq = spec.n_queries

    def ask(state: GameState) -> int:
        q = questioner.next_query(state)
        if not isinstance(q, int) or not 0 <= q < nq:
            raise ForfeitError(questioner.name, f"query {q!r} out of range")
        if q in state.asked_queries:
            raise ForfeitError(questioner.name, f"query {q} was already asked")
        return q

    def go(state: GameState) -> int:
        if is_certificate(state.consistent, spec):
            return 0
        key = (state.consistent, state.current, state.changes_left, questioner.memo_key(state))
        hit = memo.get(key)
        if hit is not None:
            return hit
        budget.tick()
        options = [None]
        if state.changes_left > 0:
            options += [z for z in members(state.consistent) if z != state.current]
        best = 0
        if timing is Timing.AFTER_QUERY:
            q = ask(state)
            for z in options:
                best = max(best, 1 + go(apply_move(state, q, AdversaryResponse(z), spec)))
        else:
            for z in options:
                visible = state if z is None else change_input(state, z, spec)
                q = ask(visible)
                best = max(best, 1 + go(apply_move(state, q, AdversaryResponse(z), spec)))
        memo[key] = best
        return best

    with _recursion_room(4 * nq + 100):
        v = max(go(initial_state(spec, k, x)) for x in range(spec.n_inputs))
    return BestResponse(v, questioner.name, len(memo))


class _recursion_room:
    """Temporarily raise the recursion limit to at least ``need`` frames above the current depth."""

    def __init__(self, need: int):
        self.need = need

    def __enter__(self):
        self.old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(self.old, self.need + 200))

    def __exit__(self, *exc):
        sys.setrecursionlimit(self.old)
