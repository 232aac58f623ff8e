"""Game semantics of the k-change query game.

An Adversary commits to an input, answers every query truthfully for the input
it currently holds, and may swap that input for another one consistent with all
fixed answers at most ``k`` times.  The Questioner sees the current input and
stops as soon as the fixed answers certify the target value.

Input sets are bit vectors (Python ints): bit ``i`` set means input ``i`` is a
member.  Outcomes are ``True`` for YES and ``False`` for NO.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Hashable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Optional

from .bits import full, lowest, members
from .errors import (
    ConfigurationError,
    ForfeitError,
    IllegalMoveError,
    LimitError,
    MalformedProblemError,
    RefusedQueryError,
)


class Timing(str, enum.Enum):
    """When the Adversary may swap its input within a turn.

    ``AFTER_QUERY``: the Questioner names a query, then the Adversary may change
    before answering.  ``BEFORE_QUERY``: the Adversary may change at the start
    of the turn, and the Questioner sees the new input before choosing a query.
    """

    AFTER_QUERY = "after"
    BEFORE_QUERY = "before"


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """A finite query problem.

    ``answers[q]`` is the bit vector of inputs answering YES to query ``q``;
    ``targets[x]`` is the value of the target function on input ``x``.
    ``timing`` is the change timing the problem is analysed under by default.
    """

    name: str
    inputs: tuple
    queries: tuple
    answers: tuple[int, ...]
    targets: tuple
    timing: Timing = Timing.AFTER_QUERY
    kind: Any = None

    @classmethod
    def from_oracle(
        cls,
        name: str,
        inputs: Sequence,
        queries: Sequence,
        oracle: Callable[[Any, Any], bool],
        target: Callable[[Any], Hashable],
        timing: Timing = Timing.AFTER_QUERY,
        kind: Any = None,
    ) -> "ProblemSpec":
        """Tabulate ``oracle`` and ``target`` over the given descriptions."""
        inputs = tuple(inputs)
        queries = tuple(queries)
        if not inputs or not queries:
            raise MalformedProblemError(f"{name}: empty input or query set")
        answers = []
        for q in queries:
            mask = 0
            for i, x in enumerate(inputs):
                out = oracle(x, q)
                if not isinstance(out, bool):
                    raise MalformedProblemError(f"{name}: oracle returned {out!r} for ({x!r}, {q!r})")
                if out:
                    mask |= 1 << i
            answers.append(mask)
        targets = tuple(target(x) for x in inputs)
        return cls(name, inputs, queries, tuple(answers), targets, timing, kind)

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_queries(self) -> int:
        return len(self.queries)

    @cached_property
    def universe(self) -> int:
        return full(len(self.inputs))

    def oracle(self, x: int, q: int) -> bool:
        return bool(self.answers[q] >> x & 1)

    def target(self, x: int) -> Hashable:
        return self.targets[x]

    @cached_property
    def class_masks(self) -> dict:
        """Map each target value to the bit vector of inputs having it."""
        masks: dict = {}
        for i, t in enumerate(self.targets):
            masks[t] = masks.get(t, 0) | (1 << i)
        return masks

    @cached_property
    def class_ids(self) -> tuple[int, ...]:
        order = {t: j for j, t in enumerate(self.class_masks)}
        return tuple(order[t] for t in self.targets)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    witness: Optional[tuple[int, int]] = None
    message: str = ""


def validate_problem(spec: ProblemSpec) -> ValidationReport:
    """Check that every pair of inputs with different targets is separated by some query."""
    n, nq = len(spec.inputs), len(spec.queries)
    if n == 0 or nq == 0:
        raise MalformedProblemError(f"{spec.name}: empty input or query set")
    if len(spec.answers) != nq or len(spec.targets) != n:
        raise MalformedProblemError(f"{spec.name}: oracle or target is not total")
    if any(a < 0 or a >> n for a in spec.answers):
        raise MalformedProblemError(f"{spec.name}: answer vector mentions unknown inputs")

    seen: dict[tuple[bool, ...], int] = {}
    for x in range(n):
        signature = tuple(bool(a >> x & 1) for a in spec.answers)
        other = seen.setdefault(signature, x)
        if other != x and spec.targets[other] != spec.targets[x]:
            return ValidationReport(
                False,
                (other, x),
                f"inputs {other} and {x} agree on every query but have different targets",
            )
    return ValidationReport(True)


def restrict(consistent: int, q: int, outcome: bool, spec: ProblemSpec) -> int:
    """Inputs of ``consistent`` that answer ``outcome`` to query ``q``."""
    yes = spec.answers[q]
    return consistent & yes if outcome else consistent & ~yes


def is_certificate(consistent: int, spec: ProblemSpec) -> bool:
    """True iff all inputs of the nonempty set ``consistent`` share one target value."""
    if consistent <= 0:
        raise ValueError("certificate check on an empty input set")
    cls = spec.class_masks[spec.targets[lowest(consistent)]]
    return consistent & ~cls == 0


def is_determined(consistent: int, q: int, spec: ProblemSpec) -> bool:
    """True iff query ``q`` has the same outcome on every input of ``consistent``."""
    yes = spec.answers[q]
    return consistent & yes == 0 or consistent & ~yes == 0


def undetermined_queries(consistent: int, spec: ProblemSpec) -> list[int]:
    return [q for q in range(len(spec.queries)) if not is_determined(consistent, q, spec)]


@dataclass(frozen=True)
class GameState:
    """Position of a match.

    ``asked`` lists ``(query, outcome)`` pairs in the order they were fixed.
    """

    consistent: int
    current: int
    changes_left: int
    asked: tuple[tuple[int, bool], ...] = ()

    @property
    def count(self) -> int:
        return len(self.asked)

    @cached_property
    def asked_queries(self) -> frozenset[int]:
        return frozenset(q for q, _ in self.asked)

    def outcome(self, q: int) -> Optional[bool]:
        for p, o in self.asked:
            if p == q:
                return o
        return None


def initial_state(spec: ProblemSpec, k: int, current: int) -> GameState:
    if k < 0:
        raise ValueError("k must be non-negative")
    if not 0 <= current < len(spec.inputs):
        raise IllegalMoveError(f"initial input {current} out of range")
    return GameState(spec.universe, current, k, ())


@dataclass(frozen=True)
class AdversaryResponse:
    """Optional replacement input; the answer is then forced by the oracle."""

    change: Optional[int] = None


def change_input(state: GameState, x: int, spec: ProblemSpec) -> GameState:
    """Replace the current input by ``x``, consuming one change."""
    if state.changes_left < 1:
        raise IllegalMoveError("no changes left")
    if not 0 <= x < len(spec.inputs) or not state.consistent >> x & 1:
        raise IllegalMoveError(f"replacement input {x} contradicts a fixed answer")
    return GameState(state.consistent, x, state.changes_left - 1, state.asked)


def apply_move(state: GameState, q: int, resp: AdversaryResponse, spec: ProblemSpec) -> GameState:
    if not 0 <= q < len(spec.queries):
        raise IllegalMoveError(f"query {q} out of range")
    if q in state.asked_queries:
        raise RefusedQueryError(f"query {q} was already asked")
    if resp.change is not None:
        state = change_input(state, resp.change, spec)
    outcome = spec.oracle(state.current, q)
    return GameState(
        restrict(state.consistent, q, outcome, spec),
        state.current,
        state.changes_left,
        state.asked + ((q, outcome),),
    )


@dataclass(frozen=True)
class Event:
    query: int
    change: Optional[int]
    outcome: bool


@dataclass(frozen=True)
class Transcript:
    problem: str
    k: int
    timing: Timing
    initial: int
    events: tuple[Event, ...]
    final: GameState

    @property
    def length(self) -> int:
        return len(self.events)

    @property
    def change_count(self) -> int:
        return sum(e.change is not None for e in self.events)

    def to_dict(self, spec: Optional[ProblemSpec] = None) -> dict:
        """Machine-readable form; with ``spec`` the inputs and queries are described too."""
        d: dict = {
            "problem": self.problem,
            "k": self.k,
            "timing": self.timing.value,
            "initial": self.initial,
            "length": self.length,
            "changes": self.change_count,
            "events": [],
        }
        current = self.initial
        for e in self.events:
            ev: dict = {"query": e.query, "change": e.change, "outcome": e.outcome}
            if spec is not None:
                ev["query_desc"] = _describe(spec.queries[e.query])
                if e.change is not None:
                    ev["before"] = _describe(spec.inputs[current])
                    ev["after"] = _describe(spec.inputs[e.change])
            if e.change is not None:
                current = e.change
            d["events"].append(ev)
        if spec is not None:
            d["initial_desc"] = _describe(spec.inputs[self.initial])
            d["final_desc"] = _describe(spec.inputs[self.final.current])
        return d


def _describe(obj: Any) -> Any:
    if isinstance(obj, (tuple, list, frozenset, set)):
        items = sorted(obj) if isinstance(obj, (frozenset, set)) else obj
        return [_describe(o) for o in items]
    return obj


def replay(spec: ProblemSpec, transcript: Transcript) -> GameState:
    state = initial_state(spec, transcript.k, transcript.initial)
    for e in transcript.events:
        state = apply_move(state, e.query, AdversaryResponse(e.change), spec)
    return state


class Agent:
    """A deterministic policy for one role.

    Agents decide from the ``GameState`` alone, so the same state always yields
    the same move.  ``order_sensitive = False`` declares that a decision does
    not depend on the order of ``state.asked``, which lets best-response search
    share work between transpositions.
    """

    name = "agent"
    timings: frozenset = frozenset(Timing)
    families: Optional[frozenset] = None
    order_sensitive = True

    def reset(self, spec: ProblemSpec, k: int, timing: Timing) -> None:
        if timing not in self.timings:
            raise ConfigurationError(f"agent {self.name!r} does not support {timing.value}-query timing")
        if self.families is not None:
            family = getattr(spec.kind, "family", None)
            if family not in self.families:
                raise ConfigurationError(f"agent {self.name!r} does not apply to problem {spec.name!r}")
        self.spec = spec
        self.k = k
        self.timing = timing

    def memo_key(self, state: GameState) -> Hashable:
        return state.asked if self.order_sensitive else frozenset(state.asked)


class Questioner(Agent):
    def next_query(self, state: GameState) -> int:
        raise NotImplementedError


class Adversary(Agent):
    def initial_input(self) -> int:
        return 0

    def choose_change(self, state: GameState, q: Optional[int]) -> Optional[int]:
        """Replacement input or None.  ``q`` is None under before-query timing."""
        return None

    def before_query(self, state: GameState) -> Optional[int]:
        return self.choose_change(state, None)

    def respond(self, state: GameState, q: int) -> AdversaryResponse:
        return AdversaryResponse(self.choose_change(state, q))


@dataclass(frozen=True)
class MatchLimits:
    max_queries: Optional[int] = None


def play_match(
    spec: ProblemSpec,
    k: int,
    questioner: Questioner,
    adversary: Adversary,
    limits: Optional[MatchLimits] = None,
    timing: Optional[Timing] = None,
) -> Transcript:
    """Referee one match and return its transcript."""
    timing = Timing(timing or spec.timing)
    questioner.reset(spec, k, timing)
    adversary.reset(spec, k, timing)
    cap = len(spec.queries)
    if limits is not None and limits.max_queries is not None:
        cap = limits.max_queries

    x0 = adversary.initial_input()
    try:
        state = initial_state(spec, k, x0)
    except IllegalMoveError as exc:
        raise ForfeitError(adversary.name, str(exc)) from exc
    events: list[Event] = []

    while not is_certificate(state.consistent, spec):
        if len(events) >= cap:
            raise LimitError(f"no certificate after {cap} queries")
        if timing is Timing.BEFORE_QUERY:
            change = adversary.before_query(state)
            try:
                visible = state if change is None else change_input(state, change, spec)
            except IllegalMoveError as exc:
                raise ForfeitError(adversary.name, str(exc)) from exc
            q = _checked_query(questioner, visible, spec)
            resp = AdversaryResponse(change)
        else:
            q = _checked_query(questioner, state, spec)
            resp = adversary.respond(state, q)
        try:
            state = apply_move(state, q, resp, spec)
        except IllegalMoveError as exc:
            raise ForfeitError(adversary.name, str(exc)) from exc
        events.append(Event(q, resp.change, state.asked[-1][1]))

    return Transcript(spec.name, k, timing, x0, tuple(events), state)


def _checked_query(questioner: Questioner, state: GameState, spec: ProblemSpec) -> int:
    q = questioner.next_query(state)
    if not isinstance(q, int) or not 0 <= q < len(spec.queries):
        raise ForfeitError(questioner.name, f"query {q!r} out of range")
    if q in state.asked_queries:
        raise ForfeitError(questioner.name, f"query {q} was already asked")
    return q


__all__ = [
    "Adversary",
    "AdversaryResponse",
    "Agent",
    "Event",
    "GameState",
    "MatchLimits",
    "ProblemSpec",
    "Questioner",
    "Timing",
    "Transcript",
    "ValidationReport",
    "apply_move",
    "change_input",
    "initial_state",
    "is_certificate",
    "is_determined",
    "members",
    "play_match",
    "replay",
    "restrict",
    "undetermined_queries",
    "validate_problem",
]
