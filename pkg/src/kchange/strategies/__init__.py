"""Strategy agents and the name registry used by the CLI.

Exploratory agents are runnable but carry no proven guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from ..core import Adversary, Questioner
from ..errors import ConfigurationError
from ..solver import OptimalAdversary, OptimalQuestioner, SolveOptions
from .connectivity import NoUnlessDisconnectAdversary, SpanningForestQuestioner, TuranComplementAdversary
from .generic import (
    ComposeQuestioner,
    HalvingQuestioner,
    LexQuestioner,
    SingletonQuestioner,
    StaticAdversary,
    StubbornAdversary,
    parse_composition,
)
from .group_testing import HalfSplitAdversary
from .minmax import ChainQuestioner, OutAvoidAdversary, minmax_partition, minmax_reorder
from .sorting import (
    AdjacentScanQuestioner,
    BalancedAdversary,
    ChainRepairQuestioner,
    InterleaveAdversary,
    components_of,
    sorting_interleave_reorder,
)


@dataclass(frozen=True)
class AgentInfo:
    name: str
    role: str
    factory: Callable[[Optional[SolveOptions]], object]
    exploratory: bool = False
    summary: str = ""


def _plain(cls):
    return lambda options: cls()


def _with_options(cls):
    return lambda options: cls(options=options)


QUESTIONERS = {
    info.name: info
    for info in [
        AgentInfo("optimal", "questioner", _with_options(OptimalQuestioner), summary="solver-optimal moves"),
        AgentInfo("lex", "questioner", _plain(LexQuestioner), summary="lowest undetermined query"),
        AgentInfo("singleton", "questioner", _plain(SingletonQuestioner), summary="search: ask {current}"),
        AgentInfo("halving", "questioner", _plain(HalvingQuestioner), summary="search: halve the candidates"),
        AgentInfo("chain-repair", "questioner", _plain(ChainRepairQuestioner), summary="sorting, one change"),
        AgentInfo(
            "adjacent-scan",
            "questioner",
            _plain(AdjacentScanQuestioner),
            exploratory=True,
            summary="sorting, any k: lowest unasked neighbour pair",
        ),
        AgentInfo("chain", "questioner", _plain(ChainQuestioner), summary="min+max / max: candidate chain"),
        AgentInfo("spanning-forest", "questioner", _plain(SpanningForestQuestioner), summary="connectivity"),
    ]
}

ADVERSARIES = {
    info.name: info
    for info in [
        AgentInfo("optimal", "adversary", _with_options(OptimalAdversary), summary="solver-optimal moves"),
        AgentInfo("static", "adversary", _with_options(StaticAdversary), summary="never changes"),
        AgentInfo("stubborn", "adversary", _with_options(StubbornAdversary), summary="unrestricted-optimal side"),
        AgentInfo("half-split", "adversary", _plain(HalfSplitAdversary), summary="group testing"),
        AgentInfo("interleave", "adversary", _plain(InterleaveAdversary), summary="sorting, one change"),
        AgentInfo(
            "balanced",
            "adversary",
            _plain(BalancedAdversary),
            exploratory=True,
            summary="sorting, any k: re-interleave when neighbours are known",
        ),
        AgentInfo("out-avoid", "adversary", _plain(OutAvoidAdversary), summary="min+max"),
        AgentInfo("turan-complement", "adversary", _plain(TuranComplementAdversary), summary="connectivity"),
        AgentInfo(
            "no-unless-disconnect", "adversary", _plain(NoUnlessDisconnectAdversary), summary="connectivity"
        ),
    ]
}


def make_questioner(name: str, options: Optional[SolveOptions] = None) -> Questioner:
    if name.startswith("compose:"):
        return ComposeQuestioner(parse_composition(name), options)
    try:
        return QUESTIONERS[name].factory(options)
    except KeyError:
        known = ", ".join(sorted(QUESTIONERS) + ["compose:j1,j2,..."])
        raise ConfigurationError(f"unknown questioner {name!r}; known: {known}") from None


def make_adversary(name: str, options: Optional[SolveOptions] = None) -> Adversary:
    try:
        return ADVERSARIES[name].factory(options)
    except KeyError:
        raise ConfigurationError(f"unknown adversary {name!r}; known: {', '.join(sorted(ADVERSARIES))}") from None


__all__ = [
    "ADVERSARIES",
    "QUESTIONERS",
    "AdjacentScanQuestioner",
    "AgentInfo",
    "BalancedAdversary",
    "ChainQuestioner",
    "ChainRepairQuestioner",
    "ComposeQuestioner",
    "HalfSplitAdversary",
    "HalvingQuestioner",
    "InterleaveAdversary",
    "LexQuestioner",
    "NoUnlessDisconnectAdversary",
    "OutAvoidAdversary",
    "SingletonQuestioner",
    "SpanningForestQuestioner",
    "StaticAdversary",
    "StubbornAdversary",
    "TuranComplementAdversary",
    "components_of",
    "make_adversary",
    "make_questioner",
    "minmax_partition",
    "minmax_reorder",
    "parse_composition",
    "sorting_interleave_reorder",
]
