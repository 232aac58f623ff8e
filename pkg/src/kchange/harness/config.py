"""Run configuration, range parsing and capacity guards."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..core import Timing
from ..errors import CapacityError, ConfigurationError
from ..problems import GROUP_TESTING, Family, ProblemKind

# Largest n each family may be solved at; sizes listed in LONG_RUN also need --long-run.
CAPACITY = {
    Family.SEARCH: 6,
    Family.GT_EXACT: 6,
    Family.GT_ATMOST: 6,
    Family.SORTING: 5,
    Family.MINMAX: 5,
    Family.MAXONLY: 5,
    Family.CONNECTIVITY: 5,
}
LONG_RUN = {Family.CONNECTIVITY: 5}

MODES = ("solve", "table", "verify", "play", "cache")
FORMATS = ("json", "csv", "text")


def parse_range(text: str, what: str) -> tuple[int, ...]:
    """``"3"`` -> (3,);  ``"0..3"`` -> (0, 1, 2, 3)."""
    text = str(text).strip()
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ConfigurationError(f"empty {what} range {text!r}")
            return tuple(range(lo, hi + 1))
        return (int(text),)
    except ValueError:
        raise ConfigurationError(f"bad {what} {text!r}; expected an integer or A..B") from None


def check_capacity(kind: ProblemKind, long_run: bool = False) -> None:
    limit = CAPACITY[kind.family]
    if kind.n > limit:
        raise CapacityError(f"{kind.label} exceeds the capacity guard n <= {limit}")
    if LONG_RUN.get(kind.family) is not None and kind.n >= LONG_RUN[kind.family] and not long_run:
        raise CapacityError(f"{kind.label} is a long-run instance; pass --long-run to solve it")


@dataclass(frozen=True)
class RunConfig:
    mode: str
    family: Optional[Family] = None
    ns: tuple[int, ...] = ()
    ds: tuple[Optional[int], ...] = (None,)
    ks: tuple[int, ...] = (0,)
    fmt: str = "text"
    cache_path: Optional[str] = None
    timeout_s: Optional[float] = None
    node_cap: Optional[int] = None
    memo_cap: Optional[int] = None
    threads: int = 1
    pv: bool = False
    questioner: Optional[str] = None
    adversary: Optional[str] = None
    only: tuple[str, ...] = ()
    timing: Optional[Timing] = None
    long_run: bool = False
    backend: str = "auto"
    seed: Optional[int] = None  # reserved; every agent is deterministic
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown mode {self.mode!r}")
        if self.fmt not in FORMATS:
            raise ConfigurationError(f"unknown format {self.fmt!r}")
        if self.threads < 1:
            raise ConfigurationError("--threads must be at least 1")
        for name in ("timeout_s", "node_cap", "memo_cap"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ConfigurationError(f"{name} must be positive")
        if any(k < 0 for k in self.ks):
            raise ConfigurationError("k must be non-negative")
        if not self.ks or not self.ds:
            raise ConfigurationError("empty range")
        if self.family is not None:
            if self.family in GROUP_TESTING and self.ds == (None,):
                raise ConfigurationError(f"{self.family.value} needs --d")
            if self.family not in GROUP_TESTING and self.ds != (None,):
                raise ConfigurationError(f"{self.family.value} takes no --d")

    def kinds(self) -> list[ProblemKind]:
        """Problem instances of the (n, d) grid, skipping d > n."""
        if self.family is None or not self.ns:
            raise ConfigurationError("--problem and --n are required")
        out = []
        for n in self.ns:
            for d in self.ds:
                if d is not None and d > n:
                    continue
                try:
                    out.append(ProblemKind(self.family, n, d))
                except ValueError as exc:
                    raise ConfigurationError(str(exc)) from None
        if not out:
            raise ConfigurationError("no valid (n, d) combination")
        return out
