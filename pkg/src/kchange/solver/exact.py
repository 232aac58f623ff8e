"""Exact game values on top of the minimax kernels."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from ..bits import members
from ..core import ProblemSpec, Timing, Transcript
from ..errors import ConfigurationError, UnavailableError
from . import backend as _backend
from ._pykernel import BIG, QN, WB, WQ, B, SearchAborted, V, W


@dataclass(frozen=True)
class SolveOptions:
    """Search configuration.  None disables a limit.

    ``node_cap`` and ``time_limit`` stop a solve early with certified bounds.
    With ``threads > 1`` the node cap is shared evenly between workers.
    """

    alpha_beta: bool = True
    memo: bool = True
    memo_cap: Optional[int] = None
    node_cap: Optional[int] = None
    time_limit: Optional[float] = None
    threads: int = 1
    backend: str = "auto"
    timing: Optional[Timing] = None

    def __post_init__(self):
        if self.threads < 1:
            raise ConfigurationError("threads must be at least 1")
        for name in ("memo_cap", "node_cap"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ConfigurationError(f"{name} must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ConfigurationError("time_limit must be positive")
        if self.timing is not None:
            object.__setattr__(self, "timing", Timing(self.timing))
        _backend.resolve(self.backend)


@dataclass(frozen=True)
class SolveResult:
    problem: str
    k: int
    timing: Timing
    lower: int
    upper: int
    complete: bool
    nodes_expanded: int
    memo_entries: int
    elapsed: float
    backend: str
    principal_variation: Optional[Transcript] = field(default=None, compare=False)

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.complete else None

    @property
    def status(self) -> str:
        return "EXACT" if self.complete else "INCOMPLETE"

    def require_value(self) -> int:
        if not self.complete:
            raise UnavailableError(f"{self.problem}, k={self.k}: only bounds [{self.lower}, {self.upper}] are known")
        return self.lower

    def to_dict(self) -> dict:
        d = {
            "problem": self.problem,
            "k": self.k,
            "timing": self.timing.value,
            "status": self.status,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "nodes": self.nodes_expanded,
            "memo_entries": self.memo_entries,
            "millis": round(self.elapsed * 1000, 3),
            "backend": self.backend,
        }
        if self.principal_variation is not None:
            d["principal_variation"] = self.principal_variation.to_dict()
        return d


class Solver:
    """Solves one problem under one timing; keeps its transposition table across calls and k."""

    def __init__(self, spec: ProblemSpec, options: Optional[SolveOptions] = None):
        self.spec = spec
        self.options = options or SolveOptions()
        self.timing = Timing(self.options.timing or spec.timing)
        self.backend = _backend.resolve(self.options.backend)
        self._kernel_cls = _backend.kernel_class(self.backend)
        self._kernel = self._new_kernel()
        self._workers: list = []
        after = self.timing is Timing.AFTER_QUERY
        self._root_child = V if after else B

    def _new_kernel(self):
        o = self.options
        masks = self.spec.class_masks
        return self._kernel_cls(
            self.spec.n_inputs,
            self.spec.answers,
            self.spec.class_ids,
            [masks[t] for t in masks],
            o.alpha_beta,
            o.memo,
            o.memo_cap or 0,
        )

    @property
    def memo_entries(self) -> int:
        return self._kernel.memo_entries + sum(w.memo_entries for w in self._workers)

    # -- exact node values, used by policies ------------------------------------

    def _exact(self, t: int, S: int, x: int, c: int) -> int:
        self._kernel.set_limits()
        return self._kernel.exact(t, S, x, c)

    def move_value(self, S: int, x: int, c: int) -> int:
        """Remaining queries when the Questioner is to move at (S, x, c) under optimal play.

        After-query timing: ``V``.  Before-query timing: the position after the
        Adversary has had its chance to change, i.e. ``Q``.
        """
        return self._exact(V if self.timing is Timing.AFTER_QUERY else QN, S, x, c)

    def turn_value(self, S: int, x: int, c: int) -> int:
        """Value at the start of a turn (before any change)."""
        return self._exact(V if self.timing is Timing.AFTER_QUERY else B, S, x, c)

    def adversary_value(self, S: int, c: int) -> int:
        """Value when the Adversary may pick any input of S (c changes remaining afterwards)."""
        return self._exact(W if self.timing is Timing.AFTER_QUERY else WB, S, 0, c)

    def is_certificate(self, S: int) -> bool:
        return S != 0 and self._kernel.is_certificate(S)

    # -- root solve -------------------------------------------------------------

    def solve(self, k: int, with_pv: bool = False) -> SolveResult:
        if k < 0:
            raise ValueError("k must be non-negative")
        o = self.options
        t0 = time.monotonic()
        deadline = t0 + o.time_limit if o.time_limit else 0.0
        X = self.spec.universe
        xs = list(members(X))
        before_nodes = self._kernel.nodes + sum(w.nodes for w in self._workers)

        if self._kernel.is_certificate(X):
            lo = hi = 0
            complete = True
        elif o.threads > 1 and len(xs) > 1:
            lo, hi, complete = self._solve_threaded(xs, k, deadline)
        else:
            cap = o.node_cap
            lo, hi, complete = self._solve_chunk(self._kernel, xs, k, cap, deadline)

        nodes = self._kernel.nodes + sum(w.nodes for w in self._workers) - before_nodes
        pv = None
        if with_pv and complete:
            from .policy import principal_variation_from

            pv = principal_variation_from(self, k)
        return SolveResult(
            self.spec.name,
            k,
            self.timing,
            lo,
            hi,
            complete,
            nodes,
            self.memo_entries,
            time.monotonic() - t0,
            self.backend,
            pv,
        )

    def _solve_chunk(self, kernel, xs, k, cap, deadline):
        """Max over ``xs`` of the root child; returns (lower, upper, complete)."""
        child = self._root_child
        kernel.set_limits(kernel.nodes + cap if cap else 0, deadline)
        best = 0
        i = 0
        try:
            for i, x in enumerate(xs):
                if self.options.alpha_beta:
                    r = kernel.search(child, self.spec.universe, x, k, best, BIG)
                else:
                    r = kernel.exact(child, self.spec.universe, x, k)
                best = max(best, r)
        except SearchAborted:
            bounds = [kernel.bounds(child, self.spec.universe, x, k) for x in xs[i:]]
            lo = max([best] + [b[0] for b in bounds])
            hi = max([best] + [b[1] for b in bounds])
            return lo, hi, lo == hi
        finally:
            kernel.set_limits()
        return best, best, True

    def _solve_threaded(self, xs, k, deadline):
        n = self.options.threads
        while len(self._workers) < n:
            self._workers.append(self._new_kernel())
        chunks = [xs[i::n] for i in range(n)]
        cap = -(-self.options.node_cap // n) if self.options.node_cap else None
        with ThreadPoolExecutor(max_workers=n) as pool:
            parts = list(
                pool.map(lambda wc: self._solve_chunk(wc[0], wc[1], k, cap, deadline), zip(self._workers, chunks))
            )
        lo = max(p[0] for p in parts)
        hi = max(p[1] for p in parts)
        return lo, hi, lo == hi


def game_value(
    spec: ProblemSpec, k: int, options: Optional[SolveOptions] = None, with_pv: bool = False
) -> SolveResult:
    """Solve ``spec`` with ``k`` changes."""
    return Solver(spec, options).solve(k, with_pv=with_pv)
