"""Problem families, Turan-graph utilities and closed-form predictions."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .core import ProblemSpec, Timing, validate_problem
from .errors import CapacityError, DependencyError, MalformedProblemError

MAX_INPUTS = 1 << 15
MAX_QUERIES = 256


class Family(str, enum.Enum):
    SEARCH = "search"
    GT_EXACT = "gt-exact"
    GT_ATMOST = "gt-atmost"
    SORTING = "sorting"
    MINMAX = "minmax"
    MAXONLY = "maxonly"
    CONNECTIVITY = "connectivity"


# Change timing each family is analysed under.  Search, group testing and
# connectivity adversaries react to the pending query; the comparison
# families let the Questioner see a new input before choosing its next query.
CANONICAL_TIMING = {
    Family.SEARCH: Timing.AFTER_QUERY,
    Family.GT_EXACT: Timing.AFTER_QUERY,
    Family.GT_ATMOST: Timing.AFTER_QUERY,
    Family.CONNECTIVITY: Timing.AFTER_QUERY,
    Family.SORTING: Timing.BEFORE_QUERY,
    Family.MINMAX: Timing.BEFORE_QUERY,
    Family.MAXONLY: Timing.BEFORE_QUERY,
}

GROUP_TESTING = (Family.GT_EXACT, Family.GT_ATMOST)
COMPARISON = (Family.SORTING, Family.MINMAX, Family.MAXONLY)


@dataclass(frozen=True)
class ProblemKind:
    family: Family
    n: int
    d: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.family in GROUP_TESTING:
            if self.d is None or not 0 <= self.d <= self.n:
                raise ValueError("group testing needs 0 <= d <= n")
        elif self.d is not None:
            raise ValueError(f"{self.family.value} takes no d parameter")

    @property
    def label(self) -> str:
        if self.d is None:
            return f"{self.family.value}(n={self.n})"
        return f"{self.family.value}(n={self.n},d={self.d})"

    @property
    def n_queries(self) -> int:
        if self.family in (Family.SEARCH,) + GROUP_TESTING:
            return 1 << self.n
        return self.n * (self.n - 1) // 2

    @property
    def n_inputs(self) -> int:
        n, f = self.n, self.family
        if f is Family.SEARCH:
            return n
        if f is Family.GT_EXACT:
            return math.comb(n, self.d)
        if f is Family.GT_ATMOST:
            return sum(math.comb(n, j) for j in range(self.d + 1))
        if f in COMPARISON:
            return math.factorial(n)
        return 1 << (n * (n - 1) // 2)


def pairs(n: int) -> list[tuple[int, int]]:
    """Unordered pairs of ``range(n)`` in lexicographic order."""
    return list(itertools.combinations(range(n), 2))


def subset_elements(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def is_connected(n: int, edges) -> bool:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in range(n)}) <= 1


def build_problem(kind: ProblemKind) -> ProblemSpec:
    """Instantiate and validate the problem described by ``kind``."""
    if kind.n_inputs > MAX_INPUTS or kind.n_queries > MAX_QUERIES:
        raise CapacityError(
            f"{kind.label}: {kind.n_inputs} inputs x {kind.n_queries} queries exceeds the build limit"
        )
    f, n = kind.family, kind.n
    timing = CANONICAL_TIMING[f]

    if f is Family.SEARCH:
        queries = [subset_elements(m) for m in range(1 << n)]
        spec = ProblemSpec.from_oracle(
            kind.label, range(n), queries, lambda x, a: x in a, lambda x: x, timing, kind
        )
    elif f in GROUP_TESTING:
        # Bit-vector order of subsets is colex order.
        if f is Family.GT_EXACT:
            inputs = [subset_elements(m) for m in range(1 << n) if bin(m).count("1") == kind.d]
        else:
            inputs = [subset_elements(m) for m in range(1 << n) if bin(m).count("1") <= kind.d]
        queries = [subset_elements(m) for m in range(1 << n)]
        spec = ProblemSpec.from_oracle(
            kind.label,
            inputs,
            queries,
            lambda dset, a: not set(dset).isdisjoint(a),
            lambda dset: dset,
            timing,
            kind,
        )
    elif f in COMPARISON:
        # An input lists the elements from smallest to largest.
        orders = list(itertools.permutations(range(n)))
        target = {
            Family.SORTING: lambda order: order,
            Family.MINMAX: lambda order: (order[-1], order[0]),
            Family.MAXONLY: lambda order: order[-1],
        }[f]
        spec = ProblemSpec.from_oracle(
            kind.label, orders, pairs(n), lambda order, p: order.index(p[0]) < order.index(p[1]), target, timing, kind
        )
    else:
        plist = pairs(n)
        graphs = [tuple(p for i, p in enumerate(plist) if g >> i & 1) for g in range(1 << len(plist))]
        if not plist:
            plist = [(0, 0)]  # a one-vertex graph still needs a (trivially determined) query universe
        spec = ProblemSpec.from_oracle(
            kind.label,
            graphs,
            plist,
            lambda edges, p: p in edges,
            lambda edges: "connected" if is_connected(n, edges) else "disconnected",
            timing,
            kind,
        )

    report = validate_problem(spec)
    if not report.ok:
        raise MalformedProblemError(f"{kind.label}: {report.message}")
    return spec


def turan_parts(n: int, r: int) -> list[list[int]]:
    """Balanced contiguous partition of ``range(n)`` into ``min(r, n)`` parts, larger parts first."""
    if r < 1:
        raise ValueError("r must be at least 1")
    r = min(r, n)
    if r == 0:
        return []
    q, rem = divmod(n, r)
    parts, start = [], 0
    for i in range(r):
        size = q + 1 if i < rem else q
        parts.append(list(range(start, start + size)))
        start += size
    return parts


def turan_number(n: int, r: int) -> int:
    """Edge count of the balanced complete r-partite graph on n vertices."""
    if r < 1:
        raise ValueError("r must be at least 1")
    if n <= 0:
        return 0
    return math.comb(n, 2) - sum(math.comb(len(p), 2) for p in turan_parts(n, r))


def turan_complement(n: int, r: int) -> frozenset[tuple[int, int]]:
    """Edges of the disjoint union of balanced cliques complementing the Turan graph."""
    return frozenset(p for part in turan_parts(n, r) for p in itertools.combinations(part, 2))


@dataclass(frozen=True)
class Prediction:
    kind: str  # "EXACT" or "INTERVAL"
    lower: int
    upper: int
    source: str

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty prediction interval [{self.lower}, {self.upper}]")
        if self.kind == "EXACT" and self.lower != self.upper:
            raise ValueError("exact prediction with distinct bounds")

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.kind == "EXACT" else None

    def contains(self, v: int) -> bool:
        return self.lower <= v <= self.upper

    @classmethod
    def exact(cls, v: int, source: str) -> "Prediction":
        return cls("EXACT", v, v, source)

    @classmethod
    def interval(cls, lo: int, hi: int, source: str) -> "Prediction":
        if lo == hi:
            return cls.exact(lo, source)
        return cls("INTERVAL", lo, hi, source)


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length() if n > 0 else 0


def gt_atmost_certificate_value(n: int, d: int) -> int:
    """Zero-change value of at-most-d group testing: one singleton test per defective."""
    return min(d, n)


def predicted_value(kind: ProblemKind, k: int, D: Optional[int] = None) -> Prediction:
    """Closed-form value or bounds for ``kind`` with ``k`` changes.

    ``D`` is the unrestricted (deterministic) game value where a formula needs it.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    f, n = kind.family, kind.n

    def need_D(what: str) -> int:
        if D is None:
            raise DependencyError(f"{kind.label}, k={k}: {what} needs the unrestricted value D")
        return D

    if f is Family.SEARCH:
        return Prediction.exact(min(k + 1, ceil_log2(n)), "search: min(k+1, ceil(log2 n))")
    if f is Family.GT_EXACT:
        return Prediction.exact(min(k + 1, need_D("exact-d group testing")), "group testing, exactly d: min(k+1, D)")
    if f is Family.GT_ATMOST:
        d = kind.d
        # The k+d argument isolates each defective, which needs d >= 2.
        if d >= 2 and n > (d - 1) * 2**k:
            return Prediction.exact(k + d, "group testing, at most d: k+d when n > (d-1)2^k")
        full_D = need_D("at-most-d group testing sandwich")
        return Prediction.interval(
            min(k + 1, full_D), min(k + d, full_D), "group testing, at most d: [min(k+1,D), min(k+d,D)]"
        )
    if f is Family.SORTING:
        one_change = math.ceil(3 * n / 2) - 2
        if k == 0:
            return Prediction.exact(n - 1, "sorting: certificate n-1")
        if k == 1:
            return Prediction.exact(one_change, "sorting, one change: ceil(3n/2)-2")
        full_D = need_D("sorting with k >= 2")
        return Prediction.interval(
            max(one_change, min(k + 1, full_D)), full_D, "sorting, k >= 2: [max(ceil(3n/2)-2, min(k+1,D)), D]"
        )
    if f is Family.MAXONLY:
        return Prediction.exact(n - 1, "maximum only: n-1 for every k")
    if f is Family.MINMAX:
        return Prediction.exact(
            min(n + k - 1, math.ceil(3 * n / 2) - 2), "minimum and maximum: min(n+k-1, ceil(3n/2)-2)"
        )
    if f is Family.CONNECTIVITY:
        total = math.comb(n, 2)
        if k == 0:
            return Prediction.exact(n * n // 4, "connectivity, no change: floor(n^2/4)")
        if k >= n - 2:
            return Prediction.exact(total, "connectivity, k >= n-2: evasive C(n,2)")
        t = turan_number(n, k + 2)
        return Prediction.interval(t, min(t + n - 1, total), "connectivity: [t(n,k+2), min(t(n,k+2)+n-1, C(n,2))]")
    raise CapacityError(f"no closed form for {kind.label}")
