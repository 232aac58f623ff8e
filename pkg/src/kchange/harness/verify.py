"""Named verification checks over the shipped problem grids.

Every check returns one ``CheckResult`` per case.  Values come from a shared
``ValueTable`` so each (problem, k) is solved once per run.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .. import __version__
from ..core import play_match
from ..errors import ConfigurationError
from ..oracles import certificate_complexity
from ..problems import Family, Prediction, ProblemKind, build_problem, predicted_value, turan_number
from ..solver import SolveOptions, Solver, value_against_adversary, value_against_questioner
from ..strategies import make_adversary, make_questioner

Predictor = Callable[..., Prediction]


@dataclass(frozen=True)
class CheckResult:
    check: str
    case: str
    expected: str
    actual: str
    ok: bool
    source: str
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        d = {
            "check": self.check,
            "case": self.case,
            "expected": self.expected,
            "actual": self.actual,
            "ok": self.ok,
            "source": self.source,
        }
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class VerifyReport:
    results: list[CheckResult] = field(default_factory=list)
    checks_run: list[str] = field(default_factory=list)
    version: str = __version__

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def counts(self) -> dict[str, tuple[int, int]]:
        """check -> (passed, total)."""
        out = {name: (0, 0) for name in self.checks_run}
        for r in self.results:
            p, t = out[r.check]
            out[r.check] = (p + r.ok, t + 1)
        return out

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.ok]

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "ok": self.ok,
            "checks": {name: {"passed": p, "total": t} for name, (p, t) in self.counts().items()},
            "results": [r.to_dict() for r in self.results],
        }


def _kind_dict(kind: ProblemKind, k: Optional[int] = None) -> dict:
    d = {"problem": kind.family.value, "n": kind.n}
    if kind.d is not None:
        d["d"] = kind.d
    if k is not None:
        d["k"] = k
    return d


class ValueTable:
    """Game values per (problem, k), one solver per problem."""

    def __init__(self, options: Optional[SolveOptions] = None):
        self.options = options or SolveOptions()
        self._solvers: dict[ProblemKind, Solver] = {}
        self._values: dict[tuple[ProblemKind, int], int] = {}
        self._specs: dict[ProblemKind, object] = {}

    def spec(self, kind: ProblemKind):
        if kind not in self._specs:
            self._specs[kind] = build_problem(kind)
        return self._specs[kind]

    def solver(self, kind: ProblemKind) -> Solver:
        if kind not in self._solvers:
            self._solvers[kind] = Solver(self.spec(kind), self.options)
        return self._solvers[kind]

    def value(self, kind: ProblemKind, k: int) -> int:
        # k beyond the query count plays exactly like k = Q
        k = min(k, kind.n_queries)
        key = (kind, k)
        if key not in self._values:
            self._values[key] = self.solver(kind).solve(k).require_value()
        return self._values[key]

    def D(self, kind: ProblemKind) -> int:
        """Unrestricted value: enough changes to never run out."""
        return self.value(kind, kind.n_queries)


# Grids shared by the family checks and the property suites.
def search_grid():
    return [(ProblemKind(Family.SEARCH, n), 4) for n in range(2, 7)]


def gt_exact_grid():
    return [(ProblemKind(Family.GT_EXACT, n, d), 3) for n in range(1, 6) for d in range(0, min(2, n) + 1)]


def gt_atmost_grid():
    return [(ProblemKind(Family.GT_ATMOST, n, d), 3) for n in range(1, 6) for d in range(0, min(3, n) + 1)]


def comparison_grid():
    out = [(ProblemKind(Family.SORTING, n), 1) for n in range(3, 6)]
    out += [(ProblemKind(f, n), 3) for f in (Family.MINMAX, Family.MAXONLY) for n in range(3, 6)]
    return out


def connectivity_grid():
    return [(ProblemKind(Family.CONNECTIVITY, n), math.comb(n, 2)) for n in (3, 4)]


def all_grids():
    return search_grid() + gt_exact_grid() + gt_atmost_grid() + comparison_grid() + connectivity_grid()


class Verifier:
    def __init__(
        self,
        options: Optional[SolveOptions] = None,
        predictor: Optional[Predictor] = None,
        long_run: bool = False,
        stretch_time_s: Optional[float] = None,
    ):
        self.options = options or SolveOptions()
        self.table = ValueTable(self.options)
        self.predictor = predictor or predicted_value
        self.long_run = long_run
        self.stretch_time_s = stretch_time_s

    # helpers

    def _against_prediction(self, check: str, kind: ProblemKind, k: int) -> CheckResult:
        got = self.table.value(kind, k)
        pred = self.predictor(kind, k, D=self.table.D(kind))
        expected = str(pred.value) if pred.kind == "EXACT" else f"[{pred.lower}, {pred.upper}]"
        ok = pred.contains(got)
        witness = None if ok else {**_kind_dict(kind, k), "expected": expected, "got": got}
        return CheckResult(check, f"{kind.label} k={k}", expected, str(got), ok, pred.source, witness)

    def _family(self, check: str, cells) -> list[CheckResult]:
        return [self._against_prediction(check, kind, k) for kind, k in cells]

    # family checks

    def check_search(self) -> list[CheckResult]:
        return self._family("search", [(kind, k) for kind, km in search_grid() for k in range(km + 1)])

    def check_gt_exact(self) -> list[CheckResult]:
        return self._family("gt-exact", [(kind, k) for kind, km in gt_exact_grid() for k in range(km + 1)])

    def check_gt_atmost(self) -> list[CheckResult]:
        out = []
        for n, d, k in ((3, 2, 1), (5, 2, 2), (4, 3, 1)):
            kind = ProblemKind(Family.GT_ATMOST, n, d)
            got = self.table.value(kind, k)
            ok = got == k + d
            witness = None if ok else {**_kind_dict(kind, k), "expected": k + d, "got": got}
            out.append(CheckResult("gt-atmost", f"{kind.label} k={k}", str(k + d), str(got), ok, "at most d: k+d", witness))
        for kind, km in gt_atmost_grid():
            got = self.table.value(kind, 0)
            want = min(kind.d, kind.n)
            ok = got == want
            witness = None if ok else {**_kind_dict(kind, 0), "expected": want, "got": got}
            out.append(
                CheckResult("gt-atmost", f"{kind.label} k=0", str(want), str(got), ok, "at most d: min(d, n)", witness)
            )
        # the remaining cells exercise the interval form
        out += self._family(
            "gt-atmost", [(kind, k) for kind, km in gt_atmost_grid() for k in range(1, km + 1)]
        )
        return out

    def check_sorting(self) -> list[CheckResult]:
        cells = [(ProblemKind(Family.SORTING, n), k) for n in (3, 4, 5) for k in (0, 1)]
        cells += [(ProblemKind(Family.SORTING, n), 2) for n in (3, 4)]
        return self._family("sorting", cells)

    def check_minmax(self) -> list[CheckResult]:
        cells = [
            (ProblemKind(f, n), k) for f in (Family.MINMAX, Family.MAXONLY) for n in (3, 4, 5) for k in range(4)
        ]
        return self._family("minmax", cells)

    def check_connectivity(self) -> list[CheckResult]:
        cells = []
        for n in (3, 4):
            kind = ProblemKind(Family.CONNECTIVITY, n)
            cells += [(kind, k) for k in [0] + list(range(n - 2, math.comb(n, 2) + 1))]
        cells.append((ProblemKind(Family.CONNECTIVITY, 4), 1))
        out = self._family("connectivity", cells)
        if self.long_run:
            out.append(self._stretch())
        return out

    def _stretch(self) -> CheckResult:
        """Connectivity n=5, k=1.  Bounds are accepted when a time limit stops the search."""
        kind = ProblemKind(Family.CONNECTIVITY, 5)
        opts = SolveOptions(
            threads=self.options.threads, backend=self.options.backend, time_limit=self.stretch_time_s
        )
        res = Solver(self.table.spec(kind), opts).solve(1)
        t = turan_number(5, 3)
        lo, hi = t, min(t + 4, 10)
        if res.complete:
            ok = lo <= res.lower <= hi
            actual = str(res.lower)
        else:
            ok = res.lower <= hi and res.upper >= lo
            actual = f"INCOMPLETE [{res.lower}, {res.upper}]"
        witness = None if ok else {**_kind_dict(kind, 1), "expected": f"[{lo}, {hi}]", "got": actual}
        return CheckResult(
            "connectivity", f"{kind.label} k=1 (long run)", f"[{lo}, {hi}]", actual, ok,
            "connectivity: [t(n,k+2), min(t(n,k+2)+n-1, C(n,2))]", witness,
        )

    # strategy guarantees

    def check_strategies(self) -> list[CheckResult]:
        C, S, M, G = Family.CONNECTIVITY, Family.SORTING, Family.MINMAX, Family.GT_ATMOST
        cases = [
            ("a", "adversary", "turan-complement", ProblemKind(C, 4), 1, ">=", 5, "Turan-complement adversary forces t(n,k+2)"),
            ("b", "adversary", "half-split", ProblemKind(G, 3, 2), 1, "==", 3, "half-split adversary forces k+d"),
            ("c", "adversary", "interleave", ProblemKind(S, 4), 1, "==", 4, "interleave adversary forces ceil(3n/2)-2"),
            ("d", "questioner", "chain", ProblemKind(M, 4), 1, "<=", 4, "chain questioner within min(n+k-1, ceil(3n/2)-2)"),
            ("e", "questioner", "chain-repair", ProblemKind(S, 5), 1, "<=", 6, "chain-repair questioner within ceil(3n/2)-2"),
            ("f", "questioner", "spanning-forest", ProblemKind(C, 4), 1, "<=", 6, "spanning-forest questioner within C(n,2)"),
        ]
        out = []
        for tag, role, name, kind, k, op, bound, source in cases:
            spec = self.table.spec(kind)
            if role == "adversary":
                got = value_against_adversary(spec, k, make_adversary(name, self.options)).value
            else:
                got = value_against_questioner(spec, k, make_questioner(name, self.options)).value
            ok = {">=": got >= bound, "<=": got <= bound, "==": got == bound}[op]
            witness = None
            if not ok:
                # a match against the optimal opponent shows where the strategy goes wrong
                if role == "adversary":
                    tr = play_match(spec, k, make_questioner("optimal", self.options), make_adversary(name, self.options))
                else:
                    tr = play_match(spec, k, make_questioner(name, self.options), make_adversary("optimal", self.options))
                witness = {**_kind_dict(kind, k), "expected": f"{op} {bound}", "got": got, "transcript": tr.to_dict(spec)}
            out.append(CheckResult("strategies", f"({tag}) {name} {kind.label} k={k}", f"{op} {bound}", str(got), ok, source, witness))
        return out

    # property suites

    def _ks(self, kind: ProblemKind, kmax: int) -> list[int]:
        D = self.table.D(kind)
        return sorted(set(range(max(kmax, min(D + 1, kind.n_queries)) + 1)) | {kind.n_queries})

    def check_monotonicity(self) -> list[CheckResult]:
        out = []
        for kind, kmax in all_grids():
            vals = [self.table.value(kind, k) for k in self._ks(kind, kmax)]
            ok = all(a <= b for a, b in zip(vals, vals[1:]))
            witness = None if ok else {**_kind_dict(kind), "values": vals}
            out.append(CheckResult("monotonicity", kind.label, "non-decreasing in k", str(vals), ok, "more changes never help the Questioner", witness))
        return out

    def check_saturation(self) -> list[CheckResult]:
        out = []
        for kind, kmax in all_grids():
            D = self.table.D(kind)
            ks = [k for k in self._ks(kind, kmax) if k >= D - 1]
            vals = [self.table.value(kind, k) for k in ks]
            ok = all(v == D for v in vals)
            witness = None if ok else {**_kind_dict(kind), "ks": ks, "values": vals, "D": D}
            out.append(CheckResult("saturation", kind.label, f"{D} for k >= {max(D - 1, 0)}", str(vals), ok, "value equals D once k >= D-1", witness))
        return out

    def check_prop2(self) -> list[CheckResult]:
        out = []
        for kind, kmax in all_grids():
            D = self.table.D(kind)
            for k in self._ks(kind, kmax):
                got = self.table.value(kind, k)
                want = min(k + 1, D)
                ok = got >= want
                witness = None if ok else {**_kind_dict(kind, k), "expected": f">= {want}", "got": got}
                out.append(CheckResult("prop2", f"{kind.label} k={k}", f">= {want}", str(got), ok, "lower bound min(k+1, D)", witness))
        return out

    def check_prop1(self) -> list[CheckResult]:
        """Splitting k changes into phases: value(k) <= sum of value(j_i) when sum(j_i + 1) > k."""
        out = []
        for kind, kmax in all_grids():
            bad = None
            count = 0
            for k in range(kmax + 1):
                vk = self.table.value(kind, k)
                for l in (1, 2, 3):
                    for js in itertools.product(range(k + 1), repeat=l):
                        if sum(j + 1 for j in js) <= k or list(js) != sorted(js):
                            continue
                        count += 1
                        total = sum(self.table.value(kind, j) for j in js)
                        if vk > total and bad is None:
                            bad = {**_kind_dict(kind, k), "composition": list(js), "got": vk, "expected": f"<= {total}"}
            out.append(CheckResult("prop1", kind.label, "value(k) <= sum value(j_i)", f"{count} compositions", bad is None, "composition upper bound", bad))
        return out

    def check_oracle_k0(self) -> list[CheckResult]:
        out = []
        for kind, _ in all_grids():
            want = certificate_complexity(self.table.spec(kind))
            got = self.table.value(kind, 0)
            ok = got == want
            witness = None if ok else {**_kind_dict(kind, 0), "expected": want, "got": got}
            out.append(CheckResult("oracle-k0", kind.label, str(want), str(got), ok, "certificate complexity by exhaustive search", witness))
        return out

    def check_determinism(self) -> list[CheckResult]:
        kinds = [
            ProblemKind(Family.SEARCH, 5),
            ProblemKind(Family.GT_ATMOST, 4, 2),
            ProblemKind(Family.SORTING, 4),
            ProblemKind(Family.MINMAX, 4),
            ProblemKind(Family.CONNECTIVITY, 4),
        ]
        out = []
        for kind in kinds:
            spec = self.table.spec(kind)
            runs = []
            for threads in (1, 4):
                solver = Solver(spec, SolveOptions(threads=threads, backend=self.options.backend))
                row = []
                for k in range(3):
                    res = solver.solve(k, with_pv=True)
                    row.append((res.require_value(), res.principal_variation.to_dict()))
                runs.append(row)
            ok = runs[0] == runs[1]
            single = [v for v, _ in runs[0]]
            multi = [v for v, _ in runs[1]]
            witness = None if ok else {**_kind_dict(kind), "single": single, "threads4": multi}
            out.append(CheckResult("determinism", kind.label, str(single), str(multi), ok, "1 thread vs 4 threads, values and principal variations", witness))
        return out


CHECKS: dict[str, Callable[[Verifier], list[CheckResult]]] = {
    "search": Verifier.check_search,
    "gt-exact": Verifier.check_gt_exact,
    "gt-atmost": Verifier.check_gt_atmost,
    "sorting": Verifier.check_sorting,
    "minmax": Verifier.check_minmax,
    "connectivity": Verifier.check_connectivity,
    "strategies": Verifier.check_strategies,
    "monotonicity": Verifier.check_monotonicity,
    "saturation": Verifier.check_saturation,
    "prop2": Verifier.check_prop2,
    "prop1": Verifier.check_prop1,
    "oracle-k0": Verifier.check_oracle_k0,
    "determinism": Verifier.check_determinism,
}


def run_verify(
    only: tuple[str, ...] = (),
    options: Optional[SolveOptions] = None,
    predictor: Optional[Predictor] = None,
    long_run: bool = False,
    checks: Optional[dict] = None,
) -> VerifyReport:
    """Run the named checks (all by default) in registry order."""
    checks = CHECKS if checks is None else checks
    unknown = [c for c in only if c not in checks]
    if unknown:
        raise ConfigurationError(f"unknown check(s) {unknown}; known: {', '.join(checks)}")
    verifier = Verifier(options, predictor, long_run)
    report = VerifyReport()
    for name, fn in checks.items():
        if only and name not in only:
            continue
        report.checks_run.append(name)
        report.results.extend(fn(verifier))
    return report
