"""Acceptance gate: one line per criterion, exact integer comparison throughout.

Run alone with ``pytest tests/test_acceptance.py -v``; the per-criterion lines
are printed in the terminal summary.  ``python tests/test_acceptance.py`` prints
the same lines without pytest.  Set ``KCHANGE_LONG_RUN=1`` to add the
connectivity n=5, k=1 cell (under a second with the compiled kernel, a few
seconds in pure Python).
"""

from __future__ import annotations

import math
import os
import sys

import pytest

from kchange.harness.verify import run_verify
from kchange.problems import Family, ProblemKind, build_problem
from kchange.solver import SolveOptions, Solver, value_against_adversary, value_against_questioner
from kchange.strategies import make_adversary, make_questioner

LINES: dict[int, str] = {}
LONG_RUN = os.environ.get("KCHANGE_LONG_RUN") == "1"
_solvers: dict = {}


def value(family: Family, n: int, k: int, d=None) -> int:
    kind = ProblemKind(family, n, d)
    if kind not in _solvers:
        _solvers[kind] = Solver(build_problem(kind))
    return _solvers[kind].solve(min(k, kind.n_queries)).require_value()


def ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def turan(n: int, r: int) -> int:
    sizes = [n // r + (i < n % r) for i in range(r)]
    return math.comb(n, 2) - sum(math.comb(s, 2) for s in sizes)


def record(num: int, bad: list, checked: int, note: str = "") -> None:
    status = "PASS" if not bad else "FAIL"
    text = f"criterion {num}: {status} ({checked} cells{', ' + note if note else ''})"
    if bad:
        text += f"  first mismatch: {bad[0]}"
    LINES[num] = text
    print(text)
    assert not bad, text


def test_criterion_1_search():
    bad, count = [], 0
    for n in range(2, 7):
        for k in range(5):
            want, got = min(k + 1, ceil_log2(n)), value(Family.SEARCH, n, k)
            count += 1
            if got != want:
                bad.append((n, k, want, got))
    record(1, bad, count)


def test_criterion_2_gt_exact():
    bad, count = [], 0
    for n in range(1, 6):
        for d in range(0, min(2, n) + 1):
            D = value(Family.GT_EXACT, n, 2**n, d)
            for k in range(4):
                got = value(Family.GT_EXACT, n, k, d)
                count += 1
                if got != min(k + 1, D):
                    bad.append((n, d, k, min(k + 1, D), got))
    record(2, bad, count)


def test_criterion_3_gt_atmost():
    bad, count = [], 0
    # (4, 3, 1) sits on the boundary n = (d-1)2^k; its value still equals k+d because D = 4
    for n, d, k in [(3, 2, 1), (5, 2, 2), (4, 3, 1)]:
        got = value(Family.GT_ATMOST, n, k, d)
        count += 1
        if got != k + d:
            bad.append((n, d, k, k + d, got))
    for n in range(1, 6):
        for d in range(0, min(3, n) + 1):
            got = value(Family.GT_ATMOST, n, 0, d)
            count += 1
            if got != min(d, n):
                bad.append((n, d, 0, min(d, n), got))
    record(3, bad, count)


def test_criterion_4_sorting():
    bad, count = [], 0
    for n in (3, 4, 5):
        for k, want in ((0, n - 1), (1, math.ceil(3 * n / 2) - 2)):
            got = value(Family.SORTING, n, k)
            count += 1
            if got != want:
                bad.append((n, k, want, got))
    record(4, bad, count)


def test_criterion_5_minmax():
    bad, count = [], 0
    for n in (3, 4, 5):
        for k in range(4):
            want = min(n + k - 1, math.ceil(3 * n / 2) - 2)
            for family, w in ((Family.MINMAX, want), (Family.MAXONLY, n - 1)):
                got = value(family, n, k)
                count += 1
                if got != w:
                    bad.append((family.value, n, k, w, got))
    record(5, bad, count)


def test_criterion_6_connectivity():
    bad, count = [], 0
    for n in (3, 4):
        total = math.comb(n, 2)
        for k in [0] + list(range(n - 2, total + 1)):
            want = n * n // 4 if k == 0 else total
            got = value(Family.CONNECTIVITY, n, k)
            count += 1
            if got != want:
                bad.append((n, k, want, got))
    lo, hi = turan(4, 3), min(turan(4, 3) + 3, 6)
    got = value(Family.CONNECTIVITY, 4, 1)
    count += 1
    if not lo <= got <= hi:
        bad.append((4, 1, (lo, hi), got))
    note = "n=5,k=1 in the long-run test" if LONG_RUN else "n=5,k=1 skipped, set KCHANGE_LONG_RUN=1"
    record(6, bad, count, note)


@pytest.mark.slow
@pytest.mark.skipif(not LONG_RUN, reason="set KCHANGE_LONG_RUN=1")
def test_criterion_6_connectivity_stretch():
    lo, hi = turan(5, 3), min(turan(5, 3) + 4, 10)
    r = Solver(build_problem(ProblemKind(Family.CONNECTIVITY, 5))).solve(1)
    print(f"criterion 6 stretch: connectivity n=5 k=1 -> {r.status} [{r.lower}, {r.upper}] in {r.elapsed:.2f}s")
    assert r.lower <= hi and r.upper >= lo
    if r.complete:
        assert lo <= r.value <= hi


def test_criterion_7_strategies():
    C, S, M, G = Family.CONNECTIVITY, Family.SORTING, Family.MINMAX, Family.GT_ATMOST
    spec = lambda f, n, d=None: build_problem(ProblemKind(f, n, d))  # noqa: E731
    results = {
        "a": (value_against_adversary(spec(C, 4), 1, make_adversary("turan-complement")).value, ">=", 5),
        "b": (value_against_adversary(spec(G, 3, 2), 1, make_adversary("half-split")).value, "==", 3),
        "c": (value_against_adversary(spec(S, 4), 1, make_adversary("interleave")).value, "==", 4),
        "d": (value_against_questioner(spec(M, 4), 1, make_questioner("chain")).value, "<=", 4),
        "e": (value_against_questioner(spec(S, 5), 1, make_questioner("chain-repair")).value, "<=", 6),
        "f": (value_against_questioner(spec(C, 4), 1, make_questioner("spanning-forest")).value, "<=", 6),
    }
    ops = {">=": lambda a, b: a >= b, "<=": lambda a, b: a <= b, "==": lambda a, b: a == b}
    bad = [(tag, got, op, b) for tag, (got, op, b) in results.items() if not ops[op](got, b)]
    note = " ".join(f"({t}) {g}" for t, (g, _, _) in results.items())
    record(7, bad, len(results), note)


def test_criterion_8_properties():
    checks = ("monotonicity", "saturation", "prop2", "prop1", "oracle-k0", "determinism")
    report = run_verify(only=checks, options=SolveOptions())
    assert set(report.checks_run) == set(checks)
    bad = [(r.check, r.case, r.witness) for r in report.failures()]
    summary = ", ".join(f"{name} {p}/{t}" for name, (p, t) in report.counts().items())
    record(8, bad, len(report.results), summary)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_") and callable(fn) and not name.endswith("stretch"):
            try:
                fn()
            except AssertionError:
                failed += 1
    if LONG_RUN:
        test_criterion_6_connectivity_stretch()
    sys.exit(1 if failed else 0)
