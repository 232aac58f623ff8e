"""Time the compiled and pure-Python search kernels on the same solves.

    python benchmarks/bench_kernels.py            # default cases
    python benchmarks/bench_kernels.py --quick    # small cases only
    python benchmarks/bench_kernels.py --json out.json
"""

from __future__ import annotations

import argparse
import json
import platform
import statistics
import sys
import time

from kchange import __version__
from kchange.problems import Family, ProblemKind, build_problem
from kchange.solver import SolveOptions, Solver, compiled_available

QUICK = [
    (ProblemKind(Family.SEARCH, 6), 2),
    (ProblemKind(Family.GT_ATMOST, 5, 2), 2),
    (ProblemKind(Family.SORTING, 4), 1),
    (ProblemKind(Family.CONNECTIVITY, 4), 1),
]
FULL = QUICK + [
    (ProblemKind(Family.MINMAX, 5), 1),
    (ProblemKind(Family.SORTING, 5), 1),
]


def run_case(kind: ProblemKind, k: int, backend: str, repeat: int) -> dict:
    spec = build_problem(kind)
    times = []
    res = None
    for _ in range(repeat):
        # fresh solver each time so the transposition table starts empty
        t0 = time.perf_counter()
        res = Solver(spec, SolveOptions(backend=backend)).solve(k)
        times.append(time.perf_counter() - t0)
    return {
        "value": res.value,
        "nodes": res.nodes_expanded,
        "memo": res.memo_entries,
        "seconds": statistics.median(times),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--quick", action="store_true", help="skip the n=5 comparison cases")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", metavar="PATH", help="also write results as JSON")
    args = ap.parse_args(argv)

    if not compiled_available():
        print("compiled kernel not built; reinstall with a C++ compiler and Cython", file=sys.stderr)
        return 2

    cases = QUICK if args.quick else FULL
    rows = []
    print(f"kchange {__version__}  python {platform.python_version()}  repeat={args.repeat} (median)")
    print(f"{'case':<28}{'k':>3}{'value':>7}{'nodes':>10}{'python s':>11}{'compiled s':>12}{'speedup':>9}")
    mismatch = False
    for kind, k in cases:
        py = run_case(kind, k, "python", args.repeat)
        cc = run_case(kind, k, "compiled", args.repeat)
        same = (py["value"], py["nodes"], py["memo"]) == (cc["value"], cc["nodes"], cc["memo"])
        mismatch |= not same
        speedup = py["seconds"] / cc["seconds"] if cc["seconds"] else float("inf")
        print(
            f"{kind.label:<28}{k:>3}{cc['value']:>7}{cc['nodes']:>10}"
            f"{py['seconds']:>11.3f}{cc['seconds']:>12.4f}{speedup:>8.1f}x" + ("" if same else "  MISMATCH")
        )
        rows.append({"problem": kind.label, "k": k, "python": py, "compiled": cc, "speedup": speedup, "identical": same})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"version": __version__, "repeat": args.repeat, "rows": rows}, fh, indent=2)
    return 1 if mismatch else 0


if __name__ == "__main__":
    sys.exit(main())
