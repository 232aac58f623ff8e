"""Command line entry point: ``kchange {solve,table,verify,play,cache}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional

from .. import __version__
from ..core import Timing, play_match
from ..errors import (
    CapacityError,
    ConfigurationError,
    DependencyError,
    ForfeitError,
    KChangeError,
    LimitError,
    UnavailableError,
)
from ..problems import Family, ProblemKind, build_problem, predicted_value
from ..solver import SolveOptions, Solver
from ..strategies import make_adversary, make_questioner
from .cache import CacheRecord, ResultCache
from .config import RunConfig, check_capacity, parse_range
from .verify import run_verify

EXIT_OK, EXIT_VERIFY, EXIT_LIMIT, EXIT_CONFIG = 0, 1, 2, 3
TABLE_COLUMNS = ["problem", "n", "d", "k", "value_lo", "value_hi", "exact", "nodes", "millis"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--problem", choices=[f.value for f in Family])
    common.add_argument("--n", help="size, or a range A..B for table")
    common.add_argument("--d", help="defectives for group testing, or A..B")
    common.add_argument("--k", type=int, help="number of changes")
    common.add_argument("--k-range", help="changes as A..B")
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("--cache", metavar="PATH", help="JSON-lines result cache")
    common.add_argument("--timeout-s", type=float, help="time limit per solve")
    common.add_argument("--node-cap", type=int, help="node limit per solve")
    common.add_argument("--memo-cap", type=int, help="transposition table size limit")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--pv", action="store_true", help="include a principal variation")
    common.add_argument("--questioner", metavar="NAME")
    common.add_argument("--adversary", metavar="NAME")
    common.add_argument("--only", action="append", default=[], metavar="CHECK")
    common.add_argument("--timing", choices=[t.value for t in Timing], help="override the family's change timing")
    common.add_argument("--long-run", action="store_true", help="allow instances documented as slow")
    common.add_argument("--backend", choices=["auto", "compiled", "python"], default="auto")
    common.add_argument("--seed", type=int, help="accepted for config compatibility; agents are deterministic")
    common.add_argument("--bounds", action="store_true", help="cache: also show incomplete records")

    parser = _Parser(prog="kchange", description="Exact values of k-change query games.")
    parser.add_argument("--version", action="version", version=f"kchange {__version__}")
    sub = parser.add_subparsers(dest="mode", required=True, parser_class=_Parser)
    for mode, text in [
        ("solve", "solve one problem for each requested k"),
        ("table", "tabulate values over an (n, k) grid"),
        ("verify", "run the verification checks"),
        ("play", "referee a match between two named agents"),
        ("cache", "list cached results"),
    ]:
        sub.add_parser(mode, parents=[common], help=text, description=text)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.k is not None and args.k_range is not None:
        raise ConfigurationError("use either --k or --k-range")
    if args.k_range is not None:
        ks = parse_range(args.k_range, "k")
    elif args.k is not None:
        ks = (args.k,)
    else:
        ks = (0,)
    family = Family(args.problem) if args.problem else None
    ns = parse_range(args.n, "n") if args.n is not None else ()
    ds = parse_range(args.d, "d") if args.d is not None else (None,)
    return RunConfig(
        mode=args.mode,
        family=family,
        ns=ns,
        ds=ds,
        ks=ks,
        fmt=args.format,
        cache_path=args.cache,
        timeout_s=args.timeout_s,
        node_cap=args.node_cap,
        memo_cap=args.memo_cap,
        threads=args.threads,
        pv=args.pv,
        questioner=args.questioner,
        adversary=args.adversary,
        only=tuple(args.only),
        timing=Timing(args.timing) if args.timing else None,
        long_run=args.long_run,
        backend=args.backend,
        seed=args.seed,
        extra={"bounds": args.bounds},
    )


def _options(cfg: RunConfig) -> SolveOptions:
    return SolveOptions(
        memo_cap=cfg.memo_cap,
        node_cap=cfg.node_cap,
        time_limit=cfg.timeout_s,
        threads=cfg.threads,
        backend=cfg.backend,
        timing=cfg.timing,
    )


def _params(kind: ProblemKind, timing: Timing) -> dict:
    return {"n": kind.n, "d": kind.d, "timing": timing.value}


class CellSolver:
    """Solves (problem, k) cells through the optional cache."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.options = _options(cfg)
        self.cache = ResultCache(cfg.cache_path) if cfg.cache_path else None
        self._specs: dict = {}

    def spec(self, kind: ProblemKind):
        if kind not in self._specs:
            self._specs[kind] = build_problem(kind)
        return self._specs[kind]

    def record(self, kind: ProblemKind, k: int, with_pv: bool = False):
        spec = self.spec(kind)
        timing = Timing(self.cfg.timing or spec.timing)
        params = _params(kind, timing)
        if self.cache is not None and not with_pv:
            hit = self.cache.lookup(kind.family.value, params, k)
            if hit is not None:
                return hit, None
        # a fresh solver per cell keeps node counts independent of what ran before
        res = Solver(spec, self.options).solve(k, with_pv=with_pv)
        rec = CacheRecord(
            problem=kind.family.value,
            params=params,
            k=k,
            lower=res.lower,
            upper=res.upper,
            complete=res.complete,
            nodes=res.nodes_expanded,
            millis=round(res.elapsed * 1000, 3),
        )
        if self.cache is not None:
            self.cache.store(rec)
        return rec, res.principal_variation

    def prediction(self, kind: ProblemKind, k: int):
        try:
            return predicted_value(kind, k)
        except DependencyError:
            pass
        full, _ = self.record(kind, kind.n_queries)
        if not full.complete:
            return None
        return predicted_value(kind, k, D=full.lower)


def _row(kind: ProblemKind, rec: CacheRecord, pred) -> dict:
    row = {
        "problem": kind.family.value,
        "n": kind.n,
        "d": kind.d,
        "k": rec.k,
        "timing": rec.params["timing"],
        "status": "EXACT" if rec.complete else "INCOMPLETE",
        "value": rec.value,
        "value_lo": rec.lower,
        "value_hi": rec.upper,
        "exact": rec.complete,
        "nodes": rec.nodes,
        "millis": rec.millis,
    }
    if pred is not None:
        exp = {"kind": pred.kind, "source": pred.source}
        if pred.kind == "EXACT":
            exp["value"] = pred.value
        else:
            exp["lower"], exp["upper"] = pred.lower, pred.upper
        row["expected"] = exp
        row["agrees"] = pred.contains(rec.lower) if rec.complete else None
    else:
        row["expected"] = None
        row["agrees"] = None
    return row


def _emit_rows(cfg: RunConfig, rows: list[dict], out) -> None:
    if cfg.fmt == "json":
        out.write(json.dumps({"version": __version__, "results": rows}, indent=2, sort_keys=True) + "\n")
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        for r in rows:
            w.writerow(["" if r[c] is None else r[c] for c in TABLE_COLUMNS])
        out.write(buf.getvalue())
    else:
        for r in rows:
            d = f",d={r['d']}" if r["d"] is not None else ""
            head = f"{r['problem']}(n={r['n']}{d}) k={r['k']} [{r['timing']}]"
            if r["exact"]:
                val = f"value {r['value']}"
            else:
                val = f"INCOMPLETE bounds [{r['value_lo']}, {r['value_hi']}]"
            line = f"{head}: {val}  nodes={r['nodes']} millis={r['millis']}"
            exp = r["expected"]
            if exp is not None:
                want = exp.get("value", f"[{exp.get('lower')}, {exp.get('upper')}]")
                mark = {True: "ok", False: "MISMATCH", None: "?"}[r["agrees"]]
                line += f"  expected {want} ({exp['source']}) {mark}"
            out.write(line + "\n")
            if "principal_variation" in r:
                pv = r["principal_variation"]
                out.write(f"  principal variation: {pv['length']} queries, {pv['changes']} changes\n")
                for ev in pv["events"]:
                    out.write("    " + _event_text(ev) + "\n")


def _event_text(ev: dict) -> str:
    text = f"ask {ev.get('query_desc', ev['query'])} -> {'YES' if ev['outcome'] else 'NO'}"
    if ev["change"] is not None:
        text += f"  (change {ev.get('before')} => {ev.get('after')})"
    return text


def _cells(cfg: RunConfig) -> list[tuple[ProblemKind, int]]:
    kinds = cfg.kinds()
    for kind in kinds:
        check_capacity(kind, cfg.long_run)
    return sorted(
        ((kind, k) for kind in kinds for k in cfg.ks),
        key=lambda c: (c[0].n, -1 if c[0].d is None else c[0].d, c[1]),
    )


def cmd_solve(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if len(cfg.ns) != 1 or len(cfg.ds) != 1:
        raise ConfigurationError("solve takes a single --n and --d; use table for ranges")
    return _solve_cells(cfg, out, with_pv=cfg.pv)


def cmd_table(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    return _solve_cells(cfg, out, with_pv=False)


def _solve_cells(cfg: RunConfig, out, with_pv: bool) -> int:
    cells = _cells(cfg)
    solver = CellSolver(cfg)
    rows = []
    for kind, k in cells:
        rec, pv = solver.record(kind, k, with_pv=with_pv)
        row = _row(kind, rec, solver.prediction(kind, k))
        if pv is not None:
            row["principal_variation"] = pv.to_dict(solver.spec(kind))
        rows.append(row)
    _emit_rows(cfg, rows, out)
    if solver.cache is not None and solver.cache.warnings:
        print(f"warning: skipped {solver.cache.warnings} unreadable cache line(s)", file=sys.stderr)
    return EXIT_OK if all(r["exact"] for r in rows) else EXIT_LIMIT


def cmd_verify(cfg: RunConfig, out=None, predictor=None) -> int:
    out = out or sys.stdout
    opts = SolveOptions(threads=cfg.threads, backend=cfg.backend)
    report = run_verify(only=cfg.only, options=opts, predictor=predictor, long_run=cfg.long_run)
    if cfg.fmt == "json":
        out.write(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "case", "expected", "actual", "ok", "source"])
        for r in report.results:
            w.writerow([r.check, r.case, r.expected, r.actual, r.ok, r.source])
        out.write(buf.getvalue())
    else:
        out.write(f"kchange {report.version} verification\n")
        for name, (passed, total) in report.counts().items():
            out.write(f"{'PASS' if passed == total else 'FAIL'} {name}: {passed}/{total}\n")
        for r in report.failures():
            out.write(f"  {r.check} {r.case}: expected {r.expected}, got {r.actual} ({r.source})\n")
            out.write(f"    witness: {json.dumps(r.witness, sort_keys=True)}\n")
        out.write(f"{'PASS' if report.ok else 'FAIL'}\n")
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_play(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if not cfg.questioner or not cfg.adversary:
        raise ConfigurationError("play needs --questioner and --adversary")
    if len(cfg.ns) != 1 or len(cfg.ds) != 1 or len(cfg.ks) != 1:
        raise ConfigurationError("play takes a single --n, --d and --k")
    (kind,) = cfg.kinds()
    check_capacity(kind, cfg.long_run)
    spec = build_problem(kind)
    opts = SolveOptions(threads=cfg.threads, backend=cfg.backend, timing=cfg.timing)
    questioner = make_questioner(cfg.questioner, opts)
    adversary = make_adversary(cfg.adversary, opts)
    k = cfg.ks[0]
    try:
        tr = play_match(spec, k, questioner, adversary, timing=cfg.timing)
    except ForfeitError as exc:
        print(f"forfeit: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    d = tr.to_dict(spec)
    d.update(version=__version__, questioner=cfg.questioner, adversary=cfg.adversary)
    if cfg.fmt == "json":
        out.write(json.dumps(d, indent=2, sort_keys=True) + "\n")
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "query", "outcome", "change"])
        for i, ev in enumerate(d["events"], 1):
            w.writerow([i, ev["query"], int(ev["outcome"]), "" if ev["change"] is None else ev["change"]])
        out.write(buf.getvalue())
    else:
        out.write(f"{spec.name} k={k} [{d['timing']}]: {cfg.questioner} vs {cfg.adversary}\n")
        out.write(f"initial input {d['initial_desc']}\n")
        for i, ev in enumerate(d["events"], 1):
            out.write(f"{i:3d}. {_event_text(ev)}\n")
        out.write(f"{d['length']} queries, {d['changes']} changes; final input {d['final_desc']}\n")
    return EXIT_OK


def cmd_cache(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    if not cfg.cache_path:
        raise ConfigurationError("cache needs --cache PATH")
    cache = ResultCache(cfg.cache_path)
    newest: dict = {}
    for rec in cache.records():
        if cfg.family is not None and rec.problem != cfg.family.value:
            continue
        if cfg.ns and rec.params.get("n") not in cfg.ns:
            continue
        if not rec.complete and not cfg.extra.get("bounds"):
            continue
        key = rec.key()
        old = newest.get(key)
        # exact records win over incomplete ones for the same key
        if old is None or rec.complete or not old.complete:
            newest[key] = rec
    recs = [newest[key] for key in sorted(newest)]
    if cfg.fmt == "json":
        body = {"version": __version__, "warnings": cache.warnings, "records": [json.loads(r.to_json()) for r in recs]}
        out.write(json.dumps(body, indent=2, sort_keys=True) + "\n")
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["problem", "n", "d", "timing", "k", "value_lo", "value_hi", "exact", "nodes", "version"])
        for r in recs:
            p = r.params
            w.writerow([r.problem, p.get("n"), "" if p.get("d") is None else p["d"], p.get("timing"), r.k, r.lower, r.upper, r.complete, r.nodes, r.version])
        out.write(buf.getvalue())
    else:
        for r in recs:
            val = r.lower if r.complete else f"[{r.lower}, {r.upper}]"
            out.write(f"{r.problem} {json.dumps(r.params, sort_keys=True)} k={r.k}: {val} (v{r.version})\n")
        out.write(f"{len(recs)} record(s), {cache.warnings} unreadable line(s)\n")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "table": cmd_table, "verify": cmd_verify, "play": cmd_play, "cache": cmd_cache}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors exit 3, --help and --version exit 0
        return int(exc.code or 0)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.mode](cfg)
    except (CapacityError, LimitError, UnavailableError) as exc:
        print(f"kchange: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (ConfigurationError, DependencyError) as exc:
        print(f"kchange: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KChangeError as exc:
        print(f"kchange: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
