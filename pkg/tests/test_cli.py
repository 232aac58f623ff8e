import csv
import io
import json

import pytest

from kchange.harness import cli
from kchange.harness.config import RunConfig, parse_range
from kchange.errors import ConfigurationError


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_sorting(capsys):
    code, out, _ = run(["solve", "--problem", "sorting", "--n", "4", "--k", "1", "--format", "json"], capsys)
    assert code == 0
    row = json.loads(out)["results"][0]
    assert row["value"] == 4 and row["agrees"] is True
    assert row["expected"]["source"]


@pytest.mark.parametrize("problem,n,k,want", [("connectivity", "4", "0", 4), ("search", "4", "9", 2)])
def test_solve_examples(capsys, problem, n, k, want):
    code, out, _ = run(["solve", "--problem", problem, "--n", n, "--k", k, "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["results"][0]["value"] == want


def test_json_carries_version(capsys):
    from kchange import __version__

    _, out, _ = run(["solve", "--problem", "search", "--n", "3", "--format", "json"], capsys)
    assert json.loads(out)["version"] == __version__


def test_table_minmax_csv(capsys):
    code, out, _ = run(["table", "--problem", "minmax", "--n", "3..4", "--k-range", "0..3", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == cli.TABLE_COLUMNS
    for r in rows:
        n, k = int(r["n"]), int(r["k"])
        assert int(r["value_lo"]) == min(n + k - 1, -(-3 * n // 2) - 2) and r["exact"] == "True"


def test_table_connectivity(capsys):
    code, out, _ = run(["table", "--problem", "connectivity", "--n", "4", "--k-range", "0..2", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [int(r["value_lo"]) for r in rows] == [4, 6, 6]
    assert rows[1]["exact"] == "True"


def test_table_group_testing_d_range(capsys):
    code, out, _ = run(["table", "--problem", "gt-atmost", "--n", "3", "--d", "0..3", "--k", "1", "--format", "csv"], capsys)
    assert code == 0
    assert [r["d"] for r in csv.DictReader(io.StringIO(out))] == ["0", "1", "2", "3"]


def test_warm_cache_matches_cold(tmp_path, capsys):
    cache = str(tmp_path / "c.jsonl")
    argv = ["table", "--problem", "sorting", "--n", "3..4", "--k-range", "0..2", "--format", "json", "--cache", cache]
    _, cold, _ = run(argv, capsys)
    _, warm, _ = run(argv, capsys)
    _, again, _ = run(argv, capsys)
    assert warm == again  # same config and cache: byte-identical

    def strip(text):
        rows = json.loads(text)["results"]
        for r in rows:
            r.pop("millis")
        return rows

    assert strip(cold) == strip(warm)


def test_incomplete_exit_code(capsys):
    code, out, _ = run(["solve", "--problem", "sorting", "--n", "5", "--k", "1", "--node-cap", "5", "--format", "json"], capsys)
    row = json.loads(out)["results"][0]
    assert code == 2 and row["status"] == "INCOMPLETE" and row["value_lo"] <= 6 <= row["value_hi"]


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--problem", "sorting", "--n", "7", "--k", "1"],
        ["solve", "--problem", "connectivity", "--n", "5", "--k", "1"],
        ["solve", "--problem", "search", "--n", "9"],
    ],
)
def test_capacity_guard(capsys, argv):
    code, _, err = run(argv, capsys)
    assert code == 2 and "capacity" in err or "long-run" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--problem", "sorting", "--n", "4", "--threads", "0"],
        ["solve", "--problem", "sorting", "--n", "4", "--k", "1", "--k-range", "0..1"],
        ["solve", "--problem", "gt-exact", "--n", "4"],
        ["solve", "--problem", "sorting", "--n", "4", "--d", "1"],
        ["solve", "--problem", "sorting", "--n", "3..4"],
        ["solve", "--problem", "nosuch", "--n", "4"],
        ["solve", "--problem", "sorting", "--n", "4", "--timeout-s", "-1"],
        ["play", "--problem", "sorting", "--n", "4", "--k", "1", "--questioner", "chain", "--adversary", "interleave"],
        ["play", "--problem", "sorting", "--n", "4", "--k", "1"],
        ["verify", "--only", "nosuch"],
        ["cache"],
        ["frobnicate"],
    ],
)
def test_invalid_config(capsys, argv):
    code, _, _ = run(argv, capsys)
    assert code == 3


def test_play_sorting(capsys):
    argv = ["play", "--problem", "sorting", "--n", "4", "--k", "1", "--questioner", "chain-repair", "--adversary", "interleave", "--format", "json"]
    code, out, _ = run(argv, capsys)
    d = json.loads(out)
    assert code == 0 and d["length"] == 4 and d["changes"] == 1
    ev = next(e for e in d["events"] if e["change"] is not None)
    assert ev["before"] == [0, 1, 2, 3] and "after" in ev


def test_play_text(capsys):
    argv = ["play", "--problem", "minmax", "--n", "5", "--k", "1", "--questioner", "chain", "--adversary", "out-avoid"]
    code, out, _ = run(argv, capsys)
    assert code == 0 and "5 queries, 1 changes" in out


def test_play_compose_and_exploratory(capsys):
    argv = ["play", "--problem", "sorting", "--n", "4", "--k", "2", "--questioner", "adjacent-scan", "--adversary", "balanced"]
    assert run(argv, capsys)[0] == 0
    argv = ["play", "--problem", "connectivity", "--n", "4", "--k", "1", "--questioner", "compose:0,0", "--adversary", "optimal"]
    assert run(argv, capsys)[0] == 0


def test_solve_pv_text(capsys):
    code, out, _ = run(["solve", "--problem", "sorting", "--n", "3", "--k", "1", "--pv"], capsys)
    assert code == 0 and "principal variation: 3 queries" in out


def test_cache_command(tmp_path, capsys):
    cache = str(tmp_path / "c.jsonl")
    run(["solve", "--problem", "search", "--n", "4", "--k-range", "0..2", "--cache", cache], capsys)
    run(["solve", "--problem", "sorting", "--n", "5", "--k", "1", "--node-cap", "5", "--cache", cache], capsys)
    code, out, _ = run(["cache", "--cache", cache, "--format", "json"], capsys)
    recs = json.loads(out)["records"]
    assert code == 0 and len(recs) == 3
    _, out, _ = run(["cache", "--cache", cache, "--bounds", "--format", "json"], capsys)
    assert len(json.loads(out)["records"]) == 4


def test_verify_only_prop2(capsys):
    code, out, _ = run(["verify", "--only", "prop2"], capsys)
    assert code == 0 and "PASS prop2" in out


def test_parse_range():
    assert parse_range("3", "n") == (3,)
    assert parse_range("0..3", "k") == (0, 1, 2, 3)
    with pytest.raises(ConfigurationError):
        parse_range("3..1", "k")
    with pytest.raises(ConfigurationError):
        parse_range("x", "k")


def test_runconfig_invariants():
    with pytest.raises(ConfigurationError):
        RunConfig(mode="solve", node_cap=0)
    with pytest.raises(ConfigurationError):
        RunConfig(mode="dance")
