import pytest

from kchange.core import ProblemSpec, Timing, replay
from kchange.errors import ConfigurationError, UnavailableError
from kchange.oracles import naive_game_value
from kchange.solver import (
    OptimalAdversary,
    OptimalQuestioner,
    SolveOptions,
    Solver,
    game_value,
    optimal_policy,
    principal_variation,
)
from kchange.core import play_match


@pytest.mark.parametrize(
    "family,n,k,want",
    [("search", 4, 1, 2), ("sorting", 4, 1, 4), ("connectivity", 4, 0, 4), ("search", 4, 9, 2)],
)
def test_examples(problem, family, n, k, want):
    assert game_value(problem(family, n), k).value == want


def test_connectivity_4_1_against_memo_free_oracle(problem):
    spec = problem("connectivity", 4)
    got = game_value(spec, 1).require_value()
    assert 5 <= got <= 6
    assert got == naive_game_value(spec, 1)


def test_constant_target_is_zero():
    spec = ProblemSpec.from_oracle("const", range(3), range(2), lambda x, q: x == q, lambda x: "same")
    for k in range(3):
        r = game_value(spec, k)
        assert r.value == 0 and r.complete


def test_invalid_k(problem):
    with pytest.raises(ValueError):
        game_value(problem("search", 3), -1)


@pytest.mark.parametrize(
    "opts",
    [dict(alpha_beta=False), dict(memo=False), dict(memo_cap=30), dict(threads=3)],
    ids=["no-ab", "no-memo", "memo-cap", "threads"],
)
def test_toggles_preserve_values(problem, opts):
    for family, n in [("sorting", 4), ("minmax", 4), ("connectivity", 4), ("gt-atmost", 4)]:
        d = 2 if family.startswith("gt") else None
        spec = problem(family, n, d)
        if opts.get("memo") is False and family == "connectivity":
            continue  # exponential without a table
        plain = Solver(spec)
        other = Solver(spec, SolveOptions(**opts))
        for k in range(3):
            assert plain.solve(k).value == other.solve(k).value


def test_memo_cap_limits_table(problem):
    spec = problem("sorting", 4)
    r = Solver(spec, SolveOptions(memo_cap=40)).solve(1)
    assert r.memo_entries <= 40 and r.value == 4


def test_node_cap_gives_certified_bounds(problem):
    spec = problem("sorting", 5)
    true = game_value(spec, 1).value
    for cap in (1, 50, 1000, 5000):
        r = Solver(spec, SolveOptions(node_cap=cap)).solve(1)
        assert r.lower <= true <= r.upper
        if not r.complete:
            assert r.status == "INCOMPLETE" and r.value is None
            with pytest.raises(UnavailableError):
                r.require_value()


def test_time_limit_gives_bounds(problem):
    spec = problem("minmax", 5)
    r = Solver(spec, SolveOptions(time_limit=1e-6, backend="python")).solve(2)
    assert r.lower <= 6 <= r.upper


def test_threads_deterministic(problem):
    for family, n in [("sorting", 4), ("connectivity", 4), ("search", 6)]:
        spec = problem(family, n)
        one = Solver(spec)
        many = Solver(spec, SolveOptions(threads=4))
        for k in range(3):
            a = one.solve(k, with_pv=True)
            b = many.solve(k, with_pv=True)
            assert a.value == b.value
            assert a.principal_variation == b.principal_variation


def test_bad_options():
    with pytest.raises(ConfigurationError):
        SolveOptions(threads=0)
    with pytest.raises(ConfigurationError):
        SolveOptions(node_cap=0)
    with pytest.raises(ConfigurationError):
        SolveOptions(backend="gpu")


@pytest.mark.parametrize(
    "family,n,k,length",
    [("search", 2, 0, 1), ("sorting", 3, 1, 3), ("maxonly", 3, 2, 2)],
)
def test_principal_variation_lengths(problem, family, n, k, length):
    spec = problem(family, n)
    pv = principal_variation(spec, k)
    assert pv.length == length
    assert replay(spec, pv) == pv.final


def test_principal_variation_needs_complete_solve(problem):
    with pytest.raises(UnavailableError):
        principal_variation(problem("sorting", 5), 1, SolveOptions(node_cap=10))


def test_principal_variation_reproducible(problem):
    spec = problem("connectivity", 4)
    assert principal_variation(spec, 1) == principal_variation(spec, 1)


def test_result_dict(problem):
    d = game_value(problem("sorting", 4), 1, with_pv=True).to_dict()
    assert d["status"] == "EXACT" and d["value"] == 4
    assert d["principal_variation"]["length"] == 4


def test_optimal_policies(problem):
    spec = problem("search", 4)
    q, a = optimal_policy(spec, 0)
    assert play_match(spec, 0, q, a).length == 1

    spec = problem("sorting", 4)
    solver = Solver(spec)
    assert play_match(spec, 1, OptimalQuestioner(solver), OptimalAdversary(solver)).length == 4


@pytest.mark.parametrize("k", [5, 6])
def test_minmax_4_unrestricted(problem, k):
    spec = problem("minmax", 4)
    q, a = optimal_policy(spec, k)
    assert play_match(spec, k, q, a).length == 4


def test_timing_matters_for_sorting(problem):
    """With after-query changes the adversary gets one more query out of sorting n=4."""
    spec = problem("sorting", 4)
    before = game_value(spec, 1, SolveOptions(timing=Timing.BEFORE_QUERY)).value
    after = game_value(spec, 1, SolveOptions(timing=Timing.AFTER_QUERY)).value
    assert (before, after) == (4, 5)
    assert naive_game_value(spec, 1, Timing.AFTER_QUERY) == after
