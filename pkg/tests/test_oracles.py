"""The reference computations against each other and against hand-checkable values."""

import itertools

import pytest

from kchange.core import Timing
from kchange.oracles import CertificateOracle, certificate_complexity, naive_game_value
from kchange.solver import SolveOptions, game_value


def test_certificate_small_hand_values(problem):
    assert certificate_complexity(problem("search", 5)) == 1
    assert certificate_complexity(problem("sorting", 4)) == 3
    assert certificate_complexity(problem("connectivity", 4)) == 4
    assert certificate_complexity(problem("gt-atmost", 4, 2)) == 2


def test_certificate_per_input_sorting(problem):
    # every order needs its n-1 neighbouring comparisons
    assert set(CertificateOracle(problem("sorting", 4)).per_input()) == {3}


def test_certificate_brute_force_agrees(problem):
    """Against a plain subset enumeration on a tiny instance."""
    spec = problem("connectivity", 3)
    nq = spec.n_queries
    for x in range(spec.n_inputs):
        best = None
        for r in range(nq + 1):
            for qs in itertools.combinations(range(nq), r):
                left = [y for y in range(spec.n_inputs) if all(spec.oracle(y, q) == spec.oracle(x, q) for q in qs)]
                if len({spec.target(y) for y in left}) == 1:
                    best = r
                    break
            if best is not None:
                break
        assert CertificateOracle(spec).size(spec.universe, x) == best


@pytest.mark.parametrize(
    "family,n,d,k",
    [
        ("search", 4, None, 1),
        ("sorting", 4, None, 1),
        ("sorting", 3, None, 2),
        ("minmax", 4, None, 1),
        ("gt-atmost", 3, 2, 1),
        ("gt-exact", 4, 2, 1),
        ("connectivity", 3, None, 1),
        ("maxonly", 3, None, 2),
        ("maxonly", 4, None, 1),
    ],
)
def test_naive_matches_solver(problem, family, n, d, k):
    spec = problem(family, n, d)
    assert naive_game_value(spec, k) == game_value(spec, k).value


def test_naive_matches_solver_other_timing(problem):
    spec = problem("gt-atmost", 3, 2)
    for k in range(3):
        want = game_value(spec, k, SolveOptions(timing=Timing.BEFORE_QUERY)).value
        assert naive_game_value(spec, k, Timing.BEFORE_QUERY) == want
