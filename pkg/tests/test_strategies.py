import pytest
from hypothesis import given, strategies as st

from kchange.core import AdversaryResponse, Timing, apply_move, initial_state, play_match
from kchange.errors import ConfigurationError
from kchange.strategies import (
    ADVERSARIES,
    QUESTIONERS,
    components_of,
    make_adversary,
    make_questioner,
    sorting_interleave_reorder,
)
from kchange.strategies.generic import parse_composition
from kchange.strategies.minmax import minmax_partition, minmax_reorder


def _graph(spec, edges):
    return [frozenset(g) for g in spec.inputs].index(frozenset(edges))


# reorder helpers


def test_interleave_two_chains():
    assert sorting_interleave_reorder([[0, 1, 2], [3, 4]]) == (0, 3, 1, 4, 2)


def test_interleave_three_chains():
    assert sorting_interleave_reorder([[0, 1, 2], [3, 4], [5]]) == (0, 3, 1, 4, 5, 2)


def test_interleave_singletons_identity():
    assert sorting_interleave_reorder([[3], [0], [2], [1]]) == (0, 1, 2, 3)


def test_interleave_impossible():
    assert sorting_interleave_reorder([[0, 1, 2]]) is None
    assert sorting_interleave_reorder([[0, 1]]) is None


def _chains(draw_perm, cuts):
    chains, start = [], 0
    for c in sorted(set(cuts)) + [len(draw_perm)]:
        if c > start:
            chains.append(draw_perm[start:c])
            start = c
    return chains


@given(st.permutations(range(7)), st.lists(st.integers(1, 6), max_size=5))
def test_interleave_separates_chain_neighbours(perm, cuts):
    chains = _chains(list(perm), cuts)
    order = sorting_interleave_reorder(chains)
    if order is None:
        return
    pos = {v: i for i, v in enumerate(order)}
    assert sorted(order) == list(range(7))
    for c in chains:
        assert all(pos[a] < pos[b] for a, b in zip(c, c[1:]))
        if len(c) < 7:
            assert all(pos[a] + 1 != pos[b] for a, b in zip(c, c[1:]))


def test_minmax_reorder_examples():
    # x has gone out (won and lost), b only lost, c only won, d untouched
    x, b, c, d = 0, 1, 2, 3
    assert minmax_reorder({x}, {b}, {c}, {d}, prior=(0, 1, 2, 3)) == (b, x, d, c)
    assert minmax_reorder(set(), set(), set(), {0, 1, 2}, prior=(2, 0, 1)) == (2, 0, 1)
    out = minmax_reorder(set(), {0, 1}, set(), set(), prior=(0, 1), relations=[(0, 1)])
    assert out.index(0) < out.index(1)


@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda p: p[0] != p[1]), max_size=8))
def test_minmax_partition_is_partition(rel):
    A, B, C, D = minmax_partition(6, rel)
    assert A | B | C | D == set(range(6))
    assert sum(map(len, (A, B, C, D))) == 6


@given(st.permutations(range(6)), st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=8))
def test_components_respect_relations(perm, raw):
    pos = {v: i for i, v in enumerate(perm)}
    rel = [(a, b) if pos[a] < pos[b] else (b, a) for a, b in raw if a != b]
    comps = components_of(6, rel)
    assert sorted(v for c in comps for v in c) == list(range(6))
    where = {v: (i, j) for i, c in enumerate(comps) for j, v in enumerate(c)}
    for lo, hi in rel:
        assert where[lo][0] == where[hi][0] and where[lo][1] < where[hi][1]


# questioners


def test_chain_first_query(problem):
    spec = problem("minmax", 4)
    q = make_questioner("chain")
    q.reset(spec, 1, spec.timing)
    x = spec.inputs.index((2, 0, 3, 1))  # e3 < e1 < e4 < e2
    assert spec.queries[q.next_query(initial_state(spec, 1, x))] == (0, 2)


def test_spanning_forest_first_edge(problem):
    spec = problem("connectivity", 4)
    q = make_questioner("spanning-forest")
    q.reset(spec, 1, Timing.AFTER_QUERY)
    x = _graph(spec, {(0, 1), (1, 2), (2, 3)})
    assert spec.queries[q.next_query(initial_state(spec, 1, x))] == (0, 1)
    x = _graph(spec, {(1, 3), (0, 2), (2, 3)})
    assert spec.queries[q.next_query(initial_state(spec, 1, x))] == (0, 2)


def test_spanning_forest_cut_of_smallest_component(problem):
    spec = problem("connectivity", 6)
    q = make_questioner("spanning-forest")
    q.reset(spec, 0, Timing.AFTER_QUERY)
    x = _graph(spec, {(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)})
    state = initial_state(spec, 0, x)
    asked = []
    for _ in range(5):
        qq = q.next_query(state)
        asked.append(spec.queries[qq])
        state = apply_move(state, qq, AdversaryResponse(), spec)
    assert asked[:4] == [(0, 1), (0, 2), (3, 4), (3, 5)]
    assert asked[4] == (0, 3)


def test_spanning_forest_repicks_after_change(problem):
    spec = problem("connectivity", 4)
    q = make_questioner("spanning-forest")
    q.reset(spec, 1, Timing.AFTER_QUERY)
    path = _graph(spec, {(0, 1), (1, 2), (2, 3)})
    other = _graph(spec, {(0, 2), (1, 2), (2, 3)})
    state = initial_state(spec, 1, path)
    # the adversary drops 01 on the first query
    state = apply_move(state, spec.queries.index((0, 1)), AdversaryResponse(other), spec)
    assert state.asked[-1][1] is False
    assert spec.queries[q.next_query(state)] == (0, 2)


def test_chain_repair_follows_new_order(problem):
    spec = problem("sorting", 4)
    q = make_questioner("chain-repair")
    q.reset(spec, 1, spec.timing)
    state = initial_state(spec, 1, spec.inputs.index((0, 1, 2, 3)))
    state = apply_move(state, q.next_query(state), AdversaryResponse(), spec)
    # known 0 < 1; the new order puts two elements between them
    new = spec.inputs.index((0, 2, 3, 1))
    state = apply_move(state, spec.queries.index((2, 3)), AdversaryResponse(new), spec)
    seen = []
    while len(seen) < 3:
        qq = q.next_query(state)
        seen.append(spec.queries[qq])
        state = apply_move(state, qq, AdversaryResponse(), spec)
        if len(set(spec.targets[x] for x in range(spec.n_inputs) if state.consistent >> x & 1)) == 1:
            break
    # p = 2 elements in the gap: p + 1 = 3 comparisons minus the one already known (2 < 3)
    assert seen == [(0, 2), (1, 3)]


# adversaries


def test_half_split_moves_into_queried_half(problem):
    spec = problem("gt-atmost", 8, 2)
    adv = make_adversary("half-split")
    adv.reset(spec, 1, Timing.AFTER_QUERY)
    state = initial_state(spec, 1, adv.initial_input())
    q = spec.queries.index((3, 4, 5, 6, 7))
    resp = adv.respond(state, q)
    assert resp.change is not None
    assert set(spec.inputs[resp.change]) <= {3, 4, 5, 6, 7} and len(spec.inputs[resp.change]) == 2
    assert apply_move(state, q, resp, spec).asked[-1][1] is True


def test_interleave_changes_after_trigger(problem):
    spec = problem("sorting", 5)
    adv = make_adversary("interleave")
    q = make_questioner("chain-repair")
    tr = play_match(spec, 1, q, adv)
    changes = [i for i, e in enumerate(tr.events) if e.change is not None]
    assert changes == [2]  # before the third query, after ceil(5/2) - 1 = 2 answers
    assert tr.length == 6


def test_out_avoid_against_chain(problem):
    spec = problem("minmax", 5)
    tr = play_match(spec, 1, make_questioner("chain"), make_adversary("out-avoid"))
    assert 5 <= tr.length <= 6 and tr.change_count <= 1


def test_no_unless_disconnect_play(problem):
    spec = problem("connectivity", 4)
    tr = play_match(spec, 3, make_questioner("spanning-forest"), make_adversary("no-unless-disconnect"))
    assert tr.length == 6
    tr = play_match(spec, 2, make_questioner("spanning-forest"), make_adversary("no-unless-disconnect"))
    assert tr.length == 5


def test_exploratory_agents_run(problem):
    spec = problem("sorting", 5)
    tr = play_match(spec, 2, make_questioner("adjacent-scan"), make_adversary("balanced"))
    assert tr.length <= spec.n_queries
    assert QUESTIONERS["adjacent-scan"].exploratory and ADVERSARIES["balanced"].exploratory


# registry


def test_family_mismatch(problem):
    with pytest.raises(ConfigurationError):
        make_questioner("chain").reset(problem("sorting", 4), 1, Timing.BEFORE_QUERY)
    with pytest.raises(ConfigurationError):
        make_adversary("half-split").reset(problem("gt-atmost", 3, 2), 1, Timing.BEFORE_QUERY)


def test_unknown_names():
    with pytest.raises(ConfigurationError):
        make_questioner("oracle")
    with pytest.raises(ConfigurationError):
        make_adversary("oracle")
    with pytest.raises(ConfigurationError):
        parse_composition("compose:a,b")
    with pytest.raises(ConfigurationError):
        parse_composition("compose:")


def test_compose_needs_enough_phases(problem):
    with pytest.raises(ConfigurationError):
        make_questioner("compose:0").reset(problem("sorting", 3), 1, Timing.BEFORE_QUERY)


@pytest.mark.parametrize("name", sorted(QUESTIONERS))
def test_every_questioner_finishes(problem, name):
    targets = {
        "singleton": ("search", 5, None),
        "halving": ("search", 5, None),
        "chain-repair": ("sorting", 4, None),
        "adjacent-scan": ("sorting", 4, None),
        "chain": ("minmax", 4, None),
        "spanning-forest": ("connectivity", 4, None),
    }
    spec = problem(*targets.get(name, ("gt-atmost", 4, 2)))
    tr = play_match(spec, 1, make_questioner(name), make_adversary("optimal"))
    assert tr.length <= spec.n_queries
