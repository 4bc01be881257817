import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cubic_persistency.reductions import (
    Qubo, cut_problem_to_qubo, cut_value, fold_triples_into_edges, min_constrained_cut,
    qubo_to_flow, solve_qubo)

TRI = [(0, 1), (0, 2), (1, 2)]


def exhaustive_cut(n, edges, w, triples, tw, source, forbidden):
    free = [v for v in range(n) if v != source and v not in forbidden]
    best = None
    for bits in itertools.product((0, 1), repeat=len(free)):
        U = {source} | {v for v, b in zip(free, bits) if b}
        val = cut_value(edges, w, triples, tw, U)
        if best is None or val < best:
            best = val
    return best


def random_weights(rng, n, density):
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < density]
    eset = set(edges)
    triples = [t for t in itertools.combinations(range(n), 3)
               if all(p in eset for p in itertools.combinations(t, 2))]
    return edges, [rng.randint(0, 4) for _ in edges], triples, [rng.randint(0, 4) for _ in triples]


def test_fold_example():
    folded = fold_triples_into_edges(TRI, [0, 0, 0], [(0, 1, 2)], [4])
    assert folded == [2, 2, 2]
    assert cut_value(TRI, folded, [], [], {0}) == 4 == cut_value(TRI, [0, 0, 0], [(0, 1, 2)], [4], {0})


def test_fold_without_triples_is_identity():
    assert fold_triples_into_edges(TRI, [1, -2, 3], [], []) == [1, -2, 3]


def test_fold_preserves_every_cut():
    rng = random.Random(1)
    for _ in range(100):
        n = rng.randint(2, 8)
        edges, w, triples, tw = random_weights(rng, n, rng.choice((0.4, 0.7, 1.0)))
        folded = fold_triples_into_edges(edges, w, triples, tw)
        U = {v for v in range(n) if rng.random() < 0.5}
        assert cut_value(edges, folded, [], [], U) == cut_value(edges, w, triples, tw, U)


def test_cut_to_qubo_example():
    # vertices i=0, a=1, j=2 with j forbidden
    q = cut_problem_to_qubo(3, TRI, [2, 1, 3], 0, {2})
    assert q.variables == [1] and q.linear == [1.0] and q.constant == 3.0
    assert q.brute_force_min() == (3.0, (0,))


def test_cut_to_qubo_free_neighbour():
    q = cut_problem_to_qubo(2, [(0, 1)], [5], 0, set())
    assert q.brute_force_min()[0] == 0


def test_cut_to_qubo_zero_weights():
    q = cut_problem_to_qubo(3, TRI, [0, 0, 0], 0, {2})
    assert all(q.evaluate(y) == 0 for y in [(0,), (1,)])


def test_cut_to_qubo_rejects_forbidden_source():
    with pytest.raises(ValueError):
        cut_problem_to_qubo(2, [(0, 1)], [1], 0, {0})


def test_qubo_to_flow_linear():
    qn = qubo_to_flow(Qubo([0], [3.0]))
    assert qn.network.arcs() == [(0, 2, 3.0)]
    assert solve_qubo(Qubo([0], [3.0])) == (0.0, (0,))
    qn = qubo_to_flow(Qubo([0], [-3.0]))
    assert qn.network.arcs() == [(1, 0, 3.0)]
    assert solve_qubo(Qubo([0], [-3.0])) == (-3.0, (1,))


def test_qubo_to_flow_rejects_supermodular():
    with pytest.raises(ValueError, match="submodular"):
        qubo_to_flow(Qubo([0, 1], [0.0, 0.0], {(0, 1): 1.0}))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_solve_qubo_matches_enumeration(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 8)
    quad = {(a, b): -rng.randint(0, 4) for a, b in itertools.combinations(range(m), 2)
            if rng.random() < 0.5}
    q = Qubo(list(range(m)), [rng.randint(-5, 5) for _ in range(m)], quad, rng.randint(-3, 3))
    value, y = solve_qubo(q)
    assert value == q.brute_force_min()[0] == q.evaluate(y)


def test_min_constrained_cut_tie():
    # U={0} costs 1, U={0,2} costs 0
    value, U = min_constrained_cut(3, TRI, [0, 1, 0], [], [], 0, {1})
    assert value == 0 and U == {0, 2}


def test_min_constrained_cut_single_edge():
    assert min_constrained_cut(2, [(0, 1)], [0], [], [], 0, {1}) == (0, frozenset({0}))


def test_min_constrained_cut_validates():
    with pytest.raises(ValueError):
        min_constrained_cut(2, [(0, 1)], [1], [], [], 0, set())
    with pytest.raises(ValueError):
        min_constrained_cut(2, [(0, 1)], [-1], [], [], 0, {1})


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**9))
def test_min_constrained_cut_matches_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    edges, w, triples, tw = random_weights(rng, n, rng.choice((0.4, 0.7, 1.0)))
    source = rng.randrange(n)
    forbidden = set(rng.sample([v for v in range(n) if v != source], rng.randint(1, min(2, n - 1))))
    value, U = min_constrained_cut(n, edges, w, triples, tw, source, forbidden)
    assert value == exhaustive_cut(n, edges, w, triples, tw, source, forbidden)
    assert source in U and not U & forbidden
    assert cut_value(edges, w, triples, tw, U) == value
