import itertools

import pytest

from cubic_persistency.instance import Instance, is_feasible
from cubic_persistency.oracle import (
    Fixations, TooLargeError, constrained_minimum, enumerate_feasible,
    restricted_growth_strings, solve_exact, verify_persistency)

from support import repulsive_triangle, random_instance, triangle

BELL = [1, 1, 2, 5, 15, 52, 203, 877]


def test_restricted_growth_strings_count():
    for n in range(1, 8):
        strings = list(restricted_growth_strings(n))
        assert len(strings) == BELL[n]
        assert len({tuple(s) for s in strings}) == BELL[n]


def test_enumeration_examples():
    assert len(list(enumerate_feasible(triangle(0, 0, 0)))) == 5
    path = Instance(3, {(0, 1): 0, (1, 2): 0})
    assert sorted(enumerate_feasible(path)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert list(enumerate_feasible(Instance(1, {}))) == [()]


def test_enumeration_equals_feasible_filter():
    import random
    rng = random.Random(4)
    for _ in range(40):
        inst = random_instance(rng, rng.randint(1, 6), rng.choice((0.4, 0.7, 1.0)))
        brute = {x for x in itertools.product((0, 1), repeat=len(inst.edges))
                 if is_feasible(inst, x)}
        listed = list(enumerate_feasible(inst))
        assert len(listed) == len(set(listed)) and set(listed) == brute


def test_enumeration_bound():
    with pytest.raises(TooLargeError):
        list(enumerate_feasible(Instance(13, {})))


def test_repulsive_triangle_minimum():
    res = solve_exact(repulsive_triangle())
    assert res.minimum == -2 and res.exact
    assert sorted(res.argmins) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_zero_costs_all_optimal():
    res = solve_exact(triangle(0, 0, 0, 0))
    assert res.minimum == 0 and len(res.argmins) == 5


def test_isolated_negative_edge():
    res = solve_exact(Instance(2, {(0, 1): -1}))
    assert res.minimum == -1 and res.argmins == [(1,)]


def test_non_integral_costs_use_tolerance():
    res = solve_exact(Instance(2, {(0, 1): 0.1 + 0.2 - 0.3}))
    assert not res.exact and len(res.argmins) == 2


def test_verify_examples():
    inst = repulsive_triangle()
    assert verify_persistency(inst, Fixations(triples_zero={(0, 1, 2)}))
    assert not verify_persistency(inst, Fixations({(0, 1): 1, (0, 2): 1}))
    assert verify_persistency(inst, Fixations())
    assert constrained_minimum(inst, Fixations({(0, 1): 1, (0, 2): 0, (1, 2): 1})) == float("inf")
