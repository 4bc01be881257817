import random

import pytest

from cubic_persistency.engine import (
    ALL_CONDITIONS, FREE, EngineConfig, PersistencyState, fixed_labeling, reduce,
    reduced_instance, stats, stats_line, to_fixations, verify)
from cubic_persistency.instance import Instance, objective
from cubic_persistency.oracle import solve_exact

from support import OracleTable, instance_stream, repulsive_triangle, triangle


def test_repulsive_triangle():
    state = reduce(repulsive_triangle())
    assert state.event_log() == "triplet_cut 0,1,2 0 1.0\n"
    assert state.edge_status == [FREE] * 3
    assert state.triples_zero == {(0, 1, 2)}
    st = stats(state)
    assert st["fixed_edge_fraction"] == 0.0 and st["fixed_triple_fraction"] == 1.0
    assert stats_line(state).startswith("edges 0/3 triples 1/1 runtime_ns ")
    assert verify(state)


def test_adversarial_state_rejected():
    state = PersistencyState.empty(repulsive_triangle())
    state.edge_status[:2] = [1, 1]
    assert not verify(state)


def test_empty_state_verifies():
    assert verify(PersistencyState.empty(repulsive_triangle()))


def test_triangle_fully_fixed():
    state = reduce(triangle(-5, 1, -1))
    assert fixed_labeling(state) == (1, 0, 0)
    assert state.offset == -5
    assert state.event_log().splitlines()[0] == "subset_join 0,1 0,1 4.0"
    assert verify(state)


def test_triangle_with_edge_conditions_only():
    state = reduce(triangle(-5, 1, -1), EngineConfig.only(["edge_join", "edge_cut"]))
    lines = state.event_log().splitlines()
    assert lines[0] == "edge_join 0,1 0 4.0"
    # the contracted edge has cost 0: a tie where the join fires first
    assert lines[1] == "edge_join 0+1,2 0,1 0.0"
    labeling = fixed_labeling(state)
    assert objective(triangle(-5, 1, -1), labeling) == -5 == solve_exact(triangle(-5, 1, -1)).minimum


def test_nonnegative_instance_separates_everything():
    state = reduce(triangle(1, 2, 0, 3))
    assert state.event_log() == "subset_separation 0,1,2 - 0.0\n"
    assert fixed_labeling(state) == (0, 0, 0)
    assert stats(state)["fixed_edge_fraction"] == 1.0


def test_stats_conventions():
    st = stats(reduce(Instance(3, {(0, 1): -1, (1, 2): 2})))
    assert st["fixed_triple_fraction"] == 1.0
    st = stats(reduce(Instance(1, {})))
    assert st["fixed_edge_fraction"] == 1.0


def test_config_validation():
    with pytest.raises(ValueError):
        EngineConfig.only(["nonsense"])
    with pytest.raises(ValueError):
        EngineConfig(join_order=("edge_cut",))


def test_no_conditions_fixes_nothing():
    state = reduce(repulsive_triangle(), EngineConfig.only([]))
    assert state.events == [] and stats(state)["fixed_edge_fraction"] == 0.0


def test_time_limit_zero_is_sound():
    inst = next(instance_stream(1, 1, 7, 7))
    state = reduce(inst, EngineConfig(time_limit=0.0))
    assert state.timed_out and verify(state)


CONFIGS = [EngineConfig()] + [EngineConfig.only([name]) for name in ALL_CONDITIONS]


@pytest.mark.parametrize("config", CONFIGS, ids=["all"] + list(ALL_CONDITIONS))
def test_engine_is_sound(config):
    for inst in instance_stream(77, 120, 2, 8):
        table = OracleTable(inst)
        state = reduce(inst, config)
        assert table.consistent(to_fixations(state)), (inst, state.event_log())


def test_reduced_instance_keeps_minimum():
    for inst in instance_stream(31, 200, 2, 8):
        state = reduce(inst)
        red, groups = reduced_instance(state)
        assert sorted(v for g in groups for v in g) == list(range(inst.vertex_count))
        assert solve_exact(red).minimum == solve_exact(inst).minimum


def test_fixed_labeling_is_optimal_when_complete():
    done = 0
    for inst in instance_stream(5, 200, 2, 8):
        x = fixed_labeling(reduce(inst))
        if x is not None:
            done += 1
            assert objective(inst, x) == solve_exact(inst).minimum
    assert done > 20


def test_positive_slack_is_sound():
    for inst in instance_stream(12, 80, 2, 8):
        assert verify(reduce(inst, EngineConfig(slack=0.5)))


def test_components_and_representatives():
    inst = Instance(4, {(0, 1): -1, (2, 3): -1, (1, 2): 3})
    state = reduce(inst)
    assert state.component == [0, 0, 2, 2]
    assert state.representative == [0, 0, 2, 2]
