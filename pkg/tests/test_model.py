import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from example_grid import EXAMPLE_GRID
from ringcheck import corpus
from ringcheck.dsl import parse_algorithm
from ringcheck.errors import (DuplicateRecvRegister, IdRegisterWritten, InapplicableTuple,
                              RingcheckError, SizeMismatch)
from ringcheck.model import (Ring, aux_left, aux_right, between, enumerate_runs,
                             initial_configuration, intermediate_assignment, is_run, replay,
                             step)

HEADER = "algorithm X\nstates: s0, s1\ninit: s0\nregisters: id, r, r'\n"


def independent_dkr(pids, rounds):
    """Straight re-implementation of DKR for one fixed tuple sequence."""
    n = len(pids)
    state = ["active0"] * n
    regs = [{"r": p, "r'": p, "r''": p} for p in pids]
    sends = {"t1": "r", "t2": "r'", "t3": "r'", "t4": "r'", "t5": "r'"}
    recv = {"t1": "r'", "t2": "r''", "t3": "r''", "t4": "r''", "t5": "r''", "t6": "r"}
    goto = {"t1": "active1", "t2": "active0", "t3": "passive", "t4": "passive",
            "t5": "found", "t6": "passive"}
    grid = [[(state[i], regs[i]["r"], regs[i]["r'"], regs[i]["r''"]) for i in range(n)]]
    for names in rounds:
        hat = [dict(x) for x in regs]
        for i, t in enumerate(names):
            # walk left over forwarders to the sender
            src = (i - 1) % n
            while names[src] == "t6":
                src = (src - 1) % n
            if names[src] in sends:
                hat[i][recv[t]] = regs[src][sends[names[src]]]
        for i, t in enumerate(names):
            if t == "t2":
                hat[i]["r"] = hat[i]["r'"]
            state[i] = goto[t]
        regs = hat
        grid.append([(state[i], regs[i]["r"], regs[i]["r'"], regs[i]["r''"]) for i in range(n)])
    return grid


def cells(algo, run):
    return [[(s, g["r"], g["r'"], g["r''"]) for s, g in zip(c.states, c.regs)]
            for c in run.configs]


# algorithm syntax

def test_franklin_parses(franklin):
    assert len(franklin.transitions) == 5
    assert len(franklin.registers) == 4


def test_duplicate_receive_register_rejected():
    with pytest.raises(DuplicateRecvRegister):
        parse_algorithm(HEADER + "trans t: s0: recv left r; recv right r; goto s1\n")


def test_writing_id_rejected():
    with pytest.raises(IdRegisterWritten):
        parse_algorithm(HEADER + "trans t: s0: set id := r; goto s1\n")


# aux relations and intermediate assignments

@pytest.mark.parametrize("i, j, n, expected", [(3, 6, 7, {4, 5}), (6, 1, 7, {7}),
                                                (1, 1, 1, set())])
def test_between(i, j, n, expected):
    assert between(i, j, n) == expected


def test_aux_right_round_four(example_run):
    c, tup = example_run.configs[3], example_run.tuples[3]
    assert aux_right(c, tup, "r'", 3, "r", 4)
    assert aux_right(c, tup, "r'", 3, "r''", 6)
    assert aux_right(c, tup, "r'", 6, "r", 7)
    assert aux_right(c, tup, "r'", 6, "r''", 1)


def test_aux_false_without_sends(dkr):
    t6 = dkr.transition("t6")
    ring = Ring((1, 2, 3))
    c = initial_configuration(dkr, ring)
    for r, r2, i, j in itertools.product(dkr.registers, dkr.registers, range(1, 4), range(1, 4)):
        assert not aux_right(c, (t6,) * 3, r, i, r2, j)
        assert not aux_left(c, (t6,) * 3, r, i, r2, j)


def test_no_sends_keeps_assignment(dkr):
    t6 = dkr.transition("t6")
    ring = Ring((3, 1, 2))
    c = initial_configuration(dkr, ring)
    assert intermediate_assignment(c, (t6,) * 3) == [dict(x) for x in c.regs]


def test_intermediate_value_first_round(example_run):
    hat = intermediate_assignment(example_run.configs[0], example_run.tuples[0])
    assert hat[0]["r'"] == 7


def test_size_one_ring_receives_own_pid():
    algo = parse_algorithm(HEADER + "trans t: s0: send right id; recv left r; goto s1\n")
    c = initial_configuration(algo, Ring((5,)))
    assert intermediate_assignment(c, (algo.transition("t"),))[0]["r"] == 5


# steps and runs

def test_example_golden(example_run, dkr):
    assert len(example_run.configs) == 7
    assert cells(dkr, example_run) == EXAMPLE_GRID


def test_example_independent_simulation(example_run):
    names = [[t.name for t in tup] for tup in example_run.tuples]
    assert independent_dkr(corpus.EXAMPLE_PIDS, names) == EXAMPLE_GRID


def test_example_anchor_cells():
    assert EXAMPLE_GRID[1][0][1:] == (4, 7, 4)
    assert all(c[1] == 8 for c in EXAMPLE_GRID[6])
    assert [c[0] for c in EXAMPLE_GRID[6]].count("found") == 1 and EXAMPLE_GRID[6][5][0] == "found"


def test_franklin_single_process(franklin):
    c = step(initial_configuration(franklin, Ring((5,))), (franklin.transition("t4"),))
    assert c.states == ("found",) and c.regs[0]["r"] == 5
    runs = list(enumerate_runs(franklin, Ring((5,)), 1))
    assert any(r.configs[-1].states == ("found",) for r in runs)


def test_simultaneous_swap():
    algo = parse_algorithm(HEADER + "trans t: s0: set r := r'; set r' := r; goto s1\n")
    c = initial_configuration(algo, Ring((1,)))
    c = type(c)(c.states, ({"id": 1, "r": 1, "r'": 2},))
    out = step(c, (algo.transition("t"),))
    assert (out.regs[0]["r"], out.regs[0]["r'"]) == (2, 1)


def test_step_rejects_wrong_size(dkr):
    c = initial_configuration(dkr, Ring((1, 2)))
    with pytest.raises(SizeMismatch):
        step(c, (dkr.transition("t1"),))


def test_replay_rejects_inapplicable(dkr):
    with pytest.raises(InapplicableTuple):
        replay(dkr, Ring((1, 2)), [(dkr.transition("t6"), dkr.transition("t6"))])


def test_duplicate_pids_rejected():
    with pytest.raises(RingcheckError):
        Ring((1, 1))


def test_franklin_two_process_election(franklin):
    runs = list(enumerate_runs(franklin, Ring((1, 2)), 2))
    assert any(r.configs[-1].states == ("passive", "found")
               and all(g["r"] == 2 for g in r.configs[-1].regs) for r in runs)


def test_no_initial_transition_gives_no_runs():
    algo = parse_algorithm(HEADER + "trans t: s1: goto s0\n")
    assert list(enumerate_runs(algo, Ring((1, 2)), 3)) == []


def test_example_run_is_enumerated(dkr, example_run):
    target = tuple(tuple(t.name for t in tup) for tup in example_run.tuples)
    found = any(tuple(tuple(t.name for t in tup) for tup in r.tuples) == target
                for r in enumerate_runs(dkr, Ring(corpus.EXAMPLE_PIDS), 6))
    assert found


# provenance and invariants

def _random_run(algo, data):
    n = data.draw(st.integers(1, 4))
    pids = data.draw(st.permutations(list(range(1, n + 1))))
    k = data.draw(st.integers(1, 3))
    runs = list(enumerate_runs(algo, Ring(tuple(pids)), k))
    return data.draw(st.sampled_from(runs))


@settings(max_examples=60, deadline=None)
@given(data=st.data(), name=st.sampled_from(["franklin", "dkr"]))
def test_provenance_names_pid_holder(data, name):
    algo = corpus.algorithm(name)
    run = _random_run(algo, data)
    pids = run.ring.pids
    for j in range(1, run.length + 1):
        hat = intermediate_assignment(run.configs[j - 1], run.tuples[j - 1])
        for i in range(1, run.ring.size + 1):
            before, mid, after = run.provenance[j][i - 1]
            for r in algo.registers:
                assert pids[before[r] - 1] == run.configs[j - 1].regs[i - 1][r]
                assert pids[mid[r] - 1] == hat[i - 1][r]
                assert pids[after[r] - 1] == run.configs[j].regs[i - 1][r]


@settings(max_examples=60, deadline=None)
@given(data=st.data(), name=st.sampled_from(["franklin", "dkr"]))
def test_enumerated_runs_are_runs(data, name):
    algo = corpus.algorithm(name)
    run = _random_run(algo, data)
    assert is_run(run)
    assert is_run(run.prefix(1))
    # id never changes
    assert all(g["id"] == p for c in run.configs for g, p in zip(c.regs, run.ring.pids))


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_rotation_commutes_with_step(data):
    algo = corpus.algorithm("dkr")
    run = _random_run(algo, data)
    s = data.draw(st.integers(0, run.ring.size - 1))
    rotated = run.ring.rotate(s)
    tuples = [tuple(tup[s:]) + tuple(tup[:s]) for tup in run.tuples]
    other = replay(algo, rotated, tuples)
    n = run.ring.size
    for a, b in zip(run.configs, other.configs):
        assert [a.states[(i + s) % n] for i in range(n)] == list(b.states)


def _naive_successors(algo, config):
    choices = [algo.by_source.get(s, ()) for s in config.states]
    return [(tup, c) for tup in itertools.product(*choices)
            if (c := step(config, tup)) is not None]


@settings(max_examples=40, deadline=None)
@given(data=st.data(), name=st.sampled_from(["franklin", "dkr"]))
def test_enumeration_matches_naive_product(data, name):
    algo = corpus.algorithm(name)
    n = data.draw(st.integers(1, 4))
    ring = Ring(tuple(data.draw(st.permutations(list(range(1, n + 1))))))
    got = [(r.tuples, r.configs) for r in enumerate_runs(algo, ring, 2)]
    expected = []
    c0 = initial_configuration(algo, ring)
    for tup, c1 in _naive_successors(algo, c0):
        expected.append(((tup,), (c0, c1)))
        for tup2, c2 in _naive_successors(algo, c1):
            expected.append(((tup, tup2), (c0, c1, c2)))
    assert got == expected
