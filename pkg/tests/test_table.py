import pytest
from hypothesis import given, settings

from lcpdl_strategies import formulas, tables

from ringcheck.compile import dummy_extend
from ringcheck.errors import RingcheckError
from ringcheck.model import Ring, enumerate_runs
from ringcheck.table import (DUMMY, EPS, FALSE, RIGHT, TRUE, WRAP_RIGHT, LAnd, LLoop, LNot, PStar, Table,
                             TableEvaluator, eval_lcpdl, l_can, mutate_table, path_rel,
                             simplify, table_from_json, table_of_run)


def names(col):
    return [t.name for t in col]


def test_example_table_shape(example_table):
    assert (example_table.width, example_table.height) == (7, 6)
    assert example_table.cell(6, 6).name == "t5"
    assert all(example_table.cell(i, 0).name == DUMMY for i in range(1, 8))


def test_example_first_column(example_table):
    assert names(example_table.columns[0]) == [DUMMY, "t1", "t2", "t1", "t4", "t6", "t6"]


def test_one_round_table(dkr):
    run = next(enumerate_runs(dkr, Ring((1, 2, 3)), 1))
    t = table_of_run(run)
    assert t.height == 1 and all(t.cell(i, 0).name == DUMMY for i in (1, 2, 3))


def test_json_round_trip(example_table, dkr):
    assert table_from_json(example_table.to_json(), dummy_extend(dkr)) == example_table


def test_ragged_table_rejected(dkr):
    t1 = dkr.transition("t1")
    with pytest.raises(RingcheckError):
        Table(((t1, t1), (t1,)))


def test_identity_mutation(example_table):
    assert mutate_table(example_table, (3, 2), example_table.cell(3, 2)) == example_table


def test_loop_eps_everywhere(example_table):
    ev = TableEvaluator(example_table)
    assert all(ev.holds(p, LLoop(EPS)) for p in example_table.positions())


def test_wrap_on_single_column(dkr):
    t = Table(((dummy_extend(dkr).transition(DUMMY), dkr.transition("t1")),))
    assert path_rel(t, WRAP_RIGHT) == {((1, 0), (1, 0)), ((1, 1), (1, 1))}


def test_wrap_right_is_cyclic(example_table):
    rel = path_rel(example_table, WRAP_RIGHT)
    assert ((7, 3), (1, 3)) in rel and ((2, 3), (3, 3)) in rel
    assert len(rel) == 49


def test_last_column(example_table):
    last = LNot(l_can(RIGHT))
    assert [eval_lcpdl(example_table, (i, 0), last) for i in range(1, 8)] == [False] * 6 + [True]


def test_star_reaches_whole_row(example_table):
    rel = path_rel(example_table, PStar(RIGHT))
    assert {t for s, t in rel if s == (1, 2)} == {(i, 2) for i in range(1, 8)}


def test_true_everywhere(example_table):
    assert all(eval_lcpdl(example_table, p, TRUE) for p in example_table.positions())


@settings(max_examples=100, deadline=None)
@given(f=formulas(depth=3), t=tables())
def test_simplify_preserves_meaning(f, t):
    for g in (f, LAnd(f, LNot(f)), LNot(LNot(f)), LAnd(TRUE, f)):
        assert eval_lcpdl(t, (1, 0), simplify(g)) == eval_lcpdl(t, (1, 0), g)
    assert simplify(LAnd(f, LNot(f))) == FALSE
