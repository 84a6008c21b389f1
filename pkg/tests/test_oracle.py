import pytest

from ringcheck import corpus
from ringcheck.dataspec import eval_local
from ringcheck.model import is_run
from ringcheck.oracle import enumerate_rings, oracle_check
from ringcheck.specparse import parse_spec


def test_single_ring():
    assert [r.pids for r in enumerate_rings(1)] == [(1,)]


def test_three_rings():
    rings = list(enumerate_rings(3))
    assert len(rings) == 2
    assert {frozenset(zip(r.pids, r.pids[1:] + r.pids[:1])) for r in rings} == {
        frozenset({(3, 1), (1, 2), (2, 3)}), frozenset({(3, 2), (2, 1), (1, 3)})}


@pytest.mark.parametrize("n, count", [(2, 1), (4, 6), (5, 24)])
def test_rotation_classes(n, count):
    assert len(list(enumerate_rings(n))) == count


def test_franklin_phi1_holds(franklin):
    v = oracle_check(franklin, corpus.spec("phi1"), 4, 5)
    assert v.holds and v.holds_up_to == (4, 5)


def test_dkr_phi1_two_processes(dkr):
    v = oracle_check(dkr, corpus.spec("phi1"), 4, 2)
    assert not v.holds and v.ring.size == 2
    assert is_run(v.run)
    assert not eval_local(v.run, v.marked, (v.marked, 0), corpus.spec("phi1").body)
    assert v.trace


def test_dkr_phi2_small_rings(dkr):
    assert oracle_check(dkr, corpus.spec("phi2"), 4, 3).holds


@pytest.mark.parametrize("name", ["franklin", "dkr"])
def test_tautology(name):
    spec = parse_spec("spec T\nassert marked => marked\n")
    assert oracle_check(corpus.algorithm(name), spec, 3, 3).holds


def test_threads_agree(dkr):
    one = oracle_check(dkr, corpus.spec("phi1"), 4, 3)
    two = oracle_check(dkr, corpus.spec("phi1"), 4, 3, threads=2)
    assert (one.holds, one.ring) == (two.holds, two.ring)


def test_json_shape(dkr):
    out = oracle_check(dkr, corpus.spec("phi1"), 4, 2).to_json()
    assert out["result"] == "violated" and out["mode"] == "oracle"
    cex = out["counterexample"]
    assert sorted(cex["ring"]) == [1, 2] and len(cex["tuples"]) <= 4
