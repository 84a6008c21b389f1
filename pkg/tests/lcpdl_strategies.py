"""Hypothesis strategies for small LCPDL formulas and tables."""
from hypothesis import strategies as st

from ringcheck.compile import dummy_extend
from ringcheck import corpus
from ringcheck.table import (DOWN, EPS, LEFT, RIGHT, TRUE, UP, WRAP_RIGHT, LAnd, LDiamond,
                             LExact, LLoop, LNot, PConcat, PConverse, PStar, PTest, PUnion,
                             Table)

# three letters keep brute force over all short words cheap
LETTERS = tuple(sorted(dummy_extend(corpus.algorithm("franklin")).transitions,
                       key=lambda t: t.name)[:3])


def formulas(letters=LETTERS, depth=4):
    exact = st.sampled_from(letters).map(LExact)
    steps = st.sampled_from([RIGHT, DOWN, LEFT, UP, WRAP_RIGHT, EPS])

    def local(d):
        if d == 0:
            return st.one_of(exact, st.just(TRUE))
        sub, p = local(d - 1), path(d - 1)
        return st.one_of(exact, st.just(TRUE), sub.map(LNot),
                         st.builds(LAnd, sub, sub), st.builds(LDiamond, p, sub),
                         p.map(LLoop))

    def path(d):
        if d == 0:
            return st.one_of(steps, exact.map(PTest))
        sub, f = path(d - 1), local(d - 1)
        return st.one_of(steps, f.map(PTest), st.builds(PUnion, sub, sub),
                         st.builds(PConcat, sub, sub), sub.map(PStar), sub.map(PConverse))

    return local(depth)


@st.composite
def tables(draw, letters=LETTERS, k=None, widths=(1, 3)):
    k = k if k is not None else draw(st.integers(1, 2))
    w = draw(st.integers(*widths))
    col = st.tuples(*[st.sampled_from(letters)] * (k + 1))
    return Table(tuple(draw(st.lists(col, min_size=w, max_size=w))))
