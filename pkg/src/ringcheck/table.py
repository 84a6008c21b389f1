"""Tables (symbolic runs), the LCPDL logic over them, and its evaluator."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import relations as rel
from .errors import RingcheckError
from .model import Run, Transition
from .syntax import node

DUMMY = "__dummy"


@dataclass(frozen=True)
class Table:
    """An n x (k+1) grid of transitions; ``columns[i-1][j]`` is cell (i, j)."""

    columns: tuple

    def __post_init__(self):
        cols = tuple(tuple(c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        if not cols or len(cols[0]) < 2:
            raise RingcheckError("a table needs at least one column and two rows")
        if any(len(c) != len(cols[0]) for c in cols):
            raise RingcheckError("all columns of a table must have the same height")

    @property
    def width(self) -> int:
        return len(self.columns)

    @property
    def height(self) -> int:
        """The height index k (rows are 0..k)."""
        return len(self.columns[0]) - 1

    def cell(self, i: int, j: int) -> Transition:
        return self.columns[i - 1][j]

    def positions(self):
        return [(i, j) for i in range(1, self.width + 1) for j in range(self.height + 1)]

    def to_json(self) -> dict:
        return {"width": self.width, "height": self.height,
                "columns": [[t.name for t in col] for col in self.columns]}

    def __str__(self):
        rows = []
        for j in range(self.height + 1):
            rows.append(" ".join(f"{self.cell(i, j).name:>8}" for i in range(1, self.width + 1)))
        return "\n".join(rows)


def table_from_json(obj: dict, algo) -> Table:
    """``algo`` must be dummy-extended so that ``__dummy`` resolves."""
    try:
        cols = [[algo.transition(name) for name in col] for col in obj["columns"]]
    except KeyError as e:
        raise RingcheckError(f"unknown transition or missing field: {e}") from None
    t = Table(tuple(cols))
    if obj.get("width", t.width) != t.width or obj.get("height", t.height) != t.height:
        raise RingcheckError("width/height fields disagree with the columns")
    return t


def table_of_run(run: Run, extended=None) -> Table:
    if extended is None:
        from .compile import dummy_extend
        extended = dummy_extend(run.algorithm)
    hat = extended.transition(DUMMY)
    n = run.ring.size
    return Table(tuple((hat,) + tuple(tup[i] for tup in run.tuples) for i in range(n)))


def mutate_table(table: Table, cell, transition: Transition) -> Table:
    i, j = cell
    cols = [list(c) for c in table.columns]
    cols[i - 1][j] = transition
    return Table(tuple(tuple(c) for c in cols))


# local formulas

@node
class LTrue:
    pass


@node
class LExact:
    transition: Transition


@node
class LAtom:
    """A constituent such as ("goto", s) or ("recv", "left", r)."""

    atom: tuple


@node
class LNot:
    arg: object


@node
class LAnd:
    left: object
    right: object


@node
class LDiamond:
    path: object
    arg: object


@node
class LLoop:
    path: object


# path formulas

@node
class PTest:
    arg: object


@node
class PStep:
    direction: str  # "eps", "right" or "down"


@node
class PUnion:
    left: object
    right: object


@node
class PConcat:
    left: object
    right: object


@node
class PStar:
    arg: object


@node
class PConverse:
    arg: object


@node
class PathAutomaton:
    states: tuple
    initial: object
    finals: frozenset
    edges: tuple  # ((source, label, target), ...)


@node
class PAutomaton:
    automaton: PathAutomaton


# sugar

TRUE = LTrue()
FALSE = LNot(TRUE)
EPS = PStep("eps")
RIGHT = PStep("right")
DOWN = PStep("down")
LEFT = PConverse(RIGHT)
UP = PConverse(DOWN)


def l_or(a, b):
    return LNot(LAnd(LNot(a), LNot(b)))


def l_implies(a, b):
    return LNot(LAnd(a, LNot(b)))


def simplify(psi):
    """Fold constants and complementary conjuncts in the Boolean skeleton.

    Only the outer not/and structure is rewritten; modal arguments are kept.
    """
    if isinstance(psi, LNot):
        arg = simplify(psi.arg)
        return arg.arg if isinstance(arg, LNot) else LNot(arg)
    if isinstance(psi, LAnd):
        left, right = simplify(psi.left), simplify(psi.right)
        if FALSE in (left, right) or left == LNot(right) or right == LNot(left):
            return FALSE
        if left == TRUE:
            return right
        if right == TRUE or left == right:
            return left
        return LAnd(left, right)
    return psi


def l_box(path, arg):
    return LNot(LDiamond(path, LNot(arg)))


def l_can(path):
    """<path>true"""
    return LDiamond(path, TRUE)


def l_all(formulas: Sequence):
    formulas = list(formulas)
    if not formulas:
        return TRUE
    out = formulas[0]
    for f in formulas[1:]:
        out = LAnd(out, f)
    return out


def p_concat(*paths):
    out = paths[0]
    for p in paths[1:]:
        out = PConcat(out, p)
    return out


def p_union(paths: Sequence):
    paths = list(paths)
    if not paths:
        return PTest(FALSE)
    out = paths[0]
    for p in paths[1:]:
        out = PUnion(out, p)
    return out


def p_plus(path):
    return PConcat(path, PStar(path))


def atom(*parts) -> LAtom:
    return LAtom(tuple(parts))


# x ↪ y: the right neighbour, wrapping from the last column back to the first
WRAP_RIGHT = PUnion(RIGHT, p_concat(PTest(LNot(l_can(RIGHT))), PStar(LEFT),
                                     PTest(LNot(l_can(LEFT)))))
WRAP_LEFT = PConverse(WRAP_RIGHT)


class TableEvaluator:
    """Memoised LCPDL evaluation on one table.

    Satisfaction sets and path relations are bitmasks over positions indexed
    (i-1)*(k+1)+j, which is also the position of the cell in the word encoding.
    """

    def __init__(self, table: Table):
        self.table = table
        self.n = table.width
        self.rows = table.height + 1
        self.size = self.n * self.rows
        self.cells = [table.columns[x // self.rows][x % self.rows] for x in range(self.size)]
        self._sat = {}
        self._rel = {}

    def index(self, i: int, j: int) -> int:
        return (i - 1) * self.rows + j

    def position(self, x: int) -> tuple:
        return x // self.rows + 1, x % self.rows

    def holds(self, pos, psi) -> bool:
        # Boolean structure is evaluated lazily at the one position
        if isinstance(psi, LNot):
            return not self.holds(pos, psi.arg)
        if isinstance(psi, LAnd):
            return self.holds(pos, psi.left) and self.holds(pos, psi.right)
        return bool(self.sat(psi) >> self.index(*pos) & 1)

    def sat(self, psi) -> int:
        out = self._sat.get(psi)
        if out is None:
            out = self._compute_sat(psi)
            self._sat[psi] = out
        return out

    def _mask(self, pred) -> int:
        out = 0
        for x, c in enumerate(self.cells):
            if pred(c):
                out |= 1 << x
        return out

    def _compute_sat(self, psi) -> int:
        full = (1 << self.size) - 1
        if isinstance(psi, LTrue):
            return full
        if isinstance(psi, LExact):
            return self._mask(lambda c: c == psi.transition)
        if isinstance(psi, LAtom):
            return self._mask(lambda c: psi.atom in c.constituents)
        if isinstance(psi, LNot):
            return full & ~self.sat(psi.arg)
        if isinstance(psi, LAnd):
            return self.sat(psi.left) & self.sat(psi.right)
        if isinstance(psi, LDiamond):
            r, target = self.relation(psi.path), self.sat(psi.arg)
            return sum(1 << x for x in range(self.size) if r[x] & target)
        if isinstance(psi, LLoop):
            r = self.relation(psi.path)
            return sum(1 << x for x in range(self.size) if r[x] >> x & 1)
        raise TypeError(f"not an LCPDL local formula: {psi!r}")

    def relation(self, pi) -> tuple:
        out = self._rel.get(pi)
        if out is None:
            out = self._compute_rel(pi)
            self._rel[pi] = out
        return out

    def _compute_rel(self, pi) -> tuple:
        size, rows = self.size, self.rows
        if isinstance(pi, PTest):
            return rel.diagonal(self.sat(pi.arg), size)
        if isinstance(pi, PStep):
            if pi.direction == "eps":
                return rel.identity(size)
            if pi.direction == "right":
                return tuple((1 << (x + rows)) if x + rows < size else 0 for x in range(size))
            if pi.direction == "down":
                return tuple((1 << (x + 1)) if x % rows < rows - 1 else 0 for x in range(size))
            raise ValueError(f"unknown direction {pi.direction!r}")
        if isinstance(pi, PUnion):
            return rel.union(self.relation(pi.left), self.relation(pi.right))
        if isinstance(pi, PConcat):
            return rel.compose(self.relation(pi.left), self.relation(pi.right))
        if isinstance(pi, PStar):
            return rel.star(self.relation(pi.arg))
        if isinstance(pi, PConverse):
            return rel.converse(self.relation(pi.arg))
        if isinstance(pi, PAutomaton):
            return self._automaton(pi.automaton)
        raise TypeError(f"not an LCPDL path formula: {pi!r}")

    def _automaton(self, a: PathAutomaton) -> tuple:
        """Product of automaton states and positions, all sources at once."""
        size = self.size
        reach = {q: rel.empty(size) for q in a.states}
        reach[a.initial] = rel.identity(size)
        outgoing = {q: [] for q in a.states}
        for src, label, dst in a.edges:
            outgoing[src].append((label, dst))
        work = [a.initial]
        while work:
            q = work.pop()
            for label, dst in outgoing[q]:
                step = rel.compose(reach[q], self.relation(label))
                merged = rel.union(reach[dst], step)
                if merged != reach[dst]:
                    reach[dst] = merged
                    if dst not in work:
                        work.append(dst)
        out = rel.empty(size)
        for f in a.finals:
            out = rel.union(out, reach[f])
        return out


def eval_lcpdl(table: Table, pos, psi) -> bool:
    return TableEvaluator(table).holds(pos, psi)


def path_rel(table: Table, pi) -> set:
    ev = TableEvaluator(table)
    return {(ev.position(x), ev.position(y)) for x, y in rel.pairs(ev.relation(pi))}
