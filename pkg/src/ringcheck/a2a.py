"""Alternating two-way automata for LCPDL over tables of a fixed height.

A table of height index k is read as the word of its columns written one
after the other, framed by end markers.  Word position p >= 1 holds cell
(i, j) with p - 1 = (i - 1)(k + 1) + j, so the automaton tracks the row j in
its state.  A step to the next column is k + 1 unit moves ("chain"), a step
down is one unit move allowed only when j < k.

States are tuples; ``pol`` is True for "the formula holds" and False for the
dual "the formula fails".  Dual states are the accepting (greatest fixpoint)
ones.  Path formulas are compiled to epsilon-free NFAs whose edges are tests
or unit directions; Loop(pi) uses the usual decomposition of a path that
starts and ends at the same position into stays and excursions to the left
or to the right.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .errors import ResourceBudgetExceeded
from .syntax import size
from .table import (LAnd, LAtom, LDiamond, LExact, LLoop, LNot, LTrue, PAutomaton,
                    PConcat, PConverse, PStar, PStep, PTest, PUnion)

BEGIN = "|-"
END = "-|"

TT = ("tt",)
FF = ("ff",)


def go(move: int, state) -> tuple:
    return ("go", move, state)


def b_and(parts) -> tuple:
    out = set()
    for p in parts:
        if p == FF:
            return FF
        if p == TT:
            continue
        if p[0] == "and":
            out |= p[1]
        else:
            out.add(p)
    if not out:
        return TT
    if len(out) == 1:
        return next(iter(out))
    return ("and", frozenset(out))


def b_or(parts) -> tuple:
    out = set()
    for p in parts:
        if p == TT:
            return TT
        if p == FF:
            continue
        if p[0] == "or":
            out |= p[1]
        else:
            out.add(p)
    if not out:
        return FF
    if len(out) == 1:
        return next(iter(out))
    return ("or", frozenset(out))


def b_junction(pol: bool, parts) -> tuple:
    """Disjunction for a positive state, conjunction for its dual."""
    return b_or(parts) if pol else b_and(parts)


def b_const(value: bool) -> tuple:
    return TT if value else FF


# path formulas to NFAs

@dataclass
class NFA:
    """Epsilon-free automaton over tests and unit directions R, L, D, U."""

    index: int
    initial: tuple
    finals: frozenset
    tests: dict = field(default_factory=dict)  # q -> ((formula, q'), ...)
    moves: dict = field(default_factory=dict)  # q -> ((direction, q'), ...)
    target: object = None  # formula checked at the end of a diamond


class _Builder:
    def __init__(self):
        self.count = 0
        self.eps = defaultdict(list)
        self.tests = defaultdict(list)
        self.moves = defaultdict(list)

    def fresh(self) -> int:
        self.count += 1
        return self.count - 1

    def build(self, pi, conv: bool, start: int, end: int):
        if isinstance(pi, PTest):
            self.tests[start].append((pi.arg, end))
        elif isinstance(pi, PStep):
            if pi.direction == "eps":
                self.eps[start].append(end)
            else:
                d = {"right": "RL", "down": "DU"}[pi.direction]
                self.moves[start].append((d[1] if conv else d[0], end))
        elif isinstance(pi, PUnion):
            self.build(pi.left, conv, start, end)
            self.build(pi.right, conv, start, end)
        elif isinstance(pi, PConcat):
            mid = self.fresh()
            first, second = (pi.right, pi.left) if conv else (pi.left, pi.right)
            self.build(first, conv, start, mid)
            self.build(second, conv, mid, end)
        elif isinstance(pi, PStar):
            hub = self.fresh()
            self.eps[start].append(hub)
            self.eps[hub].append(end)
            self.build(pi.arg, conv, hub, hub)
        elif isinstance(pi, PConverse):
            self.build(pi.arg, not conv, start, end)
        elif isinstance(pi, PAutomaton):
            a = pi.automaton
            node = {q: self.fresh() for q in a.states}
            for src, label, dst in a.edges:
                if conv:
                    self.build(label, True, node[dst], node[src])
                else:
                    self.build(label, False, node[src], node[dst])
            if conv:
                for f in a.finals:
                    self.eps[start].append(node[f])
                self.eps[node[a.initial]].append(end)
            else:
                self.eps[start].append(node[a.initial])
                for f in a.finals:
                    self.eps[node[f]].append(end)
        else:
            raise TypeError(f"not an LCPDL path formula: {pi!r}")

    def closure(self, q: int) -> set:
        seen, stack = {q}, [q]
        while stack:
            x = stack.pop()
            for y in self.eps[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen


def build_nfa(pi, index: int, target=None) -> NFA:
    b = _Builder()
    start, end = b.fresh(), b.fresh()
    b.build(pi, False, start, end)
    # remove epsilon edges
    tests, moves, finals = {}, {}, set()
    reachable, stack = {start}, [start]
    while stack:
        q = stack.pop()
        cl = b.closure(q)
        if end in cl:
            finals.add(q)
        ts = {(f, y) for x in cl for f, y in b.tests[x]}
        ms = {(d, y) for x in cl for d, y in b.moves[x]}
        tests[q], moves[q] = ts, ms
        for _, y in ts | ms:
            if y not in reachable:
                reachable.add(y)
                stack.append(y)
    # keep states that can still reach a final state
    useful = set(finals)
    changed = True
    while changed:
        changed = False
        for q in reachable - useful:
            if any(y in useful for _, y in tests[q] | moves[q]):
                useful.add(q)
                changed = True
    classes = _bisimulation(useful, finals, tests, moves)
    rep = {q: classes[q] for q in useful}
    t2 = defaultdict(set)
    m2 = defaultdict(set)
    for q in useful:
        t2[rep[q]] |= {(f, rep[y]) for f, y in tests[q] if y in useful}
        m2[rep[q]] |= {(d, rep[y]) for d, y in moves[q] if y in useful}
    key = lambda e: (str(e[0]), e[1])  # noqa: E731
    initial = (rep[start],) if start in useful else ()
    return NFA(index, initial, frozenset(rep[q] for q in finals if q in useful),
               {q: tuple(sorted(v, key=key)) for q, v in t2.items()},
               {q: tuple(sorted(v)) for q, v in m2.items()}, target)


def _bisimulation(states, finals, tests, moves) -> dict:
    """Merge states with the same future (forward bisimulation)."""
    block = {q: int(q in finals) for q in states}
    while True:
        sig = {}
        new = {}
        for q in sorted(states):
            s = (block[q],
                 frozenset((f, block[y]) for f, y in tests[q] if y in block),
                 frozenset((d, block[y]) for d, y in moves[q] if y in block))
            new[q] = sig.setdefault(s, len(sig))
        if len(set(new.values())) == len(set(block.values())):
            return new
        block = new


# the automaton

class A2A:
    """Alternating two-way automaton accepting encodings of models of psi."""

    def __init__(self, psi, k: int, alphabet=()):
        if k < 1:
            raise ValueError("height index must be at least 1")
        self.psi = psi
        self.k = k
        self.rows = k + 1
        self.alphabet = tuple(alphabet)
        self.initial = ("I",)
        self._nfas = {}
        self.nfas = []
        self._delta = {}
        self._cost = {}

    # NFAs for Diamond and Loop sub-formulas

    def nfa(self, kind: str, pi, target=None) -> NFA:
        key = (kind, pi, target)
        a = self._nfas.get(key)
        if a is None:
            a = build_nfa(pi, len(self.nfas), target)
            self.nfas.append(a)
            self._nfas[key] = a
        return a

    # walkers: (NFA state, chain) where chain is None or (direction, remaining)

    def unit_steps(self, a: NFA, w, row: int):
        """(test or None, move, walker') for one unit step of a walker."""
        q, chain = w
        if chain is not None:
            d, rem = chain
            yield None, d, (q, (d, rem - 1) if rem > 1 else None)
            return
        for f, q2 in a.tests.get(q, ()):
            yield f, 0, (q2, None)
        for d, q2 in a.moves.get(q, ()):
            if d == "R":
                yield None, 1, (q2, (1, self.k))
            elif d == "L":
                yield None, -1, (q2, (-1, self.k))
            elif d == "D":
                if row < self.k:
                    yield None, 1, (q2, None)
            elif d == "U":
                if row > 0:
                    yield None, -1, (q2, None)

    def reach(self, a: NFA, q) -> frozenset:
        """NFA states reachable from q, q included."""
        key = ("reach", a.index, q)
        got = self._delta.get(key)
        if got is None:
            seen, stack = {q}, [q]
            while stack:
                x = stack.pop()
                for _, y in a.tests.get(x, ()) + a.moves.get(x, ()):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            got = self._delta[key] = frozenset(seen)
        return got

    def returning(self, a: NFA, move: int, w) -> list:
        """Walkers a run of ``w`` can be in right after a unit step in
        direction ``move``."""
        key = ("ret", a.index, move, w[0])
        got = self._delta.get(key)
        if got is not None:
            return got
        horizontal, vertical = ("R", "D") if move == 1 else ("L", "U")
        reach = self.reach(a, w[0])
        out = set()
        for q in reach:
            for d, q2 in a.moves.get(q, ()):
                if d == vertical or d == horizontal:
                    out.add((q2, None))
                if d == horizontal:
                    out |= {(q2, (move, rem)) for rem in range(1, self.k + 1)}
        got = sorted(out, key=lambda w: (w[0], w[1] or (0, 0)))
        self._delta[key] = got
        return got

    def cost(self, f) -> int:
        """Rough size of the sub-game below a transition formula, used to
        try cheap alternatives first."""
        got = self._cost.get(f)
        if got is None:
            tag = f[0]
            if tag in ("tt", "ff"):
                got = 0
            elif tag == "go":
                s = f[2]
                got = self.weight(self.nfas[s[1]]) if s[0] in ("D", "S", "RX", "LX") else 1
            else:
                got = sum(self.cost(g) for g in f[1])
            self._cost[f] = got
        return got

    def weight(self, a: NFA) -> int:
        key = ("weight", a.index)
        got = self._cost.get(key)
        if got is None:
            tests = {f for edges in a.tests.values() for f, _ in edges}
            got = len(a.tests) + sum(size(f) for f in tests)
            if a.target is not None:
                got += size(a.target)
            self._cost[key] = got
        return got

    def row_after(self, row: int, move: int) -> int:
        return (row + move) % self.rows

    # local formulas, inlined at the current cell

    def local(self, psi, pol: bool, row: int, letter) -> tuple:
        if isinstance(psi, LTrue):
            return b_const(pol)
        if isinstance(psi, LExact):
            return b_const((letter == psi.transition) == pol)
        if isinstance(psi, LAtom):
            return b_const((psi.atom in letter.constituents) == pol)
        if isinstance(psi, LNot):
            return self.local(psi.arg, not pol, row, letter)
        if isinstance(psi, LAnd):
            parts = (self.local(psi.left, pol, row, letter),
                     self.local(psi.right, pol, row, letter))
            return b_and(parts) if pol else b_or(parts)
        if isinstance(psi, LDiamond):
            a = self.nfa("D", psi.path, psi.arg)
            return b_junction(pol, [self.delta(("D", a.index, (q, None), pol, row), letter)
                                    for q in a.initial])
        if isinstance(psi, LLoop):
            a = self.nfa("L", psi.path)
            return b_junction(pol, [self.delta(("S", a.index, (q, None), pol, row), letter)
                                    for q in a.initial])
        raise TypeError(f"not an LCPDL local formula: {psi!r}")

    # transition function

    @staticmethod
    def accepting(state) -> bool:
        return state[0] in ("D", "S", "RX", "LX") and state[-2] is False

    def delta(self, state, letter) -> tuple:
        key = (state, letter)
        out = self._delta.get(key)
        if out is None:
            out = self._compute(state, letter)
            self._delta[key] = out
        return out

    def _compute(self, state, letter) -> tuple:
        kind = state[0]
        if kind == "I":
            if letter in (BEGIN, END):
                return FF
            return b_and([self.local(self.psi, True, 0, letter), go(1, ("LEN", 1 % self.rows))])
        if kind == "LEN":
            if letter == END:
                return b_const(state[1] == 0)
            if letter == BEGIN:
                return FF
            return go(1, ("LEN", self.row_after(state[1], 1)))
        pol = state[-2]  # states end with (pol, row)
        if letter in (BEGIN, END):
            return b_const(not pol)
        if kind == "D":
            return self._diamond(state, letter)
        if kind == "S":
            return self._seq(state, letter)
        return self._excursion(state, letter)

    def _test(self, f, pol, row, letter):
        return TT if f is None else self.local(f, pol, row, letter)

    def _diamond(self, state, letter) -> tuple:
        _, idx, w, pol, row = state
        a = self.nfas[idx]
        parts = []
        if w[1] is None and w[0] in a.finals:
            parts.append(self.local(a.target, pol, row, letter))
        for f, mv, w2 in self.unit_steps(a, w, row):
            nxt = ("D", idx, w2, pol, self.row_after(row, mv))
            if pol:
                parts.append(b_and([self._test(f, True, row, letter), go(mv, nxt)]))
            else:
                parts.append(b_or([FF if f is None else self.local(f, False, row, letter),
                                   go(mv, nxt)]))
        return b_junction(pol, parts)

    def _seq(self, state, letter) -> tuple:
        _, idx, w, pol, row = state
        a = self.nfas[idx]
        parts = []
        if w[1] is None and w[0] in a.finals:
            parts.append(b_const(pol))
        for f, mv, w1 in self.unit_steps(a, w, row):
            if mv == 0:
                nxt = go(0, ("S", idx, w1, pol, row))
                parts.append(self._both(pol, self._test(f, pol, row, letter) if pol else
                                        self.local(f, False, row, letter), nxt))
                continue
            exc = "RX" if mv == 1 else "LX"
            there = self.row_after(row, mv)
            for w2 in self.returning(a, -mv, w1):
                parts.append(self._both(pol, go(mv, (exc, idx, w1, w2, pol, there)),
                                        go(0, ("S", idx, w2, pol, row))))
        return b_junction(pol, parts)

    def _excursion(self, state, letter) -> tuple:
        kind, idx, w1, w2, pol, row = state
        a = self.nfas[idx]
        out_move = 1 if kind == "RX" else -1  # direction that leaves the starting cell
        parts = []
        for f, mv, w3 in self.unit_steps(a, w1, row):
            if mv == -out_move:
                if w3 == w2:
                    parts.append(b_const(pol))
                continue
            if mv == 0:
                parts.append(self._both(pol, self._test(f, pol, row, letter) if pol else
                                        self.local(f, False, row, letter),
                                        go(0, (kind, idx, w3, w2, pol, row))))
                continue
            there = self.row_after(row, mv)
            for w4 in self.returning(a, -mv, w3):
                parts.append(self._both(pol, go(mv, (kind, idx, w3, w4, pol, there)),
                                        go(0, (kind, idx, w4, w2, pol, row))))
        return b_junction(pol, parts)

    @staticmethod
    def _both(pol: bool, x, y) -> tuple:
        """x and y for a positive state; for the dual, (not x) or (not y),
        where x and y are already given in dual form."""
        return b_and([x, y]) if pol else b_or([x, y])


def compile_a2a(psi, k: int, alphabet=()) -> A2A:
    return A2A(psi, k, alphabet)


# membership: solve the acceptance game on one word

def accepts(a: A2A, word, summarise: bool = True) -> bool:
    """Whether ``a`` accepts ``word``.

    With ``summarise`` the states of Loop occurrences are not explored as
    game nodes; their least fixpoint is computed directly as sets of
    returning walkers per position (see ``_Loops``).  Both ways give the
    same answer; the plain game is much slower on large path automata.
    """
    letters = (BEGIN,) + tuple(word) + (END,)
    return _Game(a, letters, summarise).solve(("st", a.initial, 1))


class _Loops:
    """Loop states of one word, solved by excursion summaries.

    ``returns(d, p, w)`` is the set of walkers w2 such that the excursion
    state (w, w2) at position p, entered by a unit move in direction d,
    comes back: the walker can leave p - d ... p - d being the base ... and
    arrive at the base in w2 while staying strictly on the d side.
    """

    def __init__(self, game):
        self.game = game
        self.a = game.a
        self.letters = game.letters
        self._tests = {}
        self._ret = {}
        self._steps = {}

    def row(self, p: int) -> int:
        return (p - 1) % self.a.rows

    def inside(self, p: int) -> bool:
        return 0 < p < len(self.letters) - 1

    def steps(self, nfa: NFA, w, p: int) -> list:
        key = (nfa.index, w, p)
        got = self._steps.get(key)
        if got is None:
            got = self._steps[key] = list(self.a.unit_steps(nfa, w, self.row(p)))
        return got

    def test(self, f, p: int) -> bool:
        key = (f, p)
        got = self._tests.get(key)
        if got is None:
            got = self.game.solve(("f", self.a.local(f, True, self.row(p), self.letters[p]), p))
            self._tests[key] = got
        return got

    def _walk(self, nfa: NFA, w, p: int, back: int):
        """Walkers reachable at p without going to the ``back`` side; with
        back = 0 both sides are excursions.  Yields (walker, exits)."""
        seen, stack = {w}, [w]
        while stack:
            v = stack.pop()
            exits = []
            for f, mv, v2 in self.steps(nfa, v, p):
                if mv == 0:
                    nxt = [v2] if self.test(f, p) else []
                elif back and mv == back:
                    exits.append(v2)
                    continue
                else:
                    nxt = self.returns(nfa, mv, p + mv, v2)
                for x in nxt:
                    if x not in seen:
                        seen.add(x)
                        stack.append(x)
            yield v, exits

    def returns(self, nfa: NFA, d: int, p: int, w) -> frozenset:
        key = (nfa.index, d, p, w)
        got = self._ret.get(key)
        if got is None:
            out = set()
            if self.inside(p):
                for _, exits in self._walk(nfa, w, p, -d):
                    out.update(exits)
            got = self._ret[key] = frozenset(out)
        return got

    def loops(self, nfa: NFA, w, p: int) -> bool:
        if not self.inside(p):
            return False
        return any(v[1] is None and v[0] in nfa.finals for v, _ in self._walk(nfa, w, p, 0))

    def value(self, state, p: int) -> bool:
        kind, idx = state[0], state[1]
        nfa = self.a.nfas[idx]
        if kind == "S":
            positive = self.loops(nfa, state[2], p)
        else:
            d = 1 if kind == "RX" else -1
            positive = state[3] in self.returns(nfa, d, p, state[2])
        return positive if state[-2] else not positive


class _Game:
    """Finite game on (state, position) pairs and formula nodes.

    Every cycle of the game graph stays within the states of one Diamond or
    Loop occurrence with one polarity, so strongly connected components can
    be solved one at a time: least fixpoint for positive components, greatest
    for dual ones.  Values are exact, so they are shared between solves.
    """

    def __init__(self, a: A2A, letters, summarise: bool = True):
        self.a = a
        self.letters = letters
        self.value = {}
        self.loops = _Loops(self) if summarise else None

    def succ(self, node):
        if node[0] == "st":
            _, s, p = node
            return [("f", self.a.delta(s, self.letters[p]), p)]
        _, f, p = node
        tag = f[0]
        if tag in ("tt", "ff"):
            return []
        if tag == "go":
            return [("st", f[2], p + f[1])]
        return [("f", g, p) for g in sorted(f[1], key=self.a.cost)]

    @staticmethod
    def kind(node) -> str:
        if node[0] == "st":
            return "or"
        tag = node[1][0]
        if tag == "go":
            return "or"
        return tag

    def _leaf_value(self, node):
        """Value of nodes decided without exploring them, else None."""
        if node[0] == "f":
            tag = node[1][0]
            if tag in ("tt", "ff"):
                return tag == "tt"
            return None
        if self.loops is not None and node[1][0] in ("S", "RX", "LX"):
            return self.loops.value(node[1], node[2])
        return None

    def solve(self, root) -> bool:
        value = self.value
        if root in value:
            return value[root]
        succ = {}
        # iterative Tarjan over nodes not valued yet
        index, low, on_stack = {}, {}, set()
        stack, counter = [], 0
        call = [(root, None)]
        while call:
            v, it = call.pop()
            if it is None:
                leaf = self._leaf_value(v)
                if leaf is not None:
                    value[v] = leaf
                    if call:
                        continue
                    break
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
                succ[v] = []
                it = iter(self.succ(v))
            # succ[v] only lists the children explored so far: once a child
            # with a known value decides v, the others are never looked at
            decisive = self.kind(v) == "or"
            explored = succ[v]
            if explored and explored[-1] in value and value[explored[-1]] == decisive:
                it = iter(())
            descended = False
            for w in it:
                explored.append(w)
                if w in value:
                    if value[w] == decisive:
                        break
                    continue
                if w not in index:
                    call.append((v, it))
                    call.append((w, None))
                    descended = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    x = stack.pop()
                    on_stack.discard(x)
                    comp.append(x)
                    if x == v:
                        break
                self._solve_component(comp, succ)
            if call:
                parent = call[-1][0]
                low[parent] = min(low[parent], low[v])
        return value[root]

    def _solve_component(self, comp, succ):
        value = self.value
        comp = [v for v in comp if v not in value]
        members = set(comp)
        greatest = any(n[0] == "st" and self.a.accepting(n[1]) for n in comp)
        default = greatest  # value of nodes not forced otherwise
        target = not default
        flip, need, preds, work = set(), {}, defaultdict(list), []
        for v in comp:
            k = self.kind(v)
            inside = [w for w in succ[v] if w in members]
            outside = [value[w] for w in succ[v] if w not in members]
            for w in inside:
                preds[w].append(v)
            existential = (k == "or") == target
            if existential:
                if target in outside:
                    flip.add(v)
                    work.append(v)
                else:
                    need[v] = 1
            else:
                if any(x != target for x in outside):
                    continue  # can never reach the target value
                if not inside:
                    flip.add(v)
                    work.append(v)
                else:
                    need[v] = len(inside)
        while work:
            w = work.pop()
            for v in preds[w]:
                if v in flip or v not in need:
                    continue
                need[v] -= 1
                if need[v] == 0:
                    flip.add(v)
                    work.append(v)
        for v in comp:
            value[v] = target if v in flip else default


# emptiness: breadth-first search over prefix profiles
#
# After reading a prefix, what matters for the rest of the word is, for every
# state that can enter the last position from the right, its game value as a
# monotone function of the states that leave the prefix to the right, plus
# the same function for the initial state.  Functions are kept as minimal
# DNFs: frozensets of frozensets of exit states.

DNF_TRUE = frozenset({frozenset()})
DNF_FALSE = frozenset()


def _minimal(clauses) -> frozenset:
    kept = []
    for c in sorted(set(clauses), key=len):
        if not any(k <= c for k in kept):
            kept.append(c)
    return frozenset(kept)


def dnf_or(parts) -> frozenset:
    return _minimal(c for p in parts for c in p)


def dnf_and(parts) -> frozenset:
    out = DNF_TRUE
    for p in parts:
        if not p:
            return DNF_FALSE
        out = _minimal(a | b for a in out for b in p)
    return out


def _state_row(state):
    if state[0] == "LEN":
        return state[1]
    if state[0] == "I":
        return None
    return state[-1]


class _Emptiness:
    def __init__(self, a: A2A, budget: int):
        self.a = a
        self.budget = budget
        self.spent = 0
        self.letters = tuple(sorted(a.alphabet, key=lambda t: t.name))
        self.entering = self._entering_from_right()

    def charge(self, units: int = 1) -> None:
        self.spent += units
        if self.spent > self.budget:
            raise ResourceBudgetExceeded(
                f"emptiness check used more than {self.budget} work units")

    def _targets(self, f, out):
        tag = f[0]
        if tag == "go":
            out.append((f[1], f[2]))
        elif tag in ("and", "or"):
            for g in f[1]:
                self._targets(g, out)

    def _entering_from_right(self) -> dict:
        """Reachable states entered by a move to the left, by row."""
        seen, stack, entering = {self.a.initial}, [self.a.initial], set()
        while stack:
            s = stack.pop()
            for letter in self.letters + (BEGIN, END):
                moves = []
                self._targets(self.a.delta(s, letter), moves)
                self.charge(1 + len(moves))
                for mv, s2 in moves:
                    if mv == -1:
                        entering.add(s2)
                    if s2 not in seen:
                        seen.add(s2)
                        stack.append(s2)
        by_row = defaultdict(list)
        for s in entering:
            by_row[_state_row(s)].append(s)
        return by_row

    def _at_marker(self, states, marker) -> dict:
        out = {}
        for s in states:
            f = self.a.delta(s, marker)
            if f not in (TT, FF):
                raise AssertionError(f"state {s} moves at an end marker")
            out[s] = DNF_TRUE if f == TT else DNF_FALSE
        return out

    def initial_profile(self):
        states = [s for row in self.entering.values() for s in row]
        return (0, None, frozenset(self._at_marker(states, BEGIN).items()))

    def step(self, profile, letter):
        """The profile after one more letter at position p + 1."""
        p, root, entries = profile
        left = dict(entries)
        row = p % self.a.rows
        wanted = list(self.entering.get(row, ()))
        if root is None:
            wanted.append(self.a.initial)
        else:
            wanted.extend({v for c in root for v in c})
        value = self._solve(wanted, letter, left)

        def subst(dnf):
            return dnf_or(dnf_and(value[v] for v in c) for c in dnf)

        new_root = value[self.a.initial] if root is None else subst(root)
        new_entries = frozenset((s, value[s]) for s in self.entering.get(row, ()))
        return (p + 1, new_root, new_entries)

    def accepting_end(self, profile) -> bool:
        _, root, _ = profile
        if root is None:
            return False
        states = {v for c in root for v in c}
        at_end = self._at_marker(states, END)
        return any(all(at_end[v] == DNF_TRUE for v in c) for c in root)

    def _solve(self, wanted, letter, left) -> dict:
        """Values of states at the current position as DNFs over exits."""
        a = self.a
        deps, formula = {}, {}

        def dependencies(s):
            f = a.delta(s, letter)
            formula[s] = f
            moves, out = [], set()
            self._targets(f, moves)
            self.charge(1 + len(moves))
            for mv, s2 in moves:
                if mv == 0:
                    out.add(s2)
                elif mv == -1:
                    out |= {v for c in left[s2] for v in c}
            return out

        # Tarjan, components come out dependencies first
        index, low, on_stack, stack, order = {}, {}, set(), [], []
        counter = 0
        for root in wanted:
            if root in index:
                continue
            call = [(root, None)]
            while call:
                v, it = call.pop()
                if it is None:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack.add(v)
                    deps[v] = dependencies(v)
                    it = iter(deps[v])
                descended = False
                for w in it:
                    if w not in index:
                        call.append((v, it))
                        call.append((w, None))
                        descended = True
                        break
                    if w in on_stack:
                        low[v] = min(low[v], index[w])
                if descended:
                    continue
                if low[v] == index[v]:
                    comp = []
                    while True:
                        x = stack.pop()
                        on_stack.discard(x)
                        comp.append(x)
                        if x == v:
                            break
                    order.append(comp)
                if call:
                    parent = call[-1][0]
                    low[parent] = min(low[parent], low[v])

        value = {}
        for comp in order:
            greatest = any(a.accepting(s) for s in comp)
            for s in comp:
                value[s] = DNF_TRUE if greatest else DNF_FALSE
            changed = True
            while changed:
                changed = False
                for s in comp:
                    new = self._eval(formula[s], value, left)
                    if new != value[s]:
                        value[s] = new
                        changed = True
        return value

    def _eval(self, f, value, left) -> frozenset:
        tag = f[0]
        if tag == "tt":
            return DNF_TRUE
        if tag == "ff":
            return DNF_FALSE
        if tag == "go":
            mv, s2 = f[1], f[2]
            if mv == 1:
                out = frozenset({frozenset({s2})})
            elif mv == 0:
                out = value[s2]
            else:
                out = dnf_or(dnf_and(value[v] for v in c) for c in left[s2])
        elif tag == "and":
            out = dnf_and(self._eval(g, value, left) for g in f[1])
        else:
            out = dnf_or(self._eval(g, value, left) for g in f[1])
        self.charge(len(out))
        return out


def a2a_is_empty(a: A2A, budget: int = 200_000, max_len=None) -> tuple:
    """(True, None) if ``a`` accepts no word, else (False, word) where word is
    the shortest accepted word, and the least by transition names among those.

    Raises ResourceBudgetExceeded when the search needs more than ``budget``
    work units (transition evaluations plus DNF clauses built).  With
    ``max_len`` only words up to that length are considered, and a True
    answer then only covers those.
    """
    if not a.alphabet:
        raise ValueError("emptiness needs the automaton's alphabet")
    e = _Emptiness(a, budget)
    start = e.initial_profile()
    seen = {start}
    frontier = [(start, ())]
    while frontier:
        nxt = []
        for profile, word in frontier:
            if max_len is not None and len(word) >= max_len:
                continue
            for letter in e.letters:
                p2 = e.step(profile, letter)
                w2 = word + (letter,)
                if e.accepting_end(p2):
                    return False, w2
                if p2[1] == DNF_FALSE:
                    continue  # the initial state has already lost
                key = (p2[0] % a.rows, p2[1], p2[2])
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((p2, w2))
        frontier = nxt
    return True, None
