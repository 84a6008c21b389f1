"""A parenthesised text form for LCPDL formulas.

``show`` prints only core constructors, and ``parse`` reads them back to an
equal formula.  The parser also accepts some sugar (false, or, implies, box,
can, left, up, plus).

    local:  true | exact(t) | atom(part, ...) | not(f) | and(f, g)
            | dia(p, f) | loop(p)
    path:   eps | right | down | test(f) | union(p, q) | concat(p, q)
            | star(p) | conv(p)
            | aut(states(s, ...), init, finals(s, ...), edge(s, p, s'), ...)

Automaton states are names or ``stage:register`` pairs.
"""
from __future__ import annotations

import re

from .errors import ParseError
from .table import (DOWN, EPS, FALSE, LEFT, RIGHT, TRUE, UP, LAnd, LAtom, LDiamond, LExact,
                    LLoop, LNot, LTrue, PathAutomaton, PAutomaton, PConcat, PConverse, PStar,
                    PStep, PTest, PUnion, l_box, l_can, l_implies, l_or, p_plus)


def _state(s) -> str:
    if isinstance(s, tuple):
        return ":".join(str(x) for x in s)
    return str(s)


def show(f) -> str:
    if isinstance(f, LTrue):
        return "true"
    if isinstance(f, LExact):
        return f"exact({f.transition.name})"
    if isinstance(f, LAtom):
        return "atom(" + ", ".join(str(x) for x in f.atom) + ")"
    if isinstance(f, LNot):
        return f"not({show(f.arg)})"
    if isinstance(f, LAnd):
        return f"and({show(f.left)}, {show(f.right)})"
    if isinstance(f, LDiamond):
        return f"dia({show(f.path)}, {show(f.arg)})"
    if isinstance(f, LLoop):
        return f"loop({show(f.path)})"
    if isinstance(f, PTest):
        return f"test({show(f.arg)})"
    if isinstance(f, PStep):
        return f.direction
    if isinstance(f, PUnion):
        return f"union({show(f.left)}, {show(f.right)})"
    if isinstance(f, PConcat):
        return f"concat({show(f.left)}, {show(f.right)})"
    if isinstance(f, PStar):
        return f"star({show(f.arg)})"
    if isinstance(f, PConverse):
        return f"conv({show(f.arg)})"
    if isinstance(f, PAutomaton):
        a = f.automaton
        parts = ["states(" + ", ".join(_state(s) for s in a.states) + ")", _state(a.initial),
                 "finals(" + ", ".join(_state(s) for s in sorted(a.finals, key=_state)) + ")"]
        parts += [f"edge({_state(s)}, {show(p)}, {_state(t)})" for s, p, t in a.edges]
        return "aut(" + ", ".join(parts) + ")"
    raise TypeError(f"not an LCPDL formula: {f!r}")


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*|\d+)|(.))")


class _Reader:
    def __init__(self, text: str, transitions: dict):
        self.text = text
        self.transitions = transitions
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            tok = m.group(1) or m.group(2)
            if tok is not None:
                self.tokens.append((tok, m.start(m.lastindex)))
            pos = m.end()
        self.i = 0

    def fail(self, message: str):
        col = self.tokens[self.i][1] + 1 if self.i < len(self.tokens) else len(self.text) + 1
        raise ParseError(message, 1, col)

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of formula")
        self.i += 1
        return tok

    def expect(self, tok: str):
        if self.peek() != tok:
            self.fail(f"expected {tok!r}, found {self.peek()!r}")
        self.i += 1

    def args(self, *kinds):
        self.expect("(")
        out = []
        for n, kind in enumerate(kinds):
            if n:
                self.expect(",")
            out.append(self.local() if kind == "f" else self.path())
        self.expect(")")
        return out

    def name(self) -> str:
        tok = self.next()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*|\d+", tok):
            self.i -= 1
            self.fail(f"expected a name, found {tok!r}")
        return tok

    def part(self) -> str:
        tok = self.next()
        if tok in ",()":
            self.i -= 1
            self.fail(f"expected an atom part, found {tok!r}")
        # two-character operators are split by the tokenizer
        if tok in "<>!" and self.peek() == "=":
            self.next()
            tok += "="
        return tok

    def local(self):
        word = self.name()
        if word == "true":
            return TRUE
        if word == "false":
            return FALSE
        if word == "exact":
            self.expect("(")
            name = self.name()
            self.expect(")")
            if name not in self.transitions:
                self.i -= 2
                self.fail(f"unknown transition {name!r}")
            return LExact(self.transitions[name])
        if word == "atom":
            self.expect("(")
            parts = [self.part()]
            while self.peek() == ",":
                self.next()
                parts.append(self.part())
            self.expect(")")
            return LAtom(tuple(parts))
        unary = {"not": LNot, "loop": LLoop, "can": l_can}
        if word in unary:
            kind = "p" if word in ("loop", "can") else "f"
            return unary[word](*self.args(kind))
        binary = {"and": ("ff", LAnd), "or": ("ff", l_or), "implies": ("ff", l_implies),
                  "dia": ("pf", LDiamond), "box": ("pf", l_box)}
        if word in binary:
            kinds, make = binary[word]
            return make(*self.args(*kinds))
        self.i -= 1
        self.fail(f"unknown local formula {word!r}")

    def state(self):
        first = self.name()
        if self.peek() == ":":
            self.next()
            return (int(first), self.name()) if first.isdigit() else (first, self.name())
        return first

    def path(self):
        word = self.name()
        steps = {"eps": EPS, "right": RIGHT, "down": DOWN, "left": LEFT, "up": UP}
        if word in steps:
            return steps[word]
        if word == "test":
            return PTest(*self.args("f"))
        unary = {"star": PStar, "conv": PConverse, "plus": p_plus}
        if word in unary:
            return unary[word](*self.args("p"))
        binary = {"union": PUnion, "concat": PConcat}
        if word in binary:
            return binary[word](*self.args("p", "p"))
        if word == "aut":
            return self.automaton()
        self.i -= 1
        self.fail(f"unknown path formula {word!r}")

    def states(self, keyword: str) -> list:
        if self.name() != keyword:
            self.i -= 1
            self.fail(f"expected {keyword}(...)")
        self.expect("(")
        out = []
        while self.peek() != ")":
            if out:
                self.expect(",")
            out.append(self.state())
        self.expect(")")
        return out

    def automaton(self):
        self.expect("(")
        states = self.states("states")
        self.expect(",")
        initial = self.state()
        self.expect(",")
        finals = self.states("finals")
        edges = []
        while self.peek() == ",":
            self.next()
            if self.name() != "edge":
                self.i -= 1
                self.fail("expected edge(...)")
            self.expect("(")
            src = self.state()
            self.expect(",")
            label = self.path()
            self.expect(",")
            dst = self.state()
            self.expect(")")
            edges.append((src, label, dst))
        self.expect(")")
        known = set(states)
        for s in [initial] + finals + [x for e in edges for x in (e[0], e[2])]:
            if s not in known:
                self.fail(f"automaton state {_state(s)} is not declared")
        return PAutomaton(PathAutomaton(tuple(states), initial, frozenset(finals), tuple(edges)))


def parse(text: str, transitions=None, kind: str = "local"):
    """Read a formula; ``transitions`` maps names to transitions for exact(t)."""
    r = _Reader(text, dict(transitions or {}))
    out = r.local() if kind == "local" else r.path()
    if r.peek() is not None:
        r.fail(f"unexpected {r.peek()!r} after the formula")
    return out
