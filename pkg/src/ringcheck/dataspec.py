"""The specification logic over runs: syntax, semantics and the fragment check."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import relations as rel
from .model import Run, enumerate_runs
from .syntax import node

DIRECTIONS = ("eps", "left", "right", "up", "down")
COMPARISONS = ("=", "!=", "<", "<=")
ORDER = ("<", "<=")


# local formulas

@node
class Marked:
    pass


@node
class State:
    name: str


@node
class Not:
    arg: object


@node
class And:
    left: object
    right: object


@node
class Implies:
    left: object
    right: object


@node
class Box:
    path: object
    arg: object


@node
class Guard:
    """Some register ``left`` reached via ``left_path`` compares to ``right``
    reached via ``right_path``."""

    left: str
    left_path: object
    op: str
    right: str
    right_path: object


# path formulas

@node
class Test:
    arg: object


@node
class Step:
    direction: str


@node
class Union:
    left: object
    right: object


@node
class Concat:
    left: object
    right: object


@node
class Star:
    arg: object


FALSE = And(Marked(), Not(Marked()))
TRUE = Not(FALSE)


def or_(a, b):
    return Not(And(Not(a), Not(b)))


def diamond(path, arg):
    return Not(Box(path, Not(arg)))


def concat(*paths):
    out = paths[0]
    for p in paths[1:]:
        out = Concat(out, p)
    return out


@dataclass(frozen=True)
class Spec:
    name: str
    body: object
    definitions: tuple = ()  # ((name, formula), ...) in source order

    def definition(self, name):
        return dict(self.definitions)[name]


class RunEvaluator:
    """Evaluates formulas on one run for one marked process, with memo tables."""

    def __init__(self, run: Run, m: int):
        self.run = run
        self.m = m
        self.n = run.ring.size
        self.rows = run.length + 1
        self.size = self.n * self.rows
        self._sat = {}
        self._rel = {}
        self._vals = {}

    def index(self, i: int, j: int) -> int:
        return (i - 1) * self.rows + j

    def position(self, x: int) -> tuple:
        return x // self.rows + 1, x % self.rows

    def values(self, r: str) -> list:
        v = self._vals.get(r)
        if v is None:
            v = [self.run.configs[x % self.rows].regs[x // self.rows][r]
                 for x in range(self.size)]
            self._vals[r] = v
        return v

    def holds(self, pos, phi) -> bool:
        return bool(self.sat(phi) >> self.index(*pos) & 1)

    def sat(self, phi) -> int:
        out = self._sat.get(phi)
        if out is None:
            out = self._compute_sat(phi)
            self._sat[phi] = out
        return out

    def _compute_sat(self, phi) -> int:
        full = (1 << self.size) - 1
        if isinstance(phi, Marked):
            return sum(1 << self.index(self.m, j) for j in range(self.rows))
        if isinstance(phi, State):
            out = 0
            for x in range(self.size):
                i, j = self.position(x)
                if self.run.configs[j].states[i - 1] == phi.name:
                    out |= 1 << x
            return out
        if isinstance(phi, Not):
            return full & ~self.sat(phi.arg)
        if isinstance(phi, And):
            return self.sat(phi.left) & self.sat(phi.right)
        if isinstance(phi, Implies):
            return (full & ~self.sat(phi.left)) | self.sat(phi.right)
        if isinstance(phi, Box):
            r, good = self.relation(phi.path), self.sat(phi.arg)
            return sum(1 << x for x in range(self.size) if not r[x] & ~good)
        if isinstance(phi, Guard):
            return self._guard(phi)
        raise TypeError(f"not a local formula: {phi!r}")

    def _guard(self, g: Guard) -> int:
        r1, r2 = self.relation(g.left_path), self.relation(g.right_path)
        v1, v2 = self.values(g.left), self.values(g.right)
        out = 0
        for x in range(self.size):
            if not r1[x] or not r2[x]:
                continue
            a = {v1[y] for y in rel.bits(r1[x])}
            b = {v2[y] for y in rel.bits(r2[x])}
            if compare_sets(a, g.op, b):
                out |= 1 << x
        return out

    def relation(self, pi) -> tuple:
        out = self._rel.get(pi)
        if out is None:
            out = self._compute_rel(pi)
            self._rel[pi] = out
        return out

    def _compute_rel(self, pi) -> tuple:
        n, rows, size = self.n, self.rows, self.size
        if isinstance(pi, Test):
            return rel.diagonal(self.sat(pi.arg), size)
        if isinstance(pi, Step):
            d = pi.direction
            out = []
            for x in range(size):
                i, j = self.position(x)
                if d == "eps":
                    out.append(1 << x)
                elif d == "right":
                    out.append(1 << self.index(i % n + 1, j))
                elif d == "left":
                    out.append(1 << self.index((i - 2) % n + 1, j))
                elif d == "down":
                    out.append(1 << (x + 1) if j < rows - 1 else 0)
                elif d == "up":
                    out.append(1 << (x - 1) if j > 0 else 0)
                else:
                    raise ValueError(f"unknown direction {d!r}")
            return tuple(out)
        if isinstance(pi, Union):
            return rel.union(self.relation(pi.left), self.relation(pi.right))
        if isinstance(pi, Concat):
            return rel.compose(self.relation(pi.left), self.relation(pi.right))
        if isinstance(pi, Star):
            return rel.star(self.relation(pi.arg))
        raise TypeError(f"not a path formula: {pi!r}")


def compare_sets(a: set, op: str, b: set) -> bool:
    """Is there some x in a and y in b with x op y?"""
    if not a or not b:
        return False
    if op == "=":
        return not a.isdisjoint(b)
    if op == "!=":
        return len(a | b) > 1
    if op == "<":
        return min(a) < max(b)
    if op == "<=":
        return min(a) <= max(b)
    raise ValueError(f"unknown comparison {op!r}")


def eval_path(run: Run, m: int, pi) -> set:
    """The relation of a path formula as a set of ((i, j), (i', j')) pairs."""
    ev = RunEvaluator(run, m)
    return {(ev.position(x), ev.position(y)) for x, y in rel.pairs(ev.relation(pi))}


def eval_local(run: Run, m: int, pos, phi) -> bool:
    return RunEvaluator(run, m).holds(pos, phi)


# fragment check

PROVED = "ProvedBySyntax"
WAIVED = "Waived"
REJECTED = "Rejected"


@dataclass
class FragmentReport:
    polarity_ok: bool
    unambiguity: list = field(default_factory=list)  # [(guard, side, path, status)]
    diagnostics: list = field(default_factory=list)

    @property
    def admissible(self) -> bool:
        return self.polarity_ok and all(e[3] != REJECTED for e in self.unambiguity)

    @property
    def waived(self) -> bool:
        return any(e[3] == WAIVED for e in self.unambiguity)


def _flatten(pi) -> list:
    if isinstance(pi, Concat):
        return _flatten(pi.left) + _flatten(pi.right)
    return [pi]


def _negation_of(a, b) -> bool:
    return a == Not(b) or b == Not(a)


def is_unambiguous(pi) -> bool:
    """Syntactic sufficient condition for a path to be a partial function."""
    parts = _flatten(pi)
    k = 0
    while k < len(parts):
        p = parts[k]
        nxt = parts[k + 1] if k + 1 < len(parts) else None
        if isinstance(p, Star) and isinstance(nxt, Test):
            body = p.arg
            # first-match loop (?a . d)* . ?!a
            if (isinstance(body, Concat) and isinstance(body.left, Test)
                    and isinstance(body.right, Step) and body.right.direction != "eps"
                    and _negation_of(body.left.arg, nxt.arg)):
                k += 2
                continue
            # d* . ?marked walks the row to the unique marked process
            if (isinstance(body, Step) and body.direction in ("left", "right")
                    and nxt.arg == Marked()):
                k += 2
                continue
            return False
        if isinstance(p, (Step, Test)):
            k += 1
            continue
        return False
    return True


def check_fragment(spec_or_formula, waive_unambiguity: bool = False) -> FragmentReport:
    body = spec_or_formula.body if isinstance(spec_or_formula, Spec) else spec_or_formula
    report = FragmentReport(True)

    def visit(phi, negative: bool, in_test: bool):
        if isinstance(phi, Not):
            visit(phi.arg, True, in_test)
        elif isinstance(phi, And):
            visit(phi.left, negative, in_test)
            visit(phi.right, negative, in_test)
        elif isinstance(phi, Implies):
            visit(phi.left, True, in_test)
            visit(phi.right, negative, in_test)
        elif isinstance(phi, Box):
            visit_path(phi.path)
            visit(phi.arg, negative, in_test)
        elif isinstance(phi, Guard):
            visit_path(phi.left_path)
            visit_path(phi.right_path)
            if phi.op in ORDER:
                if negative or in_test:
                    report.polarity_ok = False
                    where = "inside a test" if in_test else "under a negation or left of =>"
                    report.diagnostics.append(f"order guard {show(phi)} occurs {where}")
                for side, path in (("left", phi.left_path), ("right", phi.right_path)):
                    if is_unambiguous(path):
                        status = PROVED
                    elif waive_unambiguity:
                        status = WAIVED
                        report.diagnostics.append(
                            f"unambiguity of {show_path(path)} in {show(phi)} is assumed, not proved")
                    else:
                        status = REJECTED
                        report.diagnostics.append(
                            f"path {show_path(path)} in {show(phi)} is not provably unambiguous")
                    report.unambiguity.append((phi, side, path, status))

    def visit_path(pi):
        if isinstance(pi, Test):
            visit(pi.arg, True, True)
        elif isinstance(pi, (Union, Concat)):
            visit_path(pi.left)
            visit_path(pi.right)
        elif isinstance(pi, Star):
            visit_path(pi.arg)

    visit(body, False, False)
    return report


def spec_holds_explicit(algo, ring, spec, b: int) -> bool:
    body = spec.body if isinstance(spec, Spec) else spec
    for run in enumerate_runs(algo, ring, b):
        for m in range(1, ring.size + 1):
            if not eval_local(run, m, (m, 0), body):
                return False
    return True


def mentions_marked(phi) -> bool:
    from .syntax import children
    if isinstance(phi, Marked):
        return True
    return any(mentions_marked(c) for c in children(phi))


# printing in the spec language

_DIR = {"eps": "eps", "left": "left", "right": "right", "up": "up", "down": "down"}


def show(phi) -> str:
    if phi == FALSE:
        return "false"
    if phi == TRUE:
        return "true"
    if isinstance(phi, Marked):
        return "marked"
    if isinstance(phi, State):
        return phi.name
    if isinstance(phi, Not):
        a = phi.arg
        if isinstance(a, Box) and isinstance(a.arg, Not):
            return f"<{show_path(a.path)}>{_atomic(a.arg.arg)}"
        if (isinstance(a, And) and isinstance(a.left, Not) and isinstance(a.right, Not)):
            return f"({show(a.left.arg)} | {show(a.right.arg)})"
        return "!" + _atomic(a)
    if isinstance(phi, And):
        return f"({show(phi.left)} & {show(phi.right)})"
    if isinstance(phi, Implies):
        return f"({show(phi.left)} => {show(phi.right)})"
    if isinstance(phi, Box):
        return f"[{show_path(phi.path)}]{_atomic(phi.arg)}"
    if isinstance(phi, Guard):
        return (f"(exists {phi.left}@{_path_atomic(phi.left_path)} {phi.op} "
                f"{phi.right}@{_path_atomic(phi.right_path)})")
    raise TypeError(phi)


def _atomic(phi) -> str:
    s = show(phi)
    if isinstance(phi, (Box, Not)) and not s.startswith("("):
        return f"({s})"
    return s


def show_path(pi) -> str:
    if isinstance(pi, Test):
        return "?" + _atomic(pi.arg)
    if isinstance(pi, Step):
        return _DIR[pi.direction]
    if isinstance(pi, Union):
        return f"({show_path(pi.left)} + {show_path(pi.right)})"
    if isinstance(pi, Concat):
        return f"({show_path(pi.left)} . {show_path(pi.right)})"
    if isinstance(pi, Star):
        return f"{_path_atomic(pi.arg)}*"
    raise TypeError(pi)


def _path_atomic(pi) -> str:
    s = show_path(pi)
    if isinstance(pi, (Star, Test)):
        return f"({s})"
    return s
