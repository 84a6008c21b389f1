"""From algorithms and specs to LCPDL formulas over tables.

The provenance automaton A_r^h relates a row-0 position (i, 0) to every
position where register r holds process i's pid at stage h of that round
(0: before receiving, 1: after receiving, 2: after the updates).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import dataspec as D
from .errors import InvalidStagePair
from .model import DistributedAlgorithm, Transition
from .table import (DOWN, DUMMY, EPS, FALSE, LEFT, RIGHT, TRUE, UP, WRAP_LEFT, WRAP_RIGHT,
                    LAnd, LDiamond, LExact, LLoop, LNot, PAutomaton, PathAutomaton, PConcat,
                    PConverse, PStar, PTest, PUnion, atom, l_all, l_box, l_can, l_implies,
                    p_concat, p_plus, p_union, simplify)

STAGES = {"loc": (0, 1), "msg": (0, 1), "upd": (1, 2), "next": (2, 0)}
INITIAL = "iota"


def dummy_extend(algo: DistributedAlgorithm) -> DistributedAlgorithm:
    """Add a fresh state and the dummy transition that leads into s0."""
    if any(t.name == DUMMY for t in algo.transitions):
        return algo
    fresh = "__init"
    while fresh in algo.states:
        fresh += "_"
    hat = Transition(DUMMY, fresh, algo.initial)
    return DistributedAlgorithm(algo.name, algo.states + (fresh,), algo.initial,
                                algo.registers, algo.transitions + (hat,))


def dummy_of(algo: DistributedAlgorithm) -> Transition:
    return algo.transition(DUMMY)


class _Alphabet:
    """What the transitions of an algorithm can actually do.

    Used to drop conjuncts/edges whose atoms never hold; the resulting
    formulas denote the same relations on every table over the algorithm.
    """

    def __init__(self, algo: DistributedAlgorithm, prune: bool):
        self.algo = algo
        self.prune = prune
        atoms = set()
        for t in algo.transitions:
            atoms |= t.constituents
        self.atoms = atoms

    def has(self, *a) -> bool:
        return not self.prune or tuple(a) in self.atoms

    def can_message(self, r: str, r2: str) -> bool:
        return ((self.has("send", "right", r) and self.has("recv", "left", r2))
                or (self.has("send", "left", r) and self.has("recv", "right", r2)))


class Compiler:
    def __init__(self, algo: DistributedAlgorithm, prune: bool = True):
        self.algo = dummy_extend(algo)
        self.regs = self.algo.registers
        self.alpha = _Alphabet(self.algo, prune)
        self._msg = {}
        self._aut = {}

    # paths between register stages: msg, loc, upd, next

    def msg(self, r: str, r2: str):
        key = (r, r2)
        if key not in self._msg:
            fwd = PTest(atom("fwd"))
            rightward = p_concat(PTest(atom("send", "right", r)),
                                 PStar(PConcat(WRAP_RIGHT, fwd)), WRAP_RIGHT,
                                 PTest(atom("recv", "left", r2)))
            leftward = p_concat(PTest(atom("send", "left", r)),
                                PStar(PConcat(WRAP_LEFT, fwd)), WRAP_LEFT,
                                PTest(atom("recv", "right", r2)))
            self._msg[key] = PUnion(rightward, leftward)
        return self._msg[key]

    def theta_path(self, theta: str, r: str, r2: str, h: int, h2: int):
        if STAGES.get(theta) != (h, h2):
            raise InvalidStagePair(f"{theta} does not lead from stage {h} to stage {h2}")
        if theta == "msg":
            return self.msg(r, r2)
        if theta == "loc":
            if r != r2:
                return PTest(FALSE)
            return PTest(l_all(LNot(l_can(PConverse(self.msg(rb, r))))
                               for rb in self.regs if self.alpha.can_message(rb, r)))
        if theta == "upd":
            if r != r2:
                return PTest(atom("update", r2, r))
            return PTest(l_all(LNot(atom("update", r, rb))
                               for rb in self.regs if rb != r and self.alpha.has("update", r, rb)))
        if r != r2:
            return PTest(FALSE)
        return DOWN

    def provenance_automaton(self, r: str, h: int) -> PathAutomaton:
        key = (r, h)
        if key in self._aut:
            return self._aut[key]
        states = (INITIAL,) + tuple((s, x) for s in (0, 1, 2) for x in self.regs)
        edges = [(INITIAL, PTest(LNot(l_can(UP))), (0, x)) for x in self.regs]
        for theta, (s1, s2) in STAGES.items():
            for x in self.regs:
                for y in self.regs:
                    if theta in ("loc", "next") and x != y:
                        continue  # ?false: the empty relation
                    if theta == "msg" and not self.alpha.can_message(x, y):
                        continue
                    if theta == "upd" and x != y and not self.alpha.has("update", y, x):
                        continue
                    edges.append(((s1, x), self.theta_path(theta, x, y, s1, s2), (s2, y)))
        aut = PathAutomaton(states, INITIAL, frozenset({(h, r)}), tuple(edges))
        self._aut[key] = aut
        return aut

    def A(self, r: str, h: int):
        return PAutomaton(self.provenance_automaton(r, h))

    # the run-characterising formula

    def guard_pairs(self, op: str) -> list:
        pairs = set()
        for t in self.algo.transitions:
            pairs |= {(a, b) for a, o, b in t.guards if o == op}
        return sorted(pairs)

    def psi_eq(self):
        everywhere = PStar(PUnion(RIGHT, DOWN))
        body = l_all(l_implies(atom("guard", r, "=", r2),
                               LLoop(PConcat(PConverse(self.A(r, 1)), self.A(r2, 1))))
                     for r, r2 in self.guard_pairs("="))
        return l_box(everywhere, body)

    def pi_less(self):
        steps = [p_concat(self.A(r, 1), PTest(atom("guard", r, "<", r2)),
                          PConverse(self.A(r2, 1)))
                 for r, r2 in self.guard_pairs("<")]
        if not steps:
            return PTest(FALSE)
        return p_plus(p_union(steps))

    def psi_less(self, pi_less=None):
        pi_less = pi_less if pi_less is not None else self.pi_less()
        return LNot(LDiamond(PStar(RIGHT), LLoop(pi_less)))

    def psi_col(self):
        hat = LExact(dummy_of(self.algo))
        top = LNot(l_can(UP))
        local = [l_implies(top, hat), l_implies(LNot(top), LNot(hat))]
        for s in self.algo.states:
            local.append(l_implies(atom("goto", s), l_box(DOWN, atom("state", s))))
        return l_box(PStar(PUnion(RIGHT, DOWN)), l_all(local))


@dataclass
class CompiledAlgorithm:
    dummy_extended: DistributedAlgorithm
    psi_col: object
    psi_eq: object
    psi_less: object
    pi_less: object
    automata: dict  # (register, stage) -> PathAutomaton
    psi_D: object
    compiler: Compiler = field(repr=False, default=None)

    def A(self, r: str, h: int):
        return PAutomaton(self.automata[(r, h)])


def compile_algorithm(algo: DistributedAlgorithm, prune: bool = True) -> CompiledAlgorithm:
    c = Compiler(algo, prune)
    col, eq, pl = c.psi_col(), c.psi_eq(), c.pi_less()
    less = c.psi_less(pl)
    automata = {(r, h): c.provenance_automaton(r, h) for r in c.regs for h in (1, 2)}
    # the column constraint goes first: it is cheap and fails most often
    return CompiledAlgorithm(c.algo, col, eq, less, pl, automata,
                             LAnd(col, LAnd(eq, less)), c)


# convenience wrappers with the signatures used in the documentation

def theta_path(algo, theta, r, r2, h, h2, prune: bool = True):
    return Compiler(algo, prune).theta_path(theta, r, r2, h, h2)


def provenance_automaton(algo, r, h, prune: bool = True) -> PathAutomaton:
    return Compiler(algo, prune).provenance_automaton(r, h)


def build_psi_eq(algo):
    return Compiler(algo).psi_eq()


def build_pi_less(algo):
    return Compiler(algo).pi_less()


def build_psi_less(algo):
    return Compiler(algo).psi_less()


def build_psi_col(algo):
    return Compiler(algo).psi_col()


# specs

def translate_path(compiled: CompiledAlgorithm, pi):
    if isinstance(pi, D.Test):
        return PTest(translate_local(compiled, pi.arg))
    if isinstance(pi, D.Step):
        return {"eps": EPS, "right": WRAP_RIGHT, "left": WRAP_LEFT,
                "up": UP, "down": DOWN}[pi.direction]
    if isinstance(pi, D.Union):
        return PUnion(translate_path(compiled, pi.left), translate_path(compiled, pi.right))
    if isinstance(pi, D.Concat):
        return PConcat(translate_path(compiled, pi.left), translate_path(compiled, pi.right))
    if isinstance(pi, D.Star):
        return PStar(translate_path(compiled, pi.arg))
    raise TypeError(f"not a path formula: {pi!r}")


def translate_local(compiled: CompiledAlgorithm, phi):
    t = lambda x: translate_local(compiled, x)  # noqa: E731
    if isinstance(phi, D.Marked):
        return LNot(l_can(LEFT))
    if isinstance(phi, D.State):
        return atom("goto", phi.name)
    if isinstance(phi, D.Not):
        return LNot(t(phi.arg))
    if isinstance(phi, D.And):
        return LAnd(t(phi.left), t(phi.right))
    if isinstance(phi, D.Implies):
        return l_implies(t(phi.left), t(phi.right))
    if isinstance(phi, D.Box):
        return l_box(translate_path(compiled, phi.path), t(phi.arg))
    if isinstance(phi, D.Guard):
        middle = {
            "<": [compiled.pi_less],
            "<=": [PUnion(compiled.pi_less, EPS)],
            "=": [],
            "!=": [PUnion(p_plus(LEFT), p_plus(RIGHT))],
        }[phi.op]
        parts = ([translate_path(compiled, phi.left_path), PConverse(compiled.A(phi.left, 2))]
                 + middle
                 + [compiled.A(phi.right, 2), PConverse(translate_path(compiled, phi.right_path))])
        return LLoop(p_concat(*parts))
    raise TypeError(f"not a local formula: {phi!r}")


def negated_spec_formula(compiled: CompiledAlgorithm, spec) -> object:
    """psi_D and not phi~: its models are the tables of violating runs."""
    body = spec.body if isinstance(spec, D.Spec) else spec
    negated = simplify(LNot(translate_local(compiled, body)))
    if negated == FALSE:
        return FALSE
    return compiled.psi_D if negated == TRUE else LAnd(compiled.psi_D, negated)
