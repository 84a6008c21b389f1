"""Distributed algorithms on rings and their synchronous round semantics.

Processes are numbered 1..n in the public API; rows (rounds) start at 0.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .errors import (
    DuplicateRecvRegister,
    DuplicateTransition,
    DuplicateUpdateTarget,
    IdRegisterWritten,
    SizeMismatch,
    InapplicableTuple,
    RingcheckError,
    UndeclaredIdentifier,
    ValidationError,
)

ID = "id"
LESS = "<"
EQUAL = "="


@dataclass(frozen=True, eq=False)
class Transition:
    """One transition of an algorithm.

    Two transitions are equal when they consist of the same commands, guards,
    updates, source and target; the name is only a label.
    """

    name: str
    source: str
    target: str
    fwd: bool = False
    send_left: Optional[str] = None
    send_right: Optional[str] = None
    recv_left: Optional[str] = None
    recv_right: Optional[str] = None
    guards: frozenset = frozenset()  # {(r, "<" | "=", r')}
    updates: frozenset = frozenset()  # {(target, source)}

    @cached_property
    def constituents(self) -> frozenset:
        """The transition viewed as a set of atoms (the LCPDL alphabet)."""
        out = {("state", self.source), ("goto", self.target)}
        if self.fwd:
            out.add(("fwd",))
        if self.send_left is not None:
            out.add(("send", "left", self.send_left))
        if self.send_right is not None:
            out.add(("send", "right", self.send_right))
        if self.recv_left is not None:
            out.add(("recv", "left", self.recv_left))
        if self.recv_right is not None:
            out.add(("recv", "right", self.recv_right))
        for r, op, r2 in self.guards:
            out.add(("guard", r, op, r2))
        for tgt, src in self.updates:
            out.add(("update", tgt, src))
        return frozenset(out)

    def __eq__(self, other):
        if not isinstance(other, Transition):
            return NotImplemented
        return self.constituents == other.constituents

    def __hash__(self):
        return hash(self.constituents)

    def __repr__(self):
        return f"Transition({self.name})"

    @property
    def sends(self) -> bool:
        return self.send_left is not None or self.send_right is not None

    def without_sends(self) -> "Transition":
        return Transition(self.name, self.source, self.target, False, None, None,
                          self.recv_left, self.recv_right, self.guards, self.updates)

    def describe(self) -> str:
        parts = []
        if self.fwd:
            parts.append("fwd")
        if self.send_left is not None:
            parts.append(f"send left {self.send_left}")
        if self.send_right is not None:
            parts.append(f"send right {self.send_right}")
        if self.recv_left is not None:
            parts.append(f"recv left {self.recv_left}")
        if self.recv_right is not None:
            parts.append(f"recv right {self.recv_right}")
        for r, op, r2 in sorted(self.guards):
            parts.append(f"guard {r} {op} {r2}")
        for tgt, src in sorted(self.updates):
            parts.append(f"set {tgt} := {src}")
        parts.append(f"goto {self.target}")
        return f"trans {self.name}: {self.source}: " + "; ".join(parts)


@dataclass(frozen=True)
class DistributedAlgorithm:
    name: str
    states: tuple
    initial: str
    registers: tuple
    transitions: tuple

    def transition(self, name: str) -> Transition:
        for t in self.transitions:
            if t.name == name:
                return t
        raise KeyError(name)

    @cached_property
    def by_source(self) -> dict:
        out = {s: [] for s in self.states}
        for t in self.transitions:
            out.setdefault(t.source, []).append(t)
        return {s: tuple(ts) for s, ts in out.items()}

    def describe(self) -> str:
        lines = [f"algorithm {self.name}",
                 "states: " + ", ".join(self.states),
                 f"init: {self.initial}",
                 "registers: " + ", ".join(self.registers)]
        lines += [t.describe() for t in self.transitions]
        return "\n".join(lines) + "\n"


@dataclass
class RawTransition:
    name: str
    source: str
    statements: list  # tuples such as ("send", "left", "id"), ("goto", "s")
    line: Optional[int] = None


@dataclass
class RawAlgorithm:
    name: str
    states: list
    initial: str
    registers: list
    transitions: list = field(default_factory=list)


def validate_algorithm(raw: RawAlgorithm) -> DistributedAlgorithm:
    """Check the well-formedness conditions and build the algorithm."""
    states = list(raw.states)
    registers = list(raw.registers)
    if len(set(states)) != len(states):
        raise ValidationError("duplicate state declaration")
    if len(set(registers)) != len(registers):
        raise ValidationError("duplicate register declaration")
    if ID not in registers:
        registers.insert(0, ID)
    if raw.initial not in states:
        raise UndeclaredIdentifier(f"initial state {raw.initial!r} is not declared")
    state_set, reg_set = set(states), set(registers)

    built = []
    names = set()
    for rt in raw.transitions:
        name = rt.name
        if name in names:
            raise ValidationError("duplicate transition name", name)
        names.add(name)

        def need_reg(r):
            if r not in reg_set:
                raise UndeclaredIdentifier(f"register {r!r} is not declared", name)

        def need_state(s):
            if s not in state_set:
                raise UndeclaredIdentifier(f"state {s!r} is not declared", name)

        need_state(rt.source)
        fields = {"fwd": False, "send_left": None, "send_right": None,
                  "recv_left": None, "recv_right": None}
        guards, updates, target = set(), {}, None
        for st in rt.statements:
            kind = st[0]
            if kind == "skip":
                continue
            if kind == "fwd":
                fields["fwd"] = True
            elif kind in ("send", "recv"):
                _, side, r = st
                need_reg(r)
                key = f"{kind}_{side}"
                if fields[key] is not None:
                    raise ValidationError(f"more than one {kind} {side}", name)
                if kind == "recv" and r == ID:
                    raise IdRegisterWritten("register id cannot receive", name)
                fields[key] = r
            elif kind == "guard":
                _, r, op, r2 = st
                need_reg(r)
                need_reg(r2)
                if op not in (LESS, EQUAL):
                    raise ValidationError(f"unsupported comparison {op!r}", name)
                guards.add((r, op, r2))
            elif kind == "set":
                _, tgt, src = st
                need_reg(tgt)
                need_reg(src)
                if tgt == ID:
                    raise IdRegisterWritten("register id cannot be updated", name)
                if tgt in updates:
                    raise DuplicateUpdateTarget(f"register {tgt!r} updated twice", name)
                updates[tgt] = src
            elif kind == "goto":
                need_state(st[1])
                if target is not None:
                    raise ValidationError("more than one goto", name)
                target = st[1]
            else:
                raise ValidationError(f"unknown statement {kind!r}", name)
        if target is None:
            raise ValidationError("missing goto", name)
        if fields["fwd"] and (fields["send_left"] or fields["send_right"]):
            raise ValidationError("fwd excludes send commands", name)
        if (fields["recv_left"] is not None
                and fields["recv_left"] == fields["recv_right"]):
            raise DuplicateRecvRegister(
                f"register {fields['recv_left']!r} receives from both sides", name)
        t = Transition(name, rt.source, target, guards=frozenset(guards),
                       updates=frozenset(updates.items()), **fields)
        for other in built:
            if other == t:
                raise DuplicateTransition(f"same as transition {other.name}", name)
        built.append(t)
    return DistributedAlgorithm(raw.name, tuple(states), raw.initial,
                                tuple(registers), tuple(built))


@dataclass(frozen=True)
class Ring:
    pids: tuple

    def __post_init__(self):
        object.__setattr__(self, "pids", tuple(self.pids))
        if not self.pids:
            raise RingcheckError("a ring needs at least one process")
        if len(set(self.pids)) != len(self.pids):
            raise RingcheckError(f"pids are not pairwise distinct: {self.pids}")
        if any(not isinstance(p, int) or p < 0 for p in self.pids):
            raise RingcheckError("pids must be natural numbers")

    @property
    def size(self) -> int:
        return len(self.pids)

    def rotate(self, s: int = 1) -> "Ring":
        return Ring(self.pids[s:] + self.pids[:s])

    def __str__(self):
        return f"({self.size}:" + ",".join(map(str, self.pids)) + ")"


@dataclass(frozen=True)
class Configuration:
    states: tuple
    regs: tuple  # one dict register -> pid per process

    @property
    def size(self) -> int:
        return len(self.states)


def initial_configuration(algo: DistributedAlgorithm, ring: Ring) -> Configuration:
    return Configuration(
        tuple(algo.initial for _ in ring.pids),
        tuple({r: p for r in algo.registers} for p in ring.pids),
    )


def between(i: int, j: int, n: int) -> set:
    if i < j:
        return set(range(i + 1, j))
    return set(range(1, j)) | set(range(i + 1, n + 1))


def aux_right(config: Configuration, tup: Sequence[Transition], r: str, i: int,
              r2: str, j: int) -> bool:
    """The value of r at process i travels right and lands in r2 at process j."""
    n = _check_size(config, tup)
    return (tup[i - 1].send_right == r and tup[j - 1].recv_left == r2
            and all(tup[k - 1].fwd for k in between(i, j, n)))


def aux_left(config: Configuration, tup: Sequence[Transition], r: str, i: int,
             r2: str, j: int) -> bool:
    n = _check_size(config, tup)
    return (tup[i - 1].send_left == r and tup[j - 1].recv_right == r2
            and all(tup[k - 1].fwd for k in between(j, i, n)))


def _check_size(config, tup) -> int:
    n = config.size
    if len(tup) != n:
        raise SizeMismatch(f"tuple has {len(tup)} transitions, ring has {n} processes")
    return n


def _nearest_non_fwd(tup, j: int, d: int) -> Optional[int]:
    n = len(tup)
    for s in range(1, n + 1):
        i = (j + d * s) % n
        if not tup[i].fwd:
            return i
    return None


def deliveries(tup: Sequence[Transition]) -> dict:
    """Map (receiver, register) -> (sender, register), 0-based processes.

    A message travels until the first process that does not forward it; the
    walk may come all the way back to the receiver.
    """
    out = {}
    for j, t in enumerate(tup):
        if t.recv_left is not None:
            i = _nearest_non_fwd(tup, j, -1)
            if i is not None and tup[i].send_right is not None:
                out[(j, t.recv_left)] = (i, tup[i].send_right)
        if t.recv_right is not None:
            i = _nearest_non_fwd(tup, j, +1)
            if i is not None and tup[i].send_left is not None:
                out[(j, t.recv_right)] = (i, tup[i].send_left)
    return out


def intermediate_assignment(config: Configuration, tup: Sequence[Transition]) -> list:
    _check_size(config, tup)
    hat = [dict(rho) for rho in config.regs]
    for (j, r2), (i, r) in deliveries(tup).items():
        hat[j][r2] = config.regs[i][r]
    return hat


def _holds(rho, guard) -> bool:
    r, op, r2 = guard
    return rho[r] < rho[r2] if op == LESS else rho[r] == rho[r2]


def _apply_updates(hat_j: dict, t: Transition) -> dict:
    new = dict(hat_j)
    for tgt, src in t.updates:
        new[tgt] = hat_j[src]
    return new


def why_inapplicable(config: Configuration, tup: Sequence[Transition]):
    """Return None if the step applies, else (process, reason)."""
    _check_size(config, tup)
    hat = intermediate_assignment(config, tup)
    for j, t in enumerate(tup):
        if t.source != config.states[j]:
            return j + 1, f"{t.name} starts in {t.source}, process is in {config.states[j]}"
        for g in sorted(t.guards):
            if not _holds(hat[j], g):
                return j + 1, f"guard {' '.join(g)} of {t.name} fails"
    return None


def step(config: Configuration, tup: Sequence[Transition]) -> Optional[Configuration]:
    """The successor configuration, or None when the tuple does not apply."""
    _check_size(config, tup)
    hat = intermediate_assignment(config, tup)
    for j, t in enumerate(tup):
        if t.source != config.states[j]:
            return None
        if not all(_holds(hat[j], g) for g in t.guards):
            return None
    return Configuration(tuple(t.target for t in tup),
                         tuple(_apply_updates(hat[j], t) for j, t in enumerate(tup)))


@dataclass(frozen=True)
class Run:
    """A ring, configurations C_0..C_k and the tuples between them.

    ``provenance[j][i-1]`` is a triple of dicts (stage 0, 1, 2) mapping every
    register to the process whose pid it holds at that stage of round j.
    """

    algorithm: DistributedAlgorithm
    ring: Ring
    configs: tuple
    tuples: tuple
    provenance: tuple

    @property
    def length(self) -> int:
        return len(self.tuples)

    def prefix(self, j: int) -> "Run":
        return Run(self.algorithm, self.ring, self.configs[: j + 1], self.tuples[:j],
                   self.provenance[: j + 1])

    def state(self, i: int, j: int) -> str:
        return self.configs[j].states[i - 1]

    def value(self, i: int, j: int, r: str) -> int:
        return self.configs[j].regs[i - 1][r]


def _initial_provenance(algo, n):
    return tuple(tuple({r: i for r in algo.registers} for _ in range(3))
                 for i in range(1, n + 1))


def _next_provenance(prev_row, tup, dl):
    """Provenance of round j given round j-1 (stage 2 is the carried value)."""
    row = []
    stage0 = [prev[2] for prev in prev_row]
    for j, t in enumerate(tup):
        s1 = dict(stage0[j])
        for r2 in (t.recv_left, t.recv_right):
            if r2 is not None and (j, r2) in dl:
                i, r = dl[(j, r2)]
                s1[r2] = stage0[i][r]
        row.append((stage0[j], s1, _apply_updates(s1, t)))
    return tuple(row)


def replay(algo: DistributedAlgorithm, ring: Ring, tuples: Sequence[Sequence[Transition]]) -> Run:
    """Build the run for a given tuple sequence, or raise InapplicableTuple."""
    if not tuples:
        raise RingcheckError("a run needs at least one round")
    configs = [initial_configuration(algo, ring)]
    prov = [_initial_provenance(algo, ring.size)]
    for j, tup in enumerate(tuples, start=1):
        tup = tuple(tup)
        if len(tup) != ring.size:
            raise SizeMismatch(f"round {j}: {len(tup)} transitions for {ring.size} processes")
        bad = why_inapplicable(configs[-1], tup)
        if bad is not None:
            raise InapplicableTuple(j, bad[0], bad[1])
        configs.append(step(configs[-1], tup))
        prov.append(_next_provenance(prov[-1], tup, deliveries(tup)))
    return Run(algo, ring, tuple(configs), tuple(tuple(t) for t in tuples), tuple(prov))


def is_run(run: Run) -> bool:
    """Re-check a run from scratch with ``step``."""
    c = initial_configuration(run.algorithm, run.ring)
    if c != run.configs[0]:
        return False
    for j, tup in enumerate(run.tuples, start=1):
        c = step(c, tup)
        if c is None or c != run.configs[j]:
            return False
    return True


def _signature(t: Transition) -> tuple:
    return t.fwd, t.send_left, t.send_right, t.recv_left, t.recv_right


def _applicable(config: Configuration, choices: list) -> list:
    """All applicable tuples, in the order of itertools.product(*choices).

    Message delivery only depends on the send/receive/fwd commands, so the
    intermediate assignment is computed once per combination of those and
    the guards are then filtered process by process.
    """
    groups = []
    for options in choices:
        by_sig = {}
        for x, t in enumerate(options):
            by_sig.setdefault(_signature(t), []).append((x, t))
        groups.append(list(by_sig.values()))
    out = []
    for combo in itertools.product(*groups):
        hat = intermediate_assignment(config, [g[0][1] for g in combo])
        passing = [[(x, t) for x, t in g if all(_holds(hat[j], gd) for gd in t.guards)]
                   for j, g in enumerate(combo)]
        for picked in itertools.product(*passing):
            out.append((tuple(x for x, _ in picked), tuple(t for _, t in picked)))
    out.sort(key=lambda e: e[0])
    return [tup for _, tup in out]


def enumerate_runs(algo: DistributedAlgorithm, ring: Ring, b: int) -> Iterator[Run]:
    """All runs of length 1..b, depth first (shorter prefixes first)."""
    if b < 1:
        raise RingcheckError("round bound must be at least 1")
    n = ring.size
    configs = [initial_configuration(algo, ring)]
    prov = [_initial_provenance(algo, n)]
    tuples = []

    def extend():
        c = configs[-1]
        for tup in _applicable(c, [algo.by_source.get(s, ()) for s in c.states]):
            nxt = Configuration(tuple(t.target for t in tup),
                                tuple(_apply_updates(h, t)
                                      for h, t in zip(intermediate_assignment(c, tup), tup)))
            configs.append(nxt)
            tuples.append(tup)
            prov.append(_next_provenance(prov[-1], tup, deliveries(tup)))
            yield Run(algo, ring, tuple(configs), tuple(tuples), tuple(prov))
            if len(tuples) < b:
                yield from extend()
            configs.pop()
            tuples.pop()
            prov.pop()

    yield from extend()
