"""Deciding round-bounded correctness via satisfiability of LCPDL over tables."""
from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from typing import Optional

from . import relations as rel
from .compile import CompiledAlgorithm, compile_algorithm, dummy_of, negated_spec_formula
from .dataspec import RunEvaluator, Spec, check_fragment
from .errors import (ExhaustedWithoutViolation, FragmentRejected, NotAPartialOrder,
                     ResourceBudgetExceeded, RingcheckError, RunReverificationFailed)
from .model import InapplicableTuple, Ring, Run, is_run, replay
from .table import LAnd, Table, TableEvaluator, table_of_run

log = logging.getLogger(__name__)

AUTOMATON = "automaton"
BOUNDED = "bounded-width"
DEFAULT_BUDGET = 200_000


# word encoding

def encode_table_as_word(table: Table) -> tuple:
    return tuple(t for col in table.columns for t in col)


def decode_word(word, k: int) -> Table:
    if k < 1 or not word or len(word) % (k + 1):
        raise RingcheckError(f"word of length {len(word)} is not a table of height index {k}")
    h = k + 1
    return Table(tuple(tuple(word[i:i + h]) for i in range(0, len(word), h)))


# witnesses

@dataclass
class Counterexample:
    table: Table
    ring: Ring
    run: Run
    marked: int = 1

    def to_json(self) -> dict:
        return {"table": self.table.to_json(), "ring": list(self.ring.pids),
                "tuples": [[t.name for t in tup] for tup in self.run.tuples],
                "marked": self.marked}


@dataclass
class Verdict:
    result: str  # "holds" | "violated" | "unknown"
    mode: str
    bound: int
    width_cap: Optional[int] = None
    counterexample: Optional[Counterexample] = None
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"result": self.result, "bound": self.bound, "mode": self.mode}
        if self.mode == BOUNDED:
            out["width_cap"] = self.width_cap
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def order_on_processes(compiled: CompiledAlgorithm, table: Table, ev=None) -> set:
    """{(i, i') : ((i,0),(i',0)) in pi_<}, checked to be a strict partial order."""
    ev = ev or TableEvaluator(table)
    r = ev.relation(compiled.pi_less)
    order = set()
    for i in range(1, table.width + 1):
        for y in rel.bits(r[ev.index(i, 0)]):
            i2, j2 = ev.position(y)
            if j2 == 0:
                order.add((i, i2))
    if any(a == b for a, b in order):
        raise NotAPartialOrder(f"pi_< relates a process to itself: {sorted(order)}")
    for (a, b), (c, d) in itertools.product(order, order):
        if b == c and (a, d) not in order:
            raise NotAPartialOrder(f"pi_< is not transitive at {a}, {b}, {d}")
    return order


def linear_extensions(n: int, order: set):
    """All linear orders of 1..n containing ``order``, lexicographically."""
    preds = {i: {a for a, b in order if b == i} for i in range(1, n + 1)}

    def go(prefix, placed):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for i in range(1, n + 1):
            if i not in placed and preds[i] <= placed:
                prefix.append(i)
                placed.add(i)
                yield from go(prefix, placed)
                placed.discard(i)
                prefix.pop()

    yield from go([], set())


def least_linear_extension(n: int, order: set) -> tuple:
    preds = {i: {a for a, b in order if b == i} for i in range(1, n + 1)}
    ready = [i for i in range(1, n + 1) if not preds[i]]
    heapq.heapify(ready)
    out, placed = [], set()
    while ready:
        i = heapq.heappop(ready)
        out.append(i)
        placed.add(i)
        for j in range(1, n + 1):
            if j not in placed and j not in ready and i in preds[j] and preds[j] <= placed:
                heapq.heappush(ready, j)
    if len(out) != n:
        raise NotAPartialOrder("pi_< has a cycle")
    return tuple(out)


def _ring_from_extension(ext) -> Ring:
    pids = [0] * len(ext)
    for rank, i in enumerate(ext, start=1):
        pids[i - 1] = rank
    return Ring(tuple(pids))


def _run_of(compiled: CompiledAlgorithm, table: Table, ring: Ring) -> Run:
    """The pseudo-run of the table on the ring, which must be a real run."""
    algo = compiled.dummy_extended
    hat = dummy_of(algo)
    if any(table.cell(i, 0) != hat for i in range(1, table.width + 1)):
        raise RunReverificationFailed("row 0 of the table is not the dummy row")
    tuples = [[table.cell(i, j) for i in range(1, table.width + 1)]
              for j in range(1, table.height + 1)]
    try:
        run = replay(algo, ring, tuples)
    except InapplicableTuple as e:
        raise RunReverificationFailed(f"table is not realisable on {ring}: {e}") from None
    if table_of_run(run, algo) != table:
        raise RunReverificationFailed("replayed run does not reproduce the table")
    return run


def realize_ring(compiled: CompiledAlgorithm, table: Table) -> tuple:
    order = order_on_processes(compiled, table)
    ring = _ring_from_extension(least_linear_extension(table.width, order))
    return ring, _run_of(compiled, table, ring)


def find_violating_run(compiled: CompiledAlgorithm, table: Table, phi) -> tuple:
    body = phi.body if isinstance(phi, Spec) else phi
    order = order_on_processes(compiled, table)
    for ext in linear_extensions(table.width, order):
        ring = _ring_from_extension(ext)
        run = _run_of(compiled, table, ring)
        if not RunEvaluator(run, 1).holds((1, 0), body):
            return ring, run, 1
    raise ExhaustedWithoutViolation("no realisation of the witness table violates the spec")


# bounded-width search

def valid_columns(compiled: CompiledAlgorithm, k: int) -> list:
    """Columns t^, t1..tk with matching goto/source, pruned with psi_col."""
    algo = compiled.dummy_extended
    hat = dummy_of(algo)
    by_source = {}
    for t in sorted(algo.transitions, key=lambda t: t.name):
        if t is not hat and t != hat:
            by_source.setdefault(t.source, []).append(t)
    out = []

    def go(col, state):
        if len(col) == k + 1:
            out.append(tuple(col))
            return
        for t in by_source.get(state, ()):
            col.append(t)
            go(col, t.target)
            col.pop()

    go([hat], algo.initial)
    return [c for c in out if TableEvaluator(Table((c,))).holds((1, 0), compiled.psi_col)]


def _conjuncts(psi) -> list:
    if isinstance(psi, LAnd):
        return _conjuncts(psi.left) + _conjuncts(psi.right)
    return [psi]


class _WidthSearch:
    def __init__(self, compiled: CompiledAlgorithm, psi, rotation_invariant=()):
        self.compiled = compiled
        self.conjuncts = _conjuncts(psi)
        invariant = set(_conjuncts(compiled.psi_D)) | set(rotation_invariant)
        self.shared = [c for c in self.conjuncts if c in invariant]
        self.rest = [c for c in self.conjuncts if c not in invariant]
        self._cache = {}
        self.evaluated = 0

    def holds(self, table: Table) -> bool:
        cols = [tuple(t.name for t in c) for c in table.columns]
        key = min(tuple(cols[s:] + cols[:s]) for s in range(len(cols)))
        ev = None
        ok = self._cache.get(key)
        if ok is None:
            ev = TableEvaluator(table)
            ok = all(ev.holds((1, 0), c) for c in self.shared)
            self._cache[key] = ok
        if not ok:
            return False
        ev = ev or TableEvaluator(table)
        self.evaluated += 1
        return all(ev.holds((1, 0), c) for c in self.rest)


def bounded_width_search(compiled: CompiledAlgorithm, psi, k: int, width_cap: int,
                         columns=None) -> Optional[Table]:
    """The first table of height index k and width <= width_cap satisfying psi."""
    columns = columns if columns is not None else valid_columns(compiled, k)
    search = _WidthSearch(compiled, psi)
    for w in range(1, width_cap + 1):
        for cols in itertools.product(columns, repeat=w):
            t = Table(cols)
            if search.holds(t):
                return t
    return None


def minimize_witness(compiled: CompiledAlgorithm, psi, table: Table) -> Table:
    search = _WidthSearch(compiled, psi)
    changed = True
    while changed and table.width > 1:
        changed = False
        for i in range(table.width):
            smaller = Table(table.columns[:i] + table.columns[i + 1:])
            if search.holds(smaller):
                table, changed = smaller, True
                break
    return table


# the main entry point

def verify_counterexample(compiled: CompiledAlgorithm, spec, cex: Counterexample) -> None:
    body = spec.body if isinstance(spec, Spec) else spec
    if not is_run(cex.run):
        raise RunReverificationFailed("counterexample run does not replay under step")
    if RunEvaluator(cex.run, cex.marked).holds((cex.marked, 0), body):
        raise RunReverificationFailed("counterexample run satisfies the spec")
    if table_of_run(cex.run, compiled.dummy_extended) != cex.table:
        raise RunReverificationFailed("counterexample run does not match its table")


def _counterexample(compiled, spec, psi, table: Table) -> Counterexample:
    table = minimize_witness(compiled, psi, table)
    ring, run, m = find_violating_run(compiled, table, spec)
    cex = Counterexample(table, ring, run, m)
    verify_counterexample(compiled, spec, cex)
    return cex


def check(algo, spec: Spec, b: int, mode: str = AUTOMATON, width_cap: int = 5,
          budget: int = DEFAULT_BUDGET, waive_unambiguity: bool = False) -> Verdict:
    if b < 1:
        raise RingcheckError("round bound must be at least 1")
    if mode not in (AUTOMATON, BOUNDED):
        raise RingcheckError(f"unknown mode {mode!r}")
    report = check_fragment(spec, waive_unambiguity)
    if not report.admissible:
        raise FragmentRejected("; ".join(report.diagnostics))
    notes = []
    if report.waived:
        notes.append("unambiguity of some order-guard paths was waived; "
                     "the verdict relies on that assumption")
    compiled = compile_algorithm(algo)
    psi = negated_spec_formula(compiled, spec)
    complete = True
    for k in range(1, b + 1):
        table = None
        if mode == AUTOMATON:
            from .a2a import a2a_is_empty, compile_a2a
            try:
                a = compile_a2a(psi, k, compiled.dummy_extended.transitions)
                empty, word = a2a_is_empty(a, budget=budget)
            except ResourceBudgetExceeded as e:
                log.warning("automaton budget exceeded at height %d (%s); "
                            "falling back to bounded-width search", k, e)
                notes.append(f"automaton budget exceeded at height {k}; "
                             f"heights {k}..{b} searched up to width {width_cap}")
                mode = BOUNDED
            else:
                if not empty:
                    table = decode_word(word, k)
        if mode == BOUNDED:
            complete = False
            table = bounded_width_search(compiled, psi, k, width_cap)
        if table is not None:
            cex = _counterexample(compiled, spec, psi, table)
            return Verdict("violated", mode, b, width_cap if mode == BOUNDED else None,
                           cex, notes)
    if complete:
        return Verdict("holds", AUTOMATON, b, None, None, notes)
    notes.append(f"no counterexample up to width {width_cap}")
    return Verdict("unknown", BOUNDED, b, width_cap, None, notes)
