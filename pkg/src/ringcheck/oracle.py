"""Explicit-state reference checker over small rings."""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from . import relations as rel
from .dataspec import Box, RunEvaluator, Spec
from .model import DistributedAlgorithm, Ring, Run, enumerate_runs


def enumerate_rings(n: int):
    """Rings over pids 1..n up to rotation: pid n is always at process 1."""
    for rest in itertools.permutations(range(1, n)):
        yield Ring((n,) + rest)


@dataclass
class OracleVerdict:
    holds: bool
    bound: int
    n_max: int
    ring: Optional[Ring] = None
    run: Optional[Run] = None
    marked: Optional[int] = None
    trace: tuple = ()  # positions where the violated sub-formula fails

    @property
    def holds_up_to(self) -> tuple:
        return self.bound, self.n_max

    def to_json(self) -> dict:
        out = {"result": "holds" if self.holds else "violated", "bound": self.bound,
               "mode": "oracle", "n_max": self.n_max}
        if not self.holds:
            out["counterexample"] = {
                "ring": list(self.ring.pids),
                "tuples": [[t.name for t in tup] for tup in self.run.tuples],
                "marked": self.marked,
                "trace": [list(p) for p in self.trace],
            }
        return out


def failing_trace(run: Run, m: int, phi) -> tuple:
    """Where a boxed body fails; (m, 0) itself for other shapes."""
    ev = RunEvaluator(run, m)
    x = ev.index(m, 0)
    if isinstance(phi, Box):
        bad = ev.relation(phi.path)[x] & ~ev.sat(phi.arg)
        return tuple(ev.position(y) for y in rel.bits(bad))
    return ((m, 0),)


def _check_ring(algo, body, b, ring):
    for run in enumerate_runs(algo, ring, b):
        for m in range(1, ring.size + 1):
            if not RunEvaluator(run, m).holds((m, 0), body):
                return run, m
    return None


def oracle_check(algo: DistributedAlgorithm, spec, b: int, n_max: int,
                 threads: int = 1) -> OracleVerdict:
    body = spec.body if isinstance(spec, Spec) else spec
    for n in range(1, n_max + 1):
        rings = list(enumerate_rings(n))
        if threads > 1 and len(rings) > 1:
            with ProcessPoolExecutor(threads) as pool:
                results = list(pool.map(_check_ring, itertools.repeat(algo),
                                        itertools.repeat(body), itertools.repeat(b), rings))
        else:
            results = (_check_ring(algo, body, b, ring) for ring in rings)
        for ring, found in zip(rings, results):
            if found is not None:
                run, m = found
                return OracleVerdict(False, b, n_max, ring, run, m, failing_trace(run, m, body))
    return OracleVerdict(True, b, n_max)
