"""Command-line interface.

Exit codes: 0 holds (or true), 1 violated (or false), 2 usage, parse or
input errors, 3 unknown (bounded-width search found nothing).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__, corpus
from .compile import compile_algorithm, dummy_extend, translate_local
from .decide import AUTOMATON, BOUNDED, DEFAULT_BUDGET, check
from .dsl import parse_algorithm
from .errors import RingcheckError
from .lcpdl_text import parse as parse_lcpdl
from .lcpdl_text import show as show_lcpdl
from .model import Ring, Transition, enumerate_runs, replay
from .oracle import oracle_check
from .specparse import parse_spec, undeclared
from .table import TableEvaluator, table_from_json, table_of_run

EXIT_HOLDS, EXIT_VIOLATED, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3
RESULT_CODES = {"holds": EXIT_HOLDS, "violated": EXIT_VIOLATED, "unknown": EXIT_UNKNOWN}


class UsageError(RingcheckError):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _prefixed(path: str, e: RingcheckError) -> RingcheckError:
    return e if isinstance(e, UsageError) else UsageError(f"{path}: {e}")


def _load_algorithm(path: str):
    try:
        return parse_algorithm(_read(path))
    except RingcheckError as e:
        raise _prefixed(path, e) from None


def _load_spec(path: str, algo):
    try:
        spec = parse_spec(_read(path))
    except RingcheckError as e:
        raise _prefixed(path, e) from None
    missing = undeclared(spec, algo)
    if missing:
        raise UsageError(f"{path}: unknown states or registers: {', '.join(missing)}")
    return spec


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _ring(text: str) -> Ring:
    try:
        pids = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"--ring expects comma-separated pids, got {text!r}") from None
    return Ring(tuple(pids))


def _position(text: str) -> tuple:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--pos expects i,j, got {text!r}") from None
    return i, j


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _configuration_json(algo, config) -> dict:
    return {"states": list(config.states),
            "registers": [{r: regs[r] for r in algo.registers} for regs in config.regs]}


def _show_configuration(algo, j: int, config) -> str:
    cells = []
    for i, (s, regs) in enumerate(zip(config.states, config.regs), start=1):
        values = ",".join(f"{r}={regs[r]}" for r in algo.registers)
        cells.append(f"{i}:{s}[{values}]")
    return f"C{j}: " + " ".join(cells)


def _run_json(run) -> dict:
    return {"ring": list(run.ring.pids),
            "tuples": [[t.name for t in tup] for tup in run.tuples],
            "configurations": [_configuration_json(run.algorithm, c) for c in run.configs]}


def _replayed(args, algo):
    ring = _ring(args.ring)
    tuples = corpus.parse_tuples(_read(args.tuples), algo)
    rounds = getattr(args, "rounds", None)
    if rounds is not None:
        if len(tuples) < rounds:
            raise UsageError(f"{args.tuples} has {len(tuples)} rounds, {rounds} requested")
        tuples = tuples[:rounds]
    return replay(algo, ring, tuples)


# commands

def cmd_check(args) -> int:
    algo = _load_algorithm(args.algo)
    spec = _load_spec(args.spec, algo)
    lcpdl = None
    if args.emit_lcpdl:
        compiled = compile_algorithm(algo)
        lcpdl = {"psi_D": show_lcpdl(compiled.psi_D),
                 "spec": show_lcpdl(translate_local(compiled, spec.body))}
    verdict = check(algo, spec, args.bound, args.mode, args.width_cap, args.budget,
                    args.waive_unambiguity)
    if args.json:
        out = verdict.to_json()
        if lcpdl is not None:
            out["lcpdl"] = lcpdl
        print(_dump(out))
    else:
        if lcpdl is not None:
            print(f"psi_D: {lcpdl['psi_D']}")
            print(f"spec: {lcpdl['spec']}")
        line = f"{verdict.result} (bound {verdict.bound}, {verdict.mode}"
        if verdict.mode == BOUNDED:
            line += f", width cap {verdict.width_cap}"
        print(line + ")")
        for note in verdict.notes:
            print(f"note: {note}")
        cex = verdict.counterexample
        if cex is not None:
            print(f"counterexample on ring {cex.ring}, marked process {cex.marked}:")
            for j, c in enumerate(cex.run.configs):
                print("  " + _show_configuration(algo, j, c))
            print("table:")
            print(cex.table)
    return RESULT_CODES[verdict.result]


def cmd_oracle(args) -> int:
    algo = _load_algorithm(args.algo)
    spec = _load_spec(args.spec, algo)
    verdict = oracle_check(algo, spec, args.bound, args.n_max, args.threads)
    if args.json:
        print(_dump(verdict.to_json()))
    elif verdict.holds:
        print(f"holds on all rings of size <= {args.n_max} for {args.bound} rounds")
    else:
        print(f"violated on ring {verdict.ring}, marked process {verdict.marked}:")
        for j, c in enumerate(verdict.run.configs):
            print("  " + _show_configuration(algo, j, c))
        print("failing at " + " ".join(f"({i},{j})" for i, j in verdict.trace))
    return EXIT_HOLDS if verdict.holds else EXIT_VIOLATED


def cmd_simulate(args) -> int:
    algo = _load_algorithm(args.algo)
    ring = _ring(args.ring)
    if args.tuples:
        run = _replayed(args, algo)
        if args.json:
            print(_dump(_run_json(run)))
        else:
            for j, c in enumerate(run.configs):
                print(_show_configuration(algo, j, c))
        return 0
    runs = [r for r in enumerate_runs(algo, ring, args.rounds) if r.length == args.rounds]
    if args.json:
        print(_dump({"count": len(runs), "sample": _run_json(runs[0]) if runs else None}))
        return 0
    print(f"{len(runs)} runs of {args.rounds} rounds on ring {ring}")
    if runs:
        print("sample: " + " | ".join(" ".join(t.name for t in tup) for tup in runs[0].tuples))
        for j, c in enumerate(runs[0].configs):
            print(_show_configuration(algo, j, c))
    return 0


def cmd_table(args) -> int:
    algo = _load_algorithm(args.algo)
    run = _replayed(args, algo)
    text = _dump(table_of_run(run, dummy_extend(algo)).to_json())
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def _placeholders(obj) -> dict:
    """Transitions known only by name: each gets its own state constituent."""
    try:
        names = {name for col in obj["columns"] for name in col}
    except (KeyError, TypeError):
        raise UsageError("table JSON needs a 'columns' list of lists") from None
    return {name: Transition(name, name, name) for name in names}


def cmd_eval_lcpdl(args) -> int:
    try:
        obj = json.loads(_read(args.table))
    except json.JSONDecodeError as e:
        raise UsageError(f"{args.table}: invalid JSON: {e}") from None
    if args.algo:
        algo = dummy_extend(_load_algorithm(args.algo))
        names = {t.name: t for t in algo.transitions}
    else:
        names = _placeholders(obj)

    class _ByName:
        @staticmethod
        def transition(name):
            return names[name]

    table = table_from_json(obj, _ByName)
    formula = parse_lcpdl(args.formula, names)
    i, j = _position(args.pos)
    if not (1 <= i <= table.width and 0 <= j <= table.height):
        raise UsageError(f"position ({i},{j}) is outside the {table.width}x{table.height + 1} table")
    value = TableEvaluator(table).holds((i, j), formula)
    print(_dump({"value": value}) if args.json else str(value).lower())
    return EXIT_HOLDS if value else EXIT_VIOLATED


def cmd_corpus(args) -> int:
    for path in corpus.write_corpus(args.out):
        print(path)
    return 0


# argument parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ringcheck",
                                description="Round-bounded verification of ring algorithms.")
    p.add_argument("--version", action="version", version=f"ringcheck {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide a spec for all rings up to a round bound")
    c.add_argument("--algo", required=True)
    c.add_argument("--spec", required=True)
    c.add_argument("--bound", required=True, type=int)
    c.add_argument("--mode", choices=[AUTOMATON, BOUNDED], default=AUTOMATON)
    c.add_argument("--width-cap", type=_positive, default=5)
    c.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                   help="work units for the automaton emptiness check")
    c.add_argument("--json", action="store_true")
    c.add_argument("--emit-lcpdl", action="store_true")
    c.add_argument("--waive-unambiguity", action="store_true")
    c.set_defaults(run=cmd_check)

    o = sub.add_parser("oracle", help="explicit-state check over small rings")
    o.add_argument("--algo", required=True)
    o.add_argument("--spec", required=True)
    o.add_argument("--bound", required=True, type=int)
    o.add_argument("--n-max", type=_positive, default=5)
    o.add_argument("--threads", type=_positive, default=1)
    o.add_argument("--json", action="store_true")
    o.set_defaults(run=cmd_oracle)

    s = sub.add_parser("simulate", help="replay or enumerate runs on one ring")
    s.add_argument("--algo", required=True)
    s.add_argument("--ring", required=True)
    s.add_argument("--rounds", required=True, type=_positive)
    s.add_argument("--tuples")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=cmd_simulate)

    t = sub.add_parser("table", help="the table of a replayed run, as JSON")
    t.add_argument("--algo", required=True)
    t.add_argument("--ring", required=True)
    t.add_argument("--tuples", required=True)
    t.add_argument("--rounds", type=_positive)
    t.add_argument("--out")
    t.set_defaults(run=cmd_table)

    e = sub.add_parser("eval-lcpdl", help="evaluate an LCPDL formula on a table")
    e.add_argument("--table", required=True)
    e.add_argument("--pos", required=True)
    e.add_argument("--formula", required=True)
    e.add_argument("--algo", help="resolve transition names against this algorithm")
    e.add_argument("--json", action="store_true")
    e.set_defaults(run=cmd_eval_lcpdl)

    k = sub.add_parser("corpus", help="write the example algorithms and specs")
    k.add_argument("--out", required=True)
    k.set_defaults(run=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "bound", 1) < 1:
        parser.error(f"--bound must be at least 1, got {args.bound}")
    logging.basicConfig(level=logging.WARNING, format="warning: %(message)s")
    try:
        return args.run(args)
    except RingcheckError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
