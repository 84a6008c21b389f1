"""Parser for the algorithm description language (``.rda`` files)."""
from __future__ import annotations

from .errors import ParseError
from .lexer import TokenStream
from .model import DistributedAlgorithm, RawAlgorithm, RawTransition, validate_algorithm

_HEADERS = ("algorithm", "states", "init", "registers", "trans")


def parse_raw_algorithm(text: str) -> RawAlgorithm:
    ts = TokenStream(text)
    ts.expect("algorithm")
    name = ts.name("algorithm name")
    states, initial, registers = None, None, None
    transitions = []
    while ts.peek().kind != "eof":
        tok = ts.peek()
        if ts.accept("states"):
            ts.expect(":")
            states = _name_list(ts)
        elif ts.accept("init"):
            ts.expect(":")
            initial = ts.name("initial state")
        elif ts.accept("registers"):
            ts.expect(":")
            registers = _name_list(ts)
        elif ts.accept("trans"):
            transitions.append(_transition(ts, tok.line))
        else:
            ts.fail("expected 'states', 'init', 'registers' or 'trans'")
    for what, value in (("states", states), ("init", initial), ("registers", registers)):
        if value is None:
            raise ParseError(f"missing '{what}:' declaration")
    return RawAlgorithm(name, states, initial, registers, transitions)


def parse_algorithm(text: str) -> DistributedAlgorithm:
    return validate_algorithm(parse_raw_algorithm(text))


def _name_list(ts: TokenStream) -> list:
    names = [ts.name()]
    while ts.accept(","):
        names.append(ts.name())
    return names


def _transition(ts: TokenStream, line: int) -> RawTransition:
    name = ts.name("transition name")
    ts.expect(":")
    source = ts.name("source state")
    ts.expect(":")
    statements = [_statement(ts)]
    while ts.accept(";"):
        if ts.peek().kind == "eof" or ts.peek().text in _HEADERS:
            break
        statements.append(_statement(ts))
    return RawTransition(name, source, statements, line)


def _statement(ts: TokenStream) -> tuple:
    tok = ts.peek()
    word = ts.name("statement")
    if word in ("skip", "fwd"):
        return (word,)
    if word in ("send", "recv"):
        side = ts.name("direction")
        if side not in ("left", "right"):
            ts.fail("expected 'left' or 'right'", ts.tokens[ts.pos - 1])
        return (word, side, ts.name("register"))
    if word == "guard":
        r = ts.name("register")
        op = ts.next()
        if op.text == "<=":
            raise ParseError("guards only compare with '<' or '='; write 'r <= s' "
                             "as two transitions using 'r < s' and 'r = s'", op.line, op.col)
        if op.text not in ("<", "="):
            ts.fail("expected '<' or '='", op)
        return ("guard", r, op.text, ts.name("register"))
    if word == "set":
        tgt = ts.name("register")
        ts.expect(":=")
        return ("set", tgt, ts.name("register"))
    if word == "goto":
        return ("goto", ts.name("state"))
    raise ParseError(f"unknown statement {word!r}", tok.line, tok.col)
