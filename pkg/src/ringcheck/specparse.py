"""Parser for the specification language (``.rvs`` files)."""
from __future__ import annotations

from .dataspec import (COMPARISONS, DIRECTIONS, FALSE, TRUE, And, Box, Concat, Guard,
                       Implies, Marked, Not, Spec, Star, State, Step, Test, Union,
                       diamond, or_)
from .errors import ParseError
from .lexer import TokenStream
from .syntax import children

_KEYWORDS = {"spec", "let", "assert", "exists", "marked", "true", "false"} | set(DIRECTIONS)
_CMP = {"=": "=", "!=": "!=", "<": "<", "<=": "<="}


class _Parser:
    def __init__(self, text: str):
        self.ts = TokenStream(text)
        self.defs = {}  # name -> ("local" | "path", ast)

    # statements

    def spec(self) -> Spec:
        ts = self.ts
        ts.expect("spec")
        name = ts.name("spec name")
        body = None
        order = []
        while ts.peek().kind != "eof":
            if ts.accept("let"):
                tok = ts.peek()
                dname = ts.name("definition name")
                if dname in _KEYWORDS:
                    ts.fail("reserved word cannot be defined", tok)
                if dname in self.defs:
                    raise ParseError(f"{dname!r} is defined twice", tok.line, tok.col)
                ts.expect("=")
                self.defs[dname] = self._definition()
                order.append(dname)
            elif ts.accept("assert"):
                if body is not None:
                    ts.fail("only one assert is allowed")
                body = self.formula()
            else:
                ts.fail("expected 'let' or 'assert'")
        if body is None:
            raise ParseError("missing assert")
        return Spec(name, body, tuple((d, self.defs[d][1]) for d in order))

    def _at_statement_end(self) -> bool:
        tok = self.ts.peek()
        return tok.kind == "eof" or tok.text in ("let", "assert")

    def _definition(self):
        start = self.ts.pos
        try:
            phi = self.formula()
            if self._at_statement_end():
                return ("local", phi)
        except ParseError:
            pass
        self.ts.pos = start
        pi = self.path()
        if not self._at_statement_end():
            self.ts.fail("unexpected token after definition")
        return ("path", pi)

    # local formulas

    def formula(self):
        left = self.disjunction()
        if self.ts.accept("=>"):
            return Implies(left, self.formula())
        return left

    def disjunction(self):
        out = self.conjunction()
        while self.ts.accept("|"):
            out = or_(out, self.conjunction())
        return out

    def conjunction(self):
        out = self.unary()
        while self.ts.accept("&"):
            out = And(out, self.unary())
        return out

    def unary(self):
        ts = self.ts
        if ts.accept("!"):
            return Not(self.unary())
        if ts.accept("["):
            pi = self.path()
            ts.expect("]")
            return Box(pi, self.unary())
        if ts.accept("<"):
            pi = self.path()
            ts.expect(">")
            return diamond(pi, self.unary())
        return self.atom()

    def atom(self):
        ts = self.ts
        tok = ts.peek()
        if ts.accept("("):
            phi = self.formula()
            ts.expect(")")
            return phi
        if ts.accept("marked"):
            return Marked()
        if ts.accept("true"):
            return TRUE
        if ts.accept("false"):
            return FALSE
        if ts.accept("exists"):
            return self.guard()
        if tok.kind == "name" and tok.text not in _KEYWORDS:
            ts.next()
            kind_ast = self.defs.get(tok.text)
            if kind_ast is None:
                return State(tok.text)
            if kind_ast[0] != "local":
                raise ParseError(f"{tok.text!r} is a path, not a formula", tok.line, tok.col)
            return kind_ast[1]
        ts.fail("expected a formula")

    def guard(self):
        ts = self.ts
        r1 = ts.name("register")
        ts.expect("@")
        p1 = self.postfix()
        op = ts.next()
        if op.text not in _CMP:
            ts.fail("expected one of = != < <=", op)
        r2 = ts.name("register")
        ts.expect("@")
        p2 = self.postfix()
        return Guard(r1, p1, _CMP[op.text], r2, p2)

    # path formulas

    def path(self):
        out = self.sequence()
        while self.ts.accept("+"):
            out = Union(out, self.sequence())
        return out

    def sequence(self):
        out = self.postfix()
        while self.ts.accept("."):
            out = Concat(out, self.postfix())
        return out

    def postfix(self):
        out = self.path_atom()
        while self.ts.accept("*"):
            out = Star(out)
        return out

    def path_atom(self):
        ts = self.ts
        tok = ts.peek()
        if tok.kind == "name" and tok.text in DIRECTIONS:
            ts.next()
            return Step(tok.text)
        if ts.accept("?"):
            return Test(self.unary())
        if ts.accept("("):
            pi = self.path()
            ts.expect(")")
            return pi
        if tok.kind == "name" and tok.text in self.defs:
            ts.next()
            kind, ast = self.defs[tok.text]
            if kind != "path":
                raise ParseError(f"{tok.text!r} is a formula, not a path; use ?{tok.text}",
                                 tok.line, tok.col)
            return ast
        ts.fail("expected a path")


def parse_spec(text: str) -> Spec:
    return _Parser(text).spec()


def parse_formula(text: str, definitions=None):
    p = _Parser(text)
    if definitions:
        p.defs.update(definitions)
    phi = p.formula()
    if p.ts.peek().kind != "eof":
        p.ts.fail("unexpected trailing input")
    return phi


def parse_path(text: str):
    p = _Parser(text)
    pi = p.path()
    if p.ts.peek().kind != "eof":
        p.ts.fail("unexpected trailing input")
    return pi


def identifiers(phi) -> tuple:
    """(states, registers) mentioned anywhere in a formula."""
    states, regs = set(), set()

    def walk(x):
        if isinstance(x, State):
            states.add(x.name)
        elif isinstance(x, Guard):
            regs.update((x.left, x.right))
        for c in children(x):
            walk(c)

    walk(phi)
    return states, regs


def undeclared(spec: Spec, algo) -> list:
    states, regs = identifiers(spec.body)
    out = [f"state {s!r}" for s in sorted(states - set(algo.states))]
    out += [f"register {r!r}" for r in sorted(regs - set(algo.registers))]
    return out
