"""Recursive-descent parser for the expression grammar.

Grammar::

    expr   := term (("+"|"-") term)* ;
    term   := factor (("*"|"/") factor)* ;
    factor := base ("^" factor)? ;
    base   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")" | "-" factor ;

The prefix minus takes a whole ``factor`` so that ``-u1^2`` reads as ``-(u1^2)``.
Error offsets are byte offsets into the UTF-8 encoding of the input. Input nested deeper
than ``MAX_NESTING`` is rejected as a syntax error.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable

from deltainv.exceptions import ArityError, ExpressionSyntaxError, UnknownIdentifierError
from deltainv.expr.model import (
    FUNCTIONS,
    NAMED_CONSTANTS,
    Binary,
    Constant,
    Expression,
    Node,
    Parameter,
    Unary,
    Variable,
)

_NUMBER = re.compile(r"([0-9]+\.?[0-9]*|\.[0-9]+)([eE][+-]?[0-9]+)?")
_DIGITS = "0123456789"
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_PUNCT = {"+": "PLUS", "-": "MINUS", "*": "STAR", "/": "SLASH", "^": "CARET", "(": "LPAREN", ")": "RPAREN", ",": "COMMA"}

#: Bound on parser recursion and on the parenthesis depth of printed trees; it keeps
#: parsing and the recursive tree walks well inside the interpreter stack.
MAX_NESTING = 100


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens; the final token is always ``END``."""
    tokens: list[Token] = []
    pos = 0
    byte_offset = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            byte_offset += len(ch.encode("utf-8"))
            continue
        if ch in _DIGITS or (ch == "." and pos + 1 < len(text) and text[pos + 1] in _DIGITS):
            match = _NUMBER.match(text, pos)
            tokens.append(Token("NUMBER", match.group(0), byte_offset))
        elif ch.isascii() and ch.isalpha():
            match = _IDENT.match(text, pos)
            tokens.append(Token("IDENT", match.group(0), byte_offset))
        elif ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, byte_offset))
            pos += 1
            byte_offset += 1
            continue
        else:
            raise ExpressionSyntaxError(f"Unexpected character {ch!r}", byte_offset, text)
        pos = match.end()
        byte_offset += len(match.group(0))
    tokens.append(Token("END", "", byte_offset))
    return tokens


class _Parser:
    def __init__(self, text: str, symbols: tuple[str, ...], parameters: tuple[str, ...]):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0
        self.nesting = 0
        self.symbols = {name: i for i, name in enumerate(symbols)}
        self.parameters = set(parameters)

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.current
        if tok.kind == "END":
            message = f"{message}: unexpected end of input"
        else:
            message = f"{message}: unexpected {tok.text!r}"
        raise ExpressionSyntaxError(message, tok.offset, self.text)

    def expect(self, kind: str, what: str) -> Token:
        if self.current.kind != kind:
            self.fail(f"Expected {what}")
        return self.advance()

    def enter(self, tok: Token) -> None:
        self.nesting += 1
        if self.nesting > MAX_NESTING:
            raise ExpressionSyntaxError("Expression nested too deeply", tok.offset, self.text)

    def leave(self) -> None:
        self.nesting -= 1

    def bound(self, depth: int, tok: Token) -> int:
        if depth > MAX_NESTING:
            raise ExpressionSyntaxError("Expression nested too deeply", tok.offset, self.text)
        return depth

    def parse(self) -> Node:
        node, _ = self.expr()
        if self.current.kind != "END":
            if self.current.kind == "COMMA":
                self.fail("Stray ','")
            self.fail("Expected operator")
        return node

    # Each production returns the node and the parenthesis depth of its printed form,
    # so anything accepted here prints to text that parses back within the same bound.
    def expr(self) -> tuple[Node, int]:
        node, depth = self.term()
        while self.current.kind in ("PLUS", "MINUS"):
            tok = self.advance()
            right, right_depth = self.term()
            node = Binary(tok.text, node, right)
            depth = self.bound(1 + max(depth, right_depth), tok)
        return node, depth

    def term(self) -> tuple[Node, int]:
        node, depth = self.factor()
        while self.current.kind in ("STAR", "SLASH"):
            tok = self.advance()
            right, right_depth = self.factor()
            node = Binary(tok.text, node, right)
            depth = self.bound(1 + max(depth, right_depth), tok)
        return node, depth

    def factor(self) -> tuple[Node, int]:
        node, depth = self.base()
        if self.current.kind == "CARET":
            tok = self.advance()
            self.enter(tok)
            exponent, exponent_depth = self.factor()
            self.leave()
            node = Binary("^", node, exponent)
            depth = self.bound(1 + max(depth, exponent_depth + 1), tok)
        return node, depth

    def base(self) -> tuple[Node, int]:
        tok = self.current
        if tok.kind == "NUMBER":
            self.advance()
            value = float(tok.text)
            if not math.isfinite(value):
                raise ExpressionSyntaxError(f"Number {tok.text!r} is out of range", tok.offset, self.text)
            return Constant(value), 0
        if tok.kind == "MINUS":
            self.advance()
            self.enter(tok)
            child, depth = self.factor()
            self.leave()
            return Unary("neg", child), self.bound(depth + 2, tok)
        if tok.kind == "LPAREN":
            self.advance()
            self.enter(tok)
            node, depth = self.expr()
            self.expect("RPAREN", "')'")
            self.leave()
            return node, depth
        if tok.kind == "IDENT":
            return self.identifier()
        self.fail("Expected a number, identifier, '(' or '-'")

    def identifier(self) -> tuple[Node, int]:
        tok = self.advance()
        name = tok.text
        if name in FUNCTIONS:
            if self.current.kind != "LPAREN":
                raise ArityError(name, tok.offset, got=0)
            self.advance()
            if self.current.kind == "RPAREN":
                raise ArityError(name, tok.offset, got=0)
            self.enter(tok)
            child, depth = self.expr()
            if self.current.kind == "COMMA":
                got = 1
                while self.current.kind == "COMMA":
                    self.advance()
                    self.expr()
                    got += 1
                raise ArityError(name, tok.offset, got=got)
            self.expect("RPAREN", "')'")
            self.leave()
            return Unary(name, child), self.bound(depth + 1, tok)
        if self.current.kind == "LPAREN":
            raise ExpressionSyntaxError(f"'{name}' is not a function", tok.offset, self.text)
        if name in self.symbols:
            return Variable(name, self.symbols[name]), 0
        if name in self.parameters:
            return Parameter(name), 0
        if name in NAMED_CONSTANTS:
            return Constant(NAMED_CONSTANTS[name]), 0
        raise UnknownIdentifierError(name, tok.offset)


def parse_expression(text: str, symbols: Iterable[str], parameters: Iterable[str] = ()) -> Expression:
    """Parse ``text`` into an :class:`Expression` over the declared symbols.

    Parameters
    ----------
    text : str
        Expression source.
    symbols : Iterable[str]
        Chart coordinate names; their order fixes the point layout for evaluation.
    parameters : Iterable[str]
        Names of parameters that are bound at evaluation time.

    Raises
    ------
    ExpressionSyntaxError
        Malformed input, or nesting deeper than ``MAX_NESTING``,
        with the byte offset of the offending token.
    UnknownIdentifierError
        An identifier that is not a symbol, parameter, function or named constant.
    ArityError
        A function applied to anything other than exactly one argument.
    """
    symbols = tuple(symbols)
    parameters = tuple(parameters)
    if not symbols:
        raise ValueError("At least one symbol must be declared")
    overlap = set(symbols) & set(parameters)
    if overlap:
        raise ValueError(f"Names declared as both symbol and parameter: {sorted(overlap)}")
    root = _Parser(text, symbols, parameters).parse()
    return Expression(root=root, variables=symbols, parameters=parameters, source=text)
