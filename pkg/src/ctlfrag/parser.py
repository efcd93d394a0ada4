"""Recursive-descent parser for the concrete formula syntax.

    state := "true" | "false" | atom | "~" state | state "&" state
           | state "|" state | "(" state ")" | quant path
    path  := "X" path | "F" path | "G" path | "Fi" path | "Gi" path
           | "[" path "U" path "]" | "[" path "R" path "]"
           | "~" path | path "&" path | path "|" path | "(" path ")" | state

Paired tokens such as ``AX`` or ``EGi`` are shorthand for the quantifier
followed by the temporal operator.  ``&`` binds tighter than ``|`` and
prefix operators bind tightest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Embed,
    F,
    Finf,
    G,
    Ginf,
    Not,
    Or,
    PathFormula,
    PathQuant,
    R,
    StateFormula,
    U,
    X,
    p_and,
    p_not,
    p_or,
)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "word", "atom", "sym", "end"
    text: str
    line: int
    column: int


_UNARY_PATH = {"X": X, "F": F, "G": G, "Fi": Finf, "Gi": Ginf}
_PAIRED = {q + op: (q, cls) for q in "AE" for op, cls in _UNARY_PATH.items()}

_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r]+)
      | (?P<nl>\n)
      | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<quoted>"(?:[^"\\\n]|\\.)*")
      | (?P<sym>[~&|()\[\]])
      | (?P<comment>\#[^\n]*)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            if text[pos] == '"':
                raise FormulaSyntaxError("unterminated quoted identifier", line, col)
            raise FormulaSyntaxError(f"unknown token {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "word":
            tokens.append(Token("word", m.group(), line, col))
        elif kind == "quoted":
            raw = m.group()[1:-1]
            name = re.sub(r"\\(.)", r"\1", raw)
            if not name:
                raise FormulaSyntaxError("empty quoted identifier", line, col)
            tokens.append(Token("atom", name, line, col))
        elif kind == "sym":
            tokens.append(Token("sym", m.group(), line, col))
        pos = m.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def fail(self, message, tok=None):
        tok = tok or self.tok
        raise FormulaSyntaxError(message, tok.line, tok.column)

    def is_sym(self, text):
        return self.tok.kind == "sym" and self.tok.text == text

    def is_word(self, *words):
        return self.tok.kind == "word" and self.tok.text in words

    # ---- state level

    def state_or(self) -> StateFormula:
        left = self.state_and()
        while self.is_sym("|"):
            self.advance()
            left = Or(left, self.state_and())
        return left

    def state_and(self) -> StateFormula:
        left = self.state_unary()
        while self.is_sym("&"):
            self.advance()
            left = And(left, self.state_unary())
        return left

    def state_unary(self) -> StateFormula:
        tok = self.tok
        if self.is_sym("~"):
            self.advance()
            return Not(self.state_unary())
        if self.is_sym("("):
            open_tok = self.advance()
            inner = self.state_or()
            if not self.is_sym(")"):
                self.fail(f"unbalanced '(' (opened at {open_tok.line}:{open_tok.column})")
            self.advance()
            return inner
        if tok.kind == "atom":
            self.advance()
            return Atom(tok.text)
        if tok.kind == "word":
            word = tok.text
            if word == "true":
                self.advance()
                return TRUE
            if word == "false":
                self.advance()
                return FALSE
            if word in ("A", "E"):
                self.advance()
                return PathQuant(word, self.path_unary())
            if word in _PAIRED:
                self.advance()
                q, cls = _PAIRED[word]
                return PathQuant(q, cls(self.path_unary()))
            if word in _UNARY_PATH or word in ("U", "R"):
                self.fail(f"path operator {word!r} outside a path quantifier")
            self.advance()
            return Atom(word)
        if tok.kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {tok.text!r}")

    # ---- path level

    def path_or(self) -> PathFormula:
        left = self.path_and()
        while self.is_sym("|"):
            self.advance()
            left = p_or(left, self.path_and())
        return left

    def path_and(self) -> PathFormula:
        left = self.path_unary()
        while self.is_sym("&"):
            self.advance()
            left = p_and(left, self.path_unary())
        return left

    def path_unary(self) -> PathFormula:
        tok = self.tok
        if self.is_sym("~"):
            self.advance()
            return p_not(self.path_unary())
        if self.is_sym("("):
            open_tok = self.advance()
            inner = self.path_or()
            if not self.is_sym(")"):
                self.fail(f"unbalanced '(' (opened at {open_tok.line}:{open_tok.column})")
            self.advance()
            return inner
        if self.is_sym("["):
            open_tok = self.advance()
            left = self.path_or()
            if not self.is_word("U", "R"):
                found = self.tok.text or "end of input"
                self.fail(f"expected 'U' or 'R', found {found!r}")
            op = self.advance().text
            right = self.path_or()
            if not self.is_sym("]"):
                self.fail(f"unbalanced '[' (opened at {open_tok.line}:{open_tok.column})")
            self.advance()
            return U(left, right) if op == "U" else R(left, right)
        if tok.kind == "word" and tok.text in _UNARY_PATH:
            self.advance()
            return _UNARY_PATH[tok.text](self.path_unary())
        if tok.kind == "word" and tok.text in ("U", "R"):
            self.fail(f"{tok.text!r} must appear inside brackets")
        return Embed(self.state_unary())


def parse_formula(text: str) -> StateFormula:
    """Parse the concrete syntax into a state formula.

    Raises
    ------
    FormulaSyntaxError
        With the line and column of the offending token.
    """
    parser = _Parser(text)
    result = parser.state_or()
    if parser.tok.kind != "end":
        if parser.is_sym(")") or parser.is_sym("]"):
            parser.fail(f"unbalanced {parser.tok.text!r}")
        parser.fail(f"unexpected {parser.tok.text!r}")
    return result


def parse_path(text: str) -> PathFormula:
    parser = _Parser(text)
    result = parser.path_or()
    if parser.tok.kind != "end":
        parser.fail(f"unexpected {parser.tok.text!r}")
    return result
