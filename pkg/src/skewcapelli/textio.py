"""Parsers for the canonical text forms.

Operator expressions use the same grammar the renderer prints::

    expr    := ["-"] term (("+" | "-") term)*
    term    := factor (["*"] factor)*
    factor  := number | "u" ["^" int] | ("x" | "d") "[" int "," int "]" ["^" int]
             | "(" expr ")"
    number  := int ["/" int]

Juxtaposed factors multiply in the Weyl algebra in the order written, so
``d[1,2] x[1,2]`` parses to ``x[1,2] d[1,2] + 1``.

Matrix files are line oriented::

    # comment
    dim 4
    n 2            (optional, default dim / 2)
    kind anti      (optional, default alternating)
    1 2 x[1,2]
    1 4 u

Indices are 1-based. Missing entries are filled from the given ones by
alternation (``X[j,i] = -X[i,j]``) or anti-alternation
(``X[-j,-i] = -X[i,j]``); anything still missing is zero.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple

from .opmatrix import OpMatrix
from .weyl import WeylElement, WeylError, weyl_mul


class TextParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class Token(NamedTuple):
    kind: str
    text: str
    col: int


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<gen>[xd])\[|(?P<u>u)|(?P<op>[-+*/^(),\]]))")


def _tokenize(src: str, line: int, col0: int) -> List[Token]:
    out: List[Token] = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            bad = len(src) - len(src[pos:].lstrip())
            raise TextParseError(f"unexpected character {src[bad]!r}", line, col0 + bad)
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), col0 + m.start(kind)))
        pos = m.end()
    out.append(Token("end", "", col0 + len(src.rstrip())))
    return out


class _Parser:
    def __init__(self, n: int, src: str, line: int, col0: int):
        self.n = n
        self.toks = _tokenize(src, line, col0)
        self.i = 0
        self.line = line

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: Token = None):
        tok = tok or self.peek()
        raise TextParseError(msg, self.line, tok.col)

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text:
            self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.take()

    def integer(self) -> int:
        t = self.peek()
        if t.kind != "num":
            self.fail(f"expected an integer, found {t.text or 'end of input'!r}")
        self.take()
        return int(t.text)

    def parse(self) -> WeylElement:
        if self.peek().kind == "end":
            self.fail("empty expression")
        out = self.expr()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().text!r}")
        return out

    def expr(self) -> WeylElement:
        sign = 1
        if self.peek().text in "+-" and self.peek().kind == "op":
            sign = -1 if self.take().text == "-" else 1
        acc = self.term().scale(sign)
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
            acc = acc + self.term().scale(sign)
        return acc

    def _starts_factor(self, t: Token) -> bool:
        return t.kind in ("num", "gen", "u") or t.text == "("

    def term(self) -> WeylElement:
        if not self._starts_factor(self.peek()):
            self.fail(f"expected a factor, found {self.peek().text or 'end of input'!r}")
        acc = self.factor()
        while True:
            t = self.peek()
            if t.text == "*":
                self.take()
                acc = weyl_mul(acc, self.factor())
            elif self._starts_factor(t):
                acc = weyl_mul(acc, self.factor())
            else:
                return acc

    def _power(self) -> int:
        if self.peek().text == "^":
            self.take()
            return self.integer()
        return 1

    def factor(self) -> WeylElement:
        t = self.take()
        if t.kind == "num":
            value = Fraction(int(t.text))
            if self.peek().text == "/":
                self.take()
                den = self.peek()
                d = self.integer()
                if d == 0:
                    self.fail("zero denominator", den)
                value /= d
            return WeylElement.const(self.n, value)
        if t.kind == "u":
            return WeylElement.u(self.n, self._power())
        if t.kind == "gen":
            i = self.integer()
            self.expect(",")
            j = self.integer()
            self.expect("]")
            try:
                g = WeylElement.x(self.n, i, j) if t.text == "x" else WeylElement.d(self.n, i, j)
            except WeylError as exc:
                self.fail(str(exc), t)
            return g ** self._power()
        if t.text == "(":
            inner = self.expr()
            self.expect(")")
            return inner ** self._power()
        self.fail(f"unexpected {t.text or 'end of input'!r}", t)


def parse_element(src: str, n: int, line: int = 1, column: int = 1) -> WeylElement:
    """Parse an operator expression over PD(Alt_n)."""
    return _Parser(n, src, line, column).parse()


class MatrixSpec(NamedTuple):
    matrix: OpMatrix
    anti: bool


def parse_matrix(text: str) -> MatrixSpec:
    dim: Optional[int] = None
    n: Optional[int] = None
    anti = False
    raw: List[Tuple[int, int, str, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        stripped = body.lstrip()
        col = len(body) - len(stripped) + 1
        words = stripped.split(None, 2)
        head = words[0]
        if head in ("dim", "n", "kind"):
            if len(words) != 2:
                raise TextParseError(f"'{head}' takes exactly one value", lineno, col)
            val_col = body.index(words[1], col - 1 + len(head)) + 1
            if head == "kind":
                if words[1] not in ("alt", "anti"):
                    raise TextParseError("kind must be 'alt' or 'anti'", lineno, val_col)
                anti = words[1] == "anti"
                continue
            if not words[1].isdigit() or int(words[1]) < 1:
                raise TextParseError(f"'{head}' needs a positive integer", lineno, val_col)
            if raw:
                raise TextParseError(f"'{head}' must precede the entries", lineno, col)
            if head == "dim":
                dim = int(words[1])
            else:
                n = int(words[1])
            continue
        if dim is None:
            raise TextParseError("missing 'dim' header before the first entry", lineno, col)
        if len(words) < 3:
            raise TextParseError("entry lines read 'i j <expression>'", lineno, col)
        offset = col - 1
        idx = []
        for w in words[:2]:
            wcol = body.index(w, offset) + 1
            offset = wcol - 1 + len(w)
            if not w.isdigit() or not 1 <= int(w) <= dim:
                raise TextParseError(f"index {w!r} outside [1,{dim}]", lineno, wcol)
            idx.append(int(w))
        expr_col = body.index(words[2], offset) + 1
        raw.append((idx[0], idx[1], words[2], lineno, expr_col))
    if dim is None:
        raise TextParseError("missing 'dim' header", 1, 1)
    if anti and dim % 2:
        raise TextParseError("an anti-alternating matrix needs even dim", 1, 1)
    if n is None:
        n = max(dim // 2, 1)
    given: Dict[Tuple[int, int], WeylElement] = {}
    for i, j, src, lineno, col in raw:
        if (i, j) in given:
            raise TextParseError(f"entry ({i},{j}) given twice", lineno, 1)
        given[(i, j)] = parse_element(src, n, lineno, col)
    rows = [[WeylElement.zero(n) for _ in range(dim)] for _ in range(dim)]
    for (i, j), e in given.items():
        rows[i - 1][j - 1] = e
    for (i, j), e in given.items():
        mi, mj = (dim + 1 - j, dim + 1 - i) if anti else (j, i)
        if (mi, mj) not in given:
            rows[mi - 1][mj - 1] = -e
    return MatrixSpec(OpMatrix(n, rows), anti)
