"""Text form of expressions, vectors and systems.

Expressions use ``+ - * / ^`` and parentheses; ``^`` binds tighter than unary
minus, which binds tighter than ``* /``.  ``mu`` is the reserved parameter.
A system document looks like::

    system generic-221;        # optional name
    coords: x, y;
    Z: x + y*mu + mu^2;
    A0: [[0, x], [-1, y]];
    A1: [[1, 0], [0, 1]];
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from starmul.muring import MonicZ, MuPoly, SolutionVec
from starmul.ratfunc import Chart, RationalFunction
from starmul.system import SystemSpec, TensorPoly

MU = "mu"


class DSLError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        super().__init__(f"line {line}, column {col}: {msg}" if line else msg)


@dataclass(frozen=True)
class Token:
    kind: str  # num, ident, op, name, end
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<num>\d+(?:\.\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()\[\],;:])")


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        col = pos - line_start + 1
        kind = m.lastgroup
        if kind == "ident" and m.group() == "system" and _at_statement_start(out):
            # the name runs to the next ';'
            end = text.find(";", m.end())
            if end < 0:
                raise DSLError("unterminated system header", line, col)
            out.append(Token("ident", "system", line, col))
            out.append(Token("name", text[m.end() : end].strip(), line, col + 7))
            pos = end
            continue
        if kind:
            out.append(Token(kind, m.group(), line, col))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    out.append(Token("end", "", line, pos - line_start + 1))
    return out


def _at_statement_start(tokens) -> bool:
    return not tokens or tokens[-1].text == ";"


class _Parser:
    def __init__(self, tokens: list[Token], coords: Sequence[str], allow_mu: bool = True):
        self.toks = tokens
        self.i = 0
        self.chart = Chart(coords)
        self.allow_mu = allow_mu

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return DSLError(msg, tok.line, tok.col)

    def take(self, text=None, kind=None) -> Token:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = repr(text) if text is not None else kind
            got = repr(t.text) if t.kind != "end" else "end of input"
            raise self.error(f"expected {want}, found {got}")
        self.i += 1
        return t

    def at(self, text) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    # expr := term (("+" | "-") term)*
    def expr(self) -> MuPoly:
        acc = self.term()
        while self.at("+") or self.at("-"):
            op = self.take().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    # term := unary (("*" | "/") unary)*
    def term(self) -> MuPoly:
        acc = self.unary()
        while self.at("*") or self.at("/"):
            op_tok = self.take()
            rhs = self.unary()
            if op_tok.text == "*":
                acc = acc * rhs
            else:
                acc = self._divide(acc, rhs, op_tok)
        return acc

    def _divide(self, a: MuPoly, b: MuPoly, tok) -> MuPoly:
        if b.degree > 0:
            raise self.error("division by an expression containing mu", tok)
        d = b.coeff(0)
        if d.is_zero():
            raise self.error("division by zero", tok)
        return MuPoly(self.chart.coords, [c / d for c in a.coeffs])

    # unary := "-" unary | power
    def unary(self) -> MuPoly:
        if self.at("-"):
            self.take()
            return -self.unary()
        if self.at("+"):
            self.take()
            return self.unary()
        return self.power()

    # power := atom ("^" exponent)?
    def power(self) -> MuPoly:
        base = self.atom()
        if not self.at("^"):
            return base
        tok = self.take()
        e = self.exponent()
        if e < 0:
            if base.degree > 0:
                raise self.error("negative power of an expression containing mu", tok)
            c = base.coeff(0)
            if c.is_zero():
                raise self.error("division by zero", tok)
            return MuPoly(self.chart.coords, [c.inverse() ** (-e)])
        return base ** e

    def exponent(self) -> int:
        sign = 1
        if self.at("-"):
            self.take()
            sign = -1
        if self.at("("):
            tok = self.take()
            val = self.expr()
            self.take(")")
            if val.degree > 0 or not val.coeff(0).is_constant():
                raise self.error("exponent must be an integer constant", tok)
            c = val.coeff(0).constant_value()
            if c.denominator != 1:
                raise self.error("exponent must be an integer constant", tok)
            return sign * int(c)
        t = self.tok
        if t.kind != "num" or "." in t.text:
            raise self.error("exponent must be an integer constant", t)
        self.take()
        return sign * int(t.text)

    def atom(self) -> MuPoly:
        t = self.tok
        coords = self.chart.coords
        if t.kind == "num":
            self.take()
            return MuPoly(coords, [self.chart.const(Fraction(t.text))])
        if t.kind == "ident":
            self.take()
            if t.text == MU:
                if not self.allow_mu:
                    raise self.error("mu is not allowed in a coefficient position", t)
                return MuPoly.mu(coords)
            if t.text not in coords:
                raise self.error(f"unknown identifier {t.text!r}", t)
            return MuPoly(coords, [self.chart.var(t.text)])
        if self.at("("):
            self.take()
            val = self.expr()
            self.take(")")
            return val
        got = repr(t.text) if t.kind != "end" else "end of input"
        raise self.error(f"expected an expression, found {got}")


def _check_coords(coords):
    coords = tuple(coords)
    if MU in coords:
        raise DSLError("mu is reserved and cannot be a coordinate")
    return coords


def _parse_whole(text: str, coords, allow_mu: bool) -> MuPoly:
    p = _Parser(tokenize(text), _check_coords(coords), allow_mu)
    val = p.expr()
    p.take(kind="end")
    return val


def parse_mupoly(text: str, coords: Sequence[str]) -> MuPoly:
    return _parse_whole(text, coords, True)


def parse_rf(text: str, coords: Sequence[str]) -> RationalFunction:
    """An expression without mu."""
    return _parse_whole(text, coords, False).coeff(0)


def parse_expression(text: str, coords: Sequence[str]) -> RationalFunction | MuPoly:
    """A MuPoly when ``mu`` occurs, a RationalFunction otherwise."""
    val = _parse_whole(text, coords, True)
    return val if val.degree > 0 else val.coeff(0)


def parse_vector(text: str, coords: Sequence[str]) -> SolutionVec:
    """``(e0, e1, ...)`` with mu-free entries."""
    p = _Parser(tokenize(text), _check_coords(coords), False)
    p.take("(")
    entries = [p.expr().coeff(0)]
    while p.at(","):
        p.take()
        entries.append(p.expr().coeff(0))
    p.take(")")
    p.take(kind="end")
    return SolutionVec(tuple(entries))


def parse_point(text: str) -> dict:
    """``x=0.2,y=0.9`` to a mapping of floats."""
    out = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        name, eq, val = part.partition("=")
        if not eq:
            raise DSLError(f"expected name=value, got {part!r}")
        try:
            out[name.strip()] = float(val)
        except ValueError:
            raise DSLError(f"bad number {val.strip()!r} for {name.strip()}") from None
    return out


# -- system documents -------------------------------------------------------


def parse_system(text: str) -> SystemSpec:
    toks = tokenize(text)
    p = _Parser(toks, ())
    name = ""
    if p.tok.kind == "ident" and p.tok.text == "system":
        p.take()
        name = p.take(kind="name").text
        p.take(";")
    kw = p.take(kind="ident")
    if kw.text != "coords":
        raise p.error("expected 'coords:'", kw)
    p.take(":")
    coords = [p.take(kind="ident")]
    while p.at(","):
        p.take()
        coords.append(p.take(kind="ident"))
    p.take(";")
    names = [t.text for t in coords]
    for t in coords:
        if t.text == MU:
            raise p.error("mu is reserved and cannot be a coordinate", t)
        if names.count(t.text) > 1:
            raise p.error(f"duplicate coordinate {t.text!r}", t)
    p.chart = Chart(names)
    kw = p.take(kind="ident")
    if kw.text != "Z":
        raise p.error("expected 'Z:'", kw)
    p.take(":")
    p.allow_mu = True
    ztok = p.tok
    zpoly = p.expr()
    p.take(";")
    if zpoly.degree < 1 or zpoly.coeff(zpoly.degree) != 1:
        raise p.error("Z must be monic in mu of degree at least 1", ztok)
    z = MonicZ.from_mupoly(zpoly)
    p.allow_mu = False
    mats = {}
    n = len(names)
    while p.tok.kind != "end":
        kw = p.take(kind="ident")
        m = re.fullmatch(r"A(\d+)", kw.text)
        if not m:
            raise p.error(f"expected 'A<k>:', found {kw.text!r}", kw)
        idx = int(m.group(1))
        if idx in mats:
            raise p.error(f"A{idx} given twice", kw)
        p.take(":")
        mats[idx] = _matrix(p, n)
        p.take(";")
    if not mats:
        raise p.error("at least one A matrix is required")
    k = max(mats)
    zero = [[p.chart.zero] * n for _ in range(n)]
    tensor = TensorPoly(tuple(mats.get(i, zero) for i in range(k + 1)))
    return SystemSpec(tuple(names), z, tensor, name)


def _matrix(p: _Parser, n: int):
    start = p.take("[")
    rows = [_row(p)]
    while p.at(","):
        p.take()
        rows.append(_row(p))
    p.take("]")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise p.error(f"matrix must be {n}x{n}", start)
    return rows


def _row(p: _Parser):
    p.take("[")
    row = [p.expr().coeff(0)]
    while p.at(","):
        p.take()
        row.append(p.expr().coeff(0))
    p.take("]")
    return row


def format_matrix(mat) -> str:
    return "[" + ", ".join("[" + ", ".join(str(e) for e in row) + "]" for row in mat) + "]"


def format_system(sys: SystemSpec) -> str:
    lines = []
    if sys.name:
        lines.append(f"system {sys.name};")
    lines.append("coords: " + ", ".join(sys.coords) + ";")
    lines.append(f"Z: {sys.z.as_mupoly()};")
    for i, mat in enumerate(sys.a.mats):
        lines.append(f"A{i}: {format_matrix(mat)};")
    return "\n".join(lines) + "\n"


def format_vector(v: SolutionVec) -> str:
    return str(v)
