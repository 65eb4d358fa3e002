"""Text format for pairs and configurations.

    pair {
      n = 2;
      V { x1^2 - x2 }
      W { y1*y2 - 1 }
      V' { x1 }          # optional, used by reduce
      W' { 1 }           # optional
      generic { }        # hyperplanes with generic coefficients, written by cut
      height = 3; kcap = 5; seed = 7;
      irreducible = V, W;
    }

    config {
      n = 2;
      names { "pi"; "pi/2" }
      X { }
      Y { y2^2 + 1 }
      rel { 1 -2 }
      kernel { 1 }
      height = 3;
    }

Polynomials in a block are separated by ``;`` or ``,``. Generator indices
in ``kernel`` are 1-based. ``#`` starts a comment. Rationals are written
``a/b``; ``/`` is only allowed with a constant divisor.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .algebra import Polynomial, Ring, format_poly
from .ideal import Ideal
from .pairs import VarietyPair
from .predim import Configuration, x_ring, y_ring


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*'?)
  | (?P<str>"[^"\n]*")
  | (?P<op>[{}();,=+\-*^/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            out.append(Token(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


@dataclass
class PairDocument:
    n: int
    V: tuple = ()
    W: tuple = ()
    V_sub: Optional[tuple] = None
    W_sub: Optional[tuple] = None
    height: Optional[int] = None
    kcap: Optional[int] = None
    seed: Optional[int] = None
    irreducible: tuple = ()  # subset of ("V", "W")
    generic: tuple = ()

    def pair(self) -> VarietyPair:
        return VarietyPair(
            self.n,
            Ideal(x_ring(self.n), self.V),
            Ideal(y_ring(self.n), self.W),
            "V" in self.irreducible,
            "W" in self.irreducible,
            tuple(self.generic),
        )

    def sub_ideals(self):
        iv = None if self.V_sub is None else Ideal(x_ring(self.n), self.V_sub)
        iw = None if self.W_sub is None else Ideal(y_ring(self.n), self.W_sub)
        return iv, iw


@dataclass
class ConfigDocument:
    n: int
    names: tuple = ()
    X: tuple = ()
    Y: tuple = ()
    rel: tuple = ()
    kernel: tuple = ()  # 1-based
    height: Optional[int] = None

    def configuration(self) -> Configuration:
        return Configuration(
            self.n,
            Ideal(x_ring(self.n), self.X),
            Ideal(y_ring(self.n), self.Y),
            self.rel,
            frozenset(k - 1 for k in self.kernel),
            self.height if self.height is not None else 2,
            self.names,
        )


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def next(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text) -> Optional[Token]:
        if self.tok.kind != "eof" and self.tok.text == text:
            return self.next()
        return None

    def expect(self, text) -> Token:
        t = self.accept(text)
        if t is None:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return t

    def integer(self, signed=False) -> int:
        neg = signed and self.accept("-") is not None
        t = self.tok
        if t.kind != "num":
            raise self.error(f"expected an integer, found {t.text or 'end of input'!r}")
        self.next()
        return -int(t.text) if neg else int(t.text)

    # polynomial expressions

    def poly_block(self, ring: Ring) -> tuple:
        self.expect("{")
        polys = []
        while not self.accept("}"):
            polys.append(self.expr(ring))
            if self.tok.text in (";", ","):
                self.next()
            elif self.tok.text != "}":
                raise self.error(f"expected ';', ',' or '}}', found {self.tok.text or 'end of input'!r}")
        return tuple(polys)

    def expr(self, ring):
        if self.accept("-"):
            value = -self.term(ring)
        else:
            self.accept("+")
            value = self.term(ring)
        while self.tok.text in ("+", "-"):
            op = self.next().text
            t = self.term(ring)
            value = value + t if op == "+" else value - t
        return value

    def term(self, ring):
        value = self.power(ring)
        while self.tok.text in ("*", "/"):
            op = self.next()
            if op.text == "*":
                value = value * self.power(ring)
            else:
                at = self.tok
                d = self.power(ring)
                if not d.is_constant():
                    raise self.error("division by a non-constant", at)
                c = d.constant_term()
                if c == 0:
                    raise self.error("zero denominator", at)
                value = value.scale(1 / c)
        return value

    def power(self, ring):
        base = self.atom(ring)
        if self.accept("^"):
            base = base ** self.integer()
        return base

    def atom(self, ring):
        t = self.tok
        if t.kind == "num":
            self.next()
            return ring.const(int(t.text))
        if t.kind == "ident":
            m = re.fullmatch(r"([xy])(\d+)", t.text)
            if m is None:
                raise self.error(f"unknown symbol {t.text!r}")
            if m.group(1) != ring.names[0][0]:
                raise self.error(f"variable {t.text!r} does not belong to this block")
            k = int(m.group(2))
            if not 1 <= k <= ring.nvars:
                raise self.error(f"variable index {k} out of range 1..{ring.nvars}")
            self.next()
            return ring.var(k - 1)
        if self.accept("("):
            value = self.expr(ring)
            self.expect(")")
            return value
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    # documents

    def document(self):
        t = self.tok
        if self.accept("pair"):
            doc = self.pair_body()
        elif self.accept("config"):
            doc = self.config_body()
        else:
            raise self.error("expected 'pair' or 'config'", t)
        if self.tok.kind != "eof":
            raise self.error(f"trailing input {self.tok.text!r}")
        return doc

    def header_n(self) -> int:
        self.expect("{")
        self.expect("n")
        self.expect("=")
        at = self.tok
        n = self.integer()
        if n < 1:
            raise self.error("n must be positive", at)
        self.expect(";")
        return n

    def option(self, seen: set) -> tuple:
        t = self.next()
        if t.text in seen:
            raise self.error(f"duplicate {t.text!r}", t)
        seen.add(t.text)
        self.expect("=")
        return t

    def end_option(self):
        if not self.accept(";") and self.tok.text != "}":
            raise self.error(f"expected ';', found {self.tok.text or 'end of input'!r}")

    def pair_body(self) -> PairDocument:
        n = self.header_n()
        X, Y = x_ring(n), y_ring(n)
        doc = PairDocument(n)
        seen = set()
        while not self.accept("}"):
            t = self.tok
            if t.text in ("V", "W", "V'", "W'", "generic"):
                if t.text in seen:
                    raise self.error(f"duplicate block {t.text!r}")
                seen.add(t.text)
                self.next()
                polys = self.poly_block(Y if t.text[0] == "W" else X)
                attr = {"V": "V", "W": "W", "V'": "V_sub", "W'": "W_sub", "generic": "generic"}[t.text]
                setattr(doc, attr, polys)
            elif t.text in ("height", "kcap", "seed"):
                self.option(seen)
                at = self.tok
                v = self.integer(signed=t.text == "seed")
                if t.text != "seed" and v < 1:
                    raise self.error(f"{t.text} must be positive", at)
                setattr(doc, t.text, v)
                self.end_option()
            elif t.text == "irreducible":
                self.option(seen)
                sides = []
                while True:
                    s = self.tok
                    if s.text not in ("V", "W") or s.text in sides:
                        raise self.error("expected V or W", s)
                    sides.append(self.next().text)
                    if not self.accept(","):
                        break
                doc.irreducible = tuple(sorted(sides))
                self.end_option()
            else:
                raise self.error(f"unexpected {t.text or 'end of input'!r} in pair")
        return doc

    def config_body(self) -> ConfigDocument:
        n = self.header_n()
        doc = ConfigDocument(n)
        seen = set()
        while not self.accept("}"):
            t = self.tok
            if t.text in seen and t.text in ("names", "X", "Y", "rel", "kernel"):
                raise self.error(f"duplicate block {t.text!r}")
            if t.text == "names":
                seen.add(self.next().text)
                self.expect("{")
                names = []
                while not self.accept("}"):
                    s = self.tok
                    if s.kind != "str":
                        raise self.error("expected a quoted name")
                    names.append(self.next().text[1:-1])
                    if not self.accept(";") and not self.accept(","):
                        if self.tok.text != "}":
                            raise self.error("expected ';', ',' or '}'")
                if len(names) != n:
                    raise self.error(f"expected {n} names, got {len(names)}", t)
                doc.names = tuple(names)
            elif t.text in ("X", "Y"):
                seen.add(self.next().text)
                polys = self.poly_block(x_ring(n) if t.text == "X" else y_ring(n))
                setattr(doc, t.text, polys)
            elif t.text == "rel":
                seen.add(self.next().text)
                self.expect("{")
                rows, row = [], []
                while True:
                    if self.tok.text in (";", "}"):
                        end = self.next().text
                        if row:
                            if len(row) != n:
                                raise self.error(f"relation row needs {n} entries", t)
                            rows.append(tuple(row))
                            row = []
                        if end == "}":
                            break
                    else:
                        row.append(self.integer(signed=True))
                doc.rel = tuple(rows)
            elif t.text == "kernel":
                seen.add(self.next().text)
                self.expect("{")
                ks = []
                while not self.accept("}"):
                    at = self.tok
                    k = self.integer()
                    if not 1 <= k <= n:
                        raise self.error(f"generator index {k} out of range 1..{n}", at)
                    ks.append(k)
                    self.accept(",") or self.accept(";")
                doc.kernel = tuple(sorted(set(ks)))
            elif t.text == "height":
                self.option(seen)
                at = self.tok
                v = self.integer()
                if v < 1:
                    raise self.error("height must be positive", at)
                doc.height = v
                self.end_option()
            else:
                raise self.error(f"unexpected {t.text or 'end of input'!r} in config")
        return doc


def parse(text: str):
    """PairDocument or ConfigDocument from text; raises ParseError with a position."""
    return _Parser(text).document()


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    p = _Parser(text)
    value = p.expr(ring)
    if p.tok.kind != "eof":
        raise p.error(f"trailing input {p.tok.text!r}")
    return value


def _block(name, polys) -> str:
    if not polys:
        return f"  {name} {{ }}\n"
    return f"  {name} {{ " + "; ".join(format_poly(p) for p in polys) + " }\n"


def print_document(doc) -> str:
    """Canonical text; parse(print_document(d)) == d."""
    if isinstance(doc, PairDocument):
        out = f"pair {{\n  n = {doc.n};\n"
        out += _block("V", doc.V) + _block("W", doc.W)
        if doc.V_sub is not None:
            out += _block("V'", doc.V_sub)
        if doc.W_sub is not None:
            out += _block("W'", doc.W_sub)
        if doc.generic:
            out += _block("generic", doc.generic)
        for key in ("height", "kcap", "seed"):
            v = getattr(doc, key)
            if v is not None:
                out += f"  {key} = {v};\n"
        if doc.irreducible:
            out += f"  irreducible = {', '.join(doc.irreducible)};\n"
        return out + "}\n"
    if isinstance(doc, ConfigDocument):
        out = f"config {{\n  n = {doc.n};\n"
        if doc.names:
            out += "  names { " + "; ".join(f'"{s}"' for s in doc.names) + " }\n"
        out += _block("X", doc.X) + _block("Y", doc.Y)
        if doc.rel:
            out += "  rel { " + "; ".join(" ".join(map(str, r)) for r in doc.rel) + " }\n"
        if doc.kernel:
            out += "  kernel { " + " ".join(map(str, doc.kernel)) + " }\n"
        if doc.height is not None:
            out += f"  height = {doc.height};\n"
        return out + "}\n"
    raise TypeError("not a document")


def config_document(c: Configuration) -> ConfigDocument:
    """Document for an existing configuration (user loci, not effective ideals)."""
    return ConfigDocument(
        c.n,
        tuple(c.names),
        tuple(c.locus_x.generators),
        tuple(c.locus_y.generators),
        tuple(c.lin_rels),
        tuple(sorted(k + 1 for k in c.kernel)),
        c.height,
    )
