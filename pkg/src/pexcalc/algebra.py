"""Exact arithmetic: sparse multivariate polynomials over Q and cyclotomic fields.

Polynomials are immutable. Terms are stored as a map from exponent tuples to
nonzero ``Fraction`` coefficients, so equal polynomials compare equal
structurally.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

Number = Union[int, Fraction]


class RingMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    """Polynomial ring Q[names...]."""

    names: tuple
    field: str = "QQ"

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.nvars:
                raise IndexError(f"variable index {name} out of range")
            return name
        return self.names.index(name)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: Number) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name) -> "Polynomial":
        i = self.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], coeff: Number = 1) -> "Polynomial":
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        return Polynomial(self, {tuple(exps): coeff})

    def __str__(self):
        return f"QQ[{', '.join(self.names)}]"


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class Polynomial:
    """Sparse polynomial with exact rational coefficients."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[tuple, Number]):
        n = ring.nvars
        clean = {}
        for e, c in terms.items():
            c = _frac(c)
            if c:
                if len(e) != n:
                    raise ValueError("exponent vector has wrong length")
                clean[tuple(e)] = c
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms: dict) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.ring.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, var) -> int:
        i = self.ring.index(var)
        return max((e[i] for e in self._terms), default=-1)

    def support(self) -> set:
        """Indices of variables that occur."""
        out = set()
        for e in self._terms:
            out.update(i for i, a in enumerate(e) if a)
        return out

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Number) -> "Polynomial":
        c = _frac(c)
        if not c:
            return self.ring.zero()
        return Polynomial._raw(self.ring, {e: v * c for e, v in self._terms.items()})

    def __truediv__(self, c):
        if isinstance(c, Polynomial):
            if not c.is_constant() or c.is_zero():
                raise ZeroDivisionError("division by a non-constant or zero polynomial")
            c = c.constant_term()
        c = _frac(c)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self.scale(1 / c)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self._terms
            return self._terms == {(0,) * self.ring.nvars: Fraction(other)}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def substitute(self, mapping: Mapping) -> "Polynomial":
        """Replace variables by polynomials of the same ring; unmapped ones stay."""
        images = list(self.ring.gens())
        for k, v in mapping.items():
            images[self.ring.index(k)] = self._coerce(v)
        return self.compose(images)

    def compose(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Evaluate at polynomial images of every variable (may change ring)."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        if not images:
            raise ValueError("cannot compose a polynomial in zero variables")
        target = images[0].ring
        out = target.zero()
        powers: dict = {}
        for e, c in self._terms.items():
            t = target.const(c)
            for i, a in enumerate(e):
                if a:
                    key = (i, a)
                    if key not in powers:
                        powers[key] = images[i] ** a
                    t = t * powers[key]
            out = out + t
        return out

    def evaluate(self, point: Sequence):
        """Evaluate at a point whose coordinates support +, * and int powers."""
        if len(point) != self.ring.nvars:
            raise ValueError("point has wrong length")
        total = None
        for e, c in self._terms.items():
            t = None
            for x, a in zip(point, e):
                if a:
                    f = x ** a
                    t = f if t is None else t * f
            t = c if t is None else t * c
            total = t if total is None else total + t
        return Fraction(0) if total is None else total

    def embed(self, ring: Ring, positions: Sequence[int]) -> "Polynomial":
        """Map variable i of this ring to variable positions[i] of ``ring``."""
        n = ring.nvars
        out = {}
        for e, c in self._terms.items():
            new = [0] * n
            for i, a in enumerate(e):
                if a:
                    new[positions[i]] += a
            out[tuple(new)] = c
        return Polynomial(ring, out)

    def lex_terms(self) -> list:
        """Terms sorted with the lexicographically largest exponent first."""
        return sorted(self._terms.items(), key=lambda t: t[0], reverse=True)

    def primitive(self) -> "Polynomial":
        """Scale to coprime integer coefficients with positive leading lex coefficient."""
        if not self._terms:
            return self
        terms = self.lex_terms()
        den = 1
        for _, c in terms:
            den = den * c.denominator // gcd(den, c.denominator)
        nums = [int(c * den) for _, c in terms]
        g = 0
        for v in nums:
            g = gcd(g, v)
        if terms[0][1] < 0:
            g = -g
        return self.scale(Fraction(den, g))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, {self.ring.names})"


def _format_monomial(names, e) -> str:
    parts = []
    for name, a in zip(names, e):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts)


def format_poly(p: Polynomial) -> str:
    """Canonical text: terms in descending lex order, rationals as a/b."""
    if p.is_zero():
        return "0"
    out = []
    for i, (e, c) in enumerate(p.lex_terms()):
        mono = _format_monomial(p.ring.names, e)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def poly_arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    if p.ring != q.ring:
        raise RingMismatch(f"{p.ring} vs {q.ring}")
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown op {op!r}")


# -- univariate helpers -----------------------------------------------------

def _udeg(p: Polynomial) -> int:
    return max((e[0] for e in p.terms), default=-1)


def udivmod(f: Polynomial, g: Polynomial):
    """Quotient and remainder of univariate polynomials."""
    if f.ring.nvars != 1 or f.ring != g.ring:
        raise RingMismatch("univariate division needs one common single-variable ring")
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    dg = _udeg(g)
    lc = g.terms[(dg,)]
    q: dict = {}
    r = dict(f.terms)
    while r:
        dr = max(e[0] for e in r)
        if dr < dg:
            break
        c = r[(dr,)] / lc
        s = dr - dg
        q[(s,)] = c
        for (e,), gc in g.terms.items():
            k = (e + s,)
            v = r.get(k, 0) - c * gc
            if v:
                r[k] = v
            else:
                r.pop(k, None)
    return Polynomial._raw(f.ring, q), Polynomial._raw(f.ring, r)


T_RING = Ring(("t",))


@lru_cache(maxsize=None)
def cyclotomic(l: int) -> Polynomial:
    """l-th cyclotomic polynomial in Q[t], by exact division of t^l - 1."""
    if l < 1:
        raise ValueError("cyclotomic level must be positive")
    t = T_RING.var(0)
    num = t ** l - 1
    for d in range(1, l):
        if l % d == 0:
            q, r = udivmod(num, cyclotomic(d))
            assert r.is_zero(), "cyclotomic division left a remainder"
            num = q
    return num


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


class CycloElement:
    """Element of Q(zeta_l), stored as a polynomial in t reduced mod Phi_l(t)."""

    __slots__ = ("level", "coords")

    def __init__(self, level: int, coords: Union[Polynomial, Number]):
        if level < 1:
            raise ValueError("level must be positive")
        if not isinstance(coords, Polynomial):
            coords = T_RING.const(coords)
        if coords.ring != T_RING:
            raise RingMismatch("cyclotomic coordinates live in Q[t]")
        _, r = udivmod(coords, cyclotomic(level))
        self.level = level
        self.coords = r

    @classmethod
    def zeta(cls, level: int, power: int = 1) -> "CycloElement":
        return cls(level, T_RING.var(0) ** (power % level))

    @classmethod
    def rational(cls, level: int, q: Number) -> "CycloElement":
        return cls(level, T_RING.const(q))

    def _other(self, other):
        if isinstance(other, CycloElement):
            if other.level != self.level:
                raise RingMismatch(f"levels {self.level} and {other.level} differ; lift first")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElement(self.level, other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloElement(self.level, self.coords + other.coords)

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.level, -self.coords)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloElement(self.level, self.coords - other.coords)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloElement(self.level, self.coords * other.coords)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = CycloElement(self.level, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def lift(self, level: int) -> "CycloElement":
        """Same element viewed in Q(zeta_level); requires self.level | level."""
        if level % self.level:
            raise ValueError(f"{self.level} does not divide {level}")
        t = T_RING.var(0)
        return CycloElement(level, self.coords.compose([t ** (level // self.level)]))

    def is_zero(self) -> bool:
        return self.coords.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElement(self.level, other)
        if not isinstance(other, CycloElement):
            return NotImplemented
        return self.level == other.level and self.coords == other.coords

    def __hash__(self):
        return hash((self.level, self.coords))

    def __str__(self):
        return f"[{format_poly(self.coords)}]_{self.level}"

    __repr__ = __str__


def common_level(elems: Iterable[CycloElement]) -> int:
    L = 1
    for z in elems:
        L = L * z.level // gcd(L, z.level)
    return L
