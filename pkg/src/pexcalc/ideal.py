"""Groebner bases, normal forms, dimension, elimination and saturation.

Buchberger's algorithm with the sugar selection strategy and the
Gebauer-Moeller pair criteria. Every run is bounded by a reduction-step
limit; exceeding it raises ``ResourceLimitExceeded`` instead of returning a
partial answer.

All membership questions here are ideal membership, not radical membership.
For non-radical input the two can differ: ``x`` vanishes on ``V(x^2)`` but
is not in ``<x^2>``. Dimension and elimination are insensitive to this.
"""
from __future__ import annotations

import contextlib
import contextvars
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .algebra import Polynomial, Ring, RingMismatch

DEFAULT_STEP_LIMIT = 10 ** 6
STEP_LIMIT_ENV = "PEXCALC_STEP_LIMIT"


class ResourceLimitExceeded(RuntimeError):
    """The reduction-step budget ran out before the computation finished."""


def _env_limit() -> int:
    raw = os.environ.get(STEP_LIMIT_ENV)
    return int(raw) if raw else DEFAULT_STEP_LIMIT


_step_limit = contextvars.ContextVar("pexcalc_step_limit", default=None)


def current_step_limit() -> int:
    v = _step_limit.get()
    return _env_limit() if v is None else v


@contextlib.contextmanager
def step_limit(n: int):
    """Bound every Groebner computation in this context to ``n`` reduction steps."""
    token = _step_limit.set(n)
    try:
        yield
    finally:
        _step_limit.reset(token)


class _Counter:
    __slots__ = ("steps", "limit")

    def __init__(self, limit):
        self.steps = 0
        self.limit = limit

    def tick(self):
        self.steps += 1
        if self.steps > self.limit:
            raise ResourceLimitExceeded(f"Groebner basis exceeded {self.limit} reduction steps")


@dataclass(frozen=True)
class MonomialOrder:
    """lex, grevlex, or a block order (grevlex inside each block).

    ``block`` with ``split=s`` makes every monomial involving the first ``s``
    variables larger than any monomial in the remaining ones, so a basis
    eliminates the first block.
    """

    kind: str = "grevlex"
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self):
        if self.kind == "lex":
            return _lex_key
        if self.kind == "grevlex":
            return _grevlex_key
        s = self.split

        def block_key(e):
            return (_grevlex_key(e[:s]), _grevlex_key(e[s:]))

        return block_key


def _lex_key(e):
    return e


def _grevlex_key(e):
    return (sum(e), tuple(-a for a in reversed(e)))


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def block_order(split: int) -> MonomialOrder:
    return MonomialOrder("block", split)


def order_from_name(name: str) -> MonomialOrder:
    return {"lex": LEX, "grevlex": GREVLEX}[name]


# -- dict-level kernels ------------------------------------------------------

def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    return all(not (x and y) for x, y in zip(a, b))


def _monic(f: dict, key):
    lm = max(f, key=key)
    c = f[lm]
    if c == 1:
        return lm, f
    inv = 1 / c
    return lm, {e: v * inv for e, v in f.items()}


def _reduce(f: dict, G: list, key, counter: _Counter, full: bool = True) -> dict:
    """Remainder of f on division by the monic polynomials G = [(lm, dict)]."""
    f = dict(f)
    r: dict = {}
    while f:
        m = max(f, key=key)
        c = f[m]
        for lm, g in G:
            if _divides(lm, m):
                q = tuple(a - b for a, b in zip(m, lm))
                for gm, gc in g.items():
                    mm = tuple(a + b for a, b in zip(gm, q))
                    v = f.get(mm, 0) - c * gc
                    if v:
                        f[mm] = v
                    else:
                        f.pop(mm, None)
                counter.tick()
                break
        else:
            r[m] = c
            del f[m]
            if not full:
                r.update(f)
                break
    return r


def _spoly(f, lf, g, lg):
    l = _lcm(lf, lg)
    qf = tuple(a - b for a, b in zip(l, lf))
    qg = tuple(a - b for a, b in zip(l, lg))
    out: dict = {}
    for e, c in f.items():
        out[tuple(a + b for a, b in zip(e, qf))] = c
    for e, c in g.items():
        k = tuple(a + b for a, b in zip(e, qg))
        v = out.get(k, 0) - c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _groebner_dicts(gens: list, nvars: int, order: MonomialOrder, limit: int) -> list:
    key = order.key()
    counter = _Counter(limit)
    polys: list = []  # (lm, dict, sugar)
    active: list = []
    pairs: set = set()

    def active_list():
        return [(polys[i][0], polys[i][1]) for i in active]

    def update(h_idx):
        nonlocal active, pairs
        h = polys[h_idx][0]
        C = list(active)
        D = []
        while C:
            g1 = C.pop(0)
            lg1 = polys[g1][0]
            if _coprime(h, lg1):
                D.append(g1)
                continue
            l1 = _lcm(h, lg1)
            if any(_divides(_lcm(h, polys[g2][0]), l1) for g2 in C) or any(
                _divides(_lcm(h, polys[g2][0]), l1) for g2 in D
            ):
                continue
            D.append(g1)
        E = [g for g in D if not _coprime(h, polys[g][0])]
        kept = set()
        for (i, j) in pairs:
            lij = _lcm(polys[i][0], polys[j][0])
            if (
                _divides(h, lij)
                and _lcm(polys[i][0], h) != lij
                and _lcm(polys[j][0], h) != lij
            ):
                continue
            kept.add((i, j))
        kept.update((g, h_idx) for g in E)
        pairs = kept
        active = [g for g in active if not _divides(h, polys[g][0])] + [h_idx]

    def add(f: dict, sugar: int):
        if not f:
            return
        lm, f = _monic(f, key)
        polys.append((lm, f, sugar))
        update(len(polys) - 1)

    for g in gens:
        if not g:
            continue
        sugar = max(sum(e) for e in g)
        add(_reduce(g, active_list(), key, counter), sugar)

    while pairs:
        def pair_key(p):
            i, j = p
            li, lj = polys[i][0], polys[j][0]
            l = _lcm(li, lj)
            dl = sum(l)
            s = max(polys[i][2] - sum(li), polys[j][2] - sum(lj)) + dl
            return (s, key(l), i, j)

        best = min(pairs, key=pair_key)
        pairs.discard(best)
        i, j = best
        sugar = pair_key(best)[0]
        s = _spoly(polys[i][1], polys[i][0], polys[j][1], polys[j][0])
        h = _reduce(s, active_list(), key, counter)
        add(h, sugar)

    # interreduce to the reduced basis
    basis = [(polys[i][0], polys[i][1]) for i in active]
    if any(not any(lm) for lm, _ in basis):
        return [{(0,) * nvars: Fraction(1)}]
    out = []
    for idx, (lm, g) in enumerate(basis):
        others = [b for k, b in enumerate(basis) if k != idx]
        tail = dict(g)
        del tail[lm]
        red = _reduce(tail, others, key, counter)
        red[lm] = Fraction(1)
        out.append((lm, red))
    out.sort(key=lambda t: key(t[0]), reverse=True)
    return [g for _, g in out]


@lru_cache(maxsize=4096)
def _groebner_cached(ring: Ring, gens: tuple, order: MonomialOrder) -> tuple:
    dicts = [dict(g.terms) for g in gens]
    res = _groebner_dicts(dicts, ring.nvars, order, current_step_limit())
    return tuple(Polynomial(ring, d) for d in res)


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX) -> list:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    The zero ideal has the empty basis; the unit ideal has basis ``[1]``.
    Raises ``ResourceLimitExceeded`` when the step limit is hit.
    """
    gens = [g for g in gens]
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatch("generators live in different rings")
    return list(_groebner_cached(ring, tuple(gens), order))


def leading_monomial(p: Polynomial, order: MonomialOrder = GREVLEX) -> tuple:
    return max(p.terms, key=order.key())


def reduce_by(p: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    key = order.key()
    G = [(max(g.terms, key=key), dict(g.terms)) for g in basis]
    counter = _Counter(current_step_limit())
    return Polynomial(p.ring, _reduce(dict(p.terms), G, key, counter))


@dataclass(frozen=True)
class DimensionResult:
    dim: int
    witness: tuple  # maximal independent set of variable indices


class Ideal:
    """Ideal of Q[x_1..x_n] given by generators; bases are cached per order."""

    def __init__(self, ring: Ring, generators: Iterable[Polynomial] = ()):
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                g = ring.const(g)
            if g.ring != ring:
                raise RingMismatch(f"generator {g} not in {ring}")
            if not g.is_zero():
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self._bases: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def unit(cls, ring: Ring) -> "Ideal":
        return cls(ring, [ring.one()])

    def basis(self, order: MonomialOrder = GREVLEX) -> tuple:
        b = self._bases.get(order)
        if b is None:
            with self._lock:
                b = self._bases.get(order)
                if b is None:
                    b = tuple(buchberger(self.generators, order))
                    self._bases[order] = b
        return b

    def _seed_basis(self, order: MonomialOrder, basis: Sequence[Polynomial]):
        with self._lock:
            self._bases.setdefault(order, tuple(basis))

    def normal_form(self, p: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
        if p.ring != self.ring:
            raise RingMismatch(f"{p} not in {self.ring}")
        return reduce_by(p, self.basis(order), order)

    def contains(self, p: Polynomial) -> bool:
        return self.normal_form(p).is_zero()

    def __contains__(self, p):
        if not isinstance(p, Polynomial):
            p = self.ring.const(p)
        return self.contains(p)

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def is_unit(self) -> bool:
        return self.basis() == (self.ring.one(),)

    def is_proper(self) -> bool:
        return not self.is_unit()

    def is_zero(self) -> bool:
        return not self.generators

    def dim(self, order: MonomialOrder = GREVLEX) -> DimensionResult:
        return dim(self, order)

    def __add__(self, other):
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatch("ideals in different rings")
            return Ideal(self.ring, self.generators + other.generators)
        if isinstance(other, Polynomial):
            return Ideal(self.ring, self.generators + (other,))
        return Ideal(self.ring, self.generators + tuple(other))

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.basis() == other.basis()

    def __hash__(self):
        return hash((self.ring, self.basis()))

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    def __repr__(self):
        return f"Ideal({self.ring.names}, {str(self)})"


def normal_form(p: Polynomial, I: Ideal, order: MonomialOrder = GREVLEX) -> Polynomial:
    return I.normal_form(p, order)


def independent_set(lms: list, n: int) -> tuple:
    """Lexicographically first largest variable set supporting no monomial in ``lms``."""
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            Sset = set(S)
            if all(any(a and i not in Sset for i, a in enumerate(lm)) for lm in lms):
                return S
    return ()


def dim(I: Ideal, order: MonomialOrder = GREVLEX) -> DimensionResult:
    """Krull dimension of V(I) from a maximal independent variable set.

    A set S of variables is independent when no leading monomial of the
    basis is supported inside S.
    """
    basis = I.basis(order)
    if basis == (I.ring.one(),):
        return DimensionResult(-1, ())
    key = order.key()
    lms = [max(g.terms, key=key) for g in basis]
    S = independent_set(lms, I.ring.nvars)
    return DimensionResult(len(S), tuple(S))


def eliminate(I: Ideal, keep: Sequence) -> Ideal:
    """I intersected with Q[keep], as an ideal of the ring on the kept variables.

    Uses a block order with the eliminated variables in the first block. The
    result carries its reduced grevlex basis.
    """
    ring = I.ring
    keep_idx = sorted({ring.index(k) for k in keep})
    drop_idx = [i for i in range(ring.nvars) if i not in keep_idx]
    new_ring = Ring(tuple(ring.names[i] for i in keep_idx))
    if not drop_idx:
        return I
    if not keep_idx:
        return Ideal(new_ring, [new_ring.one()] if I.is_unit() else [])
    perm_names = tuple(ring.names[i] for i in drop_idx + keep_idx)
    perm_ring = Ring(perm_names)
    pos = {old: new for new, old in enumerate(drop_idx + keep_idx)}
    positions = [pos[i] for i in range(ring.nvars)]
    gens = [g.embed(perm_ring, positions) for g in I.generators]
    order = block_order(len(drop_idx))
    basis = buchberger(gens, order)
    s = len(drop_idx)
    kept = []
    for g in basis:
        if all(not any(e[:s]) for e in g.terms):
            kept.append(Polynomial(new_ring, {e[s:]: c for e, c in g.terms.items()}))
    J = Ideal(new_ring, kept)
    J._seed_basis(GREVLEX, kept)
    return J


def saturate_units(I: Ideal, vars: Sequence = None) -> Ideal:
    """Ideal of the closure of V(I) minus the coordinate hyperplanes of ``vars``.

    One fresh variable z with z * prod(vars) - 1 suffices: the product is
    nonzero exactly when every listed coordinate is.
    """
    ring = I.ring
    idx = sorted({ring.index(v) for v in (range(ring.nvars) if vars is None else vars)})
    if not idx:
        return I
    z = "_z"
    while z in ring.names:
        z = "_" + z
    big = Ring(ring.names + (z,))
    positions = list(range(ring.nvars))
    gens = [g.embed(big, positions) for g in I.generators]
    prod = big.var(z)
    for i in idx:
        prod = prod * big.var(i)
    gens.append(prod - 1)
    J = eliminate(Ideal(big, gens), list(range(ring.nvars)))
    return Ideal(ring, [Polynomial(ring, dict(g.terms)) for g in J.generators])


def _nullspace(rows: list, ncols: int) -> list:
    """Rational basis of {v : M v = 0} for M given as a list of rows."""
    M = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fcol]
        out.append(v)
    return out


def linear_part(I: Ideal, affine: bool = True) -> list:
    """Basis of the affine-linear (or, with affine=False, linear) polynomials in I.

    Uses linearity of the normal form: c0 + sum c_i x_i lies in I iff
    c0*NF(1) + sum c_i*NF(x_i) = 0, a linear system in the c's.
    """
    ring = I.ring
    cands = ([ring.one()] if affine else []) + ring.gens()
    nfs = [I.normal_form(p) for p in cands]
    monos = sorted({e for f in nfs for e in f.terms})
    rows = [[f.terms.get(m, Fraction(0)) for f in nfs] for m in monos]
    kernel = _nullspace(rows, len(cands))
    out = []
    for v in kernel:
        p = ring.zero()
        for c, q in zip(v, cands):
            if c:
                p = p + q.scale(c)
        out.append(p.primitive())
    return out
