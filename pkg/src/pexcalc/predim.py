"""Finite configurations and the predimension calculus.

A configuration presents n generators x_1..x_n of a structure: the ideal of
algebraic relations of the points over Q, the ideal of relations of their
exponential images, integer rows of Q-linear relations, and which
generators lie in the kernel. Subsets are given as integer rows (each row
a Q-combination of generators), so spans of arbitrary elements are handled
uniformly.

Infinite quantifiers (over all finite supersets or subsets) are resolved by
enumerating rational subspaces of the generator span up to a height bound;
results that depend on that enumeration say so.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .algebra import Polynomial, Ring, cyclotomic
from .ideal import Ideal, block_order, eliminate, independent_set, linear_part, saturate_units
from .lattice import (
    Sublattice,
    enumerate_sublattices,
    lin_image,
    lin_image_dim,
    mono_image,
    mono_image_dim,
    rank,
    rref,
)


class ConfigurationError(ValueError):
    pass


class InternalInconsistency(RuntimeError):
    """Two independent computations of the same quantity disagreed."""


def x_ring(n: int) -> Ring:
    return Ring(tuple(f"x{i}" for i in range(1, n + 1)))


def y_ring(n: int) -> Ring:
    return Ring(tuple(f"y{i}" for i in range(1, n + 1)))


def _as_int_row(row) -> tuple:
    den = 1
    for v in row:
        den = den * Fraction(v).denominator // _gcd(den, Fraction(v).denominator)
    return tuple(int(Fraction(v) * den) for v in row)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def binomial(ring: Ring, row: Sequence[int]) -> Polynomial:
    """y^{m+} - y^{m-} for an integer row m."""
    pos = [max(m, 0) for m in row]
    neg = [max(-m, 0) for m in row]
    return ring.monomial(pos) - ring.monomial(neg)


@dataclass(frozen=True)
class Configuration:
    """Finite fragment of a structure with a predimension.

    ``locus_x`` and ``locus_y`` are the user-supplied relation ideals; the
    effective ideals also carry the linear relations, the multiplicative
    relations they force on the images (ex is a homomorphism), and y_i = 1
    for kernel generators.
    """

    n: int
    locus_x: Ideal
    locus_y: Ideal
    lin_rels: tuple = ()
    kernel: frozenset = frozenset()
    height: int = 2
    names: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "lin_rels", tuple(tuple(int(v) for v in r) for r in self.lin_rels))
        object.__setattr__(self, "kernel", frozenset(self.kernel))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"g{i}" for i in range(1, self.n + 1)))
        if self.locus_x.ring != x_ring(self.n) or self.locus_y.ring != y_ring(self.n):
            raise ConfigurationError("loci must live in x1..xn and y1..yn")
        for r in self.lin_rels:
            if len(r) != self.n:
                raise ConfigurationError(f"relation row {r} has wrong length")
        if any(not 0 <= i < self.n for i in self.kernel):
            raise ConfigurationError("kernel index out of range")
        if len(self.names) != self.n:
            raise ConfigurationError("one name per generator")
        if not self.eff_x.is_proper():
            raise ConfigurationError("x-relations have no common point")
        if not self.torus_y.is_proper():
            raise ConfigurationError("y-relations have no point with all coordinates nonzero")

    @cached_property
    def eff_x(self) -> Ideal:
        R = self.locus_x.ring
        xs = R.gens()
        extra = []
        for row in self.lin_rels:
            f = R.zero()
            for m, x in zip(row, xs):
                if m:
                    f = f + x.scale(m)
            extra.append(f)
        return Ideal(R, self.locus_x.generators + tuple(extra))

    @cached_property
    def relations(self) -> tuple:
        """Integer basis rows of all homogeneous Q-linear relations of the points."""
        rows = [_as_int_row([p.terms.get(tuple(int(i == j) for j in range(self.n)), 0)
                             for i in range(self.n)])
                for p in linear_part(self.eff_x, affine=False)]
        return tuple(rows)

    @cached_property
    def eff_y(self) -> Ideal:
        R = self.locus_y.ring
        extra = [binomial(R, row) for row in self.relations]
        extra += [R.var(i) - 1 for i in sorted(self.kernel)]
        return Ideal(R, self.locus_y.generators + tuple(extra))

    @cached_property
    def torus_y(self) -> Ideal:
        return saturate_units(self.eff_y)

    @cached_property
    def _rel_rank(self) -> int:
        return rank(self.relations)

    def span_key(self, rows) -> tuple:
        """Canonical key of span(rows) in the structure (relations factored in)."""
        return rref(list(self.relations) + [list(r) for r in rows])

    def restrict(self, indices: Sequence[int]) -> "Configuration":
        """Sub-configuration on the listed generators (0-based)."""
        idx = sorted(set(indices))
        m = len(idx)
        ex = eliminate(self.eff_x, idx)
        ey = eliminate(self.torus_y, idx)
        lx = Ideal(x_ring(m), [Polynomial(x_ring(m), dict(g.terms)) for g in ex.generators])
        ly = Ideal(y_ring(m), [Polynomial(y_ring(m), dict(g.terms)) for g in ey.generators])
        kern = {idx.index(i) for i in self.kernel if i in idx}
        return Configuration(m, lx, ly, (), kern, self.height, tuple(self.names[i] for i in idx))


def spec_rows(spec, n: int) -> list:
    """Rows for a subset spec: index list, Sublattice, or explicit integer rows."""
    if spec is None:
        return []
    if isinstance(spec, Sublattice):
        return spec.matrix()
    spec = list(spec)
    if not spec:
        return []
    if all(isinstance(s, int) for s in spec):
        for i in spec:
            if not 0 <= i < n:
                raise ConfigurationError(f"generator index {i} out of range")
        return [[int(j == i) for j in range(n)] for i in spec]
    rows = [list(map(int, r)) for r in spec]
    if any(len(r) != n for r in rows):
        raise ConfigurationError("row length must equal the number of generators")
    return rows


def all_generators(c: Configuration) -> list:
    return list(range(c.n))


def dim_q(c: Configuration, spec) -> int:
    rows = spec_rows(spec, c.n)
    if not rows:
        return 0
    return rank(list(c.relations) + rows) - c._rel_rank


def trdeg_x(c: Configuration, spec) -> int:
    rows = spec_rows(spec, c.n)
    if not rows:
        return 0
    return lin_image_dim(c.eff_x, rows)


def trdeg_y(c: Configuration, spec) -> int:
    rows = spec_rows(spec, c.n)
    if not rows:
        return 0
    return mono_image_dim(c.eff_y, rows, torus=c.torus_y)


def delta(c: Configuration, spec, cache: Optional[dict] = None) -> int:
    """tr.d. of the elements plus tr.d. of their images minus their Q-dimension."""
    rows = spec_rows(spec, c.n)
    if cache is not None:
        key = c.span_key(rows)
        if key in cache:
            return cache[key]
    value = trdeg_x(c, rows) + trdeg_y(c, rows) - dim_q(c, rows)
    if cache is not None:
        cache[key] = value
    return value


def _relative_trdeg(I: Ideal, rows, base_rows, torus: Ideal = None) -> int:
    """tr.d.(X / X') read off a single block-order basis of the joint locus."""
    if not rows:
        return 0
    n = len(rows[0])
    # only the spans matter: use saturated bases, X' first, then the new part
    base = Sublattice.from_rows(base_rows, n).matrix() if base_rows else []
    top = []
    r = len(base)
    for row in Sublattice.from_rows(list(rows) + list(base_rows), n).matrix():
        if rank(base + top + [row]) > r:
            top.append(row)
            r += 1
    if not top:
        return 0
    rows, base_rows = top, base
    k = len(rows)
    allrows = list(rows) + list(base_rows)
    if torus is None:
        J = lin_image(I, allrows)
    else:
        J = mono_image(torus, allrows)
    # joint locus in (a_1..a_k, a'_1..); block order puts X's coordinates first
    basis = J.basis(block_order(k))
    key = block_order(k).key()
    lms = [max(g.terms, key=key) for g in basis]
    total = len(independent_set(lms, J.ring.nvars))
    base_lms = [lm[k:] for lm in lms if not any(lm[:k])]
    base = len(independent_set(base_lms, J.ring.nvars - k))
    return total - base


def delta_rel(c: Configuration, X, Xp, cache: Optional[dict] = None) -> int:
    """delta(X / X') = delta(X X') - delta(X'), cross-checked against the
    relative form tr.d.(X/X') + tr.d.(ex X/ex X') - dim_Q(X/X').
    """
    rx = spec_rows(X, c.n)
    rp = spec_rows(Xp, c.n)
    first = delta(c, rx + rp, cache) - delta(c, rp, cache)
    dq = rank(list(c.relations) + rp + rx) - rank(list(c.relations) + rp)
    tx = _relative_trdeg(c.eff_x, rx, rp)
    ty = _relative_trdeg(c.eff_y, rx, rp, torus=c.torus_y)
    second = tx + ty - dq
    if first != second:
        raise InternalInconsistency(
            f"relative predimension mismatch: {first} by difference, {second} by relative form"
        )
    return first


def _subspaces(n: int, H: int):
    for k in range(1, n + 1):
        yield from enumerate_sublattices(n, k, H)


@dataclass(frozen=True)
class StrongVerdict:
    strong: bool
    bound: int
    witness: Optional[tuple] = None  # rows of X with delta(X/A) < 0
    value: Optional[int] = None


def strong_ext(c: Configuration, A, H: int = None, cache: Optional[dict] = None) -> StrongVerdict:
    """Check delta(X/A) >= 0 for X over rational subspaces up to height H.

    delta only depends on spans, so one representative per subspace is
    enough; a negative verdict carries the offending X.
    """
    H = c.height if H is None else H
    cache = {} if cache is None else cache
    ra = spec_rows(A, c.n)
    base = delta(c, ra, cache)
    seen = {c.span_key(ra)}
    for L in _subspaces(c.n, H):
        rows = L.matrix()
        key = c.span_key(ra + rows)
        if key in seen:
            continue
        seen.add(key)
        v = delta(c, ra + rows, cache) - base
        if v < 0:
            return StrongVerdict(False, H, tuple(tuple(r) for r in rows), v)
    return StrongVerdict(True, H)


def partial_dim(c: Configuration, X, H: int = None, cache: Optional[dict] = None) -> int:
    """min delta(X') over X <= X' within the generator span, up to height H."""
    H = c.height if H is None else H
    cache = {} if cache is None else cache
    rx = spec_rows(X, c.n)
    base_key = c.span_key(rx)
    memo = ("partial", base_key, H)
    if memo in cache:
        return cache[memo]
    best = delta(c, rx, cache)
    seen = {base_key}
    for L in _subspaces(c.n, H):
        rows = rx + L.matrix()
        key = c.span_key(rows)
        if key in seen:
            continue
        seen.add(key)
        best = min(best, delta(c, rows, cache))
    cache[memo] = best
    return best


def closure(c: Configuration, A, pool, H: int = None, cache: Optional[dict] = None) -> list:
    """Members b of ``pool`` with partial_dim(A b) = partial_dim(A)."""
    cache = {} if cache is None else cache
    ra = spec_rows(A, c.n)
    base = partial_dim(c, ra, H, cache)
    out = []
    for b in pool:
        if partial_dim(c, ra + [list(b)], H, cache) == base:
            out.append(tuple(b))
    return out


def kernel_demo(size: int, height: int = 3, verify: bool = True) -> Configuration:
    """Configuration of pi, pi/2, ..., pi/N with ex(pi) = 1.

    ex(pi/k) is the primitive root zeta_k with zeta_k^(k/m) = zeta_m for m | k,
    a coherent choice of roots of unity. With ``verify`` every nonempty set
    of generators is checked to have delta 0.
    """
    if size < 1:
        raise ValueError("size must be positive")
    n = size
    X, Y = x_ring(n), y_ring(n)
    xs, ys = X.gens(), Y.gens()
    rels = []
    for k in range(2, n + 1):
        row = [0] * n
        row[0] = 1
        row[k - 1] = -k
        rels.append(tuple(row))
    ygens = []
    for k in range(2, n + 1):
        ygens.append(cyclotomic(k).compose([ys[k - 1]]))
        for m in range(2, k):
            if k % m == 0:
                ygens.append(ys[k - 1] ** (k // m) - ys[m - 1])
    names = ("pi",) + tuple(f"pi/{k}" for k in range(2, n + 1))
    c = Configuration(n, Ideal(X, []), Ideal(Y, ygens), tuple(rels), frozenset({0}), height, names)
    if verify:
        cache = {}
        for mask in range(1, 2 ** n):
            idx = [i for i in range(n) if mask >> i & 1]
            if delta(c, idx, cache) != 0:
                raise InternalInconsistency(f"kernel configuration has delta != 0 on {idx}")
    return c
