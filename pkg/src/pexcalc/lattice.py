"""Integer matrices acting linearly on x-space and monomially on y-space.

Hermite and Smith normal forms, bounded enumeration of rational row spaces
(one canonical saturated lattice each), and the images of varieties under
``x -> M x`` and ``y -> y^M``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

from .algebra import Polynomial, Ring
from .ideal import Ideal, dim, eliminate, saturate_units


class EmptyTorusPart(ValueError):
    """The variety has no point with all coordinates nonzero."""


def _copy(M):
    return [list(r) for r in M]


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B) -> list:
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row)) for j in range(cols)] for row in A]


def _xgcd(a: int, b: int):
    # s*a + t*b = g >= 0
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def hnf(M: Sequence[Sequence[int]]):
    """Row Hermite normal form: returns (H, U) with H = U M and U unimodular.

    Pivots are positive, entries above a pivot lie in [0, pivot), zero rows
    sit at the bottom.
    """
    A = _copy(M)
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if A[i][c]:
                a, b = A[r][c], A[i][c]
                g, s, t = _xgcd(a, b)
                p, q = -b // g, a // g
                A[r], A[i] = (
                    [s * x + t * y for x, y in zip(A[r], A[i])],
                    [p * x + q * y for x, y in zip(A[r], A[i])],
                )
                U[r], U[i] = (
                    [s * x + t * y for x, y in zip(U[r], U[i])],
                    [p * x + q * y for x, y in zip(U[r], U[i])],
                )
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        piv = A[r][c]
        for i in range(r):
            f = A[i][c] // piv
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                U[i] = [x - f * y for x, y in zip(U[i], U[r])]
        r += 1
    return A, U


def snf(M: Sequence[Sequence[int]]):
    """Smith normal form: returns (d, U, V) with U M V diagonal with entries d.

    ``d`` has length min(rows, cols) and satisfies d_1 | d_2 | ...; zeros
    trail.
    """
    A = _copy(M)
    m = len(A)
    n = len(A[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (A, V):
            for row in R:
                row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not nz:
                break
            _, pi, pj = min(nz)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for R in (A, V):
                        for row in R:
                            row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if not done:
                continue
            # pivot must divide the rest of the block
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            i = bad[0]
            A[t] = [x + y for x, y in zip(A[t], A[i])]
            U[t] = [x + y for x, y in zip(U[t], U[i])]
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    d = [A[i][i] for i in range(min(m, n))]
    return d, U, V


def rref(rows: Sequence[Sequence]) -> tuple:
    """Reduced row echelon form over Q, zero rows dropped; canonical per row space."""
    M = [[Fraction(v) for v in r] for r in rows]
    if not M:
        return ()
    ncols = len(M[0])
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
        r += 1
        if r == len(M):
            break
    return tuple(tuple(row) for row in M[:r])


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows))


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> list:
    """Lattice basis of {v in Z^ncols : M v = 0}."""
    if not rows:
        return identity(ncols)
    T = [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]
    H, U = hnf(T)
    return [U[i] for i in range(ncols) if not any(H[i])]


def saturation(rows: Sequence[Sequence[int]], ncols: int) -> list:
    """Basis of (rational span of rows) intersected with Z^ncols."""
    if not rows or not any(any(r) for r in rows):
        return []
    K = integer_kernel(rows, ncols)
    if not K:
        return identity(ncols)
    return integer_kernel(K, ncols)


@dataclass(frozen=True)
class Sublattice:
    """Canonical integer basis (HNF of the saturated lattice) of a rational row space."""

    basis: tuple

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int = None) -> "Sublattice":
        rows = [list(map(int, r)) for r in rows]
        if ncols is None:
            ncols = len(rows[0])
        H, _ = hnf(saturation(rows, ncols))
        return cls(tuple(tuple(r) for r in H if any(r)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def height(self) -> int:
        return max((abs(v) for r in self.basis for v in r), default=0)

    @property
    def ambient(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    def is_coordinate(self) -> bool:
        return all(sum(1 for v in r if v) == 1 for r in self.basis)

    def matrix(self) -> list:
        return [list(r) for r in self.basis]


def _box(n: int, H: int) -> list:
    """Nonzero vectors in [-H, H]^n with first nonzero entry positive."""
    out = []
    for v in product(range(-H, H + 1), repeat=n):
        nz = next((a for a in v if a), 0)
        if nz > 0:
            out.append(v)
    return out


@lru_cache(maxsize=64)
def _sublattices(n: int, k: int, H: int) -> tuple:
    if k == n:
        return (Sublattice(tuple(tuple(r) for r in identity(n))),)
    vecs = _box(n, H)
    layer = {}
    for v in vecs:
        layer.setdefault(rref([v]), [v])
    for _ in range(k - 1):
        nxt = {}
        for key, rows in layer.items():
            for v in vecs:
                new_rows = rows + [v]
                kk = rref(list(key) + [v])
                if len(kk) == len(key) + 1 and kk not in nxt:
                    nxt[kk] = new_rows
        layer = nxt
    lats = [Sublattice.from_rows(rows, n) for rows in layer.values()]
    coords = []
    for S in combinations(range(n), k):
        coords.append(Sublattice(tuple(tuple(int(j == i) for j in range(n)) for i in S)))
    coord_set = set(coords)
    rest = sorted((L for L in lats if L not in coord_set), key=lambda L: (L.height, L.basis))
    return tuple(coords + rest)


def enumerate_sublattices(n: int, k: int, H: int) -> Iterator[Sublattice]:
    """Every rank-k rational row space of Q^n spanned by vectors in [-H, H]^n, once.

    Coordinate subspaces come first, in lexicographic order of index sets;
    the rest follow by (height, basis).
    """
    if not (1 <= k <= n) or H < 1:
        raise ValueError("need 1 <= k <= n and H >= 1")
    for S in combinations(range(n), k):
        yield Sublattice(tuple(tuple(int(j == i) for j in range(n)) for i in S))
    for L in _sublattices(n, k, H):
        if not L.is_coordinate():
            yield L


# -- images of varieties -----------------------------------------------------

def _fresh(prefix: str, k: int, taken) -> tuple:
    names = []
    for i in range(1, k + 1):
        nm = f"{prefix}{i}"
        while nm in taken:
            nm = "_" + nm
        names.append(nm)
    return tuple(names)


def lin_image(I: Ideal, M: Sequence[Sequence[int]], names: Sequence[str] = None) -> Ideal:
    """Ideal of the closure of {M x : x in V(I)}, in fresh variables a1..ak."""
    n = I.ring.nvars
    k = len(M)
    out_names = tuple(names) if names else _fresh("a", k, I.ring.names)
    big = Ring(I.ring.names + out_names)
    gens = [g.embed(big, list(range(n))) for g in I.generators]
    xs = big.gens()
    for i, row in enumerate(M):
        if len(row) != n:
            raise ValueError("matrix width must match the ambient dimension")
        f = xs[n + i]
        for j, m in enumerate(row):
            if m:
                f = f - xs[j].scale(m)
        gens.append(f)
    J = eliminate(Ideal(big, gens), list(range(n, n + k)))
    return J


def _monomial_binomial(big: Ring, row, shift: int, target: int) -> Polynomial:
    # b * y^{m-} - y^{m+}
    pos = [0] * big.nvars
    neg = [0] * big.nvars
    for j, m in enumerate(row):
        if m > 0:
            pos[shift + j] = m
        elif m < 0:
            neg[shift + j] = -m
    neg[target] += 1
    return big.monomial(neg) - big.monomial(pos)


def mono_image(I: Ideal, M: Sequence[Sequence[int]], names: Sequence[str] = None) -> Ideal:
    """Ideal of the closure of {y^M : y in V(I), all y_i != 0}, in fresh b1..bk.

    Raises ``EmptyTorusPart`` when V(I) misses the torus.
    """
    n = I.ring.nvars
    k = len(M)
    out_names = tuple(names) if names else _fresh("b", k, I.ring.names)
    z = _fresh("_w", 1, I.ring.names + out_names)
    big = Ring(I.ring.names + z + out_names)
    gens = [g.embed(big, list(range(n))) for g in I.generators]
    prod = big.var(n)
    for j in range(n):
        prod = prod * big.var(j)
    gens.append(prod - 1)
    for i, row in enumerate(M):
        if len(row) != n:
            raise ValueError("matrix width must match the ambient dimension")
        gens.append(_monomial_binomial(big, row, 0, n + 1 + i))
    J = eliminate(Ideal(big, gens), list(range(n + 1, n + 1 + k)))
    if J.is_unit():
        raise EmptyTorusPart("variety has no point in the torus")
    return J


def torus_part(I: Ideal) -> Ideal:
    J = saturate_units(I)
    if J.is_unit():
        raise EmptyTorusPart("variety has no point in the torus")
    return J


def lin_image_dim(I: Ideal, M: Sequence[Sequence[int]]) -> int:
    """dim of lin_image(I, M), skipping elimination when dimension bounds pin it.

    For a linear map of rank r, fibres on V have dimension at most n - r,
    so dim V - (n - r) <= dim image <= min(r, dim V).
    """
    n = I.ring.nvars
    if not M:
        return 0 if I.is_proper() else -1
    src = dim(I).dim
    if src < 0:
        return -1
    r = rank(M)
    lo, hi = max(0, src - (n - r)), min(r, src)
    if lo == hi:
        return lo
    return dim(lin_image(I, M)).dim


def mono_image_dim(I: Ideal, M: Sequence[Sequence[int]], torus: Ideal = None) -> int:
    """dim of mono_image(I, M) with the same bound shortcut on the torus part.

    ``torus`` may pass a precomputed saturation of I.
    """
    n = I.ring.nvars
    T = torus if torus is not None else torus_part(I)
    if not M:
        return 0
    src = dim(T).dim
    r = rank(M)
    lo, hi = max(0, src - (n - r)), min(r, src)
    if lo == hi:
        return lo
    return dim(mono_image(T, M)).dim
