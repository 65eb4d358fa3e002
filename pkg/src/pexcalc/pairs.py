"""Pairs (V, W) with V in affine n-space and W in the n-torus.

Normality and freeness checks, the reduction of a finite type
(V minus V', W minus W') to a plain pair, the generic hyperplane cut, the
associated preimages under coordinatewise powers with the root-of-unity
action, and the dimension bound for V intersected with ln W.

Normality and multiplicative freeness quantify over all integer vectors;
both are checked up to a height bound and the verdicts carry that bound.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import CycloElement, Polynomial, Ring, common_level
from .ideal import Ideal, dim, linear_part, saturate_units
from .lattice import (
    Sublattice,
    enumerate_sublattices,
    lin_image,
    lin_image_dim,
    mono_image,
    mono_image_dim,
    rank,
)
from .predim import x_ring, y_ring


class PairError(ValueError):
    """Precondition violated by a pair or by the inputs of an operation."""


class EmptyVariety(PairError):
    pass


class ReductionFailed(PairError):
    """No exponent up to the cap made the reduced pair free."""


class CutDegenerate(PairError):
    """The random hyperplane was not generic enough; retry with another seed."""


@dataclass(frozen=True)
class VarietyPair:
    """(V, W): V = V(I_V) in x1..xn, W = V(I_W) in y1..yn restricted to the torus.

    ``generic_forms`` lists affine-linear polynomials whose coefficients stand
    in for parameters algebraically independent over Q (the hyperplanes added
    by ``cut``); relations they induce are not counted as additive
    dependencies.
    """

    n: int
    I_V: Ideal
    I_W: Ideal
    irreducible_v: bool = True
    irreducible_w: bool = True
    generic_forms: tuple = ()

    def __post_init__(self):
        if self.I_V.ring != x_ring(self.n) or self.I_W.ring != y_ring(self.n):
            raise PairError("V must live in x1..xn and W in y1..yn")
        if self.I_V.is_unit():
            raise EmptyVariety("V is empty")
        if self.I_W.is_unit():
            raise EmptyVariety("W is empty")
        if self.torus_w.is_unit():
            raise EmptyVariety("W does not meet the torus")

    @classmethod
    def from_polys(cls, n: int, v_polys=(), w_polys=(), **kw) -> "VarietyPair":
        return cls(n, Ideal(x_ring(n), v_polys), Ideal(y_ring(n), w_polys), **kw)

    @property
    def torus_w(self) -> Ideal:
        t = self.__dict__.get("_torus_w")
        if t is None:
            t = saturate_units(self.I_W)
            object.__setattr__(self, "_torus_w", t)
        return t

    @property
    def dim_v(self) -> int:
        return dim(self.I_V).dim

    @property
    def dim_w(self) -> int:
        return dim(self.torus_w).dim

    @property
    def excess(self) -> int:
        """dim V + dim W - n."""
        return self.dim_v + self.dim_w - self.n


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True)
class Dependence:
    m: tuple
    c: Fraction


@dataclass(frozen=True)
class FreenessVerdict:
    additive: Optional[Dependence]  # None means free
    multiplicative: Optional[Dependence]  # None means free up to ``bound``
    bound: int

    @property
    def free(self) -> bool:
        return self.additive is None and self.multiplicative is None


def _reduce_modulo(vectors: list, span: list) -> list:
    """Vectors not in span(span), greedily, in order."""
    kept = []
    base = list(span)
    r = rank(base) if base else 0
    for v in vectors:
        r2 = rank(base + [v])
        if r2 > r:
            kept.append(v)
            base.append(v)
            r = r2
    return kept


def additive_free(p: VarietyPair) -> Optional[Dependence]:
    """None if V carries no relation sum m_i x_i = c; otherwise a witness (m, c).

    Relations coming from ``generic_forms`` (and their combinations) are
    excluded, since their coefficients model independent parameters.
    """
    n = p.n

    def vec(f: Polynomial):
        return [f.terms.get((0,) * n, Fraction(0))] + [
            f.terms.get(tuple(int(i == j) for j in range(n)), Fraction(0)) for i in range(n)
        ]

    lin = [vec(f) for f in linear_part(p.I_V)]
    generic = [vec(f) for f in p.generic_forms]
    for v in _reduce_modulo(lin, generic):
        if any(v[1:]):
            # c0 + sum c_i x_i = 0  ->  sum m_i x_i = c
            den = 1
            for c in v:
                den = den * c.denominator // _gcd(den, c.denominator)
            ints = [int(c * den) for c in v]
            g = 0
            for a in ints[1:]:
                g = _gcd(g, a)
            m = [a // g for a in ints[1:]]
            sign = 1 if next(a for a in m if a) > 0 else -1
            m = [sign * a for a in m]
            c = Fraction(-ints[0], g) * sign
            return Dependence(tuple(m), c)
    return None


def _projective_vectors(n: int, H: int):
    for L in enumerate_sublattices(n, 1, H):
        yield L.basis[0]


def multiplicative_free(p: VarietyPair, H: int) -> Optional[Dependence]:
    """None if no y^m = c (c rational) holds on W for primitive m up to height H.

    Works modulo the torus part of W. Multiples j*m within the height bound
    are tried as well, so y1^2*y2^2 = 2 is caught through m = (1, 1).
    """
    if H < 1:
        raise PairError("height bound must be at least 1")
    T = p.torus_w
    R = T.ring
    for m in _projective_vectors(p.n, H):
        top = max(abs(a) for a in m)
        for j in range(1, H // top + 1):
            mm = [j * a for a in m]
            pos = T.normal_form(R.monomial([max(a, 0) for a in mm]))
            neg = T.normal_form(R.monomial([max(-a, 0) for a in mm]))
            c = _proportional(pos, neg)
            if c is not None:
                return Dependence(tuple(mm), c)
    return None


def _proportional(f: Polynomial, g: Polynomial) -> Optional[Fraction]:
    if g.is_zero() or f.is_zero():
        return None
    if set(f.terms) != set(g.terms):
        return None
    e = next(iter(f.terms))
    c = f.terms[e] / g.terms[e]
    return c if f == g.scale(c) else None


def freeness(p: VarietyPair, H: int) -> FreenessVerdict:
    return FreenessVerdict(additive_free(p), multiplicative_free(p, H), H)


@dataclass(frozen=True)
class NormalityVerdict:
    normal: bool
    bound: int
    witness: Optional[Sublattice] = None
    dims: Optional[tuple] = None  # (dim V', dim W', k)


def _normal_candidates(n: int, H: int):
    # coordinate projections for every k first, then the rest
    for k in range(1, n + 1):
        for L in enumerate_sublattices(n, k, H):
            if L.is_coordinate():
                yield L
    for k in range(1, n + 1):
        for L in enumerate_sublattices(n, k, H):
            if not L.is_coordinate():
                yield L


def normal_check(p: VarietyPair, H: int) -> NormalityVerdict:
    """dim V'_M + dim W'_M >= k for every rank-k sublattice M up to height H.

    Returns the first failure in enumeration order (coordinate projections
    first), else a NormalUpTo(H) verdict.
    """
    if H < 1:
        raise PairError("height bound must be at least 1")
    n = p.n
    T = p.torus_w
    dv, dw = p.dim_v, p.dim_w
    for L in _normal_candidates(n, H):
        k = L.rank
        # images have dimension at least dim - (n - k)
        if max(0, dv - (n - k)) + max(0, dw - (n - k)) >= k:
            continue
        M = L.matrix()
        a = lin_image_dim(p.I_V, M)
        b = mono_image_dim(p.I_W, M, torus=T)
        if a + b < k:
            return NormalityVerdict(False, H, L, (a, b, k))
    return NormalityVerdict(True, H)


@dataclass
class AxiomReport:
    qualifies: bool
    bound: int
    freeness: FreenessVerdict
    normality: NormalityVerdict
    irreducible_v: bool
    irreducible_w: bool
    reasons: list = field(default_factory=list)


def axiom_instance(p: VarietyPair, H: int) -> AxiomReport:
    """Whether the pair is an irreducible normal free pair (up to H), i.e. an
    instance of the existential-closedness schema.
    """
    fr = freeness(p, H)
    nr = normal_check(p, H)
    reasons = []
    if fr.additive is not None:
        reasons.append("additive dependence")
    if fr.multiplicative is not None:
        reasons.append("multiplicative dependence")
    if not nr.normal:
        reasons.append("not normal")
    if not p.irreducible_v:
        reasons.append("V not asserted irreducible")
    if not p.irreducible_w:
        reasons.append("W not asserted irreducible")
    return AxiomReport(not reasons, H, fr, nr, p.irreducible_v, p.irreducible_w, reasons)


# -- reduction of finite types -------------------------------------------------

@dataclass
class ReductionCertificate:
    n: int  # original ambient dimension
    v_equation: Optional[Polynomial]  # f with V \ V' = V \ {f = 0}
    w_equation: Optional[Polynomial]
    k: int
    v_var: Optional[int]  # index of the new x-variable, if any
    w_var: Optional[int]
    notes: list = field(default_factory=list)


def _pick_equation(I: Ideal, I_sub: Ideal, what: str) -> Polynomial:
    cands = [g for g in I_sub.generators if not I.contains(g)]
    if not cands:
        raise PairError(f"{what}' contains {what}: nothing to remove")
    f = cands[0]
    if not (I + f).contains_ideal(I_sub):
        raise PairError(
            f"{what}' must be cut out of {what} by one extra equation; reduce one equation at a time"
        )
    return f


def _lift(poly: Polynomial, ring: Ring) -> Polynomial:
    return poly.embed(ring, list(range(poly.ring.nvars)))


def reduce(p: VarietyPair, I_Vsub: Optional[Ideal], I_Wsub: Optional[Ideal],
           H: int = 3, k_cap: int = 5):
    """Replace the finite type (V minus V', W minus W') by a plain pair.

    V side: a new x-variable with f * x_new^k = 1 (W gets a free coordinate).
    W side: a new y-variable with g * y_new = 1 (V gets a free coordinate),
    skipped when W' misses the torus. k runs 1..k_cap until the output is
    free of additive and multiplicative dependencies up to H.

    ``None`` for either sub-ideal means nothing is removed on that side.
    """
    n = p.n
    f = None
    if I_Vsub is not None:
        f = _pick_equation(p.I_V, I_Vsub, "V")
    g = None
    notes = []
    if I_Wsub is not None and not I_Wsub.is_unit():
        g = _pick_equation(p.I_W, I_Wsub, "W")
        if saturate_units(p.I_W + g).is_unit():
            notes.append("W' misses the torus; nothing to remove on the W side")
            g = None
    if f is None and g is None:
        raise PairError("nothing to remove")
    N = n + (f is not None) + (g is not None)
    X, Y = x_ring(N), y_ring(N)
    v_var = n if f is not None else None
    w_var = (n + (f is not None)) if g is not None else None
    # without a V-side equation the exponent plays no role
    ks = range(1, k_cap + 1) if f is not None else [1]
    obstruction = None
    for k in ks:
        vg = [_lift(h, X) for h in p.I_V.generators]
        wg = [_lift(h, Y) for h in p.I_W.generators]
        if f is not None:
            vg.append(_lift(f, X) * X.var(v_var) ** k - 1)
        if g is not None:
            wg.append(_lift(g, Y) * Y.var(w_var) - 1)
        q = VarietyPair(N, Ideal(X, vg), Ideal(Y, wg), p.irreducible_v, p.irreducible_w,
                        tuple(_lift(h, X) for h in p.generic_forms))
        add = additive_free(q)
        mul = multiplicative_free(q, H)
        if add is None and mul is None:
            return q, ReductionCertificate(n, f, g, k, v_var, w_var, notes)
        obstruction = add or mul
        if add is None:
            break  # only the W side is dependent and k does not touch it
    raise ReductionFailed(f"no free reduction with k <= {k_cap}; obstruction {obstruction}")


# -- generic hyperplane cut ----------------------------------------------------

@dataclass
class CutReport:
    coefficients: tuple
    dim_before: int
    dim_after: int
    excess_before: int
    excess_after: int
    freeness: FreenessVerdict
    normality: NormalityVerdict
    ok: bool
    seed: int


def random_rational(rng: random.Random, bound: int = 10 ** 6) -> Fraction:
    while True:
        num = rng.randint(-bound, bound)
        if num:
            return Fraction(num, rng.randint(1, bound))


def cut(p: VarietyPair, seed: int, H: int = 3, allow_curve: bool = False):
    """Intersect V with sum c_i x_i = 1 for pseudo-random rational c_i.

    Requires a normal free pair (up to H) with dim V + dim W - n > 0 and
    dim V > 1. With ``allow_curve`` a curve V is accepted when W is the
    whole torus, which lets repeated cuts run down to excess 0.
    Raises CutDegenerate when the dimension did not drop by exactly one.
    """
    rep = axiom_instance(p, H)
    if not rep.freeness.free or not rep.normality.normal:
        raise PairError("cut needs a normal free pair: " + ", ".join(rep.reasons))
    d = p.excess
    dv = p.dim_v
    if d <= 0:
        raise PairError(f"dim V + dim W - n = {d}; nothing to cut")
    if dv <= 1 and not (allow_curve and dv == 1 and p.dim_w == p.n):
        raise PairError(f"cut needs dim V > 1 (got {dv})")
    # the depth keeps repeated cuts under one seed from redrawing a hyperplane
    rng = random.Random(f"{seed}:{len(p.generic_forms)}")
    cs = tuple(random_rational(rng) for _ in range(p.n))
    X = p.I_V.ring
    form = X.zero()
    for c, x in zip(cs, X.gens()):
        form = form + x.scale(c)
    form = form - 1
    q = VarietyPair(p.n, p.I_V + form, p.I_W, p.irreducible_v, p.irreducible_w,
                    p.generic_forms + (form,))
    dv2 = q.dim_v
    fr = freeness(q, H)
    nr = normal_check(q, H)
    ok = dv2 == dv - 1 and fr.free and nr.normal
    report = CutReport(cs, dv, dv2, d, q.excess, fr, nr, ok, seed)
    if dv2 != dv - 1:
        raise CutDegenerate(f"dimension went {dv} -> {dv2}; retry with another seed")
    return q, report


# -- associated sequences --------------------------------------------------------

def associated_preimage(p: VarietyPair, l: int) -> Ideal:
    """Generators g(y_1^l, ..., y_n^l): the full preimage of W under [l]."""
    if l < 1:
        raise PairError("l must be positive")
    Y = p.I_W.ring
    imgs = [y ** l for y in Y.gens()]
    return Ideal(Y, [g.compose(imgs) for g in p.I_W.generators])


def point_in(I: Ideal, point: Sequence) -> bool:
    """Whether every generator of I vanishes at the point (exact arithmetic)."""
    for g in I.generators:
        v = g.evaluate(list(point))
        if isinstance(v, CycloElement):
            if not v.is_zero():
                return False
        elif v != 0:
            return False
    return True


def unity_action(point: Sequence[CycloElement], xi: Sequence[CycloElement], l: int) -> list:
    """Coordinatewise product xi * point, after checking xi_i^l = 1."""
    if len(point) != len(xi):
        raise PairError("point and twist differ in length")
    L = common_level(list(point) + list(xi))
    for z in xi:
        if z.lift(L) ** l != CycloElement.rational(L, 1):
            raise PairError(f"{z} is not an l-th root of unity for l = {l}")
    return [a.lift(L) * b.lift(L) for a, b in zip(point, xi)]


def coherent_twists(exponents: Sequence[int], L: int) -> dict:
    """A coherent family xi(l) for l | L from xi(L) = (zeta_L^e_i): xi(l) = xi(L)^(L/l)."""
    top = [CycloElement.zeta(L, e) for e in exponents]
    out = {}
    for l in range(1, L + 1):
        if L % l == 0:
            out[l] = [z ** (L // l) for z in top]
    return out


def finite_cut_check(p: VarietyPair, roots: dict) -> dict:
    """For a family {l: point}, test each point against the preimage for l.

    ``roots`` maps l to a candidate l-th root of a point of W; only the
    supplied cut is examined.
    """
    return {l: point_in(associated_preimage(p, l), pt) for l, pt in sorted(roots.items())}


# -- pseudo-analytic dimension bound ------------------------------------------------

@dataclass
class AdimReport:
    bound: int
    height: int
    exact: Optional[int]
    notes: list = field(default_factory=list)


def adim_bound(p: VarietyPair, H: int) -> AdimReport:
    """dim V + dim W - n as a lower bound for adim(V meet ln W).

    Only asserted for pairs qualifying up to H. When W is the whole torus,
    V meet ln W = V and the value is exact (adim V = dim V); when V is the
    whole space, adim ln W = dim W.
    """
    rep = axiom_instance(p, H)
    if not rep.freeness.free or not rep.normality.normal:
        raise PairError("adim bound needs a normal free pair: " + ", ".join(rep.reasons))
    d = p.excess
    exact = None
    notes = []
    if p.dim_w == p.n:
        exact = p.dim_v
        notes.append("W is the full torus: adim(V meet ln W) = adim V = dim V")
    if p.dim_v == p.n:
        notes.append("V is the full space: adim(ln W) = dim W")
        if exact is None:
            exact = p.dim_w
    return AdimReport(d, H, exact, notes)


def transform(p: VarietyPair, U: Sequence[Sequence[int]]) -> VarietyPair:
    """Image of the pair under a unimodular U: x -> U x and y -> y^U."""
    n = p.n
    if len(U) != n or rank(U) != n:
        raise PairError("transform needs a square non-degenerate matrix")
    X, Y = x_ring(n), y_ring(n)
    V = lin_image(p.I_V, U)
    W = mono_image(p.torus_w, U)
    return VarietyPair(n, Ideal(X, [Polynomial(X, dict(g.terms)) for g in V.generators]),
                       Ideal(Y, [Polynomial(Y, dict(g.terms)) for g in W.generators]),
                       p.irreducible_v, p.irreducible_w)
