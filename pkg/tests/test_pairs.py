import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pair_suite import P, normality_suite, reduce_suite, root_point, sample_check, w_suite
from pexcalc.algebra import CycloElement
from pexcalc.ideal import Ideal
from pexcalc.pairs import (
    CutDegenerate,
    EmptyVariety,
    PairError,
    ReductionFailed,
    VarietyPair,
    additive_free,
    adim_bound,
    associated_preimage,
    axiom_instance,
    coherent_twists,
    cut,
    finite_cut_check,
    freeness,
    multiplicative_free,
    normal_check,
    point_in,
    reduce,
    transform,
    unity_action,
)
from pexcalc.predim import x_ring, y_ring

X2, Y2 = x_ring(2), y_ring(2)
x1, x2 = X2.gens()
y1, y2 = Y2.gens()


# -- construction ---------------------------------------------------------------

def test_pair_rejects_empty_sides():
    with pytest.raises(EmptyVariety):
        P(2, [X2.one()])
    with pytest.raises(EmptyVariety):
        P(2, [], [Y2.one()])
    # W inside a coordinate hyperplane misses the torus
    with pytest.raises(EmptyVariety):
        P(2, [], [y1])


def test_pair_rejects_wrong_rings():
    with pytest.raises(PairError):
        VarietyPair(2, Ideal(x_ring(3), []), Ideal(Y2, []))
    with pytest.raises(PairError):
        VarietyPair(2, Ideal(Y2, []), Ideal(Y2, []))


def test_pair_dimensions():
    p = P(2, [x1 + x2 - 1], [y2 - y1 ** 2])
    assert (p.dim_v, p.dim_w, p.excess) == (1, 1, 0)
    assert P(2).excess == 2


# -- freeness ---------------------------------------------------------------------

def test_free_examples():
    assert freeness(P(2), 3).free
    assert freeness(P(2, [x2 - x1 ** 2], [y2 - y1 - 1]), 3).free


def test_additive_dependence_example():
    d = additive_free(P(2, [x1 - x2]))
    assert d.m == (1, -1) and d.c == 0
    d = additive_free(P(2, [2 * x1 + 4 * x2 - 6]))
    assert d.m == (1, 2) and d.c == 3


def test_multiplicative_dependence_example():
    d = multiplicative_free(P(2, [], [y1 * y2 - 1]), 3)
    assert d.m == (1, 1) and d.c == 1
    d = multiplicative_free(P(2, [], [y1 ** 2 * y2 ** 2 - 2]), 3)
    assert d is not None and d.m == (2, 2)
    d = multiplicative_free(P(2, [], [y1 - 3 * y2]), 3)
    assert d.m == (1, -1) and d.c == 3


def test_multiplicative_dependence_needs_height():
    p = P(2, [], [y1 ** 2 - y2 ** 3])
    assert multiplicative_free(p, 2) is None
    assert multiplicative_free(p, 3).m == (2, -3)


def _check_witness(p, fr):
    n = p.n
    if fr.additive is not None:
        m, c = fr.additive.m, fr.additive.c
        form = sum((x.scale(a) for x, a in zip(p.I_V.ring.gens(), m)), p.I_V.ring.zero()) - c
        assert p.I_V.contains(form)
    if fr.multiplicative is not None:
        m, c = fr.multiplicative.m, fr.multiplicative.c
        R = p.I_W.ring
        pos = R.monomial([max(a, 0) for a in m])
        neg = R.monomial([max(-a, 0) for a in m])
        assert p.torus_w.contains(pos - neg.scale(c))
        assert max(abs(a) for a in m) <= fr.bound
    return n


def _random_pair(rng):
    vg, wg = [], []
    for _ in range(rng.randint(0, 2)):
        kind = rng.randrange(3)
        a, b = rng.randint(-2, 2), rng.randint(-2, 2)
        if kind == 0:
            vg.append(x1.scale(a) + x2.scale(b) - rng.randint(-2, 2))
        elif kind == 1:
            vg.append(x2 - x1 ** 2 - rng.randint(0, 2))
        else:
            vg.append(x1 * x2 - rng.randint(1, 2))
    for _ in range(rng.randint(0, 1)):
        kind = rng.randrange(3)
        if kind == 0:
            wg.append(y1 ** rng.randint(1, 2) * y2 ** rng.randint(0, 2) - rng.choice([1, 2, F(1, 2)]))
        elif kind == 1:
            wg.append(y2 - y1 - rng.randint(1, 2))
        else:
            wg.append(y1 ** 2 - 3 * y2)
    return P(2, vg, wg)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_dependence_witnesses_hold(seed):
    rng = random.Random(seed)
    try:
        p = _random_pair(rng)
    except PairError:
        return
    _check_witness(p, freeness(p, 2))


# -- normality ------------------------------------------------------------------

@pytest.mark.parametrize("case", normality_suite(), ids=lambda c: c.name)
def test_normality_suite(case):
    v = normal_check(case.pair, 3)
    assert v.normal == case.normal
    if not case.normal:
        assert v.witness.basis == case.witness
        assert v.dims == case.dims
        a, b, k = v.dims
        assert a + b < k == v.witness.rank


@pytest.mark.parametrize("case", normality_suite(), ids=lambda c: c.name)
def test_normality_monotone_in_height(case):
    verdicts = [normal_check(case.pair, H).normal for H in (1, 2, 3)]
    # failing at H fails at every larger H
    for a, b in zip(verdicts, verdicts[1:]):
        assert a or not b


UNIMODULAR = [[[1, 1], [0, 1]], [[0, 1], [1, 0]], [[2, 1], [1, 1]]]


def _inverse2(U):
    (a, b), (c, d) = U
    det = a * d - b * c
    return [[d * det, -b * det], [-c * det, a * det]]


@pytest.mark.parametrize("case", [c for c in normality_suite() if c.pair.n == 2], ids=lambda c: c.name)
@pytest.mark.parametrize("U", UNIMODULAR)
def test_normality_unimodular_stability(case, U):
    H = 1
    big = H * max(abs(a) for r in U for a in r) * 2
    p = case.pair
    q = transform(p, U)
    assert (q.dim_v, q.dim_w) == (p.dim_v, p.dim_w)
    if normal_check(p, big).normal:
        assert normal_check(q, H).normal
    Ui = _inverse2(U)
    big_i = H * max(abs(a) for r in Ui for a in r) * 2
    if normal_check(q, big_i).normal:
        assert normal_check(p, H).normal


def test_axiom_instance_reasons():
    rep = axiom_instance(P(2, [x1 - x2], [y1 - y2]), 2)
    assert not rep.qualifies
    assert rep.reasons[:3] == ["additive dependence", "multiplicative dependence", "not normal"]
    rep = axiom_instance(P(2, [x2 - x1 ** 2], irreducible_v=False), 2)
    assert rep.reasons == ["V not asserted irreducible"]
    assert axiom_instance(P(2, [x2 - x1 ** 2], [y2 - y1 - 1]), 3).qualifies


# -- reduction --------------------------------------------------------------------

@pytest.mark.parametrize("case", reduce_suite(), ids=lambda c: c.name)
def test_reduce_round_trip(case):
    q, cert = reduce(case.pair, case.v_sub, case.w_sub)
    assert freeness(q, 3).free
    assert q.n == case.pair.n + (cert.v_var is not None) + (cert.w_var is not None)
    if case.f is not None:
        assert cert.v_equation == case.f
    sample_check(case, q, cert, random.Random(case.name))


def test_reduce_exponent_escalates():
    case = next(c for c in reduce_suite() if "needs k=2" in c.name)
    q, cert = reduce(case.pair, case.v_sub, case.w_sub)
    assert cert.k == 2
    # with k = 1 the new coordinate equals x2 on V
    with pytest.raises(ReductionFailed):
        reduce(case.pair, case.v_sub, case.w_sub, k_cap=1)


def test_reduce_notes_when_w_side_misses_torus():
    case = next(c for c in reduce_suite() if "misses" in c.name)
    _, cert = reduce(case.pair, case.v_sub, case.w_sub)
    assert cert.w_var is None and cert.notes


def test_reduce_errors():
    with pytest.raises(PairError, match="nothing to remove"):
        reduce(P(2, [x1]), Ideal(X2, [x1]), None)
    with pytest.raises(PairError, match="one extra equation"):
        reduce(P(2), Ideal(X2, [x1, x2]), None)
    with pytest.raises(PairError):
        reduce(P(2), None, None)
    # W is dependent and stays so whatever k is
    with pytest.raises(ReductionFailed):
        reduce(P(2, [], [y1 * y2 - 2]), Ideal(X2, [x1]), None)


# -- generic cuts -------------------------------------------------------------------

def test_cut_plane_times_torus_down_to_zero():
    p = P(2)
    q, rep = cut(p, 7)
    assert rep.ok and (rep.dim_before, rep.dim_after) == (2, 1)
    assert (rep.excess_before, rep.excess_after) == (2, 1)
    with pytest.raises(PairError):
        cut(q, 7)
    r, rep = cut(q, 7, allow_curve=True)
    assert rep.ok and r.excess == 0 and r.dim_v == 0
    assert len(r.generic_forms) == 2
    with pytest.raises(PairError):
        cut(r, 7, allow_curve=True)


def test_cut_strict_on_curve_target():
    p = P(2, [], [y2 - y1 ** 2 - 1])
    q, rep = cut(p, 3)
    assert rep.ok and q.excess == 0
    assert freeness(q, 3).free and normal_check(q, 3).normal


def test_cut_is_deterministic():
    a = cut(P(2), 11)[1].coefficients
    b = cut(P(2), 11)[1].coefficients
    assert a == b != cut(P(2), 12)[1].coefficients


def test_cut_needs_qualifying_pair():
    with pytest.raises(PairError, match="normal free"):
        cut(P(2, [x1 - x2]), 1)


def test_cut_degenerate_is_reported():
    assert issubclass(CutDegenerate, PairError)


# -- roots of unity and preimages ----------------------------------------------------

def test_unity_examples():
    z4 = CycloElement.zeta(4)
    (t,) = y_ring(1).gens()
    assert point_in(Ideal(y_ring(1), [t ** 4 - 1]), [z4 * z4])
    assert z4 * z4 == CycloElement.rational(4, -1)
    assert point_in(Ideal(y_ring(1), [t ** 2 - 1]), [CycloElement.rational(2, -1)])


@pytest.mark.parametrize("l", [1, 2, 3, 4])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_preimage_tower(l, m):
    for p, w in w_suite():
        Pl, Plm = associated_preimage(p, l), associated_preimage(p, l * m)
        Y = Pl.ring
        powers = [y ** m for y in Y.gens()]
        for h in Pl.generators:
            assert Plm.contains(h.compose(powers))
        u = root_point(w, l * m)
        assert point_in(Plm, u)
        assert point_in(Pl, [a ** m for a in u])
        assert point_in(p.I_W, [a ** (l * m) for a in u])


@pytest.mark.parametrize("l", range(1, 7))
def test_unity_action_closure(l):
    for p, w in w_suite():
        Pl = associated_preimage(p, l)
        u = [CycloElement.rational(l, a) for a in root_point(w, l)]
        assert point_in(Pl, u)
        for exps in itertools.product(range(l), repeat=p.n):
            xi = [CycloElement.zeta(l, e) for e in exps]
            assert point_in(Pl, unity_action(u, xi, l))


def test_unity_action_rejects_bad_twist():
    with pytest.raises(PairError):
        unity_action([CycloElement.rational(4, 1)], [CycloElement.zeta(4)], 2)
    with pytest.raises(PairError):
        unity_action([CycloElement.rational(2, 1)], [], 2)


@pytest.mark.parametrize("L", [4, 6, 12])
def test_coherent_twists(L):
    fam = coherent_twists([1, 5], L)
    assert sorted(fam) == [d for d in range(1, L + 1) if L % d == 0]
    one = CycloElement.rational(L, 1)
    for l, xi in fam.items():
        assert all(z ** l == one for z in xi)
        for l2 in fam:
            if l % l2 == 0:
                assert [z ** (l // l2) for z in xi] == fam[l2]


def test_finite_cut_check():
    for p, w in w_suite():
        roots = {l: root_point(w, l) for l in (1, 2, 3, 4)}
        assert all(finite_cut_check(p, roots).values())
    p, w = w_suite()[1]
    bad = {2: (root_point(w, 2)[0], root_point(w, 2)[1] + 1)}
    assert finite_cut_check(p, bad) == {2: False}


def test_preimage_rejects_nonpositive():
    with pytest.raises(PairError):
        associated_preimage(P(1), 0)


# -- adim ------------------------------------------------------------------------------

def test_adim_examples():
    rep = adim_bound(P(2), 3)
    assert (rep.bound, rep.exact) == (2, 2)
    rep = adim_bound(P(2, [x2 - x1 ** 2]), 3)
    assert (rep.bound, rep.exact) == (1, 1)
    rep = adim_bound(P(2, [], [y2 - y1 - 1]), 3)
    assert (rep.bound, rep.exact) == (1, 1)
    rep = adim_bound(P(2, [x2 - x1 ** 2], [y2 - y1 - 1]), 3)
    assert (rep.bound, rep.exact) == (0, None)
    with pytest.raises(PairError):
        adim_bound(P(2, [x1, x2], [y2 - y1]), 3)
