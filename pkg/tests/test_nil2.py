import random

import pytest

from sqgroup.abelian import AbHom, FgAbGroup, Z, cyclic, ext_group, finite_groups, parse_group, subgroup
from sqgroup.nil2 import (BilinearTerm, CarryTerm, Nil2Group, TableTerm, canonical_TA,
                          class_to_cocycle, difference_class, enumerate_cocycles, h2_split,
                          renormalize, solve_coboundary, twist_TA)
from sqgroup.quadfun import quad_value
from sqgroup.verify import random_cocycle


def G(text):
    return parse_group(text)


def test_z4_as_extension_of_z2():
    g = Nil2Group(cyclic(2), cyclic(2), (CarryTerm((1,), 2, (1,)),))
    assert g.check_cocycle() is None
    x = ((1,), (0,))
    assert g.element_order(x) == 4
    assert g.mul(x, x) == ((0,), (1,))


def test_inverse_formula_and_center():
    n = canonical_TA(G("Z/2 + Z/4")).total
    rng = random.Random(0)
    elems = list(n.elements())
    for _ in range(30):
        x = rng.choice(elems)
        q, c = x
        assert n.mul(x, n.inv(x)) == n.zero()
        mq = n.quotient.neg(q)
        assert n.inv(x) == (mq, n.center_part.neg(n.center_part.add(c, n.f(q, mq))))
        z = n.central(rng.choice(list(n.center_part.elements())))
        assert n.mul(x, z) == n.mul(z, x)


def test_canonical_commutator_z2_z2():
    n = canonical_TA(G("Z/2 + Z/2")).total
    e1, e2 = ((1, 0), (0,)), ((0, 1), (0,))
    assert any(n.commutator(e1, e2)[1])


def test_canonical_ta_pairing_identity():
    for text in ["Z/2 + Z/2", "Z/2 + Z/4", "Z/3 + Z/9", "Z^2", "Z/2 + Z/2 + Z/2", "Z/2 + Z/4 + Z"]:
        a = G(text)
        n = canonical_TA(a)
        lam = quad_value("Lambda2", a).group
        assert n.kernel == lam
        assert n.pairing() == AbHom.identity(lam)


def test_canonical_ta_trivial_cases():
    assert canonical_TA(Z).kernel.is_trivial
    n = canonical_TA(cyclic(2))
    assert n.kernel.is_trivial and ext_group(cyclic(2), n.kernel).group.is_trivial
    h = canonical_TA(G("Z^2")).total
    e1, e2 = ((1, 0), (0,)), ((0, 1), (0,))
    assert h.commutator(e1, e2) == ((0, 0), (1,))


def test_h2_of_z2_by_z2():
    classes = set()
    for g in enumerate_cocycles(cyclic(2), cyclic(2)):
        cls = h2_split(g)
        classes.add(tuple(cls.ext_coords))
        if not cls.is_zero():
            x = ((1,), (0,))
            assert g.element_order(x) == 4
    assert len(classes) == 2


def test_symmetric_bilinear_on_z_is_trivial():
    g = Nil2Group(Z, Z, (BilinearTerm((((3,),),)),))
    cls = h2_split(g)
    assert cls.is_zero()
    assert solve_coboundary(g) is not None


def test_symmetric_cocycle_on_z2():
    g = Nil2Group(cyclic(2), cyclic(2), (BilinearTerm((((1,),),)),))
    cls = h2_split(g)
    assert cls.pairing.is_zero()
    assert not cls.ext_is_zero()


def test_coboundary_iff_zero_class_exhaustive():
    for q in [cyclic(2), cyclic(3)]:
        for c in [cyclic(2), cyclic(3), cyclic(4)]:
            for g in enumerate_cocycles(q, c):
                cb = solve_coboundary(g)
                assert (cb is not None) == h2_split(g).is_zero()


def test_h2_round_trip_random():
    rng = random.Random(9)
    for q in finite_groups(16, 2):
        for c in (cyclic(2), cyclic(3), cyclic(4)):
            g = random_cocycle(q, c, rng)
            assert g.check_cocycle() is None
            cls = h2_split(g)
            assert h2_split(class_to_cocycle(cls)) == cls
            rest = g.plus(class_to_cocycle(cls).negated())
            assert solve_coboundary(rest) is not None


def test_solve_coboundary_reproduces_cocycle():
    rng = random.Random(4)
    q, c = G("Z/2 + Z/4"), cyclic(4)
    g = random_cocycle(q, c, rng)
    rest = g.plus(class_to_cocycle(h2_split(g)).negated())
    cb = solve_coboundary(rest)
    assert cb is not None
    # one lift per quotient generator
    assert len(cb.lifts) == q.ngens


def test_twist_then_untwist():
    a = G("Z/2 + Z/4")
    n = canonical_TA(a)
    ext = ext_group(a, n.kernel)
    assert not ext.group.is_trivial
    x = [1] * ext.group.ngens
    t = twist_TA(n, x)
    assert t.pairing() == n.pairing()
    assert not difference_class(t, n).is_zero()
    back = twist_TA(t, [-v for v in x])
    assert difference_class(back, n).is_zero()


def test_table_term_rejected_on_infinite_quotient():
    g = Nil2Group(Z, cyclic(2), (TableTerm((((1,),),)),))
    with pytest.raises(ValueError):
        g.check_cocycle()


def test_renormalize_round_trip():
    g = canonical_TA(G("Z/2 + Z/4")).total
    # kill the whole center part: quotient becomes the abelianization
    r = renormalize(g, AbHom.identity(g.center_part))
    assert r.group.quotient == G("Z/2 + Z/4")
    for x in g.elements():
        y = r.from_old(x)
        assert r.to_old(y) == x
    elems = list(r.group.elements())
    for x in elems[:10]:
        for y in elems[:10]:
            assert r.to_old(r.group.mul(x, y)) == g.mul(r.to_old(x), r.to_old(y))


def test_renormalize_proper_subgroup():
    # Z/8 as Z/2 extended by Z/4; renormalize along the subgroup 2 Z/4
    g = Nil2Group(cyclic(2), cyclic(4), (CarryTerm((1,), 2, (1,)),))
    inc = subgroup(cyclic(4), [(2,)])
    r = renormalize(g, inc)
    assert r.group.quotient == cyclic(4)
    assert r.group.center_part == cyclic(2)
    assert r.group.order == g.order
    for x in g.elements():
        assert r.to_old(r.from_old(x)) == x


def test_renormalize_rejects_small_subgroup():
    g = canonical_TA(G("Z/2 + Z/2")).total
    with pytest.raises(ValueError):
        renormalize(g, AbHom.zero(FgAbGroup(()), g.center_part))
