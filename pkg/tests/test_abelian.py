import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqgroup.abelian import (AbHom, FgAbGroup, Z, cyclic, direct_sum, ext_group, finite_groups,
                             format_group, hom_group, is_isomorphic, matmul, parse_group,
                             random_hom, snf, subgroup, tensor)


def G(text):
    return parse_group(text)


# --- Smith normal form -------------------------------------------------------

def test_snf_known_diagonal():
    r = snf([[2, 4], [6, 8]])
    assert r.diagonal == [2, 4]
    assert matmul(matmul(r.U, [[2, 4], [6, 8]]), r.V) == r.S


def test_snf_identity_and_zero():
    assert snf([[1, 0], [0, 1]]).diagonal == [1, 1]
    r = snf([[0, 0, 0], [0, 0, 0]])
    assert all(d == 0 for d in r.diagonal)


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(n))


matrices = st.integers(1, 8).flatmap(
    lambda r: st.integers(1, 8).flatmap(
        lambda c: st.lists(st.lists(st.integers(-100, 100), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_round_trip(m):
    r = snf(m)
    assert matmul(matmul(r.U, m), r.V) == r.S
    assert matmul(r.Uinv, r.U) == [[int(i == j) for j in range(len(m))] for i in range(len(m))]
    nz = [d for d in r.diagonal if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    for i, row in enumerate(r.S):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_snf_determinant(m):
    r = snf(m)
    prod = 1
    for d in r.diagonal:
        prod *= d
    assert prod == abs(_det(m))


# --- groups ------------------------------------------------------------------

def test_parse_canonicalizes():
    assert G("Z/2 + Z/3") == cyclic(6)
    assert G("Z^2 + Z/4 + Z/6Z") == FgAbGroup((2, 12, 0, 0))
    assert G("0").is_trivial
    assert format_group(G("Z/4 + Z/2 + Z")) == "Z/2Z + Z/4Z + Z"
    with pytest.raises(ValueError):
        G("Z/0")
    with pytest.raises(ValueError):
        G("Q")


def test_isomorphism_by_invariants():
    assert is_isomorphic(G("Z/2 + Z/3"), G("Z/6"))
    assert not is_isomorphic(G("Z/4"), G("Z/2 + Z/2"))
    assert is_isomorphic(Z, Z)


def test_element_arithmetic():
    g = G("Z/2 + Z/4 + Z")
    x, y = (1, 3, 5), (1, 2, -7)
    assert g.add(x, y) == (0, 1, -2)
    assert g.element_order((0, 2, 0)) == 2
    assert g.element_order((0, 0, 1)) == 0
    assert list(G("Z/2 + Z/2").elements()) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert g.exponent == 0 and G("Z/2 + Z/6").exponent == 6


def test_finite_groups_counts():
    by_order = {}
    for a in finite_groups(64):
        by_order[a.order] = by_order.get(a.order, 0) + 1
    # number of abelian groups of order n is a product of partition numbers
    assert by_order[16] == 5 and by_order[64] == 11 and by_order[12] == 2 and by_order[1] == 1


# --- homomorphisms -----------------------------------------------------------

def test_times_two_on_z4():
    h = AbHom.scalar(cyclic(4), 2)
    assert h.kernel.source == cyclic(2)
    assert h.cokernel.target == cyclic(2)
    assert h.solve((1,)) is None
    assert h.solve((2,)) is not None


def test_zero_map_on_z():
    h = AbHom.zero(Z, Z)
    assert h.kernel.source == Z and h.cokernel.target == Z


def test_invalid_matrix_rejected():
    with pytest.raises(ValueError):
        AbHom(cyclic(2), cyclic(3), [[1]])
    with pytest.raises(ValueError):
        AbHom(cyclic(4), Z, [[1]])


def test_inverse_and_composition():
    a = G("Z/2 + Z/3")
    h = AbHom(a, a, [[1]])
    assert h.is_isomorphism() and h.inverse() @ h == AbHom.identity(a)
    u = AbHom(Z, Z, [[-1]])
    assert u.inverse() == u


def test_image_kernel_exact():
    rng = random.Random(3)
    for _ in range(40):
        a = rng.choice(list(finite_groups(24))) if rng.random() < 0.7 else G("Z + Z/2")
        b = rng.choice(list(finite_groups(24)))
        h = random_hom(a, b, rng)
        k, im, ck = h.kernel, h.image, h.cokernel
        assert (h @ k).is_zero()
        assert (ck @ h).is_zero()
        assert k.is_injective() and im.is_injective() and ck.is_surjective()
        if a.is_finite:
            assert k.source.order * im.source.order == a.order
            assert im.source.order * ck.target.order == b.order


def test_subgroup_and_restrict():
    g = G("Z/4 + Z/4")
    inc = subgroup(g, [(2, 0), (0, 2)])
    assert inc.source == G("Z/2 + Z/2")
    h = AbHom.scalar(g, 2)
    assert (h @ inc).is_zero()


# --- constructions -----------------------------------------------------------

def test_tensor_examples():
    assert tensor(cyclic(2), cyclic(4)).group == cyclic(2)
    assert tensor(Z, cyclic(5)).group == cyclic(5)
    assert tensor(G("Z/6"), G("Z/4 + Z")).group == G("Z/2 + Z/6")


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([0, 2, 3, 4, 6, 8, 9]), max_size=3),
       st.lists(st.sampled_from([0, 2, 3, 4, 6, 8, 9]), max_size=3))
def test_tensor_symmetric(xs, ys):
    a, b = FgAbGroup.from_orders(xs), FgAbGroup.from_orders(ys)
    assert tensor(a, b).group == tensor(b, a).group


def test_hom_and_ext_examples():
    assert hom_group(cyclic(6), cyclic(4)).group == cyclic(2)
    assert ext_group(Z, cyclic(4)).group.is_trivial
    assert ext_group(cyclic(4), cyclic(6)).group == cyclic(2)
    assert ext_group(cyclic(2), Z).group == cyclic(2)


def test_hom_group_round_trip():
    hg = hom_group(G("Z/4 + Z"), G("Z/2 + Z/8"))
    rng = random.Random(2)
    for _ in range(10):
        h = random_hom(hg.source, hg.target, rng)
        assert hg.to_hom(hg.from_hom(h)) == h


def test_direct_sum_maps():
    ds = direct_sum(cyclic(2), Z, cyclic(3))
    assert ds.group == G("Z/6 + Z")
    for i, p in zip(ds.injections, ds.projections):
        assert p @ i == AbHom.identity(i.source)
    assert (ds.projections[0] @ ds.injections[1]).is_zero()
