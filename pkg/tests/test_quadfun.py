import pytest

from sqgroup.abelian import AbHom, FgAbGroup, Z, cyclic, finite_groups, parse_group, tensor
from sqgroup.quadfun import (check_exact_suite, cross_effect_check, induced_map, nat_map,
                             oracle_value, phi_oracle, quad_value, theta)


def G(text):
    return parse_group(text)


@pytest.mark.parametrize("name, group, want", [
    ("P", "Z/2", "Z/4"),
    ("P", "Z/8", "Z/16 + Z/4"),
    ("P", "Z", "Z^2"),
    ("Gamma", "Z/4", "Z/8"),
    ("Gamma", "Z", "Z"),
    ("Psi", "Z/5", "Z/5"),
    ("Phi", "Z/2", "Z/2"),
    ("P", "Z/2 + Z/2", "Z/4 + Z/4 + Z/2"),
    ("Sym2", "Z/2", "Z/2"),
    ("Lambda2", "Z/2 + Z/4", "Z/2"),
    ("Tensor2", "Z/2 + Z/4", "Z/2 + Z/2 + Z/2 + Z/4"),
])
def test_functor_values(name, group, want):
    assert quad_value(name, G(group)).group == G(want)


def test_unknown_functor():
    with pytest.raises(ValueError):
        quad_value("Foo", Z)


def test_phi_n_on_two_powers():
    for n in range(1, 4):
        for k in range(1, 5):
            want = cyclic(2) if n == k else FgAbGroup(())
            assert quad_value(f"Phi_{n}", cyclic(2 ** k)).group == want
            assert phi_oracle(cyclic(2 ** k), n) == want


def test_tau_prime_iso_on_z_and_odd():
    assert nat_map("tau_prime", Z).is_isomorphism()
    for n in (3, 5, 9, 15):
        assert nat_map("tau_prime", cyclic(n)).is_isomorphism()
    assert not nat_map("tau_prime", cyclic(2)).is_injective()


def test_q_after_j_is_zero():
    for a in [Z, cyclic(2), G("Z/2 + Z/4"), G("Z/3 + Z")]:
        assert (nat_map("q", a) @ nat_map("j", a)).is_zero()


def test_iota_on_z2():
    i = nat_map("iota", cyclic(2))
    assert i.source == cyclic(2) and i.target == cyclic(4)
    assert i.is_injective() and i.column(0) == (2,)


def test_gamma_mod2_factors_through_psi():
    for a in [cyclic(2), cyclic(4), G("Z/2 + Z/4"), G("Z + Z/6")]:
        assert nat_map("psi_mod2", a) @ nat_map("tau_prime", a) == nat_map("gamma_mod2", a)


def test_induced_maps():
    two = AbHom.scalar(Z, 2)
    assert induced_map("Gamma", two).matrix == ((4,),)
    h = AbHom(cyclic(2), cyclic(4), [[2]])
    assert induced_map("Psi", h).is_zero()
    for name in ("P", "Gamma", "Psi", "Sym2", "Lambda2"):
        a = G("Z/2 + Z/4")
        ident = AbHom.identity(a)
        assert induced_map(name, ident) == AbHom.identity(quad_value(name, a).group)


def test_induced_map_functorial():
    a, b, c = G("Z/4"), G("Z/2 + Z/8"), G("Z/8")
    f = AbHom(a, b, [[1], [2]])
    g = AbHom(b, c, [[4, 1]])
    for name in ("P", "Gamma", "Psi"):
        assert induced_map(name, g @ f) == induced_map(name, g) @ induced_map(name, f)


@pytest.mark.parametrize("label", ["E1", "E2", "E3", "E4"])
def test_exact_sequences_small(label):
    for t in finite_groups(16):
        for r in range(2):
            a = FgAbGroup(t.invariant_factors + (0,) * r)
            assert check_exact_suite(label, a) == [], a


@pytest.mark.parametrize("name", ["P", "Gamma", "Psi"])
def test_cross_effects(name):
    for a, b in [(Z, Z), (cyclic(2), cyclic(2)), (cyclic(4), cyclic(6)), (G("Z/2 + Z/2"), Z)]:
        r = cross_effect_check(name, a, b)
        assert r.ok, r.detail
    assert quad_value("Gamma", G("Z^2")).group == G("Z^3")
    r = cross_effect_check("Psi", G("Z/4"), FgAbGroup(()))
    assert r.ok


@pytest.mark.parametrize("name, group, want", [
    ("P", "Z/2", "Z/4"),
    ("Gamma", "Z/3", "Z/3"),
    ("Sym2", "Z/2", "Z/2"),
])
def test_oracle_examples(name, group, want):
    assert oracle_value(name, G(group)).group == G(want)


def test_oracle_agrees_on_cyclic():
    for n in range(2, 17):
        for name in ("P", "Gamma", "Sym2", "Lambda2"):
            assert oracle_value(name, cyclic(n)).group == quad_value(name, cyclic(n)).group


def test_theta():
    for k in (1, 2, 3):
        assert not theta(cyclic(2 ** k)).is_zero()
    for n in (3, 5, 9, 15, 45):
        assert theta(cyclic(n)).is_zero()
    assert theta(Z).is_zero() and theta(G("Z^2")).is_zero()
    assert not theta(G("Z/3 + Z/4")).is_zero()
    # reduced class lives in Ext(A, Sym2(A/2A)); still nonzero on Z/2
    assert not theta(cyclic(2), reduced=True).is_zero()


def test_theta_order_two():
    th = theta(cyclic(8))
    assert th.coords == (4,)
    two_th = tuple((2 * x) % 8 for x in th.coords)
    assert not any(two_th)


def test_tensor_square_matches_functor():
    a = G("Z/6 + Z")
    assert quad_value("Tensor2", a).group == tensor(a, a).group
