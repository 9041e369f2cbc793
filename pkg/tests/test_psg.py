import random

import pytest

from sqgroup.abelian import AbHom, FgAbGroup, Z, cyclic, parse_group, random_hom, tensor
from sqgroup.nil2 import Nil2Group, canonical_TA, twist_TA
from sqgroup.psg import (KTriple, NotFlat, PreSquareGroup, PSGError, check_realization,
                         flat_factor, k_identity_holds, moore_s1, normalize, odot_eval, omega,
                         psg_combine, psg_invariants, psg_pushforward, psg_pushforward_with_map,
                         psg_validate, q_homology, realize_psg, stable_invariants, underline,
                         upsilon_lambda)
from sqgroup.quadfun import nat_map, psi_inclusion, quad_value
from sqgroup.verify import bad_psg, random_flat_target, random_stable_target

ZERO = FgAbGroup(())


def G(text):
    return parse_group(text)


def om(text, bar=False):
    return omega(canonical_TA(G(text)), bar=bar)


# --- validation --------------------------------------------------------------

def test_omega_z2_valid_and_shape():
    m = om("Z/2")
    assert psg_validate(m)
    assert m.Mee == cyclic(2)
    assert m.sigma == AbHom.identity(cyclic(2))
    assert m.P.is_zero()


def test_omega_of_zero_group():
    m = om("0")
    assert m.Me.order == 1 and m.Mee.is_trivial and psg_validate(m)


def test_degenerate_example_valid():
    m = bad_psg()
    assert psg_validate(m)
    inv = psg_invariants(m)
    assert inv.pi1 == Z and inv.pi1_minus.is_trivial and not inv.is_psg0


def test_non_involution_rejected():
    m = bad_psg()
    bad = PreSquareGroup(m.Me, m.Mee, AbHom.scalar(Z, 2), m.P, m.bracket)
    v = psg_validate(bad)
    assert not v and v.axiom == "sigma_involution"


def test_bracket_must_match_commutator():
    m = om("Z/2 + Z/2")
    br = tuple(tuple(m.Mee.zero() for _ in r) for r in m.bracket)
    v = psg_validate(PreSquareGroup(m.Me, m.Mee, m.sigma, m.P, br))
    assert not v and v.axiom == "P_bracket"


def test_shape_errors():
    m = om("Z/2")
    with pytest.raises(PSGError):
        PreSquareGroup(m.Me, m.Mee, AbHom.identity(Z), m.P, m.bracket)


# --- invariants --------------------------------------------------------------

@pytest.mark.parametrize("text", ["Z", "Z/2", "Z/3", "Z/4", "Z/2 + Z/2", "Z/2 + Z/4", "Z/6 + Z"])
def test_omega_invariants(text):
    a = G(text)
    m = om(text)
    inv = psg_invariants(m)
    assert inv.pi0 == a
    assert inv.pi1 == quad_value("Psi", a).group
    iso = psi_inclusion(a).corestrict(inv.pi1_inclusion)
    assert iso.is_isomorphism()
    assert inv.k == iso @ nat_map("tau_prime", a)
    assert inv.is_flat and inv.is_psg0
    st = stable_invariants(m, inv)
    assert st.pi1_bar == tensor(cyclic(2), a).group
    assert st.k_bar.is_isomorphism()
    assert k_identity_holds(m)


def test_omega_z_stable():
    st = stable_invariants(om("Z"))
    assert st.pi1_bar == cyclic(2)
    assert st.k_bar == AbHom.identity(cyclic(2))


@pytest.mark.parametrize("text", ["Z/4", "Z/2 + Z/2", "Z", "Z/3"])
def test_omega_bar(text):
    a = G(text)
    m = om(text, bar=True)
    assert psg_validate(m)
    inv = psg_invariants(m)
    assert inv.is_psgs
    assert inv.pi1 == tensor(cyclic(2), a).group
    # k is the reduction Gamma(A) -> Z/2 (x) A up to the identification of pi_1
    red = nat_map("gamma_mod2", a)
    assert inv.k.kernel.source == red.kernel.source
    st = stable_invariants(m, inv)
    assert st.epsilon.is_isomorphism()
    assert st.k_bar.is_isomorphism()


def test_trivial_mee_has_trivial_stable_pi1():
    m = om("Z/3")
    z = PreSquareGroup(m.Me, ZERO, AbHom.identity(ZERO), AbHom.zero(ZERO, m.Me.center_part),
                       tuple(tuple(() for _ in r) for r in m.bracket))
    assert stable_invariants(z).pi1_bar.is_trivial


def test_q_homology_degree_zero_one():
    m = om("Z/4")
    inv = psg_invariants(m)
    assert q_homology(m, 0) == inv.pi0
    assert q_homology(m, 1) == stable_invariants(m).pi1_bar


def test_normalize_is_identity_when_p_onto():
    m = om("Z/2 + Z/2")
    assert normalize(m).psg is m


# --- products and coproducts -------------------------------------------------

CORPUS = ["Z/2", "Z/3", "Z/4", "Z/2 + Z/2", "Z"]


@pytest.mark.parametrize("t1", CORPUS)
@pytest.mark.parametrize("t2", CORPUS)
def test_coproduct_laws(t1, t2):
    m, n = om(t1), om(t2)
    c = psg_combine("coprod", m, n)
    assert psg_validate(c)
    i1, i2, ic = psg_invariants(m), psg_invariants(n), psg_invariants(c)
    t = tensor(i1.pi0, i2.pi0).group
    if m.Me.is_finite and n.Me.is_finite:
        assert c.Me.order == m.Me.order * n.Me.order * t.order
    want = FgAbGroup.from_orders(i1.pi1.invariant_factors + i2.pi1.invariant_factors
                                 + t.invariant_factors)
    assert ic.pi1 == want


def test_coproduct_of_two_z2():
    m = om("Z/2")
    c = psg_combine("coprod", m, m)
    assert c.Me.order == 8
    assert psg_invariants(c).pi1 == G("Z/2 + Z/2 + Z/2")


def test_product_componentwise():
    m, n = om("Z/4"), om("Z/3")
    p = psg_combine("prod", m, n)
    assert psg_validate(p)
    ip = psg_invariants(p)
    assert ip.pi0 == G("Z/12") and ip.pi1 == G("Z/12")


def test_unknown_combination():
    with pytest.raises(ValueError):
        psg_combine("smash", om("Z/2"), om("Z/2"))


# --- pushforward -------------------------------------------------------------

def test_pushforward_identity():
    m = om("Z/4")
    inv = psg_invariants(m)
    out = psg_pushforward(m, AbHom.identity(inv.pi1), inv.involution)
    io = psg_invariants(out)
    assert io.pi0 == inv.pi0 and io.pi1 == inv.pi1 and out.Mee == m.Mee


def test_pushforward_zero_into_z3():
    m = om("Z/2")
    inv = psg_invariants(m)
    out = psg_pushforward(m, AbHom.zero(inv.pi1, cyclic(3)))
    assert psg_validate(out)
    io = psg_invariants(out)
    assert io.pi1 == cyclic(3) and io.k.is_zero()


def test_pushforward_k_is_f_of_k():
    rng = random.Random(1)
    for text in ["Z/4", "Z/2 + Z/2", "Z/3", "Z"]:
        m = om(text)
        inv = psg_invariants(m)
        b = rng.choice([cyclic(8), G("Z/2 + Z/4"), Z])
        f = random_hom(inv.pi1, b, rng)
        try:
            out, ja, _ = psg_pushforward_with_map(m, f, AbHom.scalar(b, -1), inv.pi1_inclusion)
        except PSGError:
            continue
        io = psg_invariants(out)
        assert io.pi1_inclusion @ io.k == ja @ f @ inv.k


# --- realization -------------------------------------------------------------

def test_flat_factor_rejects_non_flat():
    a = cyclic(2)
    k = AbHom.identity(quad_value("Gamma", a).group)
    with pytest.raises(NotFlat):
        flat_factor(a, k)


def test_realize_z2_z3_zero():
    a, b = cyclic(2), cyclic(3)
    t = KTriple(a, b, AbHom.zero(quad_value("Gamma", a).group, b))
    r = realize_psg(t)
    assert check_realization(t, r)
    inv = psg_invariants(r.psg)
    assert inv.pi0 == a and inv.pi1 == b and inv.k.is_zero()


def test_realize_psi_is_omega():
    a = cyclic(2)
    t = KTriple(a, quad_value("Psi", a).group, nat_map("tau_prime", a))
    r = realize_psg(t)
    assert check_realization(t, r)
    assert psg_invariants(r.psg).pi1 == psg_invariants(om("Z/2")).pi1


def test_realize_stable_z4():
    a = cyclic(4)
    src = tensor(cyclic(2), a).group
    t = KTriple(a, cyclic(2), AbHom.identity(src), stable=True)
    r = realize_psg(t, "stable")
    assert check_realization(t, r)
    st = stable_invariants(r.psg)
    assert st.k_bar.is_isomorphism()


def test_realize_random_targets():
    rng = random.Random(21)
    for _ in range(5):
        t = random_flat_target(rng)
        assert check_realization(t, realize_psg(t, "flat"))
        t = random_stable_target(rng)
        assert check_realization(t, realize_psg(t, "stable"))


def test_check_realization_detects_wrong_k():
    a = cyclic(4)
    g = quad_value("Gamma", a).group
    t = KTriple(a, cyclic(2), AbHom.from_images(g, cyclic(2), [(1,)] * g.ngens))
    r = realize_psg(t)
    wrong = KTriple(a, cyclic(2), AbHom.zero(g, cyclic(2)))
    assert not check_realization(wrong, r)


# --- categorical groups, evaluation ------------------------------------------

def test_upsilon_lambda_omega_z():
    ul = upsilon_lambda(om("Z"))
    assert ul.valid
    assert ul.scg.Cee == cyclic(2)


def test_upsilon_symmetric_for_psgs():
    ul = upsilon_lambda(om("Z/4", bar=True))
    assert ul.valid
    assert ul.scg.Cee == ul.bcg.Cee


def test_odot_orders():
    m = om("Z/2")
    assert [odot_eval(n, m).order for n in range(4)] == [1, 2, 8, 64]
    n = om("Z/3")
    t = tensor(cyclic(3), cyclic(3)).group
    assert odot_eval(1, n).order == n.Me.order
    assert odot_eval(2, n).order == n.Me.order ** 2 * t.order


def test_moore_complex_homology():
    m = om("Z/2 + Z/4")
    mc = moore_s1(m)
    inv = psg_invariants(m)
    assert mc.P == m.P and mc.Me is m.Me
    assert mc.pi0 == inv.pi0 and mc.pi1 == mc.P.kernel.source


def test_twisted_omega_same_invariants():
    a = G("Z/2 + Z/4")
    n = twist_TA(canonical_TA(a), [1, 1])
    m = omega(n)
    assert psg_validate(m)
    assert psg_invariants(m).pi1 == psg_invariants(om("Z/2 + Z/4")).pi1


def test_underline_quotient():
    m = om("Z/4")
    u, rho = underline(m)
    assert psg_validate(u)
    assert rho.target == u.Mee and u.sigma == AbHom.identity(u.Mee)
