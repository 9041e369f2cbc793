"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import random
import subprocess
import sys
import time
from contextlib import contextmanager

import pytest

from sqgroup.abelian import AbHom, FgAbGroup, Z, cyclic, finite_groups, parse_group, random_hom, tensor
from sqgroup.nil2 import BilinearTerm, Nil2Group, canonical_TA, h2_split
from sqgroup.formats import sg_equal
from sqgroup.psg import (KTriple, check_realization, omega, psg_combine, psg_invariants,
                         psg_validate, realize_psg, stable_invariants)
from sqgroup.quadfun import check_exact_suite, nat_map, oracle_value, psi_inclusion, quad_value, theta
from sqgroup.sg import (alpha_defect, builtin_realizer, check_delta_realization, delta, lift,
                        lift_omega, psg_equal, realize_sg, sg_normalize, sg_twist, sg_validate, wp)
from sqgroup.verify import (Bounds, _builtin_corpus, bad_psg, random_delta_map, random_flat_target,
                            random_stable_target)


def G(text):
    return parse_group(text)


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(n, title):
        ok = False
        start = time.perf_counter()
        try:
            yield
            ok = True
        finally:
            took = time.perf_counter() - start
            with capsys.disabled():
                print(f"\ncriterion {n:2d} {'PASS' if ok else 'FAIL'}  {title} ({took:.2f} s)")
    return run


def test_criterion_01_functor_tables(criterion):
    with criterion(1, "functor tables"):
        start = time.perf_counter()
        table = [("P", Z, G("Z^2")), ("P", cyclic(2), cyclic(4))]
        for n in (2, 3):
            table.append(("P", cyclic(2 ** n), FgAbGroup.from_orders([2 ** (n + 1), 2 ** (n - 1)])))
        for p in (3, 5):
            for n in (1, 2):
                table.append(("P", cyclic(p ** n), FgAbGroup.from_orders([p ** n, p ** n])))
                table.append(("Gamma", cyclic(p ** n), cyclic(p ** n)))
        table.append(("Gamma", Z, Z))
        for n in (1, 2, 3):
            table.append(("Gamma", cyclic(2 ** n), cyclic(2 ** (n + 1))))
        table.append(("Psi", Z, Z))
        for n in range(1, 13):
            table.append(("Psi", cyclic(n), cyclic(n)))
        for name, a, want in table:
            assert quad_value(name, a).group == want, (name, a)
        for n in range(1, 4):
            for k in range(1, 6):
                want = cyclic(2) if k == n else FgAbGroup(())
                assert quad_value(f"Phi_{n}", cyclic(2 ** k)).group == want
        assert time.perf_counter() - start < 1.0


def test_criterion_02_exact_sequences(criterion):
    with criterion(2, "exact sequences E1-E4"):
        start = time.perf_counter()
        count = 0
        for t in finite_groups(64):
            for r in range(3):
                a = FgAbGroup(t.invariant_factors + (0,) * r)
                for label in ("E1", "E2", "E3", "E4"):
                    assert check_exact_suite(label, a) == [], (label, a)
                    count += 1
        assert count == 117 * 3 * 4
        assert time.perf_counter() - start < 10.0


def test_criterion_03_oracle(criterion):
    with criterion(3, "oracle equivalence"):
        for a in [cyclic(n) for n in range(1, 33)] + [G("Z/2 + Z/4")]:
            for name in ("P", "Gamma", "Sym2", "Lambda2"):
                assert oracle_value(name, a).group == quad_value(name, a).group, (name, a)


def test_criterion_04_theta(criterion):
    with criterion(4, "theta classes"):
        for k in (1, 2, 3):
            assert not theta(cyclic(2 ** k)).is_zero()
        odd = [a for a in finite_groups(45) if a.order % 2]
        assert len(odd) > 20
        for a in odd:
            assert theta(a).is_zero(), a
        for r in (1, 2, 3):
            assert theta(FgAbGroup((0,) * r)).is_zero()
        # the extension of A by Sym2(A) defining P(A), classified by the cocycle solver
        for a in finite_groups(16, 2):
            sym = quad_value("Sym2", a)
            table = tuple(tuple(sym.pair(a.gen(i), a.gen(j)) for j in range(a.ngens))
                          for i in range(a.ngens))
            cls = h2_split(Nil2Group(a, sym.group, (BilinearTerm(table),)))
            assert cls.pairing.is_zero()
            assert cls.ext_coords == theta(a).coords, a


OMEGA = ["Z", "Z/2", "Z/3", "Z/4", "Z/2 + Z/2"]


def test_criterion_05_omega_invariants(criterion):
    with criterion(5, "omega invariants"):
        for text in OMEGA:
            a = G(text)
            m = omega(canonical_TA(a))
            assert psg_validate(m)
            inv = psg_invariants(m)
            assert inv.pi0 == a
            iso = psi_inclusion(a).corestrict(inv.pi1_inclusion)
            assert iso.is_isomorphism()
            # k-square commutes: k = iso . tau'
            assert inv.k == iso @ nat_map("tau_prime", a)
            st = stable_invariants(m, inv)
            assert st.pi1_bar == tensor(cyclic(2), a).group
            assert st.k_bar.is_isomorphism()
            assert st.k_bar == AbHom.identity(st.pi1_bar)


def test_criterion_06_coproduct_laws(criterion):
    with criterion(6, "coproduct laws"):
        ms = [omega(canonical_TA(G(t))) for t in OMEGA]
        pairs = 0
        for m in ms:
            for n in ms:
                small = m.Me.is_finite and n.Me.is_finite and m.Me.order <= 16 and n.Me.order <= 16
                if not small and not (m.Me.quotient == Z or n.Me.quotient == Z):
                    continue
                c = psg_combine("coprod", m, n)
                assert psg_validate(c)
                i1, i2, ic = psg_invariants(m), psg_invariants(n), psg_invariants(c)
                t = tensor(i1.pi0, i2.pi0).group
                if m.Me.is_finite and n.Me.is_finite:
                    assert c.Me.order == m.Me.order * n.Me.order * t.order
                assert ic.pi0 == FgAbGroup.from_orders(i1.pi0.invariant_factors
                                                       + i2.pi0.invariant_factors)
                assert ic.pi1 == FgAbGroup.from_orders(i1.pi1.invariant_factors
                                                       + i2.pi1.invariant_factors
                                                       + t.invariant_factors)
                pairs += 1
        assert pairs == len(ms) ** 2


def _round_trip(q, rng):
    n = sg_normalize(q)[0]
    m = wp(n)
    res = lift(m)
    assert res.status == "lifted"
    assert res.obstruction.value.is_zero()
    assert psg_equal(wp(res.sg), m)
    alpha = alpha_defect(res.sg, n)
    assert alpha is not None
    assert sg_equal(sg_twist(res.sg, alpha), n)
    # any other twist gives a different square group
    for _ in range(3):
        beta = random_hom(alpha.source, alpha.target, rng)
        if beta != alpha:
            assert not sg_equal(sg_twist(res.sg, beta), n)


def test_criterion_07_lift_round_trip(criterion):
    with criterion(7, "obstruction round trip"):
        rng = random.Random(70)
        corpus = _builtin_corpus(Bounds())
        kinds = {q.name.split("(")[0] for q in corpus if q.name}
        assert {"Znil", "TwoPowerCyclic", "Cyclic", "HalfInvertible", "StableUniversal"} <= kinds
        for q in corpus:
            _round_trip(q, rng)
        for _ in range(5):
            q = sg_normalize(rng.choice(corpus))[0]
            alpha = random_hom(psg_invariants(wp(q)).pi0, q.Qee, rng)
            t = sg_twist(q, alpha)
            assert sg_validate(t)
            _round_trip(t, rng)
        assert lift(bad_psg()).status == "not_psg0"


def test_criterion_08_realization(criterion):
    with criterion(8, "realization pipelines"):
        rng = random.Random(80)
        for _ in range(20):
            t = random_flat_target(rng, 32)
            r = realize_psg(t, "flat")
            assert psg_validate(r.psg) and check_realization(t, r)
            sr = realize_sg(t, "flat")
            assert sg_validate(sr.sg) and check_realization(t, sr.psg_realization())
        for _ in range(20):
            t = random_stable_target(rng, 32)
            assert all(d == 2 for d in t.pi_n1.invariant_factors) and t.pi_n1.ngens <= 3
            r = realize_psg(t, "stable")
            assert psg_validate(r.psg) and check_realization(t, r)
            sr = realize_sg(t, "stable")
            assert sg_validate(sr.sg) and check_realization(t, sr.psg_realization())
        res = lift_omega(cyclic(2))
        assert not res.ok and not res.theta.is_zero()


def test_criterion_09_delta(criterion):
    with criterion(9, "Delta"):
        assert delta(builtin_realizer("Znil")) == AbHom.identity(Z)
        assert delta(builtin_realizer("HalfInvertible", cyclic(3))) == AbHom.identity(cyclic(3))
        rng = random.Random(90)
        corpus = [sg_normalize(q)[0] for q in _builtin_corpus(Bounds())]
        for _ in range(10):
            q = rng.choice(corpus)
            inv = psg_invariants(wp(q))
            alpha = random_hom(inv.pi0, q.Qee, rng)
            d1 = delta(sg_twist(q, alpha))
            sa = (wp(q).sigma - AbHom.identity(q.Qee)) @ alpha
            assert inv.pi1_inclusion @ d1 == inv.pi1_inclusion @ delta(q, inv) + sa
        for _ in range(10):
            f = random_delta_map(rng, 16)
            r = realize_sg(KTriple(f.source, f.target, AbHom.zero(f.source, f.target)), "delta", f=f)
            assert sg_validate(r.sg) and check_delta_realization(f, r)


def test_criterion_10_verify_command(criterion):
    with criterion(10, "verify command"):
        start = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "sqgroup", "verify", "paper-tables"],
                              capture_output=True, text=True, timeout=120)
        took = time.perf_counter() - start
        assert proc.returncode == 0, proc.stdout + proc.stderr
        assert "15/15 anchors passed" in proc.stdout
        assert took < 60.0
