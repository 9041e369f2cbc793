"""Batch verification of the tabulated values and structural identities.

Each suite checks one family of facts (an "anchor") and reports how many
checks ran and which failed.  The report is deterministic: randomized suites
use fixed seeds and nothing time-dependent is printed.
"""

from __future__ import annotations

import random
from contextlib import ExitStack, contextmanager
from dataclasses import dataclass, field
from typing import Callable, Iterator
from unittest import mock

from . import sg as sgmod
from .abelian import (AbHom, FgAbGroup, cyclic, finite_groups, format_group, parse_group,
                      random_hom, tensor)
from .nil2 import (BilinearTerm, CarryTerm, Nil2Group, TableTerm, canonical_TA, class_to_cocycle, enumerate_cocycles,
                   h2_split, solve_coboundary)
from .psg import (KTriple, check_realization, k_identity_holds, odot_eval, omega, psg_combine,
                  psg_invariants, psg_validate, realize_psg, stable_invariants, upsilon_lambda)
from .quadfun import (check_exact_suite, cross_effect_check, nat_map, oracle_value, psi_inclusion,
                      quad_value, theta)
from .sg import (BinomialForm, SquareGroup, StructuredH, alpha_defect, builtin_realizer,
                 check_delta_realization, delta, lift, lift_omega, psg_equal, realize_sg,
                 sg_combine, sg_normalize, sg_twist, sg_validate, wp)

DEFAULT_MAX_ORDER = 64
DEFAULT_MAX_ARITY = 3


@dataclass(frozen=True)
class Bounds:
    max_order: int = DEFAULT_MAX_ORDER
    max_arity: int = DEFAULT_MAX_ARITY

    def __post_init__(self) -> None:
        if self.max_order < 1 or self.max_arity < 1:
            raise ValueError("bounds must be positive")


class Suite:
    """Collects checks for one anchor."""

    def __init__(self) -> None:
        self.count = 0
        self.failures: list[str] = []

    def check(self, ok: bool, label: str) -> None:
        self.count += 1
        if not ok:
            self.failures.append(label)

    def equal(self, got, want, label: str) -> None:
        self.check(got == want, f"{label}: got {got}, want {want}")


@dataclass
class SuiteResult:
    anchor: str
    checks: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class Report:
    results: list[SuiteResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            out.append(f"{'PASS' if r.ok else 'FAIL'} {r.anchor} ({r.checks} checks)")
            out += [f"    {f}" for f in r.failures[:10]]
            if len(r.failures) > 10:
                out.append(f"    ... {len(r.failures) - 10} more")
        total = sum(r.checks for r in self.results)
        failed = sum(not r.ok for r in self.results)
        out.append(f"{len(self.results) - failed}/{len(self.results)} anchors passed, {total} checks")
        return out

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "anchors": [{"anchor": r.anchor, "ok": r.ok, "checks": r.checks,
                             "failures": r.failures} for r in self.results]}


def G(text: str) -> FgAbGroup:
    return parse_group(text)


def _small(a: FgAbGroup, b: Bounds) -> bool:
    """Torsion part within the order bound."""
    t = 1
    for d in a.torsion_factors:
        t *= d
    return t <= b.max_order


# ---------------------------------------------------------------------------
# suites


def functor_tables(b: Bounds, s: Suite) -> None:
    z = FgAbGroup((0,))
    cases = [("P", z, "Z^2"), ("P", cyclic(2), "Z/4")]
    for n in (2, 3):
        cases.append(("P", cyclic(2 ** n), f"Z/{2 ** (n - 1)} + Z/{2 ** (n + 1)}"))
    for p in (3, 5):
        for n in (1, 2):
            cases.append(("P", cyclic(p ** n), f"Z/{p ** n} + Z/{p ** n}"))
    cases.append(("Gamma", z, "Z"))
    for n in (1, 2, 3):
        cases.append(("Gamma", cyclic(2 ** n), f"Z/{2 ** (n + 1)}"))
    for p in (3, 5, 7):
        for n in (1, 2):
            cases.append(("Gamma", cyclic(p ** n), f"Z/{p ** n}"))
    cases.append(("Psi", z, "Z"))
    for n in range(2, 13):
        cases.append(("Psi", cyclic(n), f"Z/{n}"))
    for name, a, want in cases:
        if _small(a, b):
            s.equal(quad_value(name, a).group, G(want), f"{name}({format_group(a)})")
    for n in range(1, 5):
        for k in range(1, 5):
            a = cyclic(2 ** k)
            if _small(a, b):
                want = cyclic(2) if k == n else FgAbGroup(())
                s.equal(quad_value(f"Phi_{n}", a).group, want, f"Phi{n}(Z/{2 ** k})")


def cross_effects(b: Bounds, s: Suite) -> None:
    groups = [g for g in finite_groups(min(b.max_order, 8), 2)] + [FgAbGroup((0,))]
    for name in ("P", "Gamma", "Psi"):
        for a in groups:
            for c in groups:
                if a.order and c.order and (a.order or 1) * (c.order or 1) > b.max_order:
                    continue
                r = cross_effect_check(name, a, c)
                s.check(r.ok, f"{name}({a} + {c}): {r.detail}")


def exact_sequences(b: Bounds, s: Suite) -> None:
    for t in finite_groups(b.max_order):
        for r in range(3):
            a = FgAbGroup(t.invariant_factors + (0,) * r)
            for label in ("E1", "E2", "E3", "E4"):
                errs = check_exact_suite(label, a)
                s.check(not errs, f"{label} at {a}: {'; '.join(errs)}")
            tp = nat_map("tau_prime", a)
            s.check(tp.is_surjective(), f"tau' onto at {a}")
            if r == 0 and t.order % 2 or (t.order == 1 and r == 1):
                s.check(tp.is_isomorphism(), f"tau' iso at {a}")
            lhs = nat_map("psi_mod2", a) @ tp
            s.check(lhs == nat_map("gamma_mod2", a), f"gamma_mod2 factors through Psi at {a}")


def functor_oracle(b: Bounds, s: Suite) -> None:
    groups = [cyclic(n) for n in range(2, min(32, b.max_order) + 1)]
    if b.max_order >= 8:
        groups.append(G("Z/2 + Z/4"))
    for a in groups:
        for name in ("P", "Gamma", "Sym2", "Lambda2"):
            s.equal(oracle_value(name, a).group, quad_value(name, a).group, f"oracle {name}({a})")


def theta_classes(b: Bounds, s: Suite) -> None:
    for k in (1, 2, 3):
        s.check(not theta(cyclic(2 ** k)).is_zero(), f"theta(Z/{2 ** k}) != 0")
    for a in finite_groups(min(45, b.max_order)):
        if a.order % 2:
            s.check(theta(a).is_zero(), f"theta({a}) = 0")
    for r in (1, 2, 3):
        s.check(theta(FgAbGroup((0,) * r)).is_zero(), f"theta(Z^{r}) = 0")
    # the extension 0 -> Sym2 A -> P(A) -> A -> 0 through the generic cocycle solver
    for a in finite_groups(min(16, b.max_order), 2):
        sym = quad_value("Sym2", a)
        table = tuple(tuple(sym.pair(a.gen(i), a.gen(j)) for j in range(a.ngens))
                      for i in range(a.ngens))
        cls = h2_split(Nil2Group(a, sym.group, (BilinearTerm(table),)))
        s.check(cls.pairing.is_zero(), f"P({a}) is abelian")
        s.equal(cls.ext_coords, theta(a).coords, f"h2_split class of P({a})")


def random_cocycle(q: FgAbGroup, c: FgAbGroup, rng: random.Random) -> Nil2Group:
    """Bilinear part plus carries plus a random coboundary, as one table term."""
    t = tensor(q, q)
    form = random_hom(t.group, c, rng)
    table = tuple(tuple(form(t.pair(q.gen(i), q.gen(j))) for j in range(q.ngens))
                  for i in range(q.ngens))
    terms = [BilinearTerm(table)]
    for i, d in enumerate(q.invariant_factors):
        terms.append(CarryTerm(q.gen(i), d, tuple(rng.randrange(max(e, 1) * 3)
                                                   for e in c.invariant_factors)))
    g = Nil2Group(q, c, tuple(terms))
    elems = list(q.elements())
    shift = {e: (c.zero() if not any(e) else c.reduce([rng.randrange(7) for _ in c.invariant_factors]))
             for e in elems}
    values = tuple(tuple(c.add(g.f(x, y), c.sub(c.add(shift[x], shift[y]), shift[q.add(x, y)]))
                         for y in elems) for x in elems)
    return Nil2Group(q, c, (TableTerm(values),))


def cohomology(b: Bounds, s: Suite) -> None:
    rng = random.Random(5)
    cs = [cyclic(n) for n in (2, 3, 4)]
    for q in finite_groups(min(16, b.max_order), 2):
        for c in cs:
            g = random_cocycle(q, c, rng)
            s.check(g.check_cocycle() is None, f"random cocycle on {q} by {c}")
            cls = h2_split(g)
            s.check(h2_split(class_to_cocycle(cls)) == cls, f"h2 round trip {q} by {c}")
            rest = g.plus(class_to_cocycle(cls).negated())
            s.check(h2_split(rest).is_zero() and solve_coboundary(rest) is not None,
                    f"difference with the class representative is a coboundary, {q} by {c}")
            s.check((solve_coboundary(g) is not None) == cls.is_zero(),
                    f"coboundary iff zero class {q} by {c}")
    for q in finite_groups(3, 2):
        for c in cs[:2]:
            for g in enumerate_cocycles(q, c):
                s.check((solve_coboundary(g) is not None) == h2_split(g).is_zero(),
                        f"exhaustive {q} by {c}")
    for a in [G("Z/2 + Z/2"), G("Z/2 + Z/4"), G("Z/3 + Z/3"), G("Z^2"), G("Z/2 + Z/2 + Z/2")]:
        if _small(a, b):
            n = canonical_TA(a)
            lam = quad_value("Lambda2", a).group
            s.check(n.pairing() == AbHom.identity(lam), f"canonical T_A pairing at {a}")


OMEGA_GROUPS = ("Z", "Z/2", "Z/3", "Z/4", "Z/2 + Z/2")


def omega_invariants(b: Bounds, s: Suite) -> None:
    for text in OMEGA_GROUPS:
        a = G(text)
        if not _small(a, b):
            continue
        m = omega(canonical_TA(a))
        s.check(bool(psg_validate(m)), f"omega({text}) is a presquare group")
        inv = psg_invariants(m)
        s.equal(inv.pi0, a, f"pi_0 omega({text})")
        s.equal(inv.pi1, quad_value("Psi", a).group, f"pi_1 omega({text})")
        # pi_1 and Psi(A) sit in A (x) A as the same subgroup, and k matches tau
        psi = psi_inclusion(a)
        try:
            iso = psi.corestrict(inv.pi1_inclusion)
            s.check(iso.is_isomorphism(), f"Psi({text}) = ker P")
            s.check(inv.k == iso @ nat_map("tau_prime", a), f"k = tau' for omega({text})")
        except ValueError:
            s.check(False, f"Psi({text}) not inside ker P")
        s.check(inv.is_flat and inv.is_psg0, f"omega({text}) flat and in PSG_0")
        st = stable_invariants(m, inv)
        s.equal(st.pi1_bar, tensor(cyclic(2), a).group, f"stable pi_1 omega({text})")
        s.check(st.k_bar.is_isomorphism(), f"k_bar iso for omega({text})")
        s.check(k_identity_holds(m), f"epsilon k = k_bar red for omega({text})")


def _omega_corpus(b: Bounds) -> list[tuple[str, object]]:
    out = []
    for text in OMEGA_GROUPS:
        a = G(text)
        m = omega(canonical_TA(a))
        if m.Me.is_finite and m.Me.order <= min(16, b.max_order):
            out.append((text, m))
    return out


def coproduct_laws(b: Bounds, s: Suite) -> None:
    corpus = _omega_corpus(b)
    for t1, m in corpus:
        for t2, n in corpus:
            c = psg_combine("coprod", m, n)
            s.check(bool(psg_validate(c)), f"omega({t1}) v omega({t2}) valid")
            i1, i2, ic = psg_invariants(m), psg_invariants(n), psg_invariants(c)
            t = tensor(i1.pi0, i2.pi0).group
            s.equal(c.Me.order, m.Me.order * n.Me.order * t.order, f"|({t1} v {t2})_e|")
            want = FgAbGroup.from_orders(i1.pi1.invariant_factors + i2.pi1.invariant_factors
                                         + t.invariant_factors)
            s.equal(ic.pi1, want, f"pi_1({t1} v {t2})")
            p = psg_combine("prod", m, n)
            s.check(bool(psg_validate(p)), f"omega({t1}) x omega({t2}) valid")
    if b.max_order >= 8:
        m = omega(canonical_TA(cyclic(2)))
        c = psg_combine("coprod", m, m)
        s.equal(c.Me.order, 8, "|(w(Z/2) v w(Z/2))_e|")
        s.equal(psg_invariants(c).pi1, G("Z/2 + Z/2 + Z/2"), "pi_1(w(Z/2) v w(Z/2))")


def odot_evaluation(b: Bounds, s: Suite) -> None:
    for text, m in _omega_corpus(b):
        s.equal(odot_eval(1, m).order, m.Me.order, f"[1] odot omega({text})")
        if m.Me.order ** 2 * 4 <= b.max_order * 16:
            t = tensor(m.Me.quotient, m.Me.quotient).group
            s.equal(odot_eval(2, m).order, m.Me.order ** 2 * t.order, f"[2] odot omega({text})")
    m = omega(canonical_TA(cyclic(2)))
    for n in range(1, b.max_arity + 1):
        # |[n] odot M| = 2^n * 2^(n(n-1)/2)
        s.equal(odot_eval(n, m).order, 2 ** (n + n * (n - 1) // 2), f"[{n}] odot omega(Z/2)")


def categorical_groups(b: Bounds, s: Suite) -> None:
    for text, m in _omega_corpus(b):
        ul = upsilon_lambda(m)
        s.check(bool(ul.bcg_valid), f"Upsilon omega({text}) is braided")
        s.check(bool(ul.scg_valid), f"lambda omega({text}) is symmetric")


def _builtin_corpus(b: Bounds) -> list[SquareGroup]:
    qs = [builtin_realizer("Znil"), builtin_realizer("TwoPowerCyclic", 1),
          builtin_realizer("TwoPowerCyclic", 2), builtin_realizer("Cyclic", 6),
          builtin_realizer("HalfInvertible", G("Z/3")), builtin_realizer("HalfInvertible", G("Z/15")),
          builtin_realizer("StableUniversal", G("Z/2 + Z/4"))]
    if b.max_order >= 16:
        qs.append(builtin_realizer("TwoPowerCyclic", 3))
        qs.append(builtin_realizer("StableUniversal", G("Z/2 + Z")))
    qs.append(sg_combine("prod", qs[1], qs[4]))
    qs.append(sg_combine("coprod", qs[1], qs[1]))
    qs.append(sg_combine("coprod", qs[0], qs[4]))
    return qs


def builtin_realizers(b: Bounds, s: Suite) -> None:
    for q in _builtin_corpus(b):
        v = sg_validate(q)
        s.check(bool(v), f"{q.name or q} valid: {v.axiom} {v.detail}")
    t1 = builtin_realizer("TwoPowerCyclic", 1)
    inv = psg_invariants(wp(t1))
    s.equal(inv.pi0, cyclic(2), "pi_0 TwoPowerCyclic(1)")
    s.equal(inv.pi1, cyclic(2), "pi_1 TwoPowerCyclic(1)")
    s.check(inv.k.is_surjective(), "k of TwoPowerCyclic(1) onto")
    s.equal(delta(builtin_realizer("Znil")).matrix, ((1,),), "Delta(Znil)")
    s.equal(delta(builtin_realizer("HalfInvertible", cyclic(3))).matrix, ((1,),),
            "Delta(HalfInvertible(Z/3))")
    for n in (1, 2, 3):
        if 2 ** (n + 1) <= b.max_order:
            st = stable_invariants(wp(builtin_realizer("TwoPowerCyclic", n)))
            s.check(all(d == 2 for d in st.pi1_bar.invariant_factors),
                    f"stable pi_1 of TwoPowerCyclic({n}) is elementary")


def _round_trip(q: SquareGroup) -> str | None:
    n = sg_normalize(q)[0]
    m = wp(n)
    res = lift(m)
    if res.status != "lifted":
        return f"lift returned {res.status}"
    if not res.obstruction.value.is_zero():
        return "nonzero obstruction"
    if not psg_equal(wp(res.sg), m):
        return "wp of the lift differs"
    alpha = alpha_defect(res.sg, n)
    if alpha is None:
        return "no twist recovers the input"
    back = sg_twist(res.sg, alpha)
    if alpha_defect(back, n) is None or not alpha_defect(back, n).is_zero():
        return "twist does not recover the input"
    return None


def lift_round_trip(b: Bounds, s: Suite) -> None:
    rng = random.Random(7)
    corpus = _builtin_corpus(b)
    for q in corpus:
        err = _round_trip(q)
        s.check(err is None, f"{q.name or q}: {err}")
    for k in range(5):
        q = sg_normalize(corpus[rng.randrange(len(corpus))])[0]
        alpha = random_hom(q.Qe.quotient, q.Qee, rng)
        t = sg_twist(q, alpha)
        s.check(bool(sg_validate(t)), f"twist #{k} valid")
        err = _round_trip(t)
        s.check(err is None, f"twist #{k}: {err}")
        s.check(alpha_defect(q, t) == alpha, f"twist #{k} alpha recovered")
    res = lift(bad_psg())
    s.equal(res.status, "not_psg0", "sigma = 1 example")


def bad_psg():
    """Me = 0, Mee = Z, sigma = 1, P = 0: a presquare group outside PSG_0."""
    from .psg import PreSquareGroup
    zero, z = FgAbGroup(()), FgAbGroup((0,))
    return PreSquareGroup(Nil2Group(zero, zero), z, AbHom.identity(z), AbHom.zero(z, zero), ())


def omega_lifts(b: Bounds, s: Suite) -> None:
    for text in ("Z/3", "Z", "Z/9", "Z/3 + Z/3", "Z/15"):
        a = G(text)
        if _small(a, b):
            res = lift_omega(a)
            s.check(res.ok and bool(sg_validate(res.sg)), f"lift_omega({text})")
    for text in ("Z/2", "Z/4"):
        res = lift_omega(G(text))
        s.check(not res.ok and not res.theta.is_zero(), f"lift_omega({text}) fails with theta")


def random_flat_target(rng: random.Random, max_order: int = 32) -> KTriple:
    pool = list(finite_groups(min(32, max_order)))
    a = rng.choice(pool)
    if rng.random() < 0.3:
        a = FgAbGroup(a.invariant_factors + (0,))
    bpool = list(finite_groups(min(16, max_order)))
    bb = rng.choice(bpool)
    if rng.random() < 0.2:
        bb = FgAbGroup(bb.invariant_factors + (0,))
    kp = random_hom(quad_value("Psi", a).group, bb, rng)
    return KTriple(a, bb, kp @ nat_map("tau_prime", a))


def random_stable_target(rng: random.Random, max_order: int = 32) -> KTriple:
    a = rng.choice(list(finite_groups(min(32, max_order))))
    if rng.random() < 0.3:
        a = FgAbGroup(a.invariant_factors + (0,))
    bb = FgAbGroup((2,) * rng.randint(0, 3))
    k = random_hom(tensor(cyclic(2), a).group, bb, rng)
    return KTriple(a, bb, k, stable=True)


def random_delta_map(rng: random.Random, max_order: int = 16) -> AbHom:
    a = rng.choice(list(finite_groups(min(16, max_order))))
    if rng.random() < 0.2:
        a = FgAbGroup(a.invariant_factors + (0,))
    bb = rng.choice(list(finite_groups(min(16, max_order))))
    if rng.random() < 0.2:
        bb = FgAbGroup(bb.invariant_factors + (0,))
    return random_hom(a, bb, rng)


def realization(b: Bounds, s: Suite) -> None:
    rng = random.Random(11)
    n = 6 if b.max_order >= 32 else 3
    for k in range(n):
        t = random_flat_target(rng, b.max_order)
        r = realize_psg(t, "flat")
        s.check(bool(psg_validate(r.psg)) and bool(check_realization(t, r)), f"flat PSG #{k}")
        sr = realize_sg(t, "flat")
        s.check(bool(sg_validate(sr.sg)) and bool(check_realization(t, sr.psg_realization())),
                f"flat SG #{k}")
    for k in range(n):
        t = random_stable_target(rng, b.max_order)
        r = realize_psg(t, "stable")
        s.check(bool(check_realization(t, r)), f"stable PSG #{k}")
        sr = realize_sg(t, "stable")
        s.check(bool(sg_validate(sr.sg)) and bool(check_realization(t, sr.psg_realization())),
                f"stable SG #{k}")
    # a mixed flat target: coproduct of TwoPowerCyclic(1) and lift_omega(Z/3)
    a = G("Z/6")
    t = KTriple(a, quad_value("Psi", a).group, nat_map("tau_prime", a))
    sr = realize_sg(t, "flat")
    s.check(bool(check_realization(t, sr.psg_realization())), "flat SG for Z/2 + Z/3")


def delta_realization(b: Bounds, s: Suite) -> None:
    rng = random.Random(13)
    for k in range(6 if b.max_order >= 16 else 3):
        f = random_delta_map(rng, b.max_order)
        r = realize_sg(KTriple(f.source, f.target, AbHom.zero(f.source, f.target)), "delta", f=f)
        s.check(bool(sg_validate(r.sg)) and bool(check_delta_realization(f, r)),
                f"Delta realization #{k} of {f.source} -> {f.target}")
    for k in range(3):
        q = sg_normalize([builtin_realizer("Znil"), builtin_realizer("Cyclic", 4),
                          builtin_realizer("HalfInvertible", cyclic(5))][k])[0]
        inv = psg_invariants(wp(q))
        alpha = random_hom(inv.pi0, q.Qee, rng)
        t = sg_twist(q, alpha)
        d0, d1 = delta(q, inv), delta(t)
        # Delta^alpha = Delta + sigma alpha - alpha, read inside Qee
        sa = (inv.normalized.psg.sigma - AbHom.identity(q.Qee)) @ alpha
        s.check(inv.pi1_inclusion @ d1 == inv.pi1_inclusion @ d0 + sa, f"twist law #{k}")


SUITES: list[tuple[str, Callable[[Bounds, Suite], None]]] = [
    ("functor-tables", functor_tables),
    ("cross-effects", cross_effects),
    ("exact-sequences", exact_sequences),
    ("functor-oracle", functor_oracle),
    ("theta-classes", theta_classes),
    ("cohomology", cohomology),
    ("omega-invariants", omega_invariants),
    ("coproduct-laws", coproduct_laws),
    ("odot-evaluation", odot_evaluation),
    ("categorical-groups", categorical_groups),
    ("builtin-realizers", builtin_realizers),
    ("lift-round-trip", lift_round_trip),
    ("omega-lifts", omega_lifts),
    ("realization", realization),
    ("delta-realization", delta_realization),
]


# ---------------------------------------------------------------------------
# mutation hook: deliberately broken builtins, to prove the suites notice


def _broken_two_power_cyclic(n: int) -> SquareGroup:
    q = sgmod.cyclic_realizer(2 ** n)
    g = q.H.g
    bad = BinomialForm(g.quotient, g.codomain, g.values, tuple((1,) for _ in g.diag))
    return SquareGroup(q.Qe, q.Qee, q.P, StructuredH(q.Qe, q.Qee, q.H.h, bad),
                       f"TwoPowerCyclic({n})")


_ORIGINAL_ZNIL = sgmod.znil


def _broken_znil() -> SquareGroup:
    q = _ORIGINAL_ZNIL()
    g = q.H.g
    bad = BinomialForm(g.quotient, g.codomain, g.values, ((3,),))
    return SquareGroup(q.Qe, q.Qee, q.P, StructuredH(q.Qe, q.Qee, q.H.h, bad), "Znil")


MUTATIONS: dict[str, tuple[str, Callable]] = {
    "two-power-cyclic": ("two_power_cyclic", _broken_two_power_cyclic),
    "znil": ("znil", _broken_znil),
}


@contextmanager
def mutated(names: list[str]) -> Iterator[None]:
    with ExitStack() as stack:
        for name in names:
            if name not in MUTATIONS:
                raise ValueError(f"unknown mutation {name!r}; choose from {sorted(MUTATIONS)}")
            attr, repl = MUTATIONS[name]
            stack.enter_context(mock.patch.object(sgmod, attr, repl))
        yield


def run(bounds: Bounds = Bounds(), mutations: list[str] | None = None,
        only: list[str] | None = None) -> Report:
    known = [a for a, _ in SUITES]
    for a in only or []:
        if a not in known:
            raise ValueError(f"unknown anchor {a!r}; choose from {', '.join(known)}")
    results = []
    with mutated(mutations or []):
        for anchor, fn in SUITES:
            if only and anchor not in only:
                continue
            s = Suite()
            try:
                fn(bounds, s)
            except Exception as e:  # a crash is a failure of that anchor, not of the run
                s.failures.append(f"raised {type(e).__name__}: {e}")
            results.append(SuiteResult(anchor, s.count, s.failures))
    return Report(results)
