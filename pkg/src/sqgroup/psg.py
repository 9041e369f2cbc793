"""Presquare groups and their homotopy invariants.

A presquare group is a diagram

    Mee --P--> Me

with Me of class two, an involution sigma of Mee and a bilinear bracket
Me x Me -> Mee, subject to

    P sigma = P,   sigma{x, y} + {y, x} = 0,   P{x, y} = x + y - x - y.

``Me`` is a :class:`Nil2Group`; the bracket is stored as a table on the
generators of its abelianized quotient, which is possible because the
bracket kills the center part whenever the image of P contains it (the
normalized form used everywhere below).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .abelian import (
    AbHom,
    FgAbGroup,
    Vector,
    block_map,
    descend,
    direct_sum,
    from_summands,
    subgroup,
    tensor,
)
from .nil2 import (
    BilinearTerm,
    CentralExtension,
    Elem,
    Nil2Group,
    Renormalized,
    bilinear_from_function,
    canonical_TA,
    renormalize,
)
from .quadfun import induced_map, nat_map, psi_inclusion, quad_value, tensor_to_wedge

DEFAULT_EXHAUSTIVE_BOUND = 64
SAMPLE_SIZE = 40


class PSGError(ValueError):
    """Invalid presquare group data."""


@dataclass(frozen=True)
class PreSquareGroup:
    Me: Nil2Group
    Mee: FgAbGroup
    sigma: AbHom
    P: AbHom
    bracket: tuple[tuple[Vector, ...], ...]

    def __post_init__(self) -> None:
        q = self.Me.quotient
        if self.sigma.source != self.Mee or self.sigma.target != self.Mee:
            raise PSGError("sigma must be an endomorphism of Mee")
        if self.P.source != self.Mee or self.P.target != self.Me.center_part:
            raise PSGError("P must map Mee to the center part of Me")
        if len(self.bracket) != q.ngens or any(len(r) != q.ngens for r in self.bracket):
            raise PSGError("bracket table has the wrong shape")
        object.__setattr__(self, "bracket",
                           tuple(tuple(self.Mee.reduce(v) for v in r) for r in self.bracket))

    def br(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        """Bracket of the quotient classes with coordinates x and y."""
        out = [0] * self.Mee.ngens
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    for k, v in enumerate(self.bracket[i][j]):
                        out[k] += xi * yj * v
        return self.Mee.reduce(out)

    def bracket_elems(self, u: Elem, v: Elem) -> Vector:
        return self.br(u[0], v[0])

    def P_elem(self, a: Sequence[int]) -> Elem:
        return self.Me.central(self.P(a))

    def __str__(self) -> str:
        return f"PreSquareGroup(Me={self.Me}, Mee={self.Mee})"


def bracket_table(q: FgAbGroup, mee: FgAbGroup, fn) -> tuple[tuple[Vector, ...], ...]:
    n = q.ngens
    return tuple(tuple(mee.reduce(fn(i, j)) for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# validation


@dataclass
class Validation:
    ok: bool
    axiom: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def sample_elements(g: Nil2Group, bound: int = DEFAULT_EXHAUSTIVE_BOUND,
                    seed: int = 0) -> tuple[list[Elem], bool]:
    """Elements used to test identities; the flag says whether the list is exhaustive."""
    if g.is_finite and g.order <= bound:
        return list(g.elements()), True
    q, c = g.quotient, g.center_part
    out = [g.zero()]
    out += [(e, c.zero()) for e in q.gens()]
    out += [g.central(e) for e in c.gens()]
    rng = random.Random(seed)
    for _ in range(SAMPLE_SIZE):
        qq = [rng.randrange(d) if d else rng.randint(-3, 3) for d in q.invariant_factors]
        cc = [rng.randrange(d) if d else rng.randint(-3, 3) for d in c.invariant_factors]
        out.append(g.elem(qq, cc))
    return out, False


def psg_validate(m: PreSquareGroup, bound: int = DEFAULT_EXHAUSTIVE_BOUND) -> Validation:
    """Check the presquare group identities, naming the first one that fails."""
    mee, me = m.Mee, m.Me
    q = me.quotient
    if m.sigma @ m.sigma != AbHom.identity(mee):
        return Validation(False, "sigma_involution", "sigma o sigma != id")
    if m.P @ m.sigma != m.P:
        return Validation(False, "P_sigma", "P o sigma != P")
    for i, d in enumerate(q.invariant_factors):
        for j in range(q.ngens):
            for a, b in ((i, j), (j, i)):
                if d and any(mee.scale(d, m.bracket[a][b])):
                    return Validation(False, "bracket_well_defined",
                                      f"bracket on generators {a},{b} is not killed by {d}")
    for i in range(q.ngens):
        for j in range(q.ngens):
            x, y = q.gen(i), q.gen(j)
            s = mee.add(m.sigma(m.br(x, y)), m.br(y, x))
            if any(s):
                return Validation(False, "sigma_bracket", f"sigma{{e{i},e{j}}} + {{e{j},e{i}}} != 0")
            comm = me.commutator((x, me.center_part.zero()), (y, me.center_part.zero()))[1]
            if m.P(m.br(x, y)) != comm:
                return Validation(False, "P_bracket", f"P{{e{i},e{j}}} is not the commutator")
    elems, _ = sample_elements(me, bound)
    for u in elems:
        for v in elems:
            comm = me.commutator(u, v)[1]
            if m.P(m.bracket_elems(u, v)) != comm:
                return Validation(False, "P_bracket", f"P{{x,y}} != [x,y] at {u}, {v}")
    return Validation(True)


# ---------------------------------------------------------------------------
# normalization


@dataclass
class NormalizedPSG:
    """A presquare group whose Me has quotient pi_0 and center part im P."""

    psg: PreSquareGroup
    original: PreSquareGroup
    renorm: Renormalized | None  # None when the original was already normalized

    def to_original(self, x: Elem) -> Elem:
        return x if self.renorm is None else self.renorm.to_old(x)

    def from_original(self, x: Elem) -> Elem:
        return x if self.renorm is None else self.renorm.from_old(x)

    def project(self, x: Elem) -> Vector:
        """pi_0 class of an element of the original Me."""
        return x[0] if self.renorm is None else self.renorm.project(x)


def normalize(m: PreSquareGroup) -> NormalizedPSG:
    if m.P.is_surjective():
        return NormalizedPSG(m, m, None)
    inc = m.P.image
    ren = renormalize(m.Me, inc)
    new_p = m.P.corestrict(inc)
    secq = [s[0] for s in ren.sections]
    br = bracket_table(ren.group.quotient, m.Mee, lambda i, j: m.br(secq[i], secq[j]))
    return NormalizedPSG(PreSquareGroup(ren.group, m.Mee, m.sigma, new_p, br), m, ren)


# ---------------------------------------------------------------------------
# invariants


@dataclass
class KTriple:
    """(pi_n, pi_{n+1}, k) with k : Gamma(pi_n) -> pi_{n+1}, or Z/2 (x) pi_n -> pi_{n+1} when stable."""

    pi_n: FgAbGroup
    pi_n1: FgAbGroup
    k: AbHom
    stable: bool = False


@dataclass
class PsgInvariants:
    normalized: NormalizedPSG
    pi0: FgAbGroup
    pi1: FgAbGroup
    pi1_inclusion: AbHom  # pi1 -> Mee
    involution: AbHom  # on pi1
    k: AbHom  # Gamma(pi0) -> pi1
    is_flat: bool
    is_psg0: bool
    is_psgs: bool
    pi1_minus: FgAbGroup
    pi1_minus_inclusion: AbHom  # into pi1

    def triple(self) -> KTriple:
        return KTriple(self.pi0, self.pi1, self.k)


def _k_map(m: PreSquareGroup, q: FgAbGroup, inc: AbHom) -> AbHom:
    gv = quad_value("Gamma", q)
    images = []
    for lab in gv.raw:
        if lab[0] == "g":
            v = m.br(q.gen(lab[1]), q.gen(lab[1]))
        else:
            i, j = lab[1], lab[2]
            v = m.Mee.add(m.br(q.gen(i), q.gen(j)), m.br(q.gen(j), q.gen(i)))
        x = inc.solve(v)
        if x is None:
            raise PSGError("bracket value outside ker P; the input is not a presquare group")
        images.append(x)
    return gv.presentation.hom_from_images(inc.source, images)


def psg_invariants(m: PreSquareGroup) -> PsgInvariants:
    nm = normalize(m)
    n = nm.psg
    q = n.Me.quotient
    inc = n.P.kernel
    pi1 = inc.source
    inv = (n.sigma @ inc).corestrict(inc)
    k = _k_map(n, q, inc)
    flat = (k @ nat_map("iota", q)).is_zero()
    minus = AbHom.scalar(pi1, -1)
    psg0 = inv == minus
    psgs = n.sigma == AbHom.identity(n.Mee)
    mi = (AbHom.identity(pi1) + inv).kernel
    return PsgInvariants(nm, q, pi1, inc, inv, k, flat, psg0, psgs, mi.source, mi)


def _subquotient(top: AbHom, bottom: AbHom) -> FgAbGroup:
    """ker(top) / im(bottom) for composable maps."""
    kinc = top.kernel
    img = bottom.corestrict(kinc)
    return img.cokernel.target


@dataclass
class StableInvariants:
    underline: PreSquareGroup
    rho: AbHom  # Mee -> Mee / (1 - sigma)
    pi1_bar: FgAbGroup
    pi1_bar_inclusion: AbHom
    k_bar: AbHom  # Z/2 (x) pi0 -> pi1_bar
    epsilon: AbHom  # pi1 -> pi1_bar
    mod2: object  # Tensor(Z/2, pi0)

    def triple(self, pi0: FgAbGroup) -> KTriple:
        return KTriple(pi0, self.pi1_bar, self.k_bar, stable=True)


def underline(m: PreSquareGroup) -> tuple[PreSquareGroup, AbHom]:
    """The quotient M_s with Mee replaced by its sigma-coinvariants."""
    ident = AbHom.identity(m.Mee)
    rho = (ident - m.sigma).cokernel
    pbar = descend(rho, m.P)
    tgt = rho.target
    br = tuple(tuple(rho(v) for v in row) for row in m.bracket)
    return PreSquareGroup(m.Me, tgt, AbHom.identity(tgt), pbar, br), rho


def stable_invariants(m: PreSquareGroup, inv: PsgInvariants | None = None) -> StableInvariants:
    inv = inv or psg_invariants(m)
    n = inv.normalized.psg
    q = n.Me.quotient
    und, rho = underline(n)
    binc = und.P.kernel
    mod2 = tensor(FgAbGroup((2,)), q)
    images = []
    for i in range(q.ngens):
        x = binc.solve(und.br(q.gen(i), q.gen(i)))
        if x is None:
            raise PSGError("reduced bracket outside ker P")
        images.append(x)
    k_bar = mod2.presentation.hom_from_images(binc.source, images)
    eps = (rho @ inv.pi1_inclusion).corestrict(binc)
    return StableInvariants(und, rho, binc.source, binc, k_bar, eps, mod2)


def q_homology(m: PreSquareGroup, degree: int) -> FgAbGroup:
    """Homology of  ... -> Mee -(1+s)-> Mee -(1-s)-> Mee -P-> Me  at the given spot."""
    n = normalize(m).psg
    if degree == 0:
        return n.Me.quotient
    ident = AbHom.identity(n.Mee)
    plus, minus = ident + n.sigma, ident - n.sigma
    if degree == 1:
        return _subquotient(n.P, minus)
    if degree % 2 == 0:
        return _subquotient(minus, plus)
    return _subquotient(plus, minus)


def k_identity_holds(m: PreSquareGroup) -> bool:
    """epsilon o k = k_bar o (Gamma(pi0) -> Z/2 (x) pi0)."""
    inv = psg_invariants(m)
    st = stable_invariants(m, inv)
    red = nat_map("gamma_mod2", inv.pi0)
    return st.epsilon @ inv.k == st.k_bar @ red


# ---------------------------------------------------------------------------
# constructions


def _sum_terms(groups: Sequence[Nil2Group], qs, cs) -> list:
    terms = []
    for g, p, i in zip(groups, qs.projections, cs.injections):
        for t in g.terms:
            terms.append(t.pullback(p, g.center_part).pushforward(i))
    return terms


def psg_product(m: PreSquareGroup, n: PreSquareGroup) -> PreSquareGroup:
    """Componentwise product M x N."""
    qs = direct_sum(m.Me.quotient, n.Me.quotient)
    cs = direct_sum(m.Me.center_part, n.Me.center_part)
    es = direct_sum(m.Mee, n.Mee)
    me = Nil2Group(qs.group, cs.group, tuple(_sum_terms([m.Me, n.Me], qs, cs)))
    sigma = block_map(es, es, [m.sigma, n.sigma])
    p = block_map(es, cs, [m.P, n.P])
    pm, pn = qs.projections
    im, in_ = es.injections

    def fn(i, j):
        a, b = qs.group.gen(i), qs.group.gen(j)
        return es.group.add(im(m.br(pm(a), pm(b))), in_(n.br(pn(a), pn(b))))

    return PreSquareGroup(me, es.group, sigma, p, bracket_table(qs.group, es.group, fn))


def swap_map(t: "object", t2: "object") -> AbHom:
    """g (x) h -> h (x) g from tensor(G, H) to tensor(H, G)."""
    images = []
    for i in range(t.left.ngens):
        for j in range(t.right.ngens):
            images.append(t2.pair(t.right.gen(j), t.left.gen(i)))
    return t.presentation.hom_from_images(t2.group, images)


def psg_coproduct(m: PreSquareGroup, n: PreSquareGroup) -> PreSquareGroup:
    """The coproduct M v N; inputs are normalized first.

    Me is generated by the two Me's with the commutator of x in M and y in N
    recorded as a free element of pi0(M) (x) pi0(N).
    """
    m, n = normalize(m).psg, normalize(n).psg
    g, h = m.Me.quotient, n.Me.quotient
    t, t2 = tensor(g, h), tensor(h, g)
    qs = direct_sum(g, h)
    cs = direct_sum(m.Me.center_part, n.Me.center_part, t.group)
    pg, ph = qs.projections
    terms = _sum_terms([m.Me, n.Me], qs, cs)
    it = cs.injections[2]
    cross = bilinear_from_function(
        qs.group, cs.group,
        lambda i, j: it(t.group.neg(t.pair(pg(qs.group.gen(j)), ph(qs.group.gen(i))))))
    me = Nil2Group(qs.group, cs.group, tuple(terms) + (cross,))
    es = direct_sum(m.Mee, n.Mee, t.group, t2.group)
    sw, sw2 = swap_map(t, t2), swap_map(t2, t)
    im, in_, i3, i4 = es.injections
    p1, p2, p3, p4 = es.projections
    sigma = (im @ m.sigma @ p1 + in_ @ n.sigma @ p2
             - i4 @ sw @ p3 - i3 @ sw2 @ p4)
    c1, c2, c3 = cs.injections
    p = c1 @ m.P @ p1 + c2 @ n.P @ p2 + c3 @ p3 - c3 @ sw2 @ p4

    def fn(i, j):
        a, b = qs.group.gen(i), qs.group.gen(j)
        xa, ya, xb, yb = pg(a), ph(a), pg(b), ph(b)
        out = im(m.br(xa, xb))
        for v in (in_(n.br(ya, yb)), i3(t.pair(xa, yb)), i4(t2.pair(ya, xb))):
            out = es.group.add(out, v)
        return out

    return PreSquareGroup(me, es.group, sigma, p, bracket_table(qs.group, es.group, fn))


def psg_combine(kind: str, m: PreSquareGroup, n: PreSquareGroup) -> PreSquareGroup:
    if kind in ("prod", "product"):
        return psg_product(m, n)
    if kind in ("coprod", "coproduct"):
        return psg_coproduct(m, n)
    raise ValueError(f"unknown combination {kind!r}; expected prod or coprod")


class InvolutionMismatch(PSGError):
    pass


def psg_pushforward_with_map(m: PreSquareGroup, f: AbHom, tau: AbHom | None = None,
                             inclusion: AbHom | None = None) -> tuple[PreSquareGroup, AbHom, AbHom]:
    """Push M forward along f : pi_1 -> A.

    Returns the new PSG with the maps A -> new Mee and old Mee -> new Mee.

    ``tau`` is the involution on A (default -1); ``inclusion`` is pi_1 -> Mee
    (default ker P).
    """
    inc = inclusion if inclusion is not None else m.P.kernel
    if f.source != inc.source:
        raise PSGError("pushforward map does not start at pi_1")
    a = f.target
    tau = tau if tau is not None else AbHom.scalar(a, -1)
    inv = (m.sigma @ inc).corestrict(inc)
    if f @ inv != tau @ f:
        raise InvolutionMismatch("map does not intertwine sigma and the involution on the target")
    ds = direct_sum(a, m.Mee)
    ia, im = ds.injections
    pa, pm = ds.projections
    rho = (ia @ f - im @ inc).cokernel
    sigma = descend(rho, rho @ (ia @ tau @ pa + im @ m.sigma @ pm))
    p = descend(rho, m.P @ pm)
    jm = rho @ im
    br = tuple(tuple(jm(v) for v in row) for row in m.bracket)
    return PreSquareGroup(m.Me, rho.target, sigma, p, br), rho @ ia, jm


def psg_pushforward(m: PreSquareGroup, f: AbHom, tau: AbHom | None = None) -> PreSquareGroup:
    return psg_pushforward_with_map(m, f, tau)[0]


def omega(n: CentralExtension, bar: bool = False) -> PreSquareGroup:
    """The presquare group built on an extension of A by Lambda2(A) with identity pairing.

    With ``bar`` the tensor square is replaced by the quotient where a (x) b
    and -b (x) a agree, and sigma becomes the identity.
    """
    a = n.base
    lam = quad_value("Lambda2", a)
    if n.kernel != lam.group or n.pairing() != AbHom.identity(lam.group):
        raise PSGError("extension must have Lambda2(A) as kernel and identity commutator pairing")
    if bar:
        lt = quad_value("LambdaTilde2", a)
        images = [lam.coords({("l", i, j): 1}) if i != j else lam.group.zero() for _, i, j in lt.raw]
        p = lt.presentation.hom_from_images(lam.group, images)
        sigma = AbHom.identity(lt.group)
        br = bracket_table(a, lt.group, lambda i, j: lt.pair(a.gen(i), a.gen(j)))
        return PreSquareGroup(n.total, lt.group, sigma, p, br)
    ten = quad_value("Tensor2", a)
    images = [ten.coords({("t", j, i): -1}) for _, i, j in ten.raw]
    sigma = ten.presentation.hom_from_images(ten.group, images)
    br = bracket_table(a, ten.group, lambda i, j: ten.coords({("t", i, j): 1}))
    return PreSquareGroup(n.total, ten.group, sigma, tensor_to_wedge(a), br)


# ---------------------------------------------------------------------------
# realization of k-invariants


class NotFlat(PSGError):
    pass


@dataclass
class Realization:
    psg: PreSquareGroup
    phi0: AbHom  # pi_n -> pi_0
    phi1: AbHom  # pi_{n+1} -> Mee (or the coinvariants of Mee when stable)


def flat_factor(a: FgAbGroup, k: AbHom) -> AbHom:
    """k' : Psi(A) -> B with k' tau' = k; raises NotFlat if k is nonzero on Phi(A)."""
    if not (k @ nat_map("iota", a)).is_zero():
        raise NotFlat("k does not vanish on the image of Phi(A)")
    tp = nat_map("tau_prime", a)
    psi = tp.target
    images = []
    for v in psi.gens():
        x = tp.solve(v)
        if x is None:
            raise ArithmeticError("tau' is not surjective")
        images.append(k(x))
    kp = AbHom.from_images(psi, k.target, images)
    if kp @ tp != k:
        raise ArithmeticError("k does not factor through tau'")
    return kp


def realize_psg(target: KTriple, mode: str = "flat") -> Realization:
    a, b, k = target.pi_n, target.pi_n1, target.k
    if mode == "flat":
        if k.source != quad_value("Gamma", a).group or k.target != b:
            raise PSGError("k must map Gamma(pi_2) to pi_3")
        kp = flat_factor(a, k)
        m = omega(canonical_TA(a))
        inv = psg_invariants(m)
        to_pi1 = psi_inclusion(a).corestrict(inv.pi1_inclusion)
        f = kp @ to_pi1.inverse()
        out, ja, _ = psg_pushforward_with_map(m, f, AbHom.scalar(b, -1), inv.pi1_inclusion)
        return Realization(out, AbHom.identity(a), ja)
    if mode == "stable":
        mod2 = tensor(FgAbGroup((2,)), a)
        if k.source != mod2.group or k.target != b:
            raise PSGError("k must map Z/2 (x) pi_n to pi_{n+1}")
        m = omega(canonical_TA(a), bar=True)
        inv = psg_invariants(m)
        st = stable_invariants(m, inv)
        f = k @ st.k_bar.inverse() @ st.epsilon
        out, ja, _ = psg_pushforward_with_map(m, f, AbHom.identity(b), inv.pi1_inclusion)
        st2 = stable_invariants(out)
        return Realization(out, AbHom.identity(a), st2.rho @ ja)
    raise ValueError(f"unknown mode {mode!r}; expected flat or stable")


def check_realization(target: KTriple, r: Realization) -> Validation:
    """Confirm that (phi0, phi1) identify the invariants of r.psg with the target triple."""
    inv = psg_invariants(r.psg)
    if r.phi0.source != target.pi_n or r.phi0.target != inv.pi0 or not r.phi0.is_isomorphism():
        return Validation(False, "phi0", "phi0 is not an isomorphism onto pi_0")
    if target.stable:
        st = stable_invariants(r.psg, inv)
        try:
            p1 = r.phi1.corestrict(st.pi1_bar_inclusion)
        except ValueError:
            return Validation(False, "phi1", "phi1 leaves the stable pi_1")
        if not p1.is_isomorphism():
            return Validation(False, "phi1", "phi1 is not an isomorphism onto the stable pi_1")
        src = tensor(FgAbGroup((2,)), target.pi_n)
        lhs = st.pi1_bar_inclusion @ st.k_bar @ src.induced(
            AbHom.identity(FgAbGroup((2,))), r.phi0, st.mod2)
    else:
        try:
            p1 = r.phi1.corestrict(inv.pi1_inclusion)
        except ValueError:
            return Validation(False, "phi1", "phi1 leaves ker P")
        if not p1.is_isomorphism():
            return Validation(False, "phi1", "phi1 is not an isomorphism onto ker P")
        lhs = inv.pi1_inclusion @ inv.k @ induced_map("Gamma", r.phi0)
    if lhs != r.phi1 @ target.k:
        return Validation(False, "k", "k-invariants do not correspond")
    return Validation(True)


# ---------------------------------------------------------------------------
# braided and symmetric categorical groups


@dataclass
class BCG:
    """boundary : Cee -> Ce with a bracket Ce x Ce -> Cee, stored on quotient generators."""

    Cee: FgAbGroup
    Ce: Nil2Group
    boundary: AbHom  # Cee -> center part of Ce
    brace: tuple[tuple[Vector, ...], ...]
    symmetric: bool = False

    def br(self, x: Elem, y: Elem) -> Vector:
        out = [0] * self.Cee.ngens
        for i, xi in enumerate(x[0]):
            for j, yj in enumerate(y[0]):
                if xi and yj:
                    for k, v in enumerate(self.brace[i][j]):
                        out[k] += xi * yj * v
        return self.Cee.reduce(out)


TRIPLE_BOUND = 32


def validate_bcg(c: BCG, bound: int = DEFAULT_EXHAUSTIVE_BOUND) -> Validation:
    """Check the braided (and, if flagged, symmetric) categorical group identities.

    Ce is written additively, so x^-1 y^-1 x y becomes -x - y + x + y.
    """
    g, e = c.Ce, c.Cee
    add, neg = g.mul, g.inv
    elems, _ = sample_elements(g, bound)
    if e.is_finite and e.order <= bound:
        eel = list(e.elements())
    else:
        eel = [e.zero()] + e.gens() + [e.add(a, b) for a in e.gens() for b in e.gens()]

    cache: dict = {}

    def br(x, y):
        key = (x[0], y[0])
        v = cache.get(key)
        if v is None:
            v = cache[key] = c.br(x, y)
        return v

    def d(a):
        return g.central(c.boundary(a))

    def comm(x, y):
        return g.sum([neg(x), neg(y), x, y])

    for x in elems:
        for y in elems:
            if d(br(x, y)) != comm(x, y):
                return Validation(False, "boundary_bracket", f"at {x}, {y}")
            if c.symmetric and any(e.add(br(x, y), br(y, x))):
                return Validation(False, "symmetry", f"at {x}, {y}")
    for a in eel:
        for b in eel:
            if any(br(d(a), d(b))):
                return Validation(False, "boundary_pair", f"at {a}, {b}")
        for x in elems:
            if any(e.add(br(d(a), x), br(x, d(a)))):
                return Validation(False, "boundary_mixed", f"at {a}, {x}")
    trip = elems if len(elems) <= TRIPLE_BOUND else elems[:TRIPLE_BOUND]
    for x in trip:
        for y in trip:
            cyx = comm(y, x)
            xy = add(x, y)
            ny = neg(y)
            # the conjugate -y + x + y stands in for the first argument
            conj_x = g.sum([ny, x, y])
            for z in trip:
                lhs = br(x, add(y, z))
                rhs = e.add(e.add(br(x, z), br(x, y)), br(cyx, z))
                if lhs != rhs:
                    return Validation(False, "right_expansion", f"at {x}, {y}, {z}")
                lhs = br(xy, z)
                rhs = e.add(br(conj_x, g.sum([ny, z, y])), br(y, z))
                if lhs != rhs:
                    return Validation(False, "left_expansion", f"at {x}, {y}, {z}")
    return Validation(True)


@dataclass
class UpsilonLambda:
    bcg: BCG
    scg: BCG
    bcg_valid: Validation
    scg_valid: Validation

    @property
    def valid(self) -> bool:
        return self.bcg_valid.ok and self.scg_valid.ok


def upsilon_lambda(m: PreSquareGroup, bound: int = DEFAULT_EXHAUSTIVE_BOUND) -> UpsilonLambda:
    """Forget the involution, then symmetrize the bracket."""
    bcg = BCG(m.Mee, m.Me, m.P, m.bracket)
    q = m.Me.quotient
    rels = [m.Mee.add(m.br(q.gen(i), q.gen(j)), m.br(q.gen(j), q.gen(i)))
            for i in range(q.ngens) for j in range(i, q.ngens)]
    rho = subgroup(m.Mee, rels).cokernel
    p = descend(rho, m.P)
    scg = BCG(rho.target, m.Me, p, tuple(tuple(rho(v) for v in r) for r in m.bracket), True)
    return UpsilonLambda(bcg, scg, validate_bcg(bcg, bound), validate_bcg(scg, bound))


# ---------------------------------------------------------------------------
# evaluation on finite pointed sets


def odot_eval(n: int, m: PreSquareGroup) -> Nil2Group:
    """[n] (.) M, the free product of n copies of Me modulo the relations of M."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        z = FgAbGroup(())
        return Nil2Group(z, z)
    if n == 1:
        return m.Me
    acc = m
    for _ in range(n - 1):
        acc = psg_coproduct(acc, m)
    return acc.Me


@dataclass
class MooreComplex:
    """The two-term complex Mee --P--> Me."""

    Mee: FgAbGroup
    P: AbHom
    Me: Nil2Group
    pi0: FgAbGroup
    pi1: FgAbGroup


def moore_s1(m: PreSquareGroup) -> MooreComplex:
    inv = psg_invariants(m)
    return MooreComplex(m.Mee, m.P, m.Me, inv.pi0, inv.pi1)
