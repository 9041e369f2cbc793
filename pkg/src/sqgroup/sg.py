"""Square groups Qe --H--> Qee --P--> Qe.

H is a quadratic map whose cross effect (x|y) = H(x+y) - H(x) - H(y) is
bilinear, subject to

    (Pa|x) = 0,   P(x|y) = x + y - x - y,   PHP(a) = 2 P(a).

Quadratic maps are evaluated, never tabulated unless the caller asks: the
classes below compose (sums over summands, pushforwards, twists, changes of
coordinates) so that infinite Qe can be handled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable, Sequence

from .abelian import AbHom, FgAbGroup, Vector, descend, direct_sum, tensor
from .nil2 import (
    BilinearTerm,
    CarryTerm,
    Coboundary,
    Elem,
    H2Class,
    Nil2Group,
    Renormalized,
    canonical_TA,
    h2_split,
    renormalize,
    solve_coboundary,
    twist_TA,
)
from .psg import (
    KTriple,
    PreSquareGroup,
    PsgInvariants,
    Validation,
    bracket_table,
    flat_factor,
    normalize,
    omega,
    psg_coproduct,
    psg_invariants,
    psg_product,
    psg_pushforward_with_map,
    sample_elements,
    stable_invariants,
    swap_map,
)
from .quadfun import ExtClass, induced_map, nat_map, quad_value, theta, wedge_to_tensor_antisym

DEFAULT_EXHAUSTIVE_BOUND = 64
LINEARITY_SAMPLE = 16


class SGError(ValueError):
    """Invalid square group data."""


# ---------------------------------------------------------------------------
# quadratic maps


@dataclass(frozen=True)
class BinomialForm:
    """g(x) = sum x_i v_i + sum C(x_i, 2) d_i + sum_{i<j} x_i x_j c_ij on reduced coordinates."""

    quotient: FgAbGroup
    codomain: FgAbGroup
    values: tuple[Vector, ...]
    diag: tuple[Vector, ...]
    cross: tuple[tuple[Vector, ...], ...] = ()

    def __call__(self, x: Sequence[int]) -> Vector:
        x = self.quotient.reduce(x)
        out = [0] * self.codomain.ngens
        for i, xi in enumerate(x):
            if not xi:
                continue
            c2 = comb(xi, 2) if xi >= 0 else xi * (xi - 1) // 2
            for k in range(len(out)):
                out[k] += xi * self.values[i][k] + c2 * self.diag[i][k]
            if self.cross:
                for j in range(i + 1, len(x)):
                    if x[j]:
                        for k, v in enumerate(self.cross[i][j]):
                            out[k] += xi * x[j] * v
        return self.codomain.reduce(out)


class QuadraticMap:
    """Base class; subclasses implement ``__call__`` on elements of ``domain``."""

    domain: Nil2Group
    codomain: FgAbGroup

    def __call__(self, x: Elem) -> Vector:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class TableH(QuadraticMap):
    domain: Nil2Group
    codomain: FgAbGroup
    values: tuple[Vector, ...]

    def __call__(self, x: Elem) -> Vector:
        q, c = self.domain.quotient, self.domain.center_part
        idx = q.element_index(x[0]) * c.order + c.element_index(x[1])
        return self.values[idx]


@dataclass(frozen=True, eq=False)
class StructuredH(QuadraticMap):
    """H(q, c) = h(c) + g(q); h is linear on the center part, g a function of quotient coordinates."""

    domain: Nil2Group
    codomain: FgAbGroup
    h: AbHom
    g: Callable[[Sequence[int]], Vector]

    def __call__(self, x: Elem) -> Vector:
        return self.codomain.add(self.h(x[1]), self.g(x[0]))


@dataclass(frozen=True, eq=False)
class MappedH(QuadraticMap):
    """f o H for a homomorphism f out of the codomain."""

    base: QuadraticMap
    f: AbHom

    @property
    def domain(self) -> Nil2Group:
        return self.base.domain

    @property
    def codomain(self) -> FgAbGroup:
        return self.f.target

    def __call__(self, x: Elem) -> Vector:
        return self.f(self.base(x))


@dataclass(frozen=True, eq=False)
class TwistedH(QuadraticMap):
    """H + alpha o (projection to pi_0)."""

    base: QuadraticMap
    alpha: AbHom
    project: Callable[[Elem], Vector]

    @property
    def domain(self) -> Nil2Group:
        return self.base.domain

    @property
    def codomain(self) -> FgAbGroup:
        return self.base.codomain

    def __call__(self, x: Elem) -> Vector:
        return self.codomain.add(self.base(x), self.alpha(self.project(x)))


@dataclass(frozen=True, eq=False)
class TransportedH(QuadraticMap):
    """H o phi for a group isomorphism phi given as a function."""

    domain: Nil2Group
    base: QuadraticMap
    phi: Callable[[Elem], Elem]

    @property
    def codomain(self) -> FgAbGroup:
        return self.base.codomain

    def __call__(self, x: Elem) -> Vector:
        return self.base(self.phi(x))


@dataclass(frozen=True, eq=False)
class SumH(QuadraticMap):
    """sum_k push_k H_k(pq_k x, pc_k c) + extra(q, c); used for products and coproducts."""

    domain: Nil2Group
    codomain: FgAbGroup
    parts: tuple  # (pq: AbHom, pc: AbHom, H_k, push: AbHom)
    extra: Callable[[Elem], Vector] | None = None

    def __call__(self, x: Elem) -> Vector:
        out = self.codomain.zero()
        for pq, pc, hk, push in self.parts:
            out = self.codomain.add(out, push(hk((pq(x[0]), pc(x[1])))))
        if self.extra is not None:
            out = self.codomain.add(out, self.extra(x))
        return out


# ---------------------------------------------------------------------------
# square groups


@dataclass(frozen=True, eq=False)
class SquareGroup:
    Qe: Nil2Group
    Qee: FgAbGroup
    P: AbHom  # Qee -> center part of Qe
    H: QuadraticMap
    name: str = ""

    def __post_init__(self) -> None:
        if self.P.source != self.Qee or self.P.target != self.Qe.center_part:
            raise SGError("P must map Qee to the center part of Qe")
        if self.H.codomain != self.Qee:
            raise SGError("H must take values in Qee")

    def cross(self, x: Elem, y: Elem) -> Vector:
        e = self.Qee
        return e.sub(e.sub(self.H(self.Qe.mul(x, y)), self.H(x)), self.H(y))

    def HP(self) -> AbHom:
        """The homomorphism a -> H(Pa)."""
        return AbHom.from_images(self.Qee, self.Qee,
                                 [self.H(self.Qe.central(self.P(e))) for e in self.Qee.gens()])

    @property
    def is_normalized(self) -> bool:
        return self.P.is_surjective()

    def __str__(self) -> str:
        label = f"{self.name}: " if self.name else ""
        return f"{label}SquareGroup(Qe={self.Qe}, Qee={self.Qee})"


def sg_validate(q: SquareGroup, bound: int = DEFAULT_EXHAUSTIVE_BOUND) -> Validation:
    """Check the square group identities; names the first one that fails.

    Finite Qe up to ``bound`` elements is checked exhaustively; otherwise
    generators plus a seeded sample are used.
    """
    me, e = q.Qe, q.Qee
    elems, exhaustive = sample_elements(me, bound)
    if any(q.H(me.zero())):
        return Validation(False, "H_zero", "H(0) != 0")
    cache: dict = {}

    def cr(x, y):
        key = (x, y)
        v = cache.get(key)
        if v is None:
            v = cache[key] = q.cross(x, y)
        return v

    # (x + g | y) = (x|y) + (g|y) for generators g gives linearity by induction
    steps = [(g, me.center_part.zero()) for g in me.quotient.gens()]
    steps += [me.central(c) for c in me.center_part.gens()]
    if not me.is_finite:
        steps += [me.inv(g) for g in steps]
    lin = elems if exhaustive else elems[:LINEARITY_SAMPLE]
    for g in steps:
        for x in lin:
            xg = me.mul(x, g)
            for y in lin:
                if cr(xg, y) != e.add(cr(x, y), cr(g, y)):
                    return Validation(False, "cross_linear", f"left at {x}, {g}, {y}")
                if cr(y, xg) != e.add(cr(y, x), cr(y, g)):
                    return Validation(False, "cross_linear", f"right at {y}, {x}, {g}")
    pas = [me.central(q.P(a)) for a in e.gens()]
    for pa in pas:
        for x in elems:
            if any(cr(pa, x)):
                return Validation(False, "Pa_x", f"(Pa|x) != 0 at {pa}, {x}")
            if any(cr(x, pa)):
                return Validation(False, "x_Pa", f"(x|Pa) != 0 at {x}, {pa}")
    for x in elems:
        for y in elems:
            comm = me.commutator(x, y)
            if me.central(q.P(cr(x, y))) != comm:
                return Validation(False, "P_cross", f"P(x|y) != [x,y] at {x}, {y}")
            lhs = q.H(comm)
            rhs = e.sub(cr(x, y), cr(y, x))
            if lhs != rhs:
                return Validation(False, "H_commutator", f"at {x}, {y}")
    hp = q.HP()
    if q.P @ hp != 2 * q.P:
        return Validation(False, "PHP", "PHP != 2P")
    for a in e.gens():
        for b in e.gens():
            if q.H(me.central(q.P(e.add(a, b)))) != e.add(hp(a), hp(b)):
                return Validation(False, "HP_linear", "HP is not additive")
    return Validation(True)


def sg_normalize(q: SquareGroup) -> tuple[SquareGroup, Renormalized | None]:
    """Rewrite Qe as an extension of pi_0 by im P."""
    if q.is_normalized:
        return q, None
    inc = q.P.image
    ren = renormalize(q.Qe, inc)
    h = TransportedH(ren.group, q.H, ren.to_old)
    return SquareGroup(ren.group, q.Qee, q.P.corestrict(inc), h, q.name), ren


def projection(q: SquareGroup) -> Callable[[Elem], Vector]:
    """Qe -> pi_0 as a function on elements."""
    if q.is_normalized:
        return lambda x: x[0]
    ren = sg_normalize(q)[1]
    return ren.project


def wp(q: SquareGroup) -> PreSquareGroup:
    """The underlying presquare group: sigma = HP - 1, bracket = cross effect.

    The result is expressed on the normalized form of Qe.
    """
    q = sg_normalize(q)[0]
    me = q.Qe
    sigma = q.HP() - AbHom.identity(q.Qee)
    gens = [(g, me.center_part.zero()) for g in me.quotient.gens()]
    br = bracket_table(me.quotient, q.Qee, lambda i, j: q.cross(gens[i], gens[j]))
    return PreSquareGroup(me, q.Qee, sigma, q.P, br)


def psg_equal(m: PreSquareGroup, n: PreSquareGroup) -> bool:
    """Equality of the stored data (same coordinates)."""
    return (m.Me.quotient == n.Me.quotient and m.Me.center_part == n.Me.center_part
            and m.Mee == n.Mee and m.sigma == n.sigma and m.P == n.P and m.bracket == n.bracket
            and _same_group_law(m.Me, n.Me))


def _same_group_law(a: Nil2Group, b: Nil2Group) -> bool:
    elems, _ = sample_elements(a, 64)
    return all(a.mul(x, y) == b.mul(x, y) for x in elems[:24] for y in elems[:24])


# ---------------------------------------------------------------------------
# twisting


def pi0_of(q: SquareGroup) -> FgAbGroup:
    return sg_normalize(q)[0].Qe.quotient


def sg_twist(q: SquareGroup, alpha: AbHom) -> SquareGroup:
    """H^alpha(x) = H(x) + alpha(x mod im P)."""
    if alpha.source != pi0_of(q) or alpha.target != q.Qee:
        raise SGError("alpha must map pi_0 to Qee")
    if alpha.is_zero():
        return q
    return SquareGroup(q.Qe, q.Qee, q.P, TwistedH(q.H, alpha, projection(q)), q.name)


def alpha_defect(q1: SquareGroup, q2: SquareGroup,
                 fe: Callable[[Elem], Elem] | None = None,
                 fee: AbHom | None = None,
                 bound: int = DEFAULT_EXHAUSTIVE_BOUND) -> AbHom | None:
    """The homomorphism alpha with H2 fe = fee H1 + alpha o projection.

    Defaults to the identity morphism between two structures on the same
    underlying groups.  Returns None if no such alpha exists, which means
    (fe, fee) is not a morphism of the underlying presquare groups.
    """
    fe = fe or (lambda x: x)
    fee = fee or AbHom.identity(q1.Qee)
    n1, ren = sg_normalize(q1)
    pi0 = n1.Qe.quotient
    to1 = (lambda x: x) if ren is None else ren.to_old
    e2 = q2.Qee

    def defect(x):
        return e2.sub(q2.H(fe(x)), fee(q1.H(x)))

    images = [defect(to1((g, n1.Qe.center_part.zero()))) for g in pi0.gens()]
    try:
        alpha = AbHom.from_images(pi0, e2, images)
    except ValueError:
        return None
    proj = projection(q1)
    elems, _ = sample_elements(q1.Qe, bound)
    for x in elems:
        if defect(x) != alpha(proj(x)):
            return None
    return alpha


# ---------------------------------------------------------------------------
# Delta and the stable quotient


def delta(q: SquareGroup, inv: PsgInvariants | None = None) -> AbHom:
    """Delta(x) = HPH(x) + H(2x) - 4H(x), as a homomorphism pi_0 -> pi_1."""
    n = sg_normalize(q)[0]
    inv = inv or psg_invariants(wp(n))
    me, e = n.Qe, n.Qee
    images = []
    for g in me.quotient.gens():
        x = (g, me.center_part.zero())
        hx = n.H(x)
        v = n.H(me.central(n.P(hx)))
        v = e.add(v, n.H(me.mul(x, x)))
        v = e.sub(v, e.scale(4, hx))
        if any(n.P(v)):
            raise ArithmeticError("P(Delta) != 0; the input is not a square group")
        y = inv.pi1_inclusion.solve(v)
        images.append(y)
    return AbHom.from_images(inv.pi0, inv.pi1, images)


def sg_underline(q: SquareGroup) -> tuple[SquareGroup, AbHom]:
    """Qee / (HP - 2); returns the quotient square group and the projection."""
    rho = (q.HP() - AbHom.scalar(q.Qee, 2)).cokernel
    p = descend(rho, q.P)
    return SquareGroup(q.Qe, rho.target, p, MappedH(q.H, rho), q.name + "_s" if q.name else ""), rho


def sg_pushforward(q: SquareGroup, f: AbHom, inclusion: AbHom | None = None
                   ) -> tuple[SquareGroup, AbHom]:
    """Push Q along f : pi_1 -> A (A with involution -1); returns Q' and A -> Q'ee."""
    n = sg_normalize(q)[0]
    m = wp(n)
    out, ja, jm = psg_pushforward_with_map(m, f, AbHom.scalar(f.target, -1), inclusion)
    return SquareGroup(n.Qe, out.Mee, out.P, MappedH(n.H, jm), n.name), ja


# ---------------------------------------------------------------------------
# lifting presquare groups


@dataclass
class Obstruction:
    value: H2Class

    @property
    def zero(self) -> bool:
        return self.value.is_zero()


@dataclass
class LiftResult:
    status: str  # "lifted", "not_psg0" or "obstruction"
    sg: SquareGroup | None = None
    obstruction: Obstruction | None = None
    h: AbHom | None = None  # im P -> Mee with hP = 1 + sigma

    @property
    def ok(self) -> bool:
        return self.status == "lifted"


def h_map(m: PreSquareGroup) -> AbHom:
    """h : im P -> Mee with hP = 1 + sigma, for normalized M in PSG_0."""
    imgs = []
    for k in m.P.target.gens():
        a = m.P.solve(k)
        if a is None:
            raise ArithmeticError("P is not onto the center part")
        imgs.append(m.Mee.add(a, m.sigma(a)))
    h = AbHom.from_images(m.P.target, m.Mee, imgs)
    if h @ m.P != AbHom.identity(m.Mee) + m.sigma:
        raise ArithmeticError("hP != 1 + sigma")
    return h


def bracket_cocycle(m: PreSquareGroup, h: AbHom) -> Nil2Group:
    """pi_0 by Mee with cocycle {x, y} - h(xi(x, y)), xi the cocycle of Me."""
    b = BilinearTerm(m.bracket)
    twisted = m.Me.pushforward(-h)
    return Nil2Group(m.Me.quotient, m.Mee, (b,) + twisted.terms)


def obstruction(m: PreSquareGroup) -> Obstruction:
    """The class [Mee] - h_*[Me] in H^2(pi_0, Mee); M must be in PSG_0."""
    n = normalize(m).psg
    return Obstruction(h2_split(bracket_cocycle(n, h_map(n))))


def lift(m: PreSquareGroup, validate: bool = True) -> LiftResult:
    """A square group Q with wp(Q) = M, or the reason none exists."""
    nm = normalize(m)
    n = nm.psg
    inv = psg_invariants(m)
    if not inv.is_psg0:
        return LiftResult("not_psg0")
    h = h_map(n)
    f = bracket_cocycle(n, h)
    theta_m = h2_split(f)
    if not theta_m.is_zero():
        return LiftResult("obstruction", obstruction=Obstruction(theta_m), h=h)
    g = solve_coboundary(f)
    if g is None:
        raise ArithmeticError("vanishing class without a coboundary")
    q = SquareGroup(n.Me, n.Mee, n.P, StructuredH(n.Me, n.Mee, h, g))
    if nm.renorm is not None:
        q = SquareGroup(m.Me, m.Mee, m.P, TransportedH(m.Me, q.H, nm.renorm.from_old))
    if validate:
        v = sg_validate(q)
        if not v:
            raise ArithmeticError(f"lifted square group fails {v.axiom}: {v.detail}")
    return LiftResult("lifted", sg=q, obstruction=Obstruction(theta_m), h=h)


@dataclass
class OmegaLift:
    ok: bool
    theta: ExtClass
    extension: object = None  # CentralExtension
    sg: SquareGroup | None = None
    twist: Vector | None = None


def lift_omega(a: FgAbGroup) -> OmegaLift:
    """A square group over omega(N) for a suitable N, when theta(A) vanishes."""
    th = theta(a)
    if not th.is_zero():
        return OmegaLift(False, th)
    n0 = canonical_TA(a)
    m0 = omega(n0)
    ob = obstruction(m0).value
    if not ob.pairing.is_zero():
        raise ArithmeticError("obstruction of omega(N_A) has a nonzero pairing component")
    lam = quad_value("Lambda2", a)
    anti = wedge_to_tensor_antisym(a)
    from .abelian import ext_group
    src = ext_group(a, lam.group)
    push = src.pushforward(anti, ob.ext)
    x = push.solve(ob.ext_coords)
    if x is None:
        raise ArithmeticError("obstruction is not in the image of Ext(A, Lambda2 A)")
    n1 = twist_TA(n0, list(x))
    res = lift(omega(n1))
    if not res.ok:
        raise ArithmeticError("twisted extension still obstructed")
    return OmegaLift(True, th, n1, res.sg, x)


# ---------------------------------------------------------------------------
# built-in square groups


def _free_or_cyclic(d: int) -> FgAbGroup:
    return FgAbGroup((d,))


def znil() -> SquareGroup:
    """Qe = Qee = Z, P = 0, H(a) = (a^2 - a)/2."""
    z, zero = FgAbGroup((0,)), FgAbGroup(())
    me = Nil2Group(z, zero)
    g = BinomialForm(z, z, ((0,),), ((1,),))
    return SquareGroup(me, z, AbHom.zero(z, zero), StructuredH(me, z, AbHom.zero(zero, z), g), "Znil")


def cyclic_realizer(d: int) -> SquareGroup:
    """Qe = Qee = Z/2d, P = multiplication by d, H(x) = x^2 - x.

    Qe is stored as Z/d extended by Z/2 = {0, d}.
    """
    if d < 2:
        raise SGError("need d >= 2")
    q, c, e = FgAbGroup((d,)), FgAbGroup((2,)), FgAbGroup((2 * d,))
    me = Nil2Group(q, c, (CarryTerm((1,), d, (1,)),))
    p = AbHom(e, c, [[1]])
    h = AbHom(c, e, [[(d * d - d) % (2 * d)]])
    g = BinomialForm(q, e, ((0,),), ((2,),))
    return SquareGroup(me, e, p, StructuredH(me, e, h, g), f"Cyclic({d})")


def two_power_cyclic(n: int) -> SquareGroup:
    """Qe = Qee = Z/2^(n+1), P = multiplication by 2^n, H(x) = x^2 - x."""
    if n < 1:
        raise SGError("need n >= 1")
    q = cyclic_realizer(2 ** n)
    return SquareGroup(q.Qe, q.Qee, q.P, q.H, f"TwoPowerCyclic({n})")


def half_invertible(a: FgAbGroup) -> SquareGroup:
    """P = 0 and H(a) = -a/2 on a group where 2 is invertible."""
    if not a.is_finite or a.order % 2 == 0:
        raise SGError("multiplication by 2 must be invertible")
    half = (a.exponent + 1) // 2 if a.ngens else 0
    zero = FgAbGroup(())
    me = Nil2Group(a, zero)
    vals = tuple(a.scale(-half, e) for e in a.gens())
    g = BinomialForm(a, a, vals, tuple(a.zero() for _ in vals))
    return SquareGroup(me, a, AbHom.zero(a, zero), StructuredH(me, a, AbHom.zero(zero, a), g),
                       f"HalfInvertible({a})")


def _zero_sg(a: FgAbGroup) -> SquareGroup:
    zero = FgAbGroup(())
    me = Nil2Group(a, zero)
    g = BinomialForm(a, zero, tuple(() for _ in a.gens()), tuple(() for _ in a.gens()))
    return SquareGroup(me, zero, AbHom.zero(zero, zero), StructuredH(me, zero, AbHom.zero(zero, zero), g))


def _stable_two_power(n: int) -> SquareGroup:
    """Qe = Z/2^n + Z/2 (abelian), Qee = (Z/2)^2, P(a, x) = x t, H(u a + t b) = (C(a, 2), 0); n >= 2."""
    q, c, e = FgAbGroup((2 ** n,)), FgAbGroup((2,)), FgAbGroup((2, 2))
    me = Nil2Group(q, c)
    p = AbHom(e, c, [[0, 1]])
    g = BinomialForm(q, e, ((0, 0),), ((1, 0),))
    return SquareGroup(me, e, p, StructuredH(me, e, AbHom.zero(c, e), g))


@dataclass
class Piece:
    """A square group together with the element of its pi_0 matching a generator."""

    sg: SquareGroup
    gen: Vector


def _split_two(d: int) -> tuple[int, int]:
    t = 1
    while d % 2 == 0:
        d //= 2
        t *= 2
    return t, d


def _stable_pieces(d: int) -> list[SquareGroup]:
    if d == 0:
        return [sg_underline(znil())[0]]
    t, odd = _split_two(d)
    out = []
    if t == 2:
        out.append(two_power_cyclic(1))
    elif t > 2:
        out.append(_stable_two_power(t.bit_length() - 1))
    if odd > 1:
        out.append(_zero_sg(FgAbGroup((odd,))))
    return out


@dataclass
class Assembled:
    """A square group built from pieces, with the identification of A with pi_0."""

    sg: SquareGroup
    phi0: AbHom  # A -> pi_0


def _assemble(a: FgAbGroup, pieces: list[list[SquareGroup]], combine) -> Assembled:
    """Combine the pieces of every cyclic factor of A and track A -> pi_0."""
    flat = [p for ps in pieces for p in ps]
    if not flat:
        z = _zero_sg(FgAbGroup(()))
        return Assembled(z, AbHom.zero(a, FgAbGroup(())))
    acc = flat[0]
    injs = [AbHom.identity(pi0_of(acc))]
    for p in flat[1:]:
        acc, i1, i2 = combine(acc, p)
        injs = [i1 @ j for j in injs] + [i2]
    pi0 = pi0_of(acc)
    images = []
    k = 0
    for ps in pieces:
        v = pi0.zero()
        for p in ps:
            pg = pi0_of(p)
            v = pi0.add(v, injs[k](pg.gen(0)))
            k += 1
        images.append(v)
    return Assembled(acc, AbHom.from_images(a, pi0, images))


def stable_universal(a: FgAbGroup) -> Assembled:
    """A square group in SG_s with stable invariants (A, Z/2 (x) A, identity).

    Built as a product over cyclic pieces of A.
    """
    pieces = [_stable_pieces(d) for d in a.invariant_factors]
    return _assemble(a, pieces, _product_with_injections)


def builtin_realizer(kind: str, arg=None) -> SquareGroup:
    if kind == "Znil":
        return znil()
    if kind == "TwoPowerCyclic":
        return two_power_cyclic(int(arg))
    if kind == "Cyclic":
        return cyclic_realizer(int(arg))
    if kind == "HalfInvertible":
        return half_invertible(arg)
    if kind == "StableUniversal":
        q = stable_universal(arg).sg
        return SquareGroup(q.Qe, q.Qee, q.P, q.H, f"StableUniversal({arg})")
    raise SGError(f"unknown realizer {kind!r}")


# ---------------------------------------------------------------------------
# products and coproducts


def _product_with_injections(q1: SquareGroup, q2: SquareGroup):
    q1, q2 = sg_normalize(q1)[0], sg_normalize(q2)[0]
    m = psg_product(wp(q1), wp(q2))
    qs = direct_sum(q1.Qe.quotient, q2.Qe.quotient)
    cs = direct_sum(q1.Qe.center_part, q2.Qe.center_part)
    es = direct_sum(q1.Qee, q2.Qee)
    parts = tuple((qs.projections[k], cs.projections[k], q.H, es.injections[k])
                  for k, q in enumerate((q1, q2)))
    h = SumH(m.Me, m.Mee, parts)
    name = f"({q1.name} x {q2.name})" if q1.name and q2.name else ""
    return SquareGroup(m.Me, m.Mee, m.P, h, name), qs.injections[0], qs.injections[1]


def _coproduct_with_injections(q1: SquareGroup, q2: SquareGroup):
    q1, q2 = sg_normalize(q1)[0], sg_normalize(q2)[0]
    m = psg_coproduct(wp(q1), wp(q2))
    g, hh = q1.Qe.quotient, q2.Qe.quotient
    t, t2 = tensor(g, hh), tensor(hh, g)
    qs = direct_sum(g, hh)
    cs = direct_sum(q1.Qe.center_part, q2.Qe.center_part, t.group)
    es = direct_sum(q1.Qee, q2.Qee, t.group, t2.group)
    pg, ph = qs.projections
    pt = cs.projections[2]
    i3, i4 = es.injections[2], es.injections[3]
    sw = swap_map(t, t2)
    ee = es.group

    def extra(x: Elem) -> Vector:
        w = pt(x[1])
        v = i3(t.group.add(t.pair(pg(x[0]), ph(x[0])), w))
        return ee.sub(v, i4(sw(w)))

    parts = tuple((qs.projections[k], cs.projections[k], q.H, es.injections[k])
                  for k, q in enumerate((q1, q2)))
    h = SumH(m.Me, ee, parts, extra)
    name = f"({q1.name} v {q2.name})" if q1.name and q2.name else ""
    return SquareGroup(m.Me, ee, m.P, h, name), qs.injections[0], qs.injections[1]


def sg_combine(kind: str, q1: SquareGroup, q2: SquareGroup) -> SquareGroup:
    if kind in ("prod", "product"):
        return _product_with_injections(q1, q2)[0]
    if kind in ("coprod", "coproduct"):
        return _coproduct_with_injections(q1, q2)[0]
    raise SGError(f"unknown combination {kind!r}; expected prod or coprod")


# ---------------------------------------------------------------------------
# realization


class UnsupportedPi2(SGError):
    def __init__(self, summand: FgAbGroup, certificate: ExtClass):
        super().__init__(f"no square group realizer found for {summand}: theta != 0")
        self.summand = summand
        self.certificate = certificate


@dataclass
class SGRealization:
    sg: SquareGroup
    phi0: AbHom  # pi_n -> pi_0
    phi1: AbHom  # pi_{n+1} -> Qee (or its stable quotient)

    def psg_realization(self):
        from .psg import Realization
        return Realization(wp(self.sg), self.phi0, self.phi1)


def class_a_certificate(a: FgAbGroup) -> list[tuple[int, str]]:
    """How each cyclic factor of A is realized in flat mode."""
    out = []
    for d in a.invariant_factors:
        if d == 0 or d % 2:
            out.append((d, "lift_omega"))
        else:
            out.append((d, "cyclic_realizer"))
    return out


def _flat_piece(d: int) -> SquareGroup:
    if d and d % 2 == 0:
        return cyclic_realizer(d)
    res = lift_omega(FgAbGroup((d,)))
    if not res.ok:
        raise UnsupportedPi2(FgAbGroup((d,)), res.theta)
    return res.sg


def psi_realizer(a: FgAbGroup, strategy: str = "auto") -> Assembled:
    """A square group whose invariants are (A, Psi(A), tau') up to the returned phi0."""
    if strategy == "omega":
        res = lift_omega(a)
        if not res.ok:
            raise UnsupportedPi2(a, res.theta)
        return Assembled(res.sg, AbHom.identity(a))
    pieces = [[_flat_piece(d)] for d in a.invariant_factors]
    return _assemble(a, pieces, _coproduct_with_injections)


def realize_sg(target: KTriple, mode: str = "flat", f: AbHom | None = None,
               strategy: str = "auto") -> SGRealization:
    """A square group realizing a flat triple, a stable triple, or a prescribed Delta."""
    a, b, k = target.pi_n, target.pi_n1, target.k
    if mode == "flat":
        kp = flat_factor(a, k)
        base = psi_realizer(a, strategy)
        q = sg_normalize(base.sg)[0]
        inv = psg_invariants(wp(q))
        ktot = inv.k @ induced_map("Gamma", base.phi0)
        phi1 = flat_factor(a, ktot)  # Psi(A) -> pi_1 of the realizer
        if not phi1.is_isomorphism():
            raise ArithmeticError("realizer does not have pi_1 = Psi(A)")
        out, ja = sg_pushforward(q, kp @ phi1.inverse(), inv.pi1_inclusion)
        return SGRealization(out, base.phi0, ja)
    if mode == "stable":
        base = stable_universal(a)
        q = base.sg
        inv = psg_invariants(wp(q))
        st = stable_invariants(wp(q), inv)
        two = FgAbGroup((2,))
        src = tensor(two, a)
        kb = st.k_bar @ src.induced(AbHom.identity(two), base.phi0, st.mod2)
        fmap = k @ kb.inverse() @ st.epsilon
        out, ja = sg_pushforward(q, fmap, inv.pi1_inclusion)
        rho = stable_invariants(wp(out)).rho
        return SGRealization(out, base.phi0, rho @ ja)
    if mode == "delta":
        if f is None:
            raise SGError("delta mode needs the map f")
        a, b = f.source, f.target
        pieces = []
        for d in a.invariant_factors:
            if d == 0:
                pieces.append([znil()])
            elif d % 2:
                pieces.append([half_invertible(FgAbGroup((d,)))])
            else:
                pieces.append([cyclic_realizer(d)])
        base = _assemble(a, pieces, _product_with_injections)
        q = sg_normalize(base.sg)[0]
        inv = psg_invariants(wp(q))
        dq = delta(q, inv) @ base.phi0
        out, ja = sg_pushforward(q, f @ dq.inverse(), inv.pi1_inclusion)
        return SGRealization(out, base.phi0, ja)
    raise SGError(f"unknown mode {mode!r}; expected flat, stable or delta")


def check_delta_realization(f: AbHom, r: SGRealization) -> Validation:
    inv = psg_invariants(wp(r.sg))
    if not r.phi0.is_isomorphism():
        return Validation(False, "phi0", "phi0 is not an isomorphism")
    p1 = r.phi1.corestrict(inv.pi1_inclusion)
    if not p1.is_isomorphism():
        return Validation(False, "phi1", "phi1 is not an isomorphism onto pi_1")
    if delta(r.sg, inv) @ r.phi0 != p1 @ f:
        return Validation(False, "delta", "Delta does not match")
    return Validation(True)
