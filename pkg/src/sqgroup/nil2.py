"""Groups of nilpotency class two as central extensions.

A :class:`Nil2Group` is the set ``Q x C`` with the law

    (q, c) + (q', c') = (q + q', c + c' + f(q, q'))

for a normalized 2-cocycle ``f : Q x Q -> C``.  Cocycles are sums of
structured terms (bilinear forms, carry cocycles, finite tables), so they
can be evaluated, pulled back and pushed forward without tabulating.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator, Sequence

from .abelian import (
    AbHom,
    ExtGroup,
    FgAbGroup,
    Presentation,
    Vector,
    ext_group,
    present,
    subgroup,
)
from .quadfun import quad_value

Elem = tuple[Vector, Vector]

DEFAULT_MAX_ORDER = 64


# ---------------------------------------------------------------------------
# cocycle terms


@dataclass(frozen=True)
class BilinearTerm:
    """f(x, y) = sum_ij x_i y_j T[i][j]."""

    table: tuple[tuple[Vector, ...], ...]

    def __call__(self, q: FgAbGroup, c: FgAbGroup, x: Sequence[int], y: Sequence[int]) -> Vector:
        out = [0] * c.ngens
        for i, xi in enumerate(x):
            if not xi:
                continue
            row = self.table[i]
            for j, yj in enumerate(y):
                if yj:
                    t = row[j]
                    s = xi * yj
                    for k, v in enumerate(t):
                        if v:
                            out[k] += s * v
        return c.reduce(out)

    def pullback(self, phi: AbHom, c: FgAbGroup) -> "BilinearTerm":
        n = phi.source.ngens
        cols = [phi.column(a) for a in range(n)]
        table = []
        for a in range(n):
            row = []
            for b in range(n):
                row.append(self(phi.target, c, cols[a], cols[b]))
            table.append(tuple(row))
        return BilinearTerm(tuple(table))

    def pushforward(self, h: AbHom) -> "BilinearTerm":
        return BilinearTerm(tuple(tuple(h(v) for v in row) for row in self.table))

    def is_zero(self) -> bool:
        return not any(any(v) for row in self.table for v in row)


@dataclass(frozen=True)
class CarryTerm:
    """f(x, y) = value if (l.x mod d) + (l.y mod d) >= d, else 0."""

    row: Vector
    modulus: int
    value: Vector

    def _digit(self, x: Sequence[int]) -> int:
        t = 0
        for a, b in zip(self.row, x):
            if a and b:
                t += a * b
        return t % self.modulus

    def __call__(self, q: FgAbGroup, c: FgAbGroup, x: Sequence[int], y: Sequence[int]) -> Vector:
        if self._digit(x) + self._digit(y) >= self.modulus:
            return c.reduce(self.value)
        return c.zero()

    def pullback(self, phi: AbHom, c: FgAbGroup) -> "CarryTerm":
        row = tuple(sum(self.row[i] * phi.matrix[i][j] for i in range(len(self.row)))
                    for j in range(phi.source.ngens))
        return CarryTerm(row, self.modulus, self.value)

    def pushforward(self, h: AbHom) -> "CarryTerm":
        return CarryTerm(self.row, self.modulus, h(self.value))

    def is_zero(self) -> bool:
        return not any(self.value)


@dataclass(frozen=True)
class TableTerm:
    """Arbitrary cocycle on a finite quotient, rows and columns in enumeration order."""

    values: tuple[tuple[Vector, ...], ...]

    def __call__(self, q: FgAbGroup, c: FgAbGroup, x: Sequence[int], y: Sequence[int]) -> Vector:
        return c.reduce(self.values[q.element_index(x)][q.element_index(y)])

    def pullback(self, phi: AbHom, c: FgAbGroup) -> "TableTerm":
        src, tgt = phi.source, phi.target
        elems = list(src.elements())
        imgs = [tgt.element_index(phi(e)) for e in elems]
        return TableTerm(tuple(tuple(self.values[a][b] for b in imgs) for a in imgs))

    def pushforward(self, h: AbHom) -> "TableTerm":
        return TableTerm(tuple(tuple(h(v) for v in row) for row in self.values))

    def is_zero(self) -> bool:
        return not any(any(v) for row in self.values for v in row)


Term = BilinearTerm | CarryTerm | TableTerm


def bilinear_from_function(q: FgAbGroup, c: FgAbGroup,
                           fn: Callable[[int, int], Sequence[int]]) -> BilinearTerm:
    n = q.ngens
    return BilinearTerm(tuple(tuple(c.reduce(fn(i, j)) for j in range(n)) for i in range(n)))


def zero_bilinear(q: FgAbGroup, c: FgAbGroup) -> BilinearTerm:
    return bilinear_from_function(q, c, lambda i, j: c.zero())


# ---------------------------------------------------------------------------
# groups


class CocycleError(ValueError):
    pass


@dataclass(frozen=True)
class Nil2Group:
    """Central extension 0 -> C -> G -> Q -> 0 with an explicit cocycle."""

    quotient: FgAbGroup
    center_part: FgAbGroup
    terms: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(t for t in self.terms if not t.is_zero()))

    # -- cocycle ------------------------------------------------------------

    def f(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        q, c = self.quotient, self.center_part
        out = c.zero()
        for t in self.terms:
            out = c.add(out, t(q, c, x, y))
        return out

    @property
    def is_finite(self) -> bool:
        return self.quotient.is_finite and self.center_part.is_finite

    @property
    def order(self) -> int | None:
        if not self.is_finite:
            return None
        return self.quotient.order * self.center_part.order

    def with_terms(self, terms: Sequence) -> "Nil2Group":
        return Nil2Group(self.quotient, self.center_part, tuple(terms))

    def pushforward(self, h: AbHom) -> "Nil2Group":
        """Push the cocycle along h : C -> C'."""
        if h.source != self.center_part:
            raise ValueError("pushforward map does not start at the center part")
        return Nil2Group(self.quotient, h.target, tuple(t.pushforward(h) for t in self.terms))

    def pullback(self, phi: AbHom) -> "Nil2Group":
        """Pull the cocycle back along phi : Q' -> Q."""
        c = self.center_part
        return Nil2Group(phi.source, c, tuple(t.pullback(phi, c) for t in self.terms))

    def negated(self) -> "Nil2Group":
        return self.pushforward(AbHom.scalar(self.center_part, -1))

    def plus(self, other: "Nil2Group") -> "Nil2Group":
        """Same Q and C, cocycles added."""
        if other.quotient != self.quotient or other.center_part != self.center_part:
            raise ValueError("cocycles live on different groups")
        return self.with_terms(self.terms + other.terms)

    def check_cocycle(self, max_order: int = DEFAULT_MAX_ORDER) -> tuple | None:
        """First triple violating the cocycle identity, exhaustive on small Q."""
        q, c = self.quotient, self.center_part
        if any(isinstance(t, TableTerm) for t in self.terms):
            if not q.is_finite:
                raise CocycleError("table cocycle on an infinite quotient")
            elems = list(q.elements())
        else:
            if q.is_finite and q.order <= max_order:
                elems = list(q.elements())
            else:
                elems = list(q.window(1)) if q.ngens <= 3 else [q.zero()] + q.gens()
        f = self.f
        for a in elems:
            if any(f(a, q.zero())) or any(f(q.zero(), a)):
                return ("normalization", a)
        for a in elems:
            for b in elems:
                fab = f(a, b)
                ab = q.add(a, b)
                for cc in elems:
                    lhs = c.add(fab, f(ab, cc))
                    rhs = c.add(f(b, cc), f(a, q.add(b, cc)))
                    if lhs != rhs:
                        return (a, b, cc)
        return None

    # -- arithmetic -----------------------------------------------------------

    def elem(self, q: Sequence[int], c: Sequence[int] | None = None) -> Elem:
        cc = self.center_part.zero() if c is None else self.center_part.reduce(c)
        return (self.quotient.reduce(q), cc)

    def zero(self) -> Elem:
        return (self.quotient.zero(), self.center_part.zero())

    def central(self, c: Sequence[int]) -> Elem:
        return (self.quotient.zero(), self.center_part.reduce(c))

    def check(self, x: Elem) -> Elem:
        if (not isinstance(x, tuple) or len(x) != 2 or len(x[0]) != self.quotient.ngens
                or len(x[1]) != self.center_part.ngens):
            raise ValueError(f"{x!r} is not an element of this group")
        return x

    def mul(self, x: Elem, y: Elem) -> Elem:
        q, c = self.quotient, self.center_part
        return (q.add(x[0], y[0]), c.add(c.add(x[1], y[1]), self.f(x[0], y[0])))

    add = mul

    def inv(self, x: Elem) -> Elem:
        q, c = self.quotient, self.center_part
        nq = q.neg(x[0])
        return (nq, c.neg(c.add(x[1], self.f(x[0], nq))))

    def sub(self, x: Elem, y: Elem) -> Elem:
        return self.mul(x, self.inv(y))

    def scale(self, n: int, x: Elem) -> Elem:
        if n < 0:
            return self.scale(-n, self.inv(x))
        out = self.zero()
        base = x
        while n:
            if n & 1:
                out = self.mul(out, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return out

    def sum(self, xs: Sequence[Elem]) -> Elem:
        out = self.zero()
        for x in xs:
            out = self.mul(out, x)
        return out

    def commutator(self, x: Elem, y: Elem) -> Elem:
        """x + y - x - y."""
        c = self.center_part
        return (self.quotient.zero(), c.sub(self.f(x[0], y[0]), self.f(y[0], x[0])))

    def is_central(self, x: Elem) -> bool:
        return all(not any(self.commutator(x, (g, self.center_part.zero()))[1])
                   for g in self.quotient.gens())

    def element_order(self, x: Elem) -> int:
        """Order of x; 0 if infinite."""
        n0 = self.quotient.element_order(x[0])
        if n0 == 0:
            return 0
        y = self.scale(n0, x)
        m = self.center_part.element_order(y[1])
        return 0 if m == 0 else n0 * m

    def elements(self) -> Iterator[Elem]:
        for q in self.quotient.elements():
            for c in self.center_part.elements():
                yield (q, c)

    def ordered_sum(self, coeffs: Sequence[int], lifts: Sequence[Elem]) -> Elem:
        """coeffs[0] * lifts[0] + coeffs[1] * lifts[1] + ... in this order."""
        out = self.zero()
        for n, g in zip(coeffs, lifts):
            if n:
                out = self.mul(out, self.scale(n, g))
        return out

    # -- invariants -----------------------------------------------------------

    def pairing_images(self) -> list[Vector]:
        """Commutator pairing on raw Lambda2 generators (i < j)."""
        q = self.quotient
        n = q.ngens
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                out.append(self.center_part.sub(self.f(q.gen(i), q.gen(j)), self.f(q.gen(j), q.gen(i))))
        return out

    def pairing(self) -> AbHom:
        """The commutator pairing Lambda2(Q) -> C."""
        lam = quad_value("Lambda2", self.quotient)
        return lam.presentation.hom_from_images(self.center_part, self.pairing_images())

    def generator_power(self, i: int) -> Vector:
        """Center part of d_i * (e_i, 0), i.e. sum_k f(k e_i, e_i)."""
        q = self.quotient
        # double-and-add instead of summing d cocycle values
        y = self.scale(q.invariant_factors[i], (q.gen(i), self.center_part.zero()))
        if any(y[0]):
            raise CocycleError("quotient generator does not have the stated order")
        return y[1]

    def __str__(self) -> str:
        return f"Nil2Group({self.quotient} by {self.center_part}, {len(self.terms)} terms)"


# ---------------------------------------------------------------------------
# second cohomology


@dataclass
class H2Class:
    """Element of H^2(Q, C) = Ext(Q, C) + Hom(Lambda2 Q, C)."""

    ext: ExtGroup
    ext_coords: Vector
    pairing: AbHom

    @property
    def quotient(self) -> FgAbGroup:
        return self.ext.source

    @property
    def coefficients(self) -> FgAbGroup:
        return self.ext.target

    def is_zero(self) -> bool:
        return not any(self.ext_coords) and self.pairing.is_zero()

    def ext_is_zero(self) -> bool:
        return not any(self.ext_coords)

    def ext_components(self) -> list[Vector]:
        return self.ext.components(self.ext_coords)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, H2Class):
            return NotImplemented
        return (self.ext.group == other.ext.group and self.ext_coords == other.ext_coords
                and self.pairing == other.pairing)

    def __sub__(self, other: "H2Class") -> "H2Class":
        g = self.ext.group
        return H2Class(self.ext, g.sub(self.ext_coords, other.ext_coords), self.pairing - other.pairing)

    def __add__(self, other: "H2Class") -> "H2Class":
        g = self.ext.group
        return H2Class(self.ext, g.add(self.ext_coords, other.ext_coords), self.pairing + other.pairing)

    def pushforward(self, h: AbHom) -> "H2Class":
        other = ext_group(self.quotient, h.target)
        return H2Class(other, self.ext.pushforward(h, other)(self.ext_coords), h @ self.pairing)

    def __str__(self) -> str:
        comps = ", ".join(str(list(c)) for c in self.ext_components())
        return f"H2Class(ext=[{comps}], pairing={[list(r) for r in self.pairing.matrix]})"


def lower_triangular(q: FgAbGroup, pairing: AbHom) -> BilinearTerm:
    """Bilinear cocycle beta with beta(e_i, e_j) = pairing(e_i ^ e_j) for i > j, zero otherwise."""
    lam = quad_value("Lambda2", q)
    c = pairing.target

    def fn(i, j):
        if i > j:
            return pairing(lam.pair(q.gen(i), q.gen(j)))
        return c.zero()

    return bilinear_from_function(q, c, fn)


def h2_split(g: Nil2Group) -> H2Class:
    """Split the class of a central extension into Ext and pairing parts."""
    q, c = g.quotient, g.center_part
    pairing = g.pairing()
    beta = lower_triangular(q, pairing)
    sym = g.plus(Nil2Group(q, c, (beta,)).negated())
    ext = ext_group(q, c)
    comps = [sym.generator_power(i) for i in ext.factors]
    return H2Class(ext, ext.from_components(comps), pairing)


def class_to_cocycle(cls: H2Class) -> Nil2Group:
    q, c = cls.quotient, cls.coefficients
    terms: list = [lower_triangular(q, cls.pairing)]
    for i, comp in zip(cls.ext.factors, cls.ext_components()):
        row = tuple(int(k == i) for k in range(q.ngens))
        terms.append(CarryTerm(row, q.invariant_factors[i], comp))
    return Nil2Group(q, c, tuple(terms))


@dataclass
class Coboundary:
    """g : Q -> C with f(a, b) = g(a + b) - g(a) - g(b)."""

    group: Nil2Group
    lifts: list[Elem]

    def __call__(self, x: Sequence[int]) -> Vector:
        x = self.group.quotient.reduce(x)
        return self.group.ordered_sum(x, self.lifts)[1]


def solve_coboundary(g: Nil2Group) -> Coboundary | None:
    """A 1-cochain whose coboundary is the cocycle of g, or None if the class is nonzero."""
    q, c = g.quotient, g.center_part
    if not g.pairing().is_zero():
        return None
    lifts = []
    scale = {}
    for i, d in enumerate(q.invariant_factors):
        e = q.gen(i)
        if d == 0:
            lifts.append((e, c.zero()))
            continue
        s = g.generator_power(i)
        h = scale.get(d)
        if h is None:
            h = scale[d] = AbHom.scalar(c, d)
        ci = h.solve(c.neg(s))
        if ci is None:
            return None
        lifts.append((e, ci))
    return Coboundary(g, lifts)


# ---------------------------------------------------------------------------
# the torsor T_A


@dataclass(frozen=True)
class CentralExtension:
    """0 -> C -> total -> base -> 0 with the center part as kernel."""

    total: Nil2Group

    @property
    def base(self) -> FgAbGroup:
        return self.total.quotient

    @property
    def kernel(self) -> FgAbGroup:
        return self.total.center_part

    @property
    def kernel_inclusion(self) -> AbHom:
        return AbHom.identity(self.kernel)

    def pairing(self) -> AbHom:
        return self.total.pairing()


def canonical_TA(a: FgAbGroup) -> CentralExtension:
    """Extension of A by Lambda2(A) whose commutator pairing is the identity."""
    lam = quad_value("Lambda2", a)

    def fn(i, j):
        return lam.pair(a.gen(i), a.gen(j)) if i > j else lam.group.zero()

    beta = bilinear_from_function(a, lam.group, fn)
    return CentralExtension(Nil2Group(a, lam.group, (beta,)))


def twist_TA(n: CentralExtension, x: Sequence[int] | Sequence[Vector]) -> CentralExtension:
    """Act on T_A by an element of Ext(A, Lambda2 A).

    ``x`` is either canonical coordinates in the Ext group or a list of
    components (one element of Lambda2 A per finite factor of A).
    """
    a, lam = n.base, n.kernel
    ext = ext_group(a, lam)
    if x and isinstance(x[0], (tuple, list)):
        comps = [lam.reduce(v) for v in x]
    else:
        comps = ext.components(x)
    terms = list(n.total.terms)
    for i, comp in zip(ext.factors, comps):
        row = tuple(int(k == i) for k in range(a.ngens))
        terms.append(CarryTerm(row, a.invariant_factors[i], comp))
    return CentralExtension(Nil2Group(a, lam, tuple(terms)))


def difference_class(n1: CentralExtension, n2: CentralExtension) -> H2Class:
    return h2_split(n1.total.plus(n2.total.negated()))


# ---------------------------------------------------------------------------
# renormalization


@dataclass
class Renormalized:
    """A class-two group rewritten as an extension of G/K by a central K.

    ``group`` has quotient G/K (canonical) and center K; ``to_old`` and
    ``from_old`` are the two halves of the isomorphism with the original.
    """

    old: Nil2Group
    group: Nil2Group
    inclusion: AbHom  # K -> old center part
    presentation: Presentation
    sections: list[Elem]  # lifts in the old group of canonical generators of G/K

    def to_old(self, x: Elem) -> Elem:
        g = self.old
        base = g.ordered_sum(x[0], self.sections)
        return g.mul(base, g.central(self.inclusion(x[1])))

    def project(self, x: Elem) -> Vector:
        """Image in G/K of an element of the old group."""
        g = self.old
        t = g.ordered_sum(x[0], [(e, g.center_part.zero()) for e in g.quotient.gens()])
        raw = list(x[0]) + list(g.center_part.sub(x[1], t[1]))
        return self.presentation.to_coords(raw)

    def from_old(self, x: Elem) -> Elem:
        xb = self.project(x)
        base = self.old.ordered_sum(xb, self.sections)
        diff = self.old.sub(x, base)
        if any(diff[0]):
            raise ArithmeticError("renormalization section is inconsistent")
        k = self.inclusion.solve(diff[1])
        if k is None:
            raise ArithmeticError("element is not in the subgroup")
        return (xb, k)

    def quotient_map_on_q(self) -> AbHom:
        """Q -> G/K induced by (e_i, 0)."""
        g = self.old
        imgs = [self.project((e, g.center_part.zero())) for e in g.quotient.gens()]
        return AbHom.from_images(g.quotient, self.group.quotient, imgs)

    def center_map(self) -> AbHom:
        """old center part -> G/K."""
        g = self.old
        n = g.quotient.ngens
        imgs = []
        for j in range(g.center_part.ngens):
            imgs.append(self.presentation.gen_image(n + j))
        return AbHom.from_images(g.center_part, self.group.quotient, imgs)


def renormalize(g: Nil2Group, inclusion: AbHom) -> Renormalized:
    """Rewrite g as a central extension of g/K by K, K = image of ``inclusion``.

    K must contain all commutators so that g/K is abelian.
    """
    q, c = g.quotient, g.center_part
    k = inclusion.source
    nq, nc = q.ngens, c.ngens
    rels = []
    for j, d in enumerate(c.invariant_factors):
        if d:
            v = [0] * (nq + nc)
            v[nq + j] = d
            rels.append(v)
    for col in range(k.ngens):
        rels.append([0] * nq + list(inclusion.column(col)))
    for i, d in enumerate(q.invariant_factors):
        if d:
            v = [0] * (nq + nc)
            v[i] = d
            s = g.generator_power(i)
            for j in range(nc):
                v[nq + j] -= s[j]
            rels.append(v)
    pres = present(nq + nc, rels)
    pi0 = pres.group
    gens = [(e, c.zero()) for e in q.gens()]
    sections = []
    for col in pres.lift_cols:
        base = g.ordered_sum(col[:nq], gens)
        sections.append(g.mul(base, g.central(col[nq:])))
    for a in g.pairing_images():
        if inclusion.solve(a) is None:
            raise ValueError("subgroup does not contain the commutators")
    # cocycle of the normal form
    r = pi0.ngens

    def to_k(v):
        x = inclusion.solve(v)
        if x is None:
            raise ArithmeticError("central element outside the subgroup")
        return x

    def fn(i, j):
        if i > j:
            return to_k(g.commutator(sections[i], sections[j])[1])
        return k.zero()

    terms: list = [bilinear_from_function(pi0, k, fn)]
    for i, d in enumerate(pi0.invariant_factors):
        if d:
            y = g.scale(d, sections[i])
            if any(y[0]):
                raise ArithmeticError("section power is not central")
            row = tuple(int(t == i) for t in range(r))
            terms.append(CarryTerm(row, d, to_k(y[1])))
    new = Nil2Group(pi0, k, tuple(terms))
    return Renormalized(g, new, inclusion, pres, sections)


def enumerate_cocycles(q: FgAbGroup, c: FgAbGroup) -> Iterator[Nil2Group]:
    """Every normalized 2-cochain that is a cocycle, as table groups (tiny inputs only)."""
    elems = list(q.elements())
    cel = list(c.elements())
    n = len(elems)
    free = [(a, b) for a in range(1, n) for b in range(1, n)]
    for choice in product(range(len(cel)), repeat=len(free)):
        table = [[c.zero()] * n for _ in range(n)]
        for (a, b), k in zip(free, choice):
            table[a][b] = cel[k]
        g = Nil2Group(q, c, (TableTerm(tuple(tuple(r) for r in table)),))
        if g.check_cocycle() is None:
            yield g
