"""Quadratic functors on finitely generated abelian groups.

Every functor value is assembled from the invariant-factor decomposition of
its argument: a contribution for each cyclic factor plus a cross term for
each pair of factors.  The raw generators are listed below; ``present``
turns them into canonical form.

===========  ==============================  ==============================
functor      diagonal generators             pair generators (i < j)
===========  ==============================  ==============================
P            p_i, w_i = (g_i|g_i)_p          x_ij = (g_i|g_j)_p
Gamma        gamma_i                         c_ij = (g_i|g_j)_gamma
Psi          g_i(x)g_i                       g_i(x)g_j + g_j(x)g_i
Sym2         g_i g_i                         g_i g_j
Lambda2      (none)                          g_i ^ g_j
LambdaTilde2 g_i ~ g_i (order <= 2)          g_i ~ g_j
Tensor2      g_i (x) g_i                     g_i (x) g_j and g_j (x) g_i
===========  ==============================  ==============================

``Phi_n`` has one generator of order 2 for every factor ``Z/d`` with
``v_2(d) = n``; ``Phi`` is the sum over all n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb, gcd
from typing import Callable, Sequence

from .abelian import (
    AbHom,
    ExtGroup,
    FgAbGroup,
    Presentation,
    Vector,
    direct_sum,
    ext_group,
    from_summands,
    present,
    present_orders,
    tensor,
)

FUNCTOR_NAMES = ("P", "Gamma", "Psi", "Sym2", "Lambda2", "LambdaTilde2", "Tensor2", "Phi")
NAT_NAMES = ("j", "q", "tau", "tau_prime", "iota", "nu", "f_pm", "gamma_mod2", "psi_mod2")

DEFAULT_ORACLE_BOUND = 64


def v2(d: int) -> int:
    n = 0
    while d and d % 2 == 0:
        d //= 2
        n += 1
    return n


def _pairs(r: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(r) for j in range(i + 1, r)]


@dataclass
class FunctorValue:
    """Value F(A) of a quadratic functor with evaluation data.

    ``raw`` lists the labels of the raw generators; ``presentation`` maps raw
    vectors to canonical coordinates of ``group``.
    """

    name: str
    source: FgAbGroup
    group: FgAbGroup
    presentation: Presentation
    raw: list[tuple]
    index: dict = field(repr=False)
    n: int | None = None  # only for Phi_n

    def raw_vector(self, coeffs: dict) -> list[int]:
        v = [0] * len(self.raw)
        for label, c in coeffs.items():
            v[self.index[label]] += c
        return v

    def coords(self, coeffs: dict) -> Vector:
        return self.presentation.to_coords(self.raw_vector(coeffs))

    @property
    def factors(self) -> tuple[int, ...]:
        return self.source.invariant_factors

    # -- generator evaluations --------------------------------------------

    def quad(self, a: Sequence[int]) -> Vector:
        """p(a) for P, gamma(a) for Gamma."""
        a = self.source.reduce(a)
        r = len(a)
        c: dict = {}
        if self.name == "P":
            for i, x in enumerate(a):
                if x:
                    c[("p", i)] = x
                    c[("w", i)] = comb(x, 2) if x >= 0 else x * (x - 1) // 2
            for i, j in _pairs(r):
                if a[i] and a[j]:
                    c[("x", i, j)] = a[i] * a[j]
        elif self.name == "Gamma":
            for i, x in enumerate(a):
                if x:
                    c[("g", i)] = x * x
            for i, j in _pairs(r):
                if a[i] and a[j]:
                    c[("c", i, j)] = a[i] * a[j]
        else:
            raise ValueError(f"{self.name} has no universal quadratic map")
        return self.coords(c)

    def cross(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        s = self.source
        g = self.group
        return g.sub(g.sub(self.quad(s.add(a, b)), self.quad(a)), self.quad(b))

    def pair(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        """Bilinear generator map for Sym2 (ab), Lambda2 (a^b), LambdaTilde2, Tensor2."""
        r = self.source.ngens
        c: dict = {}
        name = self.name
        for i in range(r):
            if not a[i]:
                continue
            for j in range(r):
                if not b[j]:
                    continue
                x = a[i] * b[j]
                if name == "Tensor2":
                    key = ("t", i, j)
                elif name == "Sym2":
                    key = ("s", min(i, j), max(i, j))
                elif name == "Lambda2":
                    if i == j:
                        continue
                    key = ("l", min(i, j), max(i, j))
                    if i > j:
                        x = -x
                elif name == "LambdaTilde2":
                    key = ("u", min(i, j), max(i, j))
                    if i > j:
                        x = -x
                else:
                    raise ValueError(f"{name} is not bilinear")
                c[key] = c.get(key, 0) + x
        return self.coords(c)

    def psi(self, a: Sequence[int]) -> Vector:
        """a (x) a as an element of Psi(A)."""
        a = self.source.reduce(a)
        c: dict = {}
        for i, x in enumerate(a):
            if x:
                c[("d", i)] = x * x
        for i, j in _pairs(len(a)):
            if a[i] and a[j]:
                c[("y", i, j)] = a[i] * a[j]
        return self.coords(c)

    def phi_class(self, x: Sequence[int], n: int | None = None) -> Vector:
        """Class in Phi_n(A) (or Phi(A)) of an element x of t_n(A)."""
        x = self.source.reduce(x)
        c: dict = {}
        for i, d in enumerate(self.factors):
            k = v2(d)
            if d == 0 or k == 0 or ("f", i) not in self.index:
                continue
            m = n if n is not None else k
            if k != m:
                continue
            step = d >> m
            if x[i] % step:
                raise ValueError(f"{x} is not 2^{m}-torsion")
            c[("f", i)] = (x[i] // step) % 2
        return self.coords(c)

    def gen_map(self, *args: Sequence[int]) -> Vector:
        if self.name in ("P", "Gamma"):
            return self.quad(*args)
        if self.name == "Psi":
            return self.psi(*args)
        if self.name == "Phi":
            return self.phi_class(*args, n=self.n)
        return self.pair(*args)


def _build(name: str, a: FgAbGroup, n: int | None = None) -> FunctorValue:
    d = a.invariant_factors
    r = len(d)
    raw: list[tuple] = []
    orders: list[int] = []
    rels: list[tuple[dict, int]] = []  # extra relations given as label->coeff

    def gen(label: tuple, order: int) -> None:
        raw.append(label)
        orders.append(order)

    if name == "P":
        for i, di in enumerate(d):
            gen(("p", i), 0)
            gen(("w", i), di)
            if di:
                rels.append(({("p", i): di, ("w", i): comb(di, 2)}, 0))
        for i, j in _pairs(r):
            gen(("x", i, j), gcd(d[i], d[j]))
    elif name == "Gamma":
        for i, di in enumerate(d):
            gen(("g", i), gcd(di * di, 2 * di))
        for i, j in _pairs(r):
            gen(("c", i, j), gcd(d[i], d[j]))
    elif name == "Psi":
        for i, di in enumerate(d):
            gen(("d", i), di)
        for i, j in _pairs(r):
            gen(("y", i, j), gcd(d[i], d[j]))
    elif name == "Sym2":
        for i in range(r):
            for j in range(i, r):
                gen(("s", i, j), gcd(d[i], d[j]))
    elif name == "Lambda2":
        for i, j in _pairs(r):
            gen(("l", i, j), gcd(d[i], d[j]))
    elif name == "LambdaTilde2":
        for i in range(r):
            for j in range(i, r):
                gen(("u", i, j), gcd(2, d[i]) if i == j else gcd(d[i], d[j]))
    elif name == "Tensor2":
        for i in range(r):
            for j in range(r):
                gen(("t", i, j), gcd(d[i], d[j]))
    elif name == "Phi":
        for i, di in enumerate(d):
            k = v2(di)
            if di and k and (n is None or k == n):
                gen(("f", i), 2)
    else:
        raise ValueError(f"unknown functor {name!r}")

    index = {label: k for k, label in enumerate(raw)}
    if rels:
        vecs = []
        for k, o in enumerate(orders):
            if o:
                v = [0] * len(raw)
                v[k] = o
                vecs.append(v)
        for coeffs, _ in rels:
            v = [0] * len(raw)
            for label, c in coeffs.items():
                v[index[label]] += c
            vecs.append(v)
        pres = present(len(raw), vecs)
    else:
        pres = present_orders(orders)
    return FunctorValue(name, a, pres.group, pres, raw, index, n)


_CACHE: dict = {}


def _parse_name(name: str) -> tuple[str, int | None]:
    if name.startswith("Phi_"):
        n = int(name[4:])
        if n < 1:
            raise ValueError("Phi_n needs n >= 1")
        return "Phi", n
    if name in FUNCTOR_NAMES:
        return name, None
    raise ValueError(f"unknown functor {name!r}; expected one of {', '.join(FUNCTOR_NAMES)} or Phi_n")


def quad_value(name: str, a: FgAbGroup) -> FunctorValue:
    """F(A) for F in P, Gamma, Psi, Sym2, Lambda2, LambdaTilde2, Tensor2, Phi, Phi_n."""
    base, n = _parse_name(name)
    key = (base, n, a)
    fv = _CACHE.get(key)
    if fv is None:
        fv = _build(base, a, n)
        if len(_CACHE) > 4096:
            _CACHE.clear()
        _CACHE[key] = fv
    return fv


# ---------------------------------------------------------------------------
# induced maps


def induced_map(name: str, h: AbHom) -> AbHom:
    """F(h) : F(A) -> F(B)."""
    src = quad_value(name, h.source)
    tgt = quad_value(name, h.target)
    base = src.name
    cols = [h.column(i) for i in range(h.source.ngens)]
    images: list[Vector] = []
    for label in src.raw:
        kind = label[0]
        if base in ("P", "Gamma"):
            if kind in ("p", "g"):
                images.append(tgt.quad(cols[label[1]]))
            elif kind == "w":
                b = cols[label[1]]
                images.append(tgt.cross(b, b))
            else:
                images.append(tgt.cross(cols[label[1]], cols[label[2]]))
        elif base == "Psi":
            ten = quad_value("Tensor2", h.target)
            if kind == "d":
                b = cols[label[1]]
                images.append(_psi_from_tensor(tgt, ten, ten.pair(b, b)))
            else:
                b, c = cols[label[1]], cols[label[2]]
                t = ten.group.add(ten.pair(b, c), ten.pair(c, b))
                images.append(_psi_from_tensor(tgt, ten, t))
        elif base == "Phi":
            i = label[1]
            di = h.source.invariant_factors[i]
            m = v2(di)
            x = h.target.scale(di >> m, cols[i])
            images.append(tgt.phi_class(x, n=m))
        else:
            images.append(tgt.pair(cols[label[1]], cols[label[2]]))
    return src.presentation.hom_from_images(tgt.group, images)


def _psi_from_tensor(psi: FunctorValue, ten: FunctorValue, t: Vector) -> Vector:
    inc = psi_inclusion(psi.source)
    x = inc.solve(t)
    if x is None:
        raise ArithmeticError("element of A(x)A is not in Psi(A)")
    return x


# ---------------------------------------------------------------------------
# natural maps


def psi_inclusion(a: FgAbGroup) -> AbHom:
    """Psi(A) -> A (x) A."""
    key = ("psi_inc", a)
    m = _CACHE.get(key)
    if m is None:
        psi, ten = quad_value("Psi", a), quad_value("Tensor2", a)
        images = []
        for label in psi.raw:
            if label[0] == "d":
                i = label[1]
                images.append(ten.coords({("t", i, i): 1}))
            else:
                _, i, j = label
                images.append(ten.coords({("t", i, j): 1, ("t", j, i): 1}))
        m = psi.presentation.hom_from_images(ten.group, images)
        _CACHE[key] = m
    return m


def tensor_to_wedge(a: FgAbGroup) -> AbHom:
    ten, lam = quad_value("Tensor2", a), quad_value("Lambda2", a)
    images = [lam.pair(a.gen(l[1]), a.gen(l[2])) for l in ten.raw]
    return ten.presentation.hom_from_images(lam.group, images)


def wedge_to_tensor_antisym(a: FgAbGroup) -> AbHom:
    """Lambda2(A) -> A (x) A, a^b -> a(x)b - b(x)a."""
    ten, lam = quad_value("Tensor2", a), quad_value("Lambda2", a)
    images = []
    for _, i, j in lam.raw:
        images.append(ten.coords({("t", i, j): 1, ("t", j, i): -1}))
    return lam.presentation.hom_from_images(ten.group, images)


def mod2_target(a: FgAbGroup):
    """Z/2 (x) A together with the reduction map A -> Z/2 (x) A."""
    t = tensor(FgAbGroup((2,)), a)
    red = AbHom.from_images(a, t.group, [t.pair((1,), a.gen(i)) for i in range(a.ngens)])
    return t.group, red


def nat_map(name: str, a: FgAbGroup) -> AbHom:
    """Natural transformations between functor values at A.

    j: Sym2 -> P, q: P -> A, tau: Gamma -> A(x)A, tau_prime: Gamma -> Psi,
    iota: Phi -> Gamma, nu: P -> Gamma, f_pm: A -> P, gamma_mod2: Gamma -> Z/2(x)A,
    psi_mod2: Psi -> Z/2(x)A.
    """
    r = a.ngens
    if name == "j":
        s, p = quad_value("Sym2", a), quad_value("P", a)
        images = [p.coords({("w", i): 1}) if i == j else p.coords({("x", i, j): 1})
                  for _, i, j in s.raw]
        return s.presentation.hom_from_images(p.group, images)
    if name == "q":
        p = quad_value("P", a)
        images = [a.gen(l[1]) if l[0] == "p" else a.zero() for l in p.raw]
        return p.presentation.hom_from_images(a, images)
    if name == "nu":
        p, g = quad_value("P", a), quad_value("Gamma", a)
        images = []
        for l in p.raw:
            if l[0] == "p":
                images.append(g.coords({("g", l[1]): 1}))
            elif l[0] == "w":
                images.append(g.coords({("g", l[1]): 2}))
            else:
                images.append(g.coords({("c", l[1], l[2]): 1}))
        return p.presentation.hom_from_images(g.group, images)
    if name == "f_pm":
        p = quad_value("P", a)
        images = [p.coords({("p", i): 2, ("w", i): -1}) for i in range(r)]
        return AbHom.from_images(a, p.group, images)
    if name == "tau_prime":
        g, psi = quad_value("Gamma", a), quad_value("Psi", a)
        images = [psi.coords({("d", l[1]): 1}) if l[0] == "g" else
                  psi.coords({("y", l[1], l[2]): 1}) for l in g.raw]
        return g.presentation.hom_from_images(psi.group, images)
    if name == "tau":
        return psi_inclusion(a) @ nat_map("tau_prime", a)
    if name == "iota":
        phi, g = quad_value("Phi", a), quad_value("Gamma", a)
        images = [g.coords({("g", l[1]): a.invariant_factors[l[1]]}) for l in phi.raw]
        return phi.presentation.hom_from_images(g.group, images)
    if name == "gamma_mod2":
        g = quad_value("Gamma", a)
        t, red = mod2_target(a)
        images = [red.column(l[1]) if l[0] == "g" else t.zero() for l in g.raw]
        return g.presentation.hom_from_images(t, images)
    if name == "psi_mod2":
        psi = quad_value("Psi", a)
        t, red = mod2_target(a)
        images = [red.column(l[1]) if l[0] == "d" else t.zero() for l in psi.raw]
        return psi.presentation.hom_from_images(t, images)
    raise ValueError(f"unknown natural map {name!r}; expected one of {', '.join(NAT_NAMES)}")


def iota_n(a: FgAbGroup, n: int) -> AbHom:
    """Phi_n(A) -> Gamma(A), x -> 2^n gamma(x) on representatives."""
    phi, g = quad_value(f"Phi_{n}", a), quad_value("Gamma", a)
    images = []
    for l in phi.raw:
        d = a.invariant_factors[l[1]]
        x = a.scale(d >> n, a.gen(l[1]))
        images.append(g.group.scale(2 ** n, g.quad(x)))
    return phi.presentation.hom_from_images(g.group, images)


# ---------------------------------------------------------------------------
# theta


@dataclass
class ExtClass:
    ext: ExtGroup
    coords: Vector

    @property
    def ambient(self) -> FgAbGroup:
        return self.ext.group

    def is_zero(self) -> bool:
        return not any(self.coords)

    def components(self) -> list[Vector]:
        return self.ext.components(self.coords)


def theta(a: FgAbGroup, reduced: bool = False) -> ExtClass:
    """Class of 0 -> Sym2(A) -> P(A) -> A -> 0 in Ext(A, Sym2(A)).

    With ``reduced`` the class is pushed forward to Ext(A, Sym2(A/2A)).
    """
    s = quad_value("Sym2", a)
    ext = ext_group(a, s.group)
    # d * p_i = -C(d, 2) w_i in P(A); the sign is irrelevant since the class has order <= 2
    comps = []
    for i in ext.factors:
        di = a.invariant_factors[i]
        e = a.gen(i)
        comps.append(s.group.scale(comb(di, 2), s.pair(e, e)))
    cls = ExtClass(ext, ext.from_components(comps))
    if not reduced:
        return cls
    a2, red = mod2_target(a)
    push = induced_map("Sym2", red)
    ext2 = ext_group(a, push.target)
    return ExtClass(ext2, ext.pushforward(push, ext2)(cls.coords))


# ---------------------------------------------------------------------------
# exact sequences


@dataclass
class ExactnessReport:
    ok: bool
    failures: list[str]


def check_exact(maps: Sequence[AbHom], left_zero: bool = True, right_zero: bool = True) -> list[str]:
    """Check exactness of a composable sequence of maps.

    With ``left_zero`` the first map must be injective; with ``right_zero`` the
    last map must be surjective.
    """
    problems = []
    for k in range(len(maps) - 1):
        f, g = maps[k], maps[k + 1]
        if f.target != g.source:
            problems.append(f"maps {k} and {k + 1} are not composable")
            continue
        if not (g @ f).is_zero():
            problems.append(f"composite {k + 1} o {k} is nonzero")
            continue
        ker = g.kernel
        # im f inside ker g; exact iff the induced map into the kernel is onto
        if not f.corestrict(ker).is_surjective():
            problems.append(f"homology at position {k + 1} is nonzero")
    if left_zero and not maps[0].is_injective():
        problems.append("first map is not injective")
    if right_zero and not maps[-1].is_surjective():
        problems.append("last map is not surjective")
    return problems


def two_torsion_inclusion(a: FgAbGroup) -> AbHom:
    return AbHom.scalar(a, 2).kernel


def exact_sequence(label: str, a: FgAbGroup) -> list[AbHom]:
    if label == "E1":
        return [nat_map("j", a), nat_map("q", a)]
    if label == "E2":
        return [psi_inclusion(a), tensor_to_wedge(a)]
    if label == "E3":
        return [nat_map("iota", a), nat_map("tau", a), tensor_to_wedge(a)]
    if label == "E4":
        return [two_torsion_inclusion(a), nat_map("f_pm", a), nat_map("nu", a)]
    raise ValueError(label)


def check_exact_suite(label: str, a: FgAbGroup) -> list[str]:
    return check_exact(exact_sequence(label, a))


# ---------------------------------------------------------------------------
# cross effects


@dataclass
class CrossEffectResult:
    ok: bool
    witness: AbHom | None
    detail: str = ""


def cross_effect_check(name: str, a: FgAbGroup, b: FgAbGroup) -> CrossEffectResult:
    """Compare F(A + B) with F(A) + F(B) + A (x) B through an explicit map."""
    ds = direct_sum(a, b)
    s = ds.group
    fa, fb, fs = quad_value(name, a), quad_value(name, b), quad_value(name, s)
    t = tensor(a, b)
    total = direct_sum(fa.group, fb.group, t.group)
    ia, ib = ds.injections
    cross_imgs = []
    for i in range(a.ngens):
        for j in range(b.ngens):
            x, y = ia.column(i), ib.column(j)
            if name in ("P", "Gamma"):
                cross_imgs.append(fs.cross(x, y))
            elif name == "Psi":
                ten = quad_value("Tensor2", s)
                v = ten.group.add(ten.pair(x, y), ten.pair(y, x))
                cross_imgs.append(_psi_from_tensor(fs, ten, v))
            else:
                raise ValueError(f"no cross-effect decomposition for {name}")
    cross = t.presentation.hom_from_images(fs.group, cross_imgs)
    witness = from_summands(total, fs.group, [induced_map(name, ia), induced_map(name, ib), cross])
    ok = witness.is_isomorphism()
    return CrossEffectResult(ok, witness, "" if ok else "comparison map is not an isomorphism")


# ---------------------------------------------------------------------------
# brute-force oracles


class OracleBoundError(ValueError):
    pass


@dataclass
class OracleValue:
    name: str
    source: FgAbGroup
    group: FgAbGroup
    evaluate: Callable[..., Vector]


def oracle_value(name: str, a: FgAbGroup, bound: int = DEFAULT_ORACLE_BOUND) -> OracleValue:
    """Presentation-based computation of P, Gamma, Sym2 or Lambda2 on a finite group."""
    if not a.is_finite:
        raise OracleBoundError(f"oracle needs a finite group, got {a}")
    if a.order > bound:
        raise OracleBoundError(f"|A| = {a.order} exceeds oracle bound {bound}")
    elems = list(a.elements())
    idx = {e: k for k, e in enumerate(elems)}
    N = len(elems)
    r = a.ngens
    if name == "P":
        # I(A)/I(A)^3 in Z[A]; basis u_x = t_x - 1 for x != 0
        rels = []
        for x in elems:
            for g, h, k in product(range(r), repeat=3):
                poly = {x: 1}
                for step in (g, h, k):
                    e = a.gen(step)
                    nxt: dict = {}
                    for y, c in poly.items():
                        ye = a.add(y, e)
                        nxt[ye] = nxt.get(ye, 0) + c
                        nxt[y] = nxt.get(y, 0) - c
                    poly = nxt
                v = [0] * (N - 1)
                for y, c in poly.items():
                    if idx[y]:
                        v[idx[y] - 1] += c
                rels.append(v)
        pres = present(N - 1, rels)

        def ev(x):
            k = idx[a.reduce(x)]
            v = [0] * (N - 1)
            if k:
                v[k - 1] = 1
            return pres.to_coords(v)

        return OracleValue(name, a, pres.group, ev)
    if name == "Gamma":
        rels = []
        zero = [0] * N
        zero[0] = 1
        rels.append(zero)
        for x in elems:
            v = [0] * N
            v[idx[x]] += 1
            v[idx[a.neg(x)]] -= 1
            if any(v):
                rels.append(v)
        for x in elems:
            for y in elems:
                for g in range(r):
                    c = a.gen(g)
                    v = [0] * N
                    for term, sgn in ((a.add(a.add(x, y), c), 1), (a.add(x, y), -1),
                                      (a.add(x, c), -1), (a.add(y, c), -1),
                                      (x, 1), (y, 1), (c, 1)):
                        v[idx[term]] += sgn
                    if any(v):
                        rels.append(v)
        pres = present(N, rels)

        def ev(x):
            v = [0] * N
            v[idx[a.reduce(x)]] = 1
            return pres.to_coords(v)

        return OracleValue(name, a, pres.group, ev)
    if name in ("Sym2", "Lambda2"):
        # generators e_i (x) e_j, bilinearity relations, then symmetry or alternation
        def t(x, y):
            v = [0] * (r * r)
            for i in range(r):
                for j in range(r):
                    v[i * r + j] += x[i] * y[j]
            return v

        rels = []
        for i, d in enumerate(a.invariant_factors):
            for j in range(r):
                v = [0] * (r * r)
                v[i * r + j] = d
                rels.append(v)
                w = [0] * (r * r)
                w[j * r + i] = d
                rels.append(w)
        for x in elems:
            if name == "Lambda2":
                rels.append(t(x, x))
            else:
                for y in elems:
                    rels.append([p - q for p, q in zip(t(x, y), t(y, x))])
        pres = present(r * r, rels)
        return OracleValue(name, a, pres.group, lambda x, y: pres.to_coords(t(x, y)))
    raise ValueError(f"no oracle for {name!r}")


def phi_oracle(a: FgAbGroup, n: int) -> FgAbGroup:
    """Phi_n(A) as coker(t_{n+1} + t_{n-1} -> t_n) by enumeration."""
    def torsion(m):
        return AbHom.scalar(a, 2 ** m).kernel

    tn, tn1, tm1 = torsion(n), torsion(n + 1), torsion(n - 1)
    imgs = []
    for k in range(tn1.source.ngens):
        imgs.append(tn.solve(a.scale(2, tn1.column(k))))
    for k in range(tm1.source.ngens):
        imgs.append(tn.solve(tm1.column(k)))
    src = direct_sum(tn1.source, tm1.source)
    h = from_summands(src, tn.source, [AbHom.from_images(tn1.source, tn.source, imgs[:tn1.source.ngens]),
                                       AbHom.from_images(tm1.source, tn.source, imgs[tn1.source.ngens:])])
    return h.cokernel.target
