"""Exact linear algebra over the integers.

Finitely generated abelian groups are stored by their invariant factors
``d_1 | d_2 | ... | d_r`` followed by zeros (a zero encodes a copy of Z).
Elements are coordinate tuples with respect to the standard cyclic
generators, reduced into ``[0, d_i)`` for finite factors.

Everything here works with Python integers, so there is no overflow and
no modular shortcut anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import gcd, prod
from typing import Callable, Iterable, Iterator, Sequence

Vector = tuple[int, ...]
Matrix = list[list[int]]


class GroupMismatch(ValueError):
    """Raised when elements or maps from different groups are combined."""


# ---------------------------------------------------------------------------
# Smith normal form


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    bt = list(zip(*b)) if b else [()] * cols
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    nz = [(k, x) for k, x in enumerate(v) if x]
    return [sum(row[k] * x for k, x in nz) for row in a]


@dataclass
class SNF:
    """Result of :func:`snf`: ``U @ m @ V == S`` with ``S`` diagonal."""

    S: Matrix
    U: Matrix
    V: Matrix
    Uinv: Matrix | None
    diagonal: list[int]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def snf(m: Sequence[Sequence[int]], ncols: int | None = None, inverse: bool = True) -> SNF:
    """Smith normal form of an integer matrix.

    Returns ``SNF(S, U, V, Uinv, diagonal)`` where ``U m V = S``, ``U`` and
    ``V`` are unimodular, ``Uinv = U^-1`` and the diagonal satisfies
    ``s_1 | s_2 | ...`` with all entries non-negative.  ``Uinv`` is only
    tracked when ``inverse`` is true (otherwise it is left as None).
    """
    a = [list(map(int, row)) for row in m]
    r = len(a)
    c = len(a[0]) if r else (ncols or 0)
    U = identity_matrix(r)
    Uinv = identity_matrix(r)
    V = identity_matrix(c)

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        if inverse:
            for row in Uinv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        if q == 0:
            return
        ra, rs = a[dst], a[src]
        for k in range(c):
            if rs[k]:
                ra[k] += q * rs[k]
        ua, us = U[dst], U[src]
        for k in range(r):
            if us[k]:
                ua[k] += q * us[k]
        if inverse:
            for row in Uinv:
                if row[dst]:
                    row[src] -= q * row[dst]

    def add_col(dst: int, src: int, q: int) -> None:
        if q == 0:
            return
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]

    def negate_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        if inverse:
            for row in Uinv:
                row[i] = -row[i]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            row = a[i]
            for j in range(t, c):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = a[t][t]
            moved = False
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        swap_rows(i, t)
                        moved = True
                        break
            if moved:
                continue
            p = a[t][t]
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        swap_cols(j, t)
                        moved = True
                        break
            if moved:
                continue
            p = a[t][t]
            bad = None
            for i in range(t + 1, r):
                row = a[i]
                for j in range(t + 1, c):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    diag = [a[i][i] if i < c else 0 for i in range(min(r, c))]
    return SNF(a, U, V, Uinv if inverse else None, diag)


def lattice_basis(vectors: Iterable[Sequence[int]], n: int) -> list[list[int]]:
    """Echelon basis of the sublattice of Z^n spanned by ``vectors``."""
    basis: dict[int, list[int]] = {}
    for v in vectors:
        v = list(v)
        while True:
            lead = next((k for k in range(n) if v[k]), None)
            if lead is None:
                break
            b = basis.get(lead)
            if b is None:
                if v[lead] < 0:
                    v = [-x for x in v]
                basis[lead] = v
                break
            # extended gcd on leading entries
            x, y = b[lead], v[lead]
            g, s, t = _xgcd(x, y)
            new_b = [s * p + t * q for p, q in zip(b, v)]
            v = [(x // g) * q - (y // g) * p for p, q in zip(b, v)]
            basis[lead] = new_b
            # reduce remaining vector against the updated pivot happens in loop
    out = [basis[k] for k in sorted(basis)]
    return out


def echelon_coords(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    """Coordinates of a lattice vector with respect to an echelon basis."""
    v = list(v)
    out = []
    for b in basis:
        lead = next(k for k, x in enumerate(b) if x)
        q, rem = divmod(v[lead], b[lead])
        if rem:
            raise ValueError("vector is not in the lattice")
        out.append(q)
        if q:
            v = [x - q * y for x, y in zip(v, b)]
    if any(v):
        raise ValueError("vector is not in the lattice")
    return out


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def solve_integer(mat: Sequence[Sequence[int]], b: Sequence[int], *, cache: SNF | None = None,
                  ncols: int | None = None) -> list[int] | None:
    """Some integer solution z of ``mat z = b``, or None."""
    s = cache or snf(mat, ncols, inverse=False)
    y = matvec(s.U, b)
    ncol = len(s.V)
    w = [0] * ncol
    for i, yi in enumerate(y):
        d = s.diagonal[i] if i < len(s.diagonal) else 0
        if d == 0:
            if yi != 0:
                return None
        else:
            if yi % d:
                return None
            w[i] = yi // d
    return matvec(s.V, w)


def integer_kernel(mat: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of the integer nullspace of ``mat`` (a list of column vectors)."""
    if not mat:
        return [list(col) for col in identity_matrix(ncols)]
    s = snf(mat, ncols)
    rank = s.rank
    return [[s.V[i][j] for i in range(ncols)] for j in range(rank, ncols)]


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class FgAbGroup:
    """Finitely generated abelian group in invariant-factor normal form."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        f = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        seen_zero = False
        prev = None
        for d in f:
            if d < 0 or d == 1:
                raise ValueError(f"bad invariant factor {d} in {f}")
            if d == 0:
                seen_zero = True
                continue
            if seen_zero:
                raise ValueError(f"finite factor after free factor in {f}")
            if prev is not None and d % prev:
                raise ValueError(f"invariant factors must divide each other: {f}")
            prev = d
        object.__setattr__(self, "_finite", 0 not in f)

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_orders(orders: Sequence[int]) -> "FgAbGroup":
        return present_orders(orders).group

    @staticmethod
    def parse(text: str) -> "FgAbGroup":
        return parse_group(text)

    # -- basic data -------------------------------------------------------

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def order(self) -> int | None:
        return prod(self.invariant_factors) if self.is_finite else None

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion_factors)

    @property
    def exponent(self) -> int:
        if not self.is_finite:
            return 0
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def __str__(self) -> str:
        return format_group(self)

    def __repr__(self) -> str:
        return f"FgAbGroup({format_group(self)})"

    # -- element arithmetic on raw coordinate tuples -----------------------

    def reduce(self, v: Sequence[int]) -> Vector:
        f = self.invariant_factors
        if len(v) != len(f):
            raise GroupMismatch(f"vector of length {len(v)} for group {self}")
        if self._finite:
            return tuple([x % d for x, d in zip(v, f)])
        return tuple([x % d if d else x for x, d in zip(v, f)])

    def zero(self) -> Vector:
        return (0,) * self.ngens

    def gen(self, i: int) -> Vector:
        return tuple(int(i == j) for j in range(self.ngens))

    def gens(self) -> list[Vector]:
        return [self.gen(i) for i in range(self.ngens)]

    def add(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        f = self.invariant_factors
        if len(u) != len(f) or len(v) != len(f):
            raise GroupMismatch(f"vectors of length {len(u)}, {len(v)} for group {self}")
        if self._finite:
            return tuple([(a + b) % d for a, b, d in zip(u, v, f)])
        return tuple([(a + b) % d if d else a + b for a, b, d in zip(u, v, f)])

    def sub(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        return self.reduce([a - b for a, b in zip(u, v)])

    def neg(self, u: Sequence[int]) -> Vector:
        return self.reduce([-a for a in u])

    def scale(self, n: int, u: Sequence[int]) -> Vector:
        return self.reduce([n * a for a in u])

    def is_zero(self, u: Sequence[int]) -> bool:
        return not any(self.reduce(u))

    def element_order(self, u: Sequence[int]) -> int:
        """Order of an element; 0 for elements of infinite order."""
        u = self.reduce(u)
        n = 1
        for x, d in zip(u, self.invariant_factors):
            if x == 0:
                continue
            if d == 0:
                return 0
            k = d // gcd(d, x)
            n = n * k // gcd(n, k)
        return n

    def elements(self) -> Iterator[Vector]:
        """All elements in lexicographic coordinate order (finite groups only)."""
        if not self.is_finite:
            raise ValueError(f"cannot enumerate infinite group {self}")
        return iter(product(*(range(d) for d in self.invariant_factors)))

    def element_index(self, u: Sequence[int]) -> int:
        idx = 0
        for x, d in zip(self.reduce(u), self.invariant_factors):
            idx = idx * d + x
        return idx

    def window(self, radius: int = 2) -> Iterator[Vector]:
        """Finite sample: full range on finite factors, [-radius, radius] on free ones."""
        ranges = [range(d) if d else range(-radius, radius + 1) for d in self.invariant_factors]
        return iter(product(*ranges))

    def element(self, coords: Sequence[int]) -> "Element":
        return Element(self, self.reduce(coords))

    def contains(self, v: Sequence[int]) -> bool:
        return len(v) == self.ngens


ZERO_GROUP = FgAbGroup(())
Z = FgAbGroup((0,))


def cyclic(n: int) -> FgAbGroup:
    """Z/n for n >= 1, Z for n == 0."""
    if n == 1:
        return ZERO_GROUP
    return FgAbGroup((n,))


@dataclass(frozen=True)
class Element:
    """A group element that remembers its group."""

    group: FgAbGroup
    coords: Vector

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.group != self.group:
            raise GroupMismatch(f"cannot combine elements of {self.group} and "
                                f"{getattr(other, 'group', other)}")

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.group, self.group.add(self.coords, other.coords))

    def __sub__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.group, self.group.sub(self.coords, other.coords))

    def __neg__(self) -> "Element":
        return Element(self.group, self.group.neg(self.coords))

    def __rmul__(self, n: int) -> "Element":
        return Element(self.group, self.group.scale(n, self.coords))

    def __bool__(self) -> bool:
        return any(self.coords)

    @property
    def order(self) -> int:
        return self.group.element_order(self.coords)


# ---------------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    """Canonical form of ``Z^n / L`` together with coordinate changes.

    ``to_coords`` maps a vector of Z^n (presentation generators) to canonical
    coordinates; ``lift`` maps canonical coordinates back to Z^n.
    """

    group: FgAbGroup
    n: int
    coord_rows: list[list[int]]
    lift_cols: list[list[int]]

    def to_coords(self, v: Sequence[int]) -> Vector:
        return self.group.reduce(matvec(self.coord_rows, v))

    def gen_image(self, j: int) -> Vector:
        return self.group.reduce([row[j] for row in self.coord_rows])

    def lift(self, coords: Sequence[int]) -> list[int]:
        out = [0] * self.n
        for c, col in zip(coords, self.lift_cols):
            if c:
                for k in range(self.n):
                    out[k] += c * col[k]
        return out

    def hom_from_images(self, target: FgAbGroup, images: Sequence[Sequence[int]],
                        check: bool = True) -> "AbHom":
        """Homomorphism ``group -> target`` sending presentation generator j to images[j]."""
        cols = []
        for col in self.lift_cols:
            v = [0] * target.ngens
            for k, c in enumerate(col):
                if c:
                    img = images[k]
                    for t in range(target.ngens):
                        v[t] += c * img[t]
            cols.append(target.reduce(v))
        mat = [[cols[j][i] for j in range(len(cols))] for i in range(target.ngens)]
        hom = AbHom(self.group, target, mat)
        if check:
            # every presentation generator must land where asked
            for j in range(self.n):
                if hom(self.gen_image(j)) != target.reduce(images[j]):
                    raise ValueError("images do not respect the relations of the presentation")
        return hom

    def matrix_from(self, source: FgAbGroup, images: Sequence[Sequence[int]]) -> "AbHom":
        """Homomorphism ``source -> group`` given generator images as presentation vectors."""
        cols = [self.to_coords(v) for v in images]
        mat = [[cols[j][i] for j in range(source.ngens)] for i in range(self.group.ngens)]
        return AbHom(source, self.group, mat)


def present(n: int, relations: Iterable[Sequence[int]]) -> Presentation:
    """Present ``Z^n`` modulo the span of ``relations`` in canonical form."""
    basis = lattice_basis(relations, n)
    if not basis:
        eye = identity_matrix(n)
        return Presentation(FgAbGroup((0,) * n), n, eye, [list(r) for r in eye])
    else:
        mat = [[b[i] for b in basis] for i in range(n)]
        s = snf(mat)
        diag = list(s.diagonal) + [0] * (n - len(s.diagonal))
    keep = [i for i in range(n) if diag[i] != 1]
    group = FgAbGroup(tuple(diag[i] for i in keep))
    coord_rows = [s.U[i] for i in keep]
    lift_cols = [[s.Uinv[k][i] for k in range(n)] for i in keep]
    return Presentation(group, n, coord_rows, lift_cols)


def present_orders(orders: Sequence[int]) -> Presentation:
    """Presentation of the direct sum of cyclic groups with the given orders."""
    n = len(orders)
    fast = all(d != 1 for d in orders)
    if fast:
        try:
            g = FgAbGroup(tuple(orders))
        except ValueError:
            fast = False
        else:
            eye = identity_matrix(n)
            return Presentation(g, n, eye, [list(r) for r in eye])
    rels = []
    for i, d in enumerate(orders):
        if d:
            v = [0] * n
            v[i] = d
            rels.append(v)
    return present(n, rels)


# ---------------------------------------------------------------------------
# homomorphisms


class AbHom:
    """Homomorphism of finitely generated abelian groups given by an integer matrix.

    Columns are indexed by source generators, rows by target generators.
    """

    __slots__ = ("source", "target", "matrix", "__dict__")

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix: Sequence[Sequence[int]],
                 check: bool = True):
        self.source = source
        self.target = target
        m = [list(row) for row in matrix]
        if len(m) != target.ngens or any(len(row) != source.ngens for row in m):
            if not (target.ngens == 0 and not m):
                raise ValueError(f"matrix shape mismatch for {source} -> {target}")
        for i, d in enumerate(target.invariant_factors):
            if d:
                m[i] = [x % d for x in m[i]]
        self.matrix = tuple(tuple(row) for row in m)
        if check:
            for j, d in enumerate(source.invariant_factors):
                if d and any((d * self.matrix[i][j]) % t if t else d * self.matrix[i][j]
                             for i, t in enumerate(target.invariant_factors)):
                    raise ValueError(f"matrix does not define a homomorphism {source} -> {target}: "
                                     f"generator {j} of order {d}")

    # -- construction -----------------------------------------------------

    @classmethod
    def identity(cls, g: FgAbGroup) -> "AbHom":
        return cls(g, g, identity_matrix(g.ngens), check=False)

    @classmethod
    def zero(cls, a: FgAbGroup, b: FgAbGroup) -> "AbHom":
        return cls(a, b, [[0] * a.ngens for _ in range(b.ngens)], check=False)

    @classmethod
    def from_images(cls, source: FgAbGroup, target: FgAbGroup,
                    images: Sequence[Sequence[int]]) -> "AbHom":
        """Homomorphism sending source generator j to ``images[j]``."""
        mat = [[images[j][i] for j in range(source.ngens)] for i in range(target.ngens)]
        return cls(source, target, mat)

    @classmethod
    def scalar(cls, g: FgAbGroup, n: int) -> "AbHom":
        return cls(g, g, [[n * int(i == j) for j in range(g.ngens)] for i in range(g.ngens)],
                   check=False)

    # -- application and algebra --------------------------------------------

    def __call__(self, v: Sequence[int]) -> Vector:
        if len(v) != self.source.ngens:
            raise GroupMismatch(f"vector of length {len(v)} fed to map from {self.source}")
        return self.target.reduce(matvec(self.matrix, v))

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.matrix)

    def __matmul__(self, other: "AbHom") -> "AbHom":
        """Composition ``self o other``."""
        if other.target != self.source:
            raise GroupMismatch(f"cannot compose {other.source}->{other.target} with "
                                f"{self.source}->{self.target}")
        mat = matmul(self.matrix, other.matrix) if self.matrix and other.matrix else \
            [[0] * other.source.ngens for _ in range(self.target.ngens)]
        return AbHom(other.source, self.target, mat, check=False)

    def _same_shape(self, other: "AbHom") -> None:
        if self.source != other.source or self.target != other.target:
            raise GroupMismatch("homomorphisms between different groups")

    def __add__(self, other: "AbHom") -> "AbHom":
        self._same_shape(other)
        mat = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.matrix, other.matrix)]
        return AbHom(self.source, self.target, mat, check=False)

    def __neg__(self) -> "AbHom":
        return AbHom(self.source, self.target, [[-a for a in r] for r in self.matrix], check=False)

    def __sub__(self, other: "AbHom") -> "AbHom":
        return self + (-other)

    def __rmul__(self, n: int) -> "AbHom":
        return AbHom(self.source, self.target, [[n * a for a in r] for r in self.matrix],
                     check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AbHom):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.matrix == other.matrix)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix))

    def __repr__(self) -> str:
        return f"AbHom({self.source} -> {self.target}, {[list(r) for r in self.matrix]})"

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.matrix)

    # -- kernel / image / cokernel -------------------------------------------

    @cached_property
    def _echelon(self) -> list[list[int]]:
        """Echelon basis of the lattice {(M x + D y, x)}, D the target orders.

        Rows with zero first block are a basis of the kernel; the others
        let :meth:`solve` reduce a target vector.
        """
        nA, nB = self.source.ngens, self.target.ngens
        vecs = []
        for j in range(nA):
            v = [self.matrix[i][j] for i in range(nB)] + [0] * nA
            v[nB + j] = 1
            vecs.append(v)
        for i, d in enumerate(self.target.invariant_factors):
            if d:
                v = [0] * (nA + nB)
                v[i] = d
                vecs.append(v)
        return lattice_basis(vecs, nA + nB)

    @cached_property
    def kernel(self) -> "AbHom":
        """Inclusion of the kernel into the source."""
        nB = self.target.ngens
        gens = [row[nB:] for row in self._echelon if not any(row[:nB])]
        return subgroup(self.source, gens)

    @cached_property
    def image(self) -> "AbHom":
        """Inclusion of the image into the target."""
        return subgroup(self.target, [list(self.column(j)) for j in range(self.source.ngens)])

    @cached_property
    def cokernel(self) -> "AbHom":
        """Projection from the target onto the cokernel."""
        nB = self.target.ngens
        rels = [list(self.column(j)) for j in range(self.source.ngens)]
        for i, d in enumerate(self.target.invariant_factors):
            if d:
                v = [0] * nB
                v[i] = d
                rels.append(v)
        pres = present(nB, rels)
        mat = [[row[j] for j in range(nB)] for row in pres.coord_rows]
        proj = AbHom(self.target, pres.group, mat, check=False)
        proj._cokernel_presentation = pres
        return proj

    def solve(self, b: Sequence[int]) -> Vector | None:
        """Some x with self(x) == b, or None if b is not in the image."""
        nB = self.target.ngens
        v = list(self.target.reduce(b))
        x = [0] * self.source.ngens
        for row in self._echelon:
            lead = next(k for k, c in enumerate(row) if c)
            if lead >= nB:
                break
            q, rem = divmod(v[lead], row[lead])
            if rem:
                return None
            if q:
                for k in range(lead, nB):
                    v[k] -= q * row[k]
                for k in range(len(x)):
                    x[k] += q * row[nB + k]
        if any(v):
            return None
        return self.source.reduce(x)

    def is_injective(self) -> bool:
        return self.kernel.source.is_trivial

    def is_surjective(self) -> bool:
        return self.cokernel.target.is_trivial

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "AbHom":
        if not self.is_isomorphism():
            raise ValueError("not an isomorphism")
        images = [self.solve(self.target.gen(i)) for i in range(self.target.ngens)]
        return AbHom.from_images(self.target, self.source, images)

    def restrict(self, inclusion: "AbHom") -> "AbHom":
        return self @ inclusion

    def corestrict(self, inclusion: "AbHom") -> "AbHom":
        """Factor self through an injective ``inclusion``; raises if impossible."""
        images = []
        for j in range(self.source.ngens):
            x = inclusion.solve(self.column(j))
            if x is None:
                raise ValueError("image not contained in the given subgroup")
            images.append(x)
        return AbHom.from_images(self.source, inclusion.source, images)


def subgroup(g: FgAbGroup, generators: Iterable[Sequence[int]]) -> AbHom:
    """Inclusion into ``g`` of the subgroup generated by ``generators``."""
    n = g.ngens
    rel = []
    for i, d in enumerate(g.invariant_factors):
        if d:
            v = [0] * n
            v[i] = d
            rel.append(v)
    gens = [list(v) for v in generators]
    basis = lattice_basis(gens + rel, n)
    r = len(basis)
    if r == 0:
        return AbHom(ZERO_GROUP, g, [[] for _ in range(n)], check=False)
    bmat = [[basis[k][i] for k in range(r)] for i in range(n)]
    rel_coords = [echelon_coords(basis, v) for v in rel]
    pres = present(r, rel_coords)
    images = []
    for col in pres.lift_cols:
        images.append(g.reduce(matvec(bmat, col)))
    inc = AbHom.from_images(pres.group, g, images) if pres.group.ngens else \
        AbHom(ZERO_GROUP, g, [[] for _ in range(n)], check=False)
    return inc


def finite_groups(max_order: int, min_order: int = 1) -> Iterator[FgAbGroup]:
    """All finite abelian groups with min_order <= |A| <= max_order, ordered by (|A|, factors)."""
    found: list[tuple[int, ...]] = [()]

    def extend(prefix: tuple[int, ...], prod: int) -> None:
        start = prefix[-1] if prefix else 2
        d = start
        while prod * d <= max_order:
            if not prefix or d % prefix[-1] == 0:
                found.append(prefix + (d,))
                extend(prefix + (d,), prod * d)
            d += 1

    extend((), 1)
    for f in sorted(found, key=lambda t: (prod(t), t)):
        if prod(f) >= min_order:
            yield FgAbGroup(f)


def random_hom(source: FgAbGroup, target: FgAbGroup, rng, bound: int = 6) -> AbHom:
    """A homomorphism with entries drawn from ``rng`` (a ``random.Random``)."""
    rows = []
    for t in target.invariant_factors:
        row = []
        for d in source.invariant_factors:
            if t == 0:
                step = 0 if d else 1
            else:
                step = t // gcd(d, t) if d else 1
            if step == 0:
                row.append(0)
            else:
                row.append(step * rng.randint(-bound, bound))
        rows.append(row)
    return AbHom(source, target, rows)


def is_isomorphic(a: FgAbGroup, b: FgAbGroup) -> bool:
    return a.invariant_factors == b.invariant_factors


def group_from_orders(orders: Sequence[int]) -> FgAbGroup:
    return present_orders(orders).group


# ---------------------------------------------------------------------------
# bifunctors


@dataclass
class DirectSum:
    group: FgAbGroup
    injections: list[AbHom]
    projections: list[AbHom]
    presentation: Presentation


def direct_sum(*groups: FgAbGroup) -> DirectSum:
    orders = [d for g in groups for d in g.invariant_factors]
    pres = present_orders(orders)
    injections, projections = [], []
    offset = 0
    total = len(orders)
    for g in groups:
        imgs = []
        for i in range(g.ngens):
            v = [0] * total
            v[offset + i] = 1
            imgs.append(pres.to_coords(v))
        injections.append(AbHom.from_images(g, pres.group, imgs) if g.ngens else
                          AbHom(g, pres.group, [[] for _ in range(pres.group.ngens)], check=False))
        pimgs = []
        for col in pres.lift_cols:
            pimgs.append(g.reduce(col[offset: offset + g.ngens]))
        projections.append(AbHom.from_images(pres.group, g, pimgs) if pres.group.ngens else
                           AbHom(pres.group, g, [[] for _ in range(g.ngens)], check=False))
        offset += g.ngens
    return DirectSum(pres.group, injections, projections, pres)


@dataclass
class Tensor:
    group: FgAbGroup
    left: FgAbGroup
    right: FgAbGroup
    presentation: Presentation

    def pair(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        """The bilinear map (a, b) -> a (x) b."""
        nb = self.right.ngens
        v = [0] * (self.left.ngens * nb)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        v[i * nb + j] += x * y
        return self.presentation.to_coords(v)

    def gen_index(self, i: int, j: int) -> int:
        return i * self.right.ngens + j

    def induced(self, f: AbHom, g: AbHom, other: "Tensor") -> AbHom:
        """f (x) g : self -> other."""
        images = []
        for i in range(self.left.ngens):
            for j in range(self.right.ngens):
                images.append(other.pair(f.column(i), g.column(j)))
        return self.presentation.hom_from_images(other.group, images)


def from_summands(ds: DirectSum, target: FgAbGroup, maps: Sequence[AbHom]) -> AbHom:
    """The map out of a direct sum whose restriction to summand k is ``maps[k]``."""
    cols = []
    for g in range(ds.group.ngens):
        v = [0] * target.ngens
        for proj, m in zip(ds.projections, maps):
            for k, c in enumerate(proj.column(g)):
                if c:
                    img = m.column(k)
                    for t in range(target.ngens):
                        v[t] += c * img[t]
        cols.append(target.reduce(v))
    return AbHom.from_images(ds.group, target, cols)


def into_summands(ds: DirectSum, source: FgAbGroup, maps: Sequence[AbHom]) -> AbHom:
    """The map into a direct sum with components ``maps[k]``."""
    total = AbHom.zero(source, ds.group)
    for inj, m in zip(ds.injections, maps):
        total = total + inj @ m
    return total


def block_map(src: DirectSum, tgt: DirectSum, maps: Sequence[AbHom]) -> AbHom:
    """Direct sum of maps ``src_k -> tgt_k``."""
    total = AbHom.zero(src.group, tgt.group)
    for p, i, m in zip(src.projections, tgt.injections, maps):
        total = total + i @ m @ p
    return total


def descend(proj: AbHom, h: AbHom) -> AbHom:
    """The map out of ``proj.target`` whose composite with the surjection ``proj`` is ``h``.

    Raises ValueError if h does not vanish on the kernel of ``proj``.
    """
    imgs = []
    for k in range(proj.target.ngens):
        x = proj.solve(proj.target.gen(k))
        if x is None:
            raise ValueError("projection is not surjective")
        imgs.append(h(x))
    out = AbHom.from_images(proj.target, h.target, imgs)
    if out @ proj != h:
        raise ValueError("map does not factor through the quotient")
    return out


def tensor(a: FgAbGroup, b: FgAbGroup) -> Tensor:
    orders = [gcd(x, y) for x in a.invariant_factors for y in b.invariant_factors]
    return Tensor(present_orders(orders).group, a, b, present_orders(orders))


@dataclass
class HomGroup:
    """Hom(A, B) with an evaluation map to explicit homomorphisms."""

    group: FgAbGroup
    source: FgAbGroup
    target: FgAbGroup
    presentation: Presentation
    _scales: list[int]

    def to_hom(self, coords: Sequence[int]) -> AbHom:
        v = self.presentation.lift(coords)
        na, nb = self.source.ngens, self.target.ngens
        mat = [[0] * na for _ in range(nb)]
        for i in range(na):
            for j in range(nb):
                mat[j][i] += v[i * nb + j] * self._scales[i * nb + j]
        return AbHom(self.source, self.target, mat)

    def from_hom(self, h: AbHom) -> Vector:
        na, nb = self.source.ngens, self.target.ngens
        v = [0] * (na * nb)
        for i in range(na):
            for j in range(nb):
                s = self._scales[i * nb + j]
                x = h.matrix[j][i]
                if s == 0:
                    continue
                if x % s:
                    raise ValueError("matrix entry not a multiple of the hom generator")
                v[i * nb + j] = x // s
        return self.presentation.to_coords(v)


def hom_group(a: FgAbGroup, b: FgAbGroup) -> HomGroup:
    orders, scales = [], []
    for x in a.invariant_factors:
        for y in b.invariant_factors:
            if x == 0:
                orders.append(y)
                scales.append(1)
            elif y == 0:
                orders.append(1)
                scales.append(0)
            else:
                g = gcd(x, y)
                orders.append(g)
                scales.append(y // g)
    pres = present_orders(orders)
    return HomGroup(pres.group, a, b, pres, scales)


@dataclass
class ExtGroup:
    """Ext(A, B) modelled as the sum over finite factors Z/d_i of A of B/d_i B.

    The component for factor i of an extension class is ``d_i * s(e_i)`` for
    any set-theoretic lift ``s(e_i)`` of the generator, read modulo d_i B.
    """

    group: FgAbGroup
    source: FgAbGroup
    target: FgAbGroup
    presentation: Presentation
    factors: list[int]  # indices of finite factors of the source

    def from_components(self, values: Sequence[Sequence[int]]) -> Vector:
        """Class from one B-element per finite source factor."""
        v = []
        for val in values:
            v.extend(val)
        return self.presentation.to_coords(v)

    def components(self, coords: Sequence[int]) -> list[Vector]:
        v = self.presentation.lift(coords)
        nb = self.target.ngens
        return [self.target.reduce(v[k * nb:(k + 1) * nb]) for k in range(len(self.factors))]

    def pushforward(self, h: AbHom, other: "ExtGroup") -> AbHom:
        """Ext(A, h) : Ext(A, B) -> Ext(A, B')."""
        nb = self.target.ngens
        images = []
        for k in range(len(self.factors)):
            for j in range(nb):
                vals = [other.target.zero() for _ in self.factors]
                vals[k] = h.column(j)
                images.append(other.from_components(vals))
        return self.presentation.hom_from_images(other.group, images)


def ext_group(a: FgAbGroup, b: FgAbGroup) -> ExtGroup:
    factors = [i for i, d in enumerate(a.invariant_factors) if d]
    orders = []
    for i in factors:
        d = a.invariant_factors[i]
        for y in b.invariant_factors:
            orders.append(gcd(d, y))
    pres = present_orders(orders)
    return ExtGroup(pres.group, a, b, pres, factors)


def binop(kind: str, a: FgAbGroup, b: FgAbGroup):
    """Return ``(group, structure)`` for kind in direct_sum, tensor, hom, ext."""
    if kind == "direct_sum":
        s = direct_sum(a, b)
    elif kind == "tensor":
        s = tensor(a, b)
    elif kind == "hom":
        s = hom_group(a, b)
    elif kind == "ext":
        s = ext_group(a, b)
    else:
        raise ValueError(f"unknown binop {kind!r}")
    return s.group, s


@dataclass
class HomAnalysis:
    kernel: AbHom
    image: AbHom
    cokernel: AbHom
    solve: Callable[[Sequence[int]], Vector | None] = field(repr=False)


def hom_analysis(h: AbHom) -> HomAnalysis:
    return HomAnalysis(h.kernel, h.image, h.cokernel, h.solve)


# ---------------------------------------------------------------------------
# group literals

_TERM = re.compile(r"^\s*Z(?:\s*/\s*(\d+)\s*Z?|\s*\^\s*(\d+))?\s*$")


def parse_group(text: str) -> FgAbGroup:
    """Parse literals such as ``Z^2 + Z/4 + Z/6Z`` or ``0``."""
    text = text.strip()
    if text in ("0", ""):
        return ZERO_GROUP
    orders: list[int] = []
    for term in text.split("+"):
        term = term.strip()
        if term == "0":
            continue
        mult = 1
        m = re.match(r"^\((.*)\)\s*\^\s*(\d+)$", term)
        if m:
            term, mult = m.group(1), int(m.group(2))
        t = _TERM.match(term)
        if not t:
            raise ValueError(f"cannot parse group literal term {term!r}")
        if t.group(1) is not None:
            n = int(t.group(1))
            if n == 0:
                raise ValueError("Z/0 is ambiguous; write Z")
            orders.extend([n] * mult)
        elif t.group(2) is not None:
            orders.extend([0] * int(t.group(2)) * mult)
        else:
            orders.extend([0] * mult)
    return group_from_orders(orders)


def format_group(g: FgAbGroup) -> str:
    if g.is_trivial:
        return "0"
    parts = [f"Z/{d}Z" for d in g.torsion_factors]
    r = g.free_rank
    if r == 1:
        parts.append("Z")
    elif r > 1:
        parts.append(f"Z^{r}")
    return " + ".join(parts)
