"""Text formats for presquare and square groups.

Files are line oriented: ``[Section]`` headers, ``key = value`` lines, ``#``
comments.  See docs/format.md for the grammar.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import AbHom, FgAbGroup, Vector, format_group, parse_group
from .nil2 import BilinearTerm, CarryTerm, Nil2Group, TableTerm
from .psg import PreSquareGroup, PSGError, sample_elements
from .sg import BinomialForm, SGError, SquareGroup, StructuredH, TableH

EMPTY = "-"


class FormatError(ValueError):
    """Malformed input text."""


# ---------------------------------------------------------------------------
# literals


def parse_vector(text: str) -> list[int]:
    text = text.strip()
    if text in (EMPTY, ""):
        return []
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise FormatError(f"bad integer vector {text!r}") from None


def format_vector(v) -> str:
    return " ".join(str(x) for x in v) if len(v) else EMPTY


def parse_matrix(text: str) -> list[list[int]]:
    """Rows separated by ';', e.g. ``1 0; 0 1``."""
    text = text.strip()
    if not text:
        return []
    return [parse_vector(r) for r in text.split(";")]


def format_matrix(m) -> str:
    return "; ".join(format_vector(r) for r in m)


def parse_group_literal(text: str) -> FgAbGroup:
    """Parse a group whose literal is already in invariant-factor order.

    Matrices refer to the generators in the written order, so a literal such
    as ``Z/4 + Z/2`` (which would be rearranged) is rejected.
    """
    try:
        g = parse_group(text)
        written = [d for t in text.split("+") for d in parse_group(t).invariant_factors]
    except ValueError as e:
        raise FormatError(str(e)) from None
    if tuple(written) != g.invariant_factors:
        raise FormatError(f"group {text!r} is not in invariant-factor form; write {format_group(g)}")
    return g


def make_hom(source: FgAbGroup, target: FgAbGroup, rows: list[list[int]], what: str) -> AbHom:
    if target.ngens and len(rows) != target.ngens:
        raise FormatError(f"{what}: expected {target.ngens} rows, got {len(rows)}")
    if not target.ngens:
        rows = []
    for r in rows:
        if len(r) != source.ngens:
            raise FormatError(f"{what}: rows must have {source.ngens} entries")
    try:
        return AbHom(source, target, rows)
    except ValueError as e:
        raise FormatError(f"{what}: {e}") from None


# ---------------------------------------------------------------------------
# sections


@dataclass
class Section:
    name: str
    lines: list[tuple[str, str]] = field(default_factory=list)
    lineno: int = 0

    def get(self, key: str, default: str | None = None) -> str:
        for k, v in self.lines:
            if k == key:
                return v
        if default is None:
            raise FormatError(f"[{self.name}] is missing '{key}'")
        return default

    def all(self, key: str) -> list[str]:
        return [v for k, v in self.lines if k == key]


def split_sections(text: str) -> dict[str, Section]:
    out: dict[str, Section] = {}
    cur = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name in out:
                raise FormatError(f"line {n}: duplicate section [{name}]")
            cur = out[name] = Section(name, lineno=n)
            continue
        if cur is None:
            raise FormatError(f"line {n}: text before the first section")
        if "=" not in line:
            raise FormatError(f"line {n}: expected 'key = value'")
        k, v = line.split("=", 1)
        cur.lines.append((" ".join(k.split()), v.strip()))
    return out


def _need(secs: dict[str, Section], name: str) -> Section:
    if name not in secs:
        raise FormatError(f"missing section [{name}]")
    return secs[name]


def _index_pair(key: str, what: str) -> tuple[int, int]:
    parts = key.split()
    if len(parts) != 2:
        raise FormatError(f"{what}: expected 'i j = vector', got {key!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise FormatError(f"{what}: bad indices {key!r}") from None


# ---------------------------------------------------------------------------
# class-two groups


def parse_nil2(sec: Section) -> Nil2Group:
    q = parse_group_literal(sec.get("quotient"))
    c = parse_group_literal(sec.get("center", "0"))
    terms = []
    cur = None
    for k, v in sec.lines:
        if k in ("quotient", "center"):
            continue
        if k == "term":
            if cur is not None:
                terms.append(_finish_term(cur, q, c))
            cur = {"kind": v, "entries": []}
            continue
        if cur is None:
            raise FormatError(f"[{sec.name}]: '{k}' outside a term")
        cur["entries"].append((k, v))
    if cur is not None:
        terms.append(_finish_term(cur, q, c))
    g = Nil2Group(q, c, tuple(terms))
    return g


def _finish_term(cur: dict, q: FgAbGroup, c: FgAbGroup):
    kind = cur["kind"]
    if kind == "bilinear":
        n = q.ngens
        table = [[c.zero() for _ in range(n)] for _ in range(n)]
        for k, v in cur["entries"]:
            i, j = _index_pair(k, "bilinear term")
            if not (0 <= i < n and 0 <= j < n):
                raise FormatError(f"bilinear term: index out of range {k!r}")
            table[i][j] = _center_vec(c, v)
        return BilinearTerm(tuple(tuple(r) for r in table))
    if kind == "carry":
        d = dict(cur["entries"])
        try:
            row = tuple(parse_vector(d["row"]))
            mod = int(d["modulus"])
            val = _center_vec(c, d["value"])
        except KeyError as e:
            raise FormatError(f"carry term: missing {e}") from None
        if len(row) != q.ngens or mod <= 0:
            raise FormatError("carry term: bad row or modulus")
        return CarryTerm(row, mod, val)
    if kind == "table":
        if not q.is_finite:
            raise FormatError("table cocycle on an infinite quotient")
        n = q.order
        table = [[c.zero() for _ in range(n)] for _ in range(n)]
        for k, v in cur["entries"]:
            a, b = _index_pair(k, "table term")
            if not (0 <= a < n and 0 <= b < n):
                raise FormatError(f"table term: index out of range {k!r}")
            table[a][b] = _center_vec(c, v)
        return TableTerm(tuple(tuple(r) for r in table))
    raise FormatError(f"unknown cocycle term {kind!r}")


def _center_vec(c: FgAbGroup, text: str) -> Vector:
    v = parse_vector(text)
    if len(v) != c.ngens:
        raise FormatError(f"vector {text!r} does not fit {c}")
    return c.reduce(v)


def format_nil2(g: Nil2Group, name: str = "Me") -> list[str]:
    out = [f"[{name}]", f"quotient = {format_group(g.quotient)}",
           f"center = {format_group(g.center_part)}"]
    for t in g.terms:
        if isinstance(t, BilinearTerm):
            out.append("term = bilinear")
            for i, row in enumerate(t.table):
                for j, v in enumerate(row):
                    if any(v):
                        out.append(f"{i} {j} = {format_vector(v)}")
        elif isinstance(t, CarryTerm):
            out += ["term = carry", f"row = {format_vector(t.row)}",
                    f"modulus = {t.modulus}", f"value = {format_vector(t.value)}"]
        else:
            out.append("term = table")
            for a, row in enumerate(t.values):
                for b, v in enumerate(row):
                    if any(v):
                        out.append(f"{a} {b} = {format_vector(v)}")
    return out


def _matrix_lines(h: AbHom) -> list[str]:
    return [f"row = {format_vector(r)}" for r in h.matrix]


def _rows(sec: Section) -> list[list[int]]:
    return [parse_vector(v) for v in sec.all("row")]


# ---------------------------------------------------------------------------
# presquare groups


def parse_psg(text: str) -> PreSquareGroup:
    secs = split_sections(text)
    me = parse_nil2(_need(secs, "Me"))
    mee = parse_group_literal(_need(secs, "Mee").get("group"))
    sigma = make_hom(mee, mee, _rows(_need(secs, "sigma")), "sigma")
    p = make_hom(mee, me.center_part, _rows(_need(secs, "P")), "P")
    q = me.quotient
    br = [[mee.zero() for _ in range(q.ngens)] for _ in range(q.ngens)]
    for k, v in _need(secs, "bracket").lines if "bracket" in secs else []:
        i, j = _index_pair(k, "bracket")
        if not (0 <= i < q.ngens and 0 <= j < q.ngens):
            raise FormatError(f"bracket: index out of range {k!r}")
        vec = parse_vector(v)
        if len(vec) != mee.ngens:
            raise FormatError(f"bracket: vector {v!r} does not fit {mee}")
        br[i][j] = mee.reduce(vec)
    try:
        return PreSquareGroup(me, mee, sigma, p, tuple(tuple(r) for r in br))
    except PSGError as e:
        raise FormatError(str(e)) from None


def format_psg(m: PreSquareGroup) -> str:
    out = format_nil2(m.Me)
    out += ["", "[Mee]", f"group = {format_group(m.Mee)}", "", "[sigma]"]
    out += _matrix_lines(m.sigma)
    out += ["", "[P]"] + _matrix_lines(m.P)
    out += ["", "[bracket]"]
    for i, row in enumerate(m.bracket):
        for j, v in enumerate(row):
            if any(v):
                out.append(f"{i} {j} = {format_vector(v)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# square groups


def parse_sg(text: str) -> SquareGroup:
    secs = split_sections(text)
    me = parse_nil2(_need(secs, "Me"))
    qee = parse_group_literal(_need(secs, "Qee").get("group"))
    p = make_hom(qee, me.center_part, _rows(_need(secs, "P")), "P")
    hs = _need(secs, "H")
    mode = hs.get("mode")
    if mode == "table":
        if not me.is_finite:
            raise FormatError("table mode needs a finite Qe")
        vals = [parse_vector(v) for v in hs.all("value")]
        if len(vals) != me.order:
            raise FormatError(f"[H]: expected {me.order} values, got {len(vals)}")
        for v in vals:
            if len(v) != qee.ngens:
                raise FormatError(f"[H]: value {format_vector(v)} does not fit {qee}")
        h = TableH(me, qee, tuple(qee.reduce(v) for v in vals))
    elif mode == "structured":
        c, q = me.center_part, me.quotient
        hh = make_hom(c, qee, _rows(_need(secs, "H.h")), "H.h")
        gs = _need(secs, "H.g")
        values, diag = [qee.zero()] * q.ngens, [qee.zero()] * q.ngens
        for k, v in gs.lines:
            parts = k.split()
            if len(parts) != 2 or parts[0] not in ("value", "diag"):
                raise FormatError(f"[H.g]: expected 'value i' or 'diag i', got {k!r}")
            i = int(parts[1])
            if not 0 <= i < q.ngens:
                raise FormatError(f"[H.g]: index out of range {k!r}")
            vec = parse_vector(v)
            if len(vec) != qee.ngens:
                raise FormatError(f"[H.g]: vector {v!r} does not fit {qee}")
            (values if parts[0] == "value" else diag)[i] = qee.reduce(vec)
        cross = [[qee.zero() for _ in range(q.ngens)] for _ in range(q.ngens)]
        for k, v in secs["H.cross"].lines if "H.cross" in secs else []:
            i, j = _index_pair(k, "H.cross")
            if not 0 <= i < j < q.ngens:
                raise FormatError(f"[H.cross]: need 0 <= i < j, got {k!r}")
            cross[i][j] = qee.reduce(parse_vector(v))
        g = BinomialForm(q, qee, tuple(values), tuple(diag), tuple(tuple(r) for r in cross))
        h = StructuredH(me, qee, hh, g)
    else:
        raise FormatError(f"[H]: unknown mode {mode!r}")
    name = secs["name"].get("name", "") if "name" in secs else ""
    try:
        return SquareGroup(me, qee, p, h, name)
    except SGError as e:
        raise FormatError(str(e)) from None


def structured_form(q: SquareGroup) -> tuple[AbHom, BinomialForm] | None:
    """Fit H(q, c) = h(c) + g(q) with g binomial; None if H is not of that shape."""
    me, e = q.Qe, q.Qee
    c, qq = me.center_part, me.quotient
    if isinstance(q.H, StructuredH) and isinstance(q.H.g, BinomialForm):
        return q.H.h, q.H.g
    h = AbHom.from_images(c, e, [q.H(me.central(v)) for v in c.gens()]) if c.ngens else AbHom.zero(c, e)

    def g0(x):
        return q.H((qq.reduce(x), c.zero()))

    gens = qq.gens()
    values = tuple(g0(v) for v in gens)
    diag = tuple(e.sub(g0(qq.scale(2, v)), e.scale(2, g0(v))) for v in gens)
    cross = []
    for i, a in enumerate(gens):
        row = []
        for j, b in enumerate(gens):
            if j > i:
                row.append(e.sub(e.sub(g0(qq.add(a, b)), g0(a)), g0(b)))
            else:
                row.append(e.zero())
        cross.append(tuple(row))
    g = BinomialForm(qq, e, values, diag, tuple(cross))
    elems, _ = sample_elements(me, 256)
    for x in elems:
        if q.H(x) != e.add(h(x[1]), g(x[0])):
            return None
    return h, g


def format_sg(q: SquareGroup, mode: str = "auto") -> str:
    out = []
    if q.name:
        out += ["[name]", f"name = {q.name}", ""]
    out += format_nil2(q.Qe)
    out += ["", "[Qee]", f"group = {format_group(q.Qee)}", "", "[P]"] + _matrix_lines(q.P)
    fit = structured_form(q) if mode in ("auto", "structured") else None
    if fit is None:
        if mode == "structured" or not q.Qe.is_finite:
            raise FormatError("H has no structured form and Qe is infinite")
        out += ["", "[H]", "mode = table"]
        out += [f"value = {format_vector(q.H(x))}" for x in q.Qe.elements()]
        return "\n".join(out) + "\n"
    h, g = fit
    out += ["", "[H]", "mode = structured", "", "[H.h]"] + _matrix_lines(h)
    out += ["", "[H.g]"]
    for i in range(q.Qe.quotient.ngens):
        out.append(f"value {i} = {format_vector(g.values[i])}")
        out.append(f"diag {i} = {format_vector(g.diag[i])}")
    if g.cross and any(any(v) for r in g.cross for v in r):
        out += ["", "[H.cross]"]
        for i, r in enumerate(g.cross):
            for j, v in enumerate(r):
                if j > i and any(v):
                    out.append(f"{i} {j} = {format_vector(v)}")
    return "\n".join(out) + "\n"


def sg_equal(a: SquareGroup, b: SquareGroup, bound: int = 256) -> bool:
    """Same Qe, Qee, P and the same values of H (on all elements when Qe is small)."""
    if a.Qe != b.Qe or a.Qee != b.Qee or a.P != b.P:
        return False
    elems, _ = sample_elements(a.Qe, bound)
    return all(a.H(x) == b.H(x) for x in elems)


def read_document(path: str) -> tuple[str, str]:
    """(kind, text) where kind is 'sg' when an [H] section is present, else 'psg'."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    kind = "sg" if any(l.strip() == "[H]" for l in text.splitlines()) else "psg"
    return kind, text
