from pathlib import Path

import pytest

from sqgroup.abelian import cyclic, parse_group
from sqgroup.formats import (FormatError, format_matrix, format_psg, format_sg, format_vector,
                             parse_group_literal, parse_matrix, parse_psg, parse_sg,
                             parse_vector, read_document, sg_equal, split_sections)
from sqgroup.nil2 import canonical_TA
from sqgroup.psg import omega, psg_validate
from sqgroup.sg import builtin_realizer, psg_equal, sg_validate, wp

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
FILES = sorted(CORPUS.iterdir())


def test_literals():
    assert parse_vector("-") == [] and parse_vector("1, -2 3") == [1, -2, 3]
    assert format_vector(()) == "-" and format_vector((0, 5)) == "0 5"
    assert parse_matrix("1 0; 0 1") == [[1, 0], [0, 1]]
    assert format_matrix([[1, 2], [3, 4]]) == "1 2; 3 4"
    with pytest.raises(FormatError):
        parse_vector("1 x")


def test_group_literal_must_be_canonical():
    assert parse_group_literal("Z/2Z + Z/4Z + Z") == parse_group("Z/2 + Z/4 + Z")
    for bad in ("Z/4 + Z/2", "Z/2 + Z/3", "Z + Z/2", "Q"):
        with pytest.raises(FormatError):
            parse_group_literal(bad)


def test_sections():
    secs = split_sections("# c\n[A]\nx = 1\nx = 2  # tail\n\n[B]\ny=3\n")
    assert secs["A"].all("x") == ["1", "2"] and secs["B"].get("y") == "3"
    with pytest.raises(FormatError):
        split_sections("x = 1\n")
    with pytest.raises(FormatError):
        split_sections("[A]\n[A]\n")
    with pytest.raises(FormatError):
        split_sections("[A]\nnonsense\n")
    with pytest.raises(FormatError):
        secs["A"].get("missing")


@pytest.mark.parametrize("path", FILES, ids=[p.name for p in FILES])
def test_corpus_round_trip(path):
    kind, text = read_document(str(path))
    if kind == "sg":
        q = parse_sg(text)
        assert sg_validate(q)
        out = format_sg(q)
        assert sg_equal(parse_sg(out), q)
        assert format_sg(parse_sg(out)) == out
    else:
        m = parse_psg(text)
        assert psg_validate(m)
        out = format_psg(m)
        assert psg_equal(parse_psg(out), m)
        assert format_psg(parse_psg(out)) == out


def test_document_kinds():
    assert read_document(str(CORPUS / "znil.sg"))[0] == "sg"
    assert read_document(str(CORPUS / "omega_z2.psg"))[0] == "psg"


@pytest.mark.parametrize("text", ["Z/2", "Z/4", "Z", "Z/2 + Z/2", "Z/3 + Z/9"])
def test_omega_serialization(text):
    m = omega(canonical_TA(parse_group(text)))
    back = parse_psg(format_psg(m))
    assert psg_equal(back, m)


def test_table_and_structured_agree():
    q = builtin_realizer("TwoPowerCyclic", 2)
    t = parse_sg(format_sg(q, mode="table"))
    assert "mode = table" in format_sg(q, mode="table")
    assert sg_equal(t, q)
    assert psg_equal(wp(t), wp(q))


def test_structured_needed_for_infinite():
    q = builtin_realizer("Znil")
    assert "mode = structured" in format_sg(q)
    assert sg_equal(parse_sg(format_sg(q)), q)


def _sg_text():
    return format_sg(builtin_realizer("TwoPowerCyclic", 1))


@pytest.mark.parametrize("old, new", [
    ("group = Z/4Z", "group = Z/3Z"),
    ("mode = structured", "mode = fancy"),
    ("diag 0 = 2", "diag 7 = 2"),
    ("[P]\nrow = 1", "[P]\nrow = 1 1"),
    ("[Qee]", "[Qee2]"),
])
def test_sg_errors(old, new):
    text = _sg_text()
    assert old in text
    with pytest.raises(FormatError):
        parse_sg(text.replace(old, new))


def test_table_wrong_count():
    text = format_sg(builtin_realizer("TwoPowerCyclic", 1), mode="table")
    lines = text.splitlines()
    drop = max(i for i, l in enumerate(lines) if l.startswith("value ="))
    with pytest.raises(FormatError):
        parse_sg("\n".join(lines[:drop] + lines[drop + 1:]))


def test_psg_errors():
    text = format_psg(omega(canonical_TA(cyclic(2))))
    with pytest.raises(FormatError):
        parse_psg(text.replace("[sigma]", "[sigmaa]"))
    with pytest.raises(FormatError):
        parse_psg(text.replace("group = Z/2Z", "group = Z/2Z + Z"))
