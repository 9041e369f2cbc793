import pytest

from sqgroup import sg as sgmod
from sqgroup.abelian import AbHom, Z
from sqgroup.sg import delta
from sqgroup.verify import MUTATIONS, SUITES, Bounds, mutated, run

SMALL = Bounds(max_order=8, max_arity=2)
FAST = ["functor-tables", "cross-effects", "theta-classes", "omega-invariants",
        "builtin-realizers", "lift-round-trip"]


def test_anchor_names_unique():
    names = [a for a, _ in SUITES]
    assert len(names) == len(set(names)) == 15


def test_small_bounds_pass():
    r = run(SMALL, only=FAST)
    assert r.ok, r.lines()
    assert [x.anchor for x in r.results] == FAST
    assert all(x.checks > 0 for x in r.results)


def test_report_deterministic():
    a, b = run(SMALL, only=FAST[:3]), run(SMALL, only=FAST[:3])
    assert a.lines() == b.lines() and a.to_json() == b.to_json()
    assert a.lines()[-1].startswith("3/3 anchors passed")


def test_larger_bound_has_more_checks():
    small = run(Bounds(max_order=4), only=["functor-tables"]).results[0].checks
    big = run(Bounds(max_order=16), only=["functor-tables"]).results[0].checks
    assert big > small


@pytest.mark.parametrize("name", sorted(MUTATIONS))
def test_mutation_is_caught(name):
    r = run(SMALL, mutations=[name], only=["builtin-realizers"])
    assert not r.ok
    assert r.lines()[0].startswith("FAIL builtin-realizers")


def test_mutation_is_scoped():
    ident = AbHom.identity(Z)
    with mutated(["znil"]):
        assert delta(sgmod.znil()) != ident
    assert delta(sgmod.znil()) == ident


def test_bad_arguments():
    with pytest.raises(ValueError):
        run(SMALL, mutations=["nonsense"])
    with pytest.raises(ValueError):
        run(SMALL, only=["nowhere"])
    with pytest.raises(ValueError):
        Bounds(max_order=0)
