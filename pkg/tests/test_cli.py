import json
from pathlib import Path

import pytest

from sqgroup.cli import main
from sqgroup.formats import parse_psg, parse_sg
from sqgroup.psg import psg_validate
from sqgroup.sg import sg_validate

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_functor(capsys):
    code, out = run_json(capsys, "functor", "Gamma", "Z/4Z")
    assert code == 0 and out["group"] == [8]
    code, out = run_json(capsys, "functor", "Phi_1", "Z/2")
    assert code == 0 and out["group"] == [2]
    code, text, _ = run(capsys, "functor", "P", "Z/2")
    assert code == 0 and "Z/4Z" in text


def test_functor_with_maps(capsys):
    code, out, _ = run(capsys, "functor", "Psi", "Z/4", "--with-maps")
    assert code == 0 and out.strip()


def test_bad_input_exit_2(capsys):
    assert run(capsys, "functor", "Foo", "Z")[0] == 2
    assert run(capsys, "functor", "P", "Q")[0] == 2
    assert run(capsys, "psg", "pi", CORPUS / "missing.psg")[0] == 2
    assert run(capsys, "nowhere")[0] == 2


def test_help_exit_0(capsys):
    assert run(capsys, "--help")[0] == 0


def test_theta(capsys):
    code, out = run_json(capsys, "theta", "Z/2")
    assert code == 0 and out["zero"] is False
    code, out = run_json(capsys, "theta", "Z/9")
    assert code == 0 and out["zero"] is True


def test_nat(capsys):
    code, out = run_json(capsys, "nat", "tau_prime", "Z/3")
    assert code == 0 and out


def test_psg_pi(capsys):
    code, out = run_json(capsys, "psg", "pi", CORPUS / "omega_z2.psg")
    assert code == 0
    assert out["pi0"] == [2] and out["pi1"] == [2] and out["flags"]["flat"]


def test_psg_check_and_stable(capsys):
    assert run(capsys, "psg", "check", CORPUS / "bad_psg.txt")[0] == 0
    code, out = run_json(capsys, "psg", "stable", CORPUS / "omega_z4.psg")
    assert code == 0


def test_psg_omega_output_parses(capsys):
    code, out = run_json(capsys, "psg", "omega", "Z/2 + Z/4")
    assert code == 0
    assert psg_validate(parse_psg(out["psg"]))


def test_psg_coprod(capsys):
    f = CORPUS / "omega_z2.psg"
    code, out = run_json(capsys, "psg", "coprod", f, f)
    assert code == 0 and psg_validate(parse_psg(out["psg"]))


def test_psg_odot(capsys):
    code, out = run_json(capsys, "psg", "odot", 2, CORPUS / "omega_z2.psg")
    assert code == 0 and out["order"] == 8


def test_sg_lift_degenerate(capsys):
    code, out = run_json(capsys, "sg", "lift", CORPUS / "bad_psg.txt")
    assert code == 1 and out["error"] == "not_psg0"


def test_sg_lift_omega_z3(capsys):
    code, out = run_json(capsys, "sg", "lift", CORPUS / "omega_z3.psg")
    assert code == 0 and sg_validate(parse_sg(out["sg"]))


def test_sg_theta(capsys):
    code, out = run_json(capsys, "sg", "theta", "Z/2")
    assert code == 1 and out["error"] == "theta_nonzero"
    code, out = run_json(capsys, "sg", "theta", "Z/3")
    assert code == 0 and sg_validate(parse_sg(out["sg"]))


def test_sg_check_and_delta(capsys):
    code, text, _ = run(capsys, "sg", "check", CORPUS / "znil.sg")
    assert code == 0 and "valid" in text
    code, out = run_json(capsys, "sg", "delta", CORPUS / "znil.sg")
    assert code == 0 and out["delta"]["matrix"] == [[1]]


def test_sg_builtin(capsys):
    code, out = run_json(capsys, "sg", "builtin", "TwoPowerCyclic", "2")
    assert code == 0 and sg_validate(parse_sg(out["sg"]))
    assert run(capsys, "sg", "builtin", "HalfInvertible", "Z/4")[0] == 2


def test_sg_realize_delta(capsys):
    code, out = run_json(capsys, "sg", "realize", "--pi", "Z", "--pi-next", "Z",
                         "--mode", "delta", "--map", "1")
    assert code == 0 and sg_validate(parse_sg(out["sg"]))


def test_sg_realize_omega_strategy_unsupported(capsys):
    code, out = run_json(capsys, "sg", "realize", "--pi", "Z/2", "--pi-next", "Z/2",
                         "--k", "1", "--mode", "flat", "--strategy", "omega")
    assert code == 1 and out["error"] == "unsupported_pi2"


def test_sg_twist(capsys):
    code, out = run_json(capsys, "sg", "twist", CORPUS / "znil.sg", "--alpha", "3")
    assert code == 0 and sg_validate(parse_sg(out["sg"]))


def test_max_order_env(capsys, monkeypatch):
    monkeypatch.setenv("SQGROUP_MAX_ORDER", "zero")
    assert run(capsys, "functor", "P", "Z")[0] == 2


def test_verify_subset(capsys):
    code, text, _ = run(capsys, "verify", "paper-tables", "--max-order", "8",
                        "--only", "functor-tables")
    assert code == 0 and "PASS functor-tables" in text


def test_verify_mutation_names_anchor(capsys):
    code, text, _ = run(capsys, "verify", "paper-tables", "--max-order", "8",
                        "--only", "builtin-realizers", "--mutate", "znil")
    assert code == 1 and "FAIL builtin-realizers" in text


def test_sg_realize_needs_k(capsys):
    assert run(capsys, "sg", "realize", "--pi", "Z/2", "--pi-next", "Z/2")[0] == 2
