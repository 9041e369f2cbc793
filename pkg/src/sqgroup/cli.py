"""Command-line front end.

Exit codes: 0 success, 1 domain error (the input is fine but the requested
object does not exist, e.g. not_psg0 or theta_nonzero), 2 parse or
validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import verify as verify_mod
from .abelian import AbHom, FgAbGroup, format_group, tensor
from .formats import (FormatError, format_psg, format_sg, make_hom, parse_group_literal,
                      parse_matrix, parse_psg, parse_sg, parse_vector, read_document)
from .nil2 import canonical_TA, twist_TA
from .psg import (DEFAULT_EXHAUSTIVE_BOUND, InvolutionMismatch, KTriple, NotFlat, PreSquareGroup,
                  PSGError, Validation, check_realization, odot_eval, omega, psg_combine,
                  psg_invariants, psg_pushforward, psg_validate, realize_psg, stable_invariants,
                  upsilon_lambda)
from .quadfun import FUNCTOR_NAMES, NAT_NAMES, nat_map, quad_value, theta
from .sg import (SGError, SquareGroup, UnsupportedPi2, builtin_realizer, check_delta_realization,
                 delta, lift, lift_omega, realize_sg, sg_combine, sg_twist, sg_validate, wp)

ENV_MAX_ORDER = "SQGROUP_MAX_ORDER"

# structure maps shown by `functor --with-maps`
FUNCTOR_MAPS = {
    "P": ("j", "q", "nu", "f_pm"),
    "Gamma": ("tau", "tau_prime", "iota", "gamma_mod2"),
    "Psi": ("tau_prime", "psi_mod2"),
    "Phi": ("iota",),
}


class DomainError(Exception):
    """The request is well formed but has no answer (exit code 1)."""

    def __init__(self, code: str, detail: str = "", payload: dict | None = None):
        super().__init__(f"{code}: {detail}" if detail else code)
        self.code = code
        self.detail = detail
        self.payload = payload or {}


class InputError(Exception):
    """Unparseable or invalid input (exit code 2)."""


# ---------------------------------------------------------------------------
# output helpers


def group_json(g: FgAbGroup) -> list[int]:
    return list(g.invariant_factors)


def hom_json(h: AbHom) -> dict:
    return {"source": group_json(h.source), "target": group_json(h.target),
            "matrix": [list(r) for r in h.matrix]}


def hom_text(h: AbHom) -> str:
    rows = "; ".join(" ".join(str(x) for x in r) for r in h.matrix) or "(empty)"
    return f"{format_group(h.source)} -> {format_group(h.target)}: [{rows}]"


class Out:
    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout
        self.data: dict = {}
        self.text: list[str] = []

    def put(self, key: str, value, text: str | None = None) -> None:
        self.data[key] = value
        if text is not None:
            self.text.append(text)

    def line(self, text: str) -> None:
        self.text.append(text)

    def flush(self) -> None:
        if self.as_json:
            print(json.dumps(self.data, sort_keys=True), file=self.stream)
        elif self.text:
            print("\n".join(self.text).rstrip("\n"), file=self.stream)


# ---------------------------------------------------------------------------
# input helpers


def _group(text: str) -> FgAbGroup:
    try:
        return parse_group_literal(text)
    except FormatError:
        # command-line literals may be in any order; they are canonicalized
        from .abelian import parse_group
        try:
            return parse_group(text)
        except ValueError as e:
            raise InputError(str(e)) from None


def _hom(source: FgAbGroup, target: FgAbGroup, text: str, what: str) -> AbHom:
    try:
        return make_hom(source, target, parse_matrix(text), what)
    except FormatError as e:
        raise InputError(str(e)) from None


def _read_psg(path: str, bound: int, validate: bool = True) -> PreSquareGroup:
    kind, text = _read(path)
    try:
        m = wp(parse_sg(text)) if kind == "sg" else parse_psg(text)
    except FormatError as e:
        raise InputError(f"{path}: {e}") from None
    if validate:
        v = _check_psg(m, bound)
        if not v:
            raise InputError(f"{path}: not a presquare group ({v.axiom}: {v.detail})")
    return m


def _read_sg(path: str, bound: int, validate: bool = True) -> SquareGroup:
    kind, text = _read(path)
    if kind != "sg":
        raise InputError(f"{path}: not a square group file (no [H] section)")
    try:
        q = parse_sg(text)
    except FormatError as e:
        raise InputError(f"{path}: {e}") from None
    if validate:
        v = _check_sg(q, bound)
        if not v:
            raise InputError(f"{path}: not a square group ({v.axiom}: {v.detail})")
    return q


def _read(path: str) -> tuple[str, str]:
    try:
        return read_document(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _check_psg(m: PreSquareGroup, bound: int) -> Validation:
    bad = m.Me.check_cocycle(bound)
    if bad is not None:
        return Validation(False, "cocycle", f"cocycle identity fails at {bad}")
    return psg_validate(m, bound)


def _check_sg(q: SquareGroup, bound: int) -> Validation:
    bad = q.Qe.check_cocycle(bound)
    if bad is not None:
        return Validation(False, "cocycle", f"cocycle identity fails at {bad}")
    return sg_validate(q, bound)


# ---------------------------------------------------------------------------
# verbs


def cmd_functor(args, out: Out) -> int:
    a = _group(args.group)
    try:
        fv = quad_value(args.name, a)
    except ValueError as e:
        raise InputError(str(e)) from None
    out.put("group", group_json(fv.group), format_group(fv.group))
    if args.with_maps:
        maps = {}
        for name in FUNCTOR_MAPS.get(args.name, ()):
            h = nat_map(name, a)
            maps[name] = hom_json(h)
            out.line(f"{name}: {hom_text(h)}")
        out.put("maps", maps)
    return 0


def cmd_nat(args, out: Out) -> int:
    if args.name not in NAT_NAMES:
        raise InputError(f"unknown natural map {args.name!r}; expected one of {', '.join(NAT_NAMES)}")
    h = nat_map(args.name, _group(args.group))
    out.put("map", hom_json(h), hom_text(h))
    return 0


def cmd_theta(args, out: Out) -> int:
    a = _group(args.group)
    th = theta(a, reduced=args.reduced)
    out.put("group", group_json(a))
    out.put("zero", th.is_zero(), f"theta({format_group(a)}) {'= 0' if th.is_zero() else '!= 0'}")
    out.put("coords", list(th.coords), f"coordinates in Ext: {list(th.coords)}")
    return 0


def _invariants_payload(m: PreSquareGroup, out: Out) -> None:
    inv = psg_invariants(m)
    out.put("pi0", group_json(inv.pi0), f"pi_0 = {format_group(inv.pi0)}")
    out.put("pi1", group_json(inv.pi1), f"pi_1 = {format_group(inv.pi1)}")
    out.put("involution", hom_json(inv.involution), f"involution on pi_1: {hom_text(inv.involution)}")
    out.put("pi1_minus", group_json(inv.pi1_minus), f"pi_1^- = {format_group(inv.pi1_minus)}")
    out.put("k", hom_json(inv.k), f"k: {hom_text(inv.k)}")
    flags = {"flat": inv.is_flat, "psg0": inv.is_psg0, "psgs": inv.is_psgs}
    out.put("flags", flags, "flags: " + ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in flags.items()))


def cmd_psg(args, out: Out) -> int:
    bound = args.max_order
    op = args.op
    if op == "check":
        kind, text = _read(args.file)
        try:
            m = wp(parse_sg(text)) if kind == "sg" else parse_psg(text)
        except FormatError as e:
            raise InputError(f"{args.file}: {e}") from None
        v = _check_psg(m, bound)
        out.put("valid", v.ok, "valid" if v.ok else f"invalid: {v.axiom}: {v.detail}")
        if not v.ok:
            out.put("axiom", v.axiom)
            return 2
        return 0
    if op == "pi":
        _invariants_payload(_read_psg(args.file, bound), out)
        return 0
    if op == "kinv":
        inv = psg_invariants(_read_psg(args.file, bound))
        out.put("k", hom_json(inv.k), hom_text(inv.k))
        return 0
    if op == "stable":
        m = _read_psg(args.file, bound)
        st = stable_invariants(m)
        out.put("pi1_bar", group_json(st.pi1_bar), f"stable pi_1 = {format_group(st.pi1_bar)}")
        out.put("k_bar", hom_json(st.k_bar), f"k_bar: {hom_text(st.k_bar)}")
        out.put("epsilon", hom_json(st.epsilon), f"epsilon: {hom_text(st.epsilon)}")
        return 0
    if op in ("prod", "coprod"):
        m, n = _read_psg(args.file, bound), _read_psg(args.other, bound)
        r = psg_combine(op, m, n)
        out.put("psg", format_psg(r), format_psg(r))
        return 0
    if op == "push":
        m = _read_psg(args.file, bound)
        inv = psg_invariants(m)
        tgt = _group(args.target)
        f = _hom(inv.pi1, tgt, args.map, "--map")
        tau = _hom(tgt, tgt, args.involution, "--involution") if args.involution else None
        try:
            r = psg_pushforward(inv.normalized.psg, f, tau)
        except InvolutionMismatch as e:
            raise DomainError("involution_mismatch", str(e)) from None
        out.put("psg", format_psg(r), format_psg(r))
        return 0
    if op == "omega":
        a = _group(args.group)
        n = canonical_TA(a)
        if args.twist:
            n = twist_TA(n, parse_vector(args.twist))
        r = omega(n, bar=args.bar)
        out.put("psg", format_psg(r), format_psg(r))
        return 0
    if op == "realize":
        target = _target(args)
        try:
            r = realize_psg(target, "stable" if args.stable else "flat")
        except NotFlat as e:
            raise DomainError("not_flat", str(e)) from None
        v = check_realization(target, r)
        if not v:
            raise DomainError("realization_failed", f"{v.axiom}: {v.detail}")
        out.put("psg", format_psg(r.psg), format_psg(r.psg))
        out.put("phi0", hom_json(r.phi0))
        out.put("phi1", hom_json(r.phi1))
        return 0
    if op == "odot":
        m = _read_psg(args.file, bound)
        g = odot_eval(args.n, m)
        out.put("order", g.order, f"|[{args.n}] odot M| = {g.order if g.order is not None else 'infinite'}")
        out.put("quotient", group_json(g.quotient), f"quotient = {format_group(g.quotient)}")
        out.put("center", group_json(g.center_part), f"center part = {format_group(g.center_part)}")
        return 0
    if op == "upsilon":
        ul = upsilon_lambda(_read_psg(args.file, bound), bound)
        for key, v in (("braided", ul.bcg_valid), ("symmetric", ul.scg_valid)):
            out.put(key, v.ok, f"{key}: {'valid' if v.ok else f'invalid ({v.axiom}: {v.detail})'}")
        out.put("symmetric_group", group_json(ul.scg.Cee), f"lambda ee = {format_group(ul.scg.Cee)}")
        return 0 if ul.valid else 1
    raise InputError(f"unknown psg operation {op!r}")


def _target(args) -> KTriple:
    a, b = _group(args.pi), _group(args.pi_next)
    if args.stable:
        src = tensor(FgAbGroup((2,)), a).group
    else:
        src = quad_value("Gamma", a).group
    if args.k is None:
        raise InputError("--k is required unless --mode delta")
    k = _hom(src, b, args.k, "--k")
    return KTriple(a, b, k, stable=args.stable)


def cmd_sg(args, out: Out) -> int:
    bound = args.max_order
    op = args.op
    if op == "check":
        kind, text = _read(args.file)
        if kind != "sg":
            raise InputError(f"{args.file}: not a square group file (no [H] section)")
        try:
            q = parse_sg(text)
        except FormatError as e:
            raise InputError(f"{args.file}: {e}") from None
        v = _check_sg(q, bound)
        out.put("valid", v.ok, "valid" if v.ok else f"invalid: {v.axiom}: {v.detail}")
        if not v.ok:
            out.put("axiom", v.axiom)
            return 2
        return 0
    if op == "wp":
        m = wp(_read_sg(args.file, bound))
        out.put("psg", format_psg(m), format_psg(m))
        return 0
    if op == "lift":
        m = _read_psg(args.file, bound)
        res = lift(m)
        out.put("status", res.status)
        if res.status == "not_psg0":
            raise DomainError("not_psg0", "the involution on pi_1 is not -1")
        if res.status == "obstruction":
            ob = res.obstruction.value
            raise DomainError("obstruction", "the bracket cocycle is not a coboundary",
                              {"ext": list(ob.ext_coords), "pairing": hom_json(ob.pairing)})
        out.line(format_sg(res.sg))
        out.put("sg", format_sg(res.sg))
        return 0
    if op == "delta":
        d = delta(_read_sg(args.file, bound))
        out.put("delta", hom_json(d), hom_text(d))
        return 0
    if op == "twist":
        q = _read_sg(args.file, bound)
        from .sg import pi0_of
        alpha = _hom(pi0_of(q), q.Qee, args.alpha, "--alpha")
        r = sg_twist(q, alpha)
        out.put("sg", format_sg(r), format_sg(r))
        return 0
    if op in ("prod", "coprod"):
        r = sg_combine(op, _read_sg(args.file, bound), _read_sg(args.other, bound))
        out.put("sg", format_sg(r), format_sg(r))
        return 0
    if op == "builtin":
        arg = args.arg
        if args.kind == "HalfInvertible" or args.kind == "StableUniversal":
            if arg is None:
                raise InputError(f"{args.kind} needs a group argument")
            arg = _group(arg)
        elif args.kind in ("TwoPowerCyclic", "Cyclic"):
            try:
                arg = int(arg)
            except (TypeError, ValueError):
                raise InputError(f"{args.kind} needs an integer argument") from None
        r = builtin_realizer(args.kind, arg)
        out.put("sg", format_sg(r), format_sg(r))
        return 0
    if op == "theta":
        a = _group(args.group)
        res = lift_omega(a)
        out.put("theta_zero", res.ok)
        if not res.ok:
            raise DomainError("theta_nonzero", f"theta({format_group(a)}) != 0",
                              {"theta": list(res.theta.coords)})
        out.line(f"theta({format_group(a)}) = 0; twist {list(res.twist)}")
        out.put("twist", list(res.twist))
        out.line(format_sg(res.sg))
        out.put("sg", format_sg(res.sg))
        return 0
    if op == "realize":
        mode = args.mode
        if mode == "delta":
            src, tgt = _group(args.pi), _group(args.pi_next)
            f = _hom(src, tgt, args.map, "--map")
            r = realize_sg(KTriple(src, tgt, AbHom.zero(src, tgt)), "delta", f=f)
            v = check_delta_realization(f, r)
        else:
            args.stable = mode == "stable"
            target = _target(args)
            try:
                r = realize_sg(target, mode, strategy=args.strategy)
            except NotFlat as e:
                raise DomainError("not_flat", str(e)) from None
            except UnsupportedPi2 as e:
                raise DomainError("unsupported_pi2", str(e),
                                  {"summand": group_json(e.summand)}) from None
            v = check_realization(target, r.psg_realization())
        if not v:
            raise DomainError("realization_failed", f"{v.axiom}: {v.detail}")
        out.put("sg", format_sg(r.sg), format_sg(r.sg))
        out.put("phi0", hom_json(r.phi0))
        out.put("phi1", hom_json(r.phi1))
        return 0
    raise InputError(f"unknown sg operation {op!r}")


def cmd_verify(args, out: Out) -> int:
    if args.what != "paper-tables":
        raise InputError(f"unknown verification {args.what!r}; expected paper-tables")
    try:
        bounds = verify_mod.Bounds(args.max_order, args.max_arity)
        report = verify_mod.run(bounds, args.mutate or [], args.only or None)
    except ValueError as e:
        raise InputError(str(e)) from None
    out.data.update(report.to_json())
    out.text.extend(report.lines())
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def _env_max_order() -> int:
    raw = os.environ.get(ENV_MAX_ORDER)
    if not raw:
        return DEFAULT_EXHAUSTIVE_BOUND
    try:
        v = int(raw)
    except ValueError:
        raise InputError(f"{ENV_MAX_ORDER} must be an integer, got {raw!r}") from None
    if v < 1:
        raise InputError(f"{ENV_MAX_ORDER} must be positive")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser(default_order: int) -> argparse.ArgumentParser:
    # options are accepted before or after the verb; only the top level sets defaults
    top = argparse.ArgumentParser(add_help=False)
    top.add_argument("--json", action="store_true", help="machine-readable output")
    top.add_argument("--max-order", type=_positive, default=default_order,
                     help=f"exhaustive-check bound (env {ENV_MAX_ORDER})")
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--json", action="store_true")
    common.add_argument("--max-order", type=_positive)

    p = argparse.ArgumentParser(prog="sqgroup", parents=[top],
                                description="Quadratic functors, presquare and square groups.")
    sub = p.add_subparsers(dest="verb", required=True)

    f = sub.add_parser("functor", parents=[common], help="evaluate a quadratic functor")
    f.add_argument("name", help=f"one of {', '.join(FUNCTOR_NAMES)}, or Phi_n")
    f.add_argument("group")
    f.add_argument("--with-maps", action="store_true")
    f.set_defaults(func=cmd_functor)

    n = sub.add_parser("nat", parents=[common], help="a natural map as a matrix")
    n.add_argument("name", choices=NAT_NAMES)
    n.add_argument("group")
    n.set_defaults(func=cmd_nat)

    t = sub.add_parser("theta", parents=[common], help="the class theta(A)")
    t.add_argument("group")
    t.add_argument("--reduced", action="store_true")
    t.set_defaults(func=cmd_theta)

    ps = sub.add_parser("psg", parents=[common], help="presquare groups")
    pss = ps.add_subparsers(dest="op", required=True)
    for op in ("check", "pi", "kinv", "stable", "upsilon"):
        x = pss.add_parser(op, parents=[common])
        x.add_argument("file")
    for op in ("prod", "coprod"):
        x = pss.add_parser(op, parents=[common])
        x.add_argument("file")
        x.add_argument("other")
    x = pss.add_parser("push", parents=[common], help="push forward along f : pi_1 -> A")
    x.add_argument("file")
    x.add_argument("--target", required=True, help="the group A")
    x.add_argument("--map", required=True, help="matrix of f, rows separated by ';'")
    x.add_argument("--involution", help="involution on A (default -1)")
    x = pss.add_parser("omega", parents=[common])
    x.add_argument("group")
    x.add_argument("--bar", action="store_true")
    x.add_argument("--twist", help="Ext coordinates of the twist of N_A")
    x = pss.add_parser("realize", parents=[common])
    _target_args(x)
    x.add_argument("--stable", action="store_true")
    x = pss.add_parser("odot", parents=[common], help="evaluate on a pointed set of size n + 1")
    x.add_argument("n", type=int)
    x.add_argument("file")
    ps.set_defaults(func=cmd_psg)

    s = sub.add_parser("sg", parents=[common], help="square groups")
    ss = s.add_subparsers(dest="op", required=True)
    for op in ("check", "wp", "lift", "delta"):
        x = ss.add_parser(op, parents=[common])
        x.add_argument("file")
    for op in ("prod", "coprod"):
        x = ss.add_parser(op, parents=[common])
        x.add_argument("file")
        x.add_argument("other")
    x = ss.add_parser("twist", parents=[common])
    x.add_argument("file")
    x.add_argument("--alpha", required=True, help="matrix pi_0 -> Qee")
    x = ss.add_parser("builtin", parents=[common])
    x.add_argument("kind", choices=("Znil", "TwoPowerCyclic", "Cyclic", "HalfInvertible",
                                    "StableUniversal"))
    x.add_argument("arg", nargs="?")
    x = ss.add_parser("theta", parents=[common], help="lift omega(N) for a suitable N")
    x.add_argument("group")
    x = ss.add_parser("realize", parents=[common])
    _target_args(x, need_k=False)
    x.add_argument("--mode", choices=("flat", "stable", "delta"), default="flat")
    x.add_argument("--map", help="delta mode: the map f : pi -> pi-next")
    x.add_argument("--strategy", choices=("auto", "omega"), default="auto")
    s.set_defaults(func=cmd_sg)

    v = sub.add_parser("verify", parents=[common], help="run the verification suites")
    v.add_argument("what", help="paper-tables")
    v.add_argument("--max-arity", type=_positive, default=verify_mod.DEFAULT_MAX_ARITY)
    v.add_argument("--mutate", action="append", metavar="NAME",
                   help=f"corrupt a builtin ({', '.join(sorted(verify_mod.MUTATIONS))})")
    v.add_argument("--only", action="append", metavar="ANCHOR")
    v.set_defaults(func=cmd_verify)
    return p


def _target_args(x: argparse.ArgumentParser, need_k: bool = True) -> None:
    x.add_argument("--pi", required=True, help="pi_n")
    x.add_argument("--pi-next", required=True, help="pi_{n+1}")
    x.add_argument("--k", required=need_k, help="k-invariant matrix")


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        default_order = _env_max_order()
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    parser = build_parser(default_order)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    out = Out(args.json)
    try:
        code = args.func(args, out)
    except DomainError as e:
        out.put("error", e.code)
        out.line(e.code)
        if e.detail:
            out.put("detail", e.detail)
            out.line(e.detail)
        for k, v in e.payload.items():
            out.put(k, v)
        out.flush()
        return 1
    except (InputError, FormatError, PSGError, SGError, ValueError) as e:
        if args.json:
            print(json.dumps({"error": "invalid_input", "detail": str(e)}, sort_keys=True))
        print(f"error: {e}", file=sys.stderr)
        return 2
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
