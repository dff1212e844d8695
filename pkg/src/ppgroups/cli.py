"""Command-line interface: ``ppgroups <command> ...``.

Exit codes: 0 ok, 1 theorem violation, 2 resource caps hit, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .catalog import from_spec
from .crossed import identity_crossed_module, inclusion_crossed_module
from .fp import EnumerationExceeded, PresentationError, load_presentation, parse_presentation, todd_coxeter
from .group import (
    DEFAULT_ORDER_CAP,
    GroupError,
    ResourceError,
    abelian_invariants,
    center,
    commutator_subgroup,
    fingerprint,
    load_group,
    nilpotency_class,
    normal_closure,
    quotient_group,
)
from .powerful import is_powerful
from .series import KINDS, compute_series
from .tensor import TensorCaps, TensorError, compute_q_tensor, compute_tensor
from .verify import EXIT_OK, EXIT_RESOURCE, EXIT_USAGE, EXIT_VIOLATION, SUITES, CorpusSpec, run_suite


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    # defaults are suppressed so flags given before the subcommand survive
    p = _Parser(add_help=False)
    p.add_argument("--output", choices=("json", "text"), default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--max-cosets", type=int, default=argparse.SUPPRESS)
    p.add_argument("--max-order", type=int, default=argparse.SUPPRESS,
                   help="group order cap (verify: corpus order limit per prime)")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="ppgroups", description="Exact finite p-group computations.",
                     parents=[common])
    parser.add_argument("--version", action="version", version=f"ppgroups {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    grp = sub.add_parser("group", help="inspect a group", parents=[common])
    gsub = grp.add_subparsers(dest="group_command", parser_class=_Parser)
    info = gsub.add_parser("info", parents=[common])
    info.add_argument("--group", required=True, help="spec such as heisenberg3 or C9xC3, or a JSON file")
    ser = gsub.add_parser("series", parents=[common])
    ser.add_argument("--group", required=True)
    ser.add_argument("--kind", choices=KINDS, required=True)
    ser.add_argument("--prime", type=int)
    quo = gsub.add_parser("quotient", parents=[common])
    quo.add_argument("--group", required=True)
    quo.add_argument("--by", required=True,
                     help="center, derived, or a comma list of element indices (normal closure)")

    tc = sub.add_parser("tc", help="Todd-Coxeter coset enumeration", parents=[common])
    src = tc.add_mutually_exclusive_group(required=True)
    src.add_argument("--presentation", help="text such as '<a,b | a^2, b^2, (a*b)^3>'")
    src.add_argument("--file", help="presentation file (text or JSON)")
    tc.add_argument("--subgroup", action="append", default=[], help="subgroup generator word")
    tc.add_argument("--table", action="store_true", help="include the standardized coset table")

    for name, helptext in (("tensor", "non-abelian tensor product"), ("qtensor", "tensor product modulo q")):
        t = sub.add_parser(name, help=helptext, parents=[common])
        t.add_argument("--group", required=True, help="the acting group G")
        t.add_argument("--self", action="store_true", help="G with itself (identity crossed modules)")
        t.add_argument("--left", default="self", choices=("self", "center", "derived"),
                       help="normal subgroup of G used as the left factor")
        t.add_argument("--right", default="self", choices=("self", "center", "derived"))
        t.add_argument("--factor-cap", type=int, help="override the cap on |M| and |N|")
        t.add_argument("--emit-presentation", metavar="PATH",
                       help="write the instantiated presentation ('-' for stdout)")
        t.add_argument("--full", action="store_true", help="include the multiplication table")
        if name == "qtensor":
            t.add_argument("--q", type=int, help="modulus (default: the prime of G)")

    ver = sub.add_parser("verify", help="run theorem suites over the corpus", parents=[common])
    ver.add_argument("--suite", choices=SUITES + ("all",), default="all")
    ver.add_argument("--prime", type=int, action="append", help="restrict the corpus (repeatable)")
    ver.add_argument("--constructors", help="comma list of catalog constructors")
    ver.add_argument("--no-products", action="store_true")
    ver.add_argument("--factor-cap", type=int)
    ver.add_argument("--min-substantive", type=int, default=3)
    ver.add_argument("--timing", action="store_true", help="include wall time in the report")
    return parser


def _opt(args, name, default):
    return getattr(args, name, default)


def _group(spec: str, cap: int):
    if os.path.exists(spec):
        return load_group(spec, order_cap=cap)
    return from_spec(spec, order_cap=cap)


def _emit(args, payload: dict, text: str) -> None:
    if _opt(args, "output", "text") == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _subgroup(g, which: str):
    if which == "center":
        return center(g)
    if which == "derived":
        w = g.whole()
        return commutator_subgroup(w, w)
    raise UsageError(f"unknown subgroup {which!r}")


def cmd_group(args) -> int:
    cap = _opt(args, "max_order", DEFAULT_ORDER_CAP)
    if args.group_command is None:
        raise UsageError("group needs a subcommand: info, series or quotient")
    g = _group(args.group, cap)
    if args.group_command == "info":
        fp = fingerprint(g)
        powerful = is_powerful(g, g.prime) if g.prime else None
        payload = {"name": g.name, "order": g.order, "prime": g.prime, "exponent": g.exponent,
                   "abelian": g.is_abelian, "abelianization": list(fp[2]),
                   "nilpotency_class": nilpotency_class(g), "powerful": powerful,
                   "center_order": center(g).order}
        _emit(args, payload, "\n".join(f"{k}: {v}" for k, v in payload.items()))
        return EXIT_OK
    if args.group_command == "series":
        s = compute_series(g, args.kind, args.prime)
        _emit(args, s.to_json(), f"{args.kind} orders: {' > '.join(map(str, s.orders))}")
        return EXIT_OK
    if args.by in ("center", "derived"):
        n = _subgroup(g, args.by)
    else:
        try:
            elems = [int(x) for x in args.by.split(",") if x.strip()]
        except ValueError as exc:
            raise UsageError("--by takes center, derived or element indices") from exc
        n = normal_closure(g, elems)
    q, _ = quotient_group(g, n)
    payload = {"group": g.name, "normal_subgroup_order": n.order, "quotient_order": q.order,
               "quotient_abelian": q.is_abelian,
               "quotient_invariants": list(abelian_invariants(q)) if q.is_abelian else None}
    _emit(args, payload, "\n".join(f"{k}: {v}" for k, v in payload.items()))
    return EXIT_OK


def cmd_tc(args) -> int:
    if args.presentation is not None:
        p = parse_presentation(args.presentation)
    else:
        with open(args.file) as fh:
            p = load_presentation(fh.read())
    subs = []
    for w in args.subgroup:
        sp = parse_presentation("<" + ",".join(p.labels()) + " | " + w + ">")
        subs.extend(sp.relators)
    ct = todd_coxeter(p, subs, max_cosets=_opt(args, "max_cosets", 2_000_000))
    payload = {"cosets": ct.coset_count, "generators": p.generator_count}
    if args.table:
        payload["table"] = ct.action.tolist()
    text = f"order {ct.coset_count}" if not subs else f"index {ct.coset_count}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_tensor(args, q_mode: bool) -> int:
    cap = _opt(args, "max_order", DEFAULT_ORDER_CAP)
    g = _group(args.group, cap)
    caps = TensorCaps(factor_cap=args.factor_cap, order_cap=cap,
                      max_cosets=_opt(args, "max_cosets", 2_000_000))
    idg = identity_crossed_module(g)

    def module(which):
        if args.self or which == "self":
            return idg
        return inclusion_crossed_module(_subgroup(g, which))

    mu, nu = module(args.left), module(args.right)
    if q_mode:
        q = args.q if args.q is not None else g.prime
        if q is None:
            raise UsageError("--q is required when G is not a p-group")
        t = compute_q_tensor(mu, nu, q, caps)
    else:
        t = compute_tensor(mu, nu, caps)
    if args.emit_presentation:
        text = t.presentation.to_text() + "\n"
        if args.emit_presentation == "-":
            sys.stdout.write(text)
        else:
            with open(args.emit_presentation, "w") as fh:
                fh.write(text)
    payload = t.to_json()
    if not args.full:
        payload.pop("mult")
    inv = list(abelian_invariants(t.group)) if t.group.is_abelian else None
    payload["abelian_invariants"] = inv
    _emit(args, payload, f"{t.group.name}: order {t.group.order}"
          + (f", abelian {tuple(inv)}" if inv is not None else ", non-abelian"))
    return EXIT_OK


def cmd_verify(args) -> int:
    primes = tuple(args.prime) if args.prime else (2, 3, 5)
    mo = _opt(args, "max_order", None)
    max_order = {p: mo for p in primes} if mo is not None else {p: CorpusSpec().limit(p) for p in primes}
    cons = None
    if args.constructors is not None:
        cons = tuple(c.strip() for c in args.constructors.split(",") if c.strip())
    spec = CorpusSpec(primes, max_order, cons, not args.no_products, _opt(args, "seed", 0))
    caps = TensorCaps(factor_cap=args.factor_cap, max_cosets=_opt(args, "max_cosets", 2_000_000))
    report = run_suite(args.suite, spec, caps, jobs=_opt(args, "jobs", 1),
                       min_substantive=args.min_substantive)
    if _opt(args, "output", "text") == "json":
        print(json.dumps(report.to_json(args.timing), sort_keys=True))
    else:
        print(report.to_text())
    return report.exit_code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required")
        if args.command == "group":
            return cmd_group(args)
        if args.command == "tc":
            return cmd_tc(args)
        if args.command in ("tensor", "qtensor"):
            return cmd_tensor(args, args.command == "qtensor")
        return cmd_verify(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceError, EnumerationExceeded) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except TensorError as exc:
        print(f"structure failure: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (GroupError, PresentationError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())

