"""Command-line front end.

Exit status: 0 when the computation succeeds and any checked property holds,
1 when a checked property fails, 2 on input errors, 3 when a size cap or
search budget is exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .algebra import AlgebraError, AlgebraParseError, CapExceeded, Homomorphism, load_algebra
from .commutator import (CommutatorError, all_routes, centralizes, commutator, equivalence_suite,
                         weak_centralizes)
from .congruence import cg, con_all, pushforward, quotient
from .group_topology import (FiniteGroup, GroupError, NeighborhoodBase, SubsetParseError,
                             equivalence_theorem_check, parse_base)
from .partition import Partition, PartitionParseError, format_partition, parse_partition
from .relations import RelationFilter, RelationParseError, parse_relation
from .terms import (CloneBudgetExceeded, WitnessError, auto_day_witness, day_from_maltsev,
                    day_witness_from_terms, find_maltsev, parse_term_chain)
from .unif import ZParseError, z_commutator, z_join, z_meet, z_parse

OK, FAILED, INPUT_ERROR, LIMIT = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _partition(text: str, n: int) -> Partition:
    key = text.strip().lower()
    if key in ("top", "nabla"):
        return Partition.top(n)
    if key in ("bottom", "delta"):
        return Partition.bottom(n)
    return parse_partition(text, n)


def _congruence(a, text: str) -> Partition:
    p = _partition(text, a.size)
    if not a.is_compatible(p):
        raise InputError(f"{p} is not a congruence of {a.name}")
    return p


def _pairs(text: str, n: int):
    return parse_relation(f"rel {n} {{ {text} }}").pairs()


def _day_witness(a, path: Optional[str]):
    if path:
        with open(path, encoding="utf-8") as fh:
            return day_witness_from_terms(a, parse_term_chain(fh.read()))
    return auto_day_witness(a)


def _print_witness(w, out) -> None:
    for i, t in enumerate(w.terms()):
        print(f"m{i} = {t}", file=out)


def cmd_con(args, out) -> int:
    a = load_algebra(args.algebra)
    for p in con_all(a):
        print(format_partition(p), file=out)
    return OK


def cmd_cg(args, out) -> int:
    a = load_algebra(args.algebra)
    print(format_partition(cg(a, _pairs(args.pairs, a.size))), file=out)
    return OK


def cmd_commutator(args, out) -> int:
    a = load_algebra(args.algebra)
    alpha, beta = _congruence(a, args.alpha), _congruence(a, args.beta)
    witness = None
    if args.method in ("xm", "all"):
        witness = _day_witness(a, args.day_terms)
        if witness is None:
            print("no Day terms found; the xm route is unavailable", file=out)
            return FAILED
    if args.method != "all":
        print(format_partition(commutator(a, alpha, beta, args.method, witness)), file=out)
        return OK
    routes = all_routes(a, alpha, beta, witness)
    for name, p in routes.items():
        print(f"{name}: {format_partition(p)}", file=out)
    agree = len(set(routes.values())) == 1
    print("routes agree" if agree else "routes DISAGREE", file=out)
    return OK if agree else FAILED


def cmd_centralizes(args, out) -> int:
    a = load_algebra(args.algebra)
    alpha, beta, delta = (_congruence(a, t) for t in (args.alpha, args.beta, args.delta))
    rep = (weak_centralizes if args.weak else centralizes)(a, alpha, beta, delta)
    if rep.holds:
        print("holds", file=out)
        return OK
    u11, u12, u21, u22 = rep.witness
    print(f"fails: witness ({u11} {u12}; {u21} {u22})", file=out)
    return FAILED


def cmd_maltsev(args, out) -> int:
    a = load_algebra(args.algebra)
    w = find_maltsev(a, budget=args.budget)
    if w is None:
        print("none: the ternary clone has no Mal'tsev operation", file=out)
        return FAILED
    print(f"p = {w.chain[0]}", file=out)
    if args.day:
        _print_witness(day_from_maltsev(a, w.chain[0]), out)
    return OK


def cmd_equivsuite(args, out) -> int:
    a = load_algebra(args.algebra)
    alpha, beta, delta = (_congruence(a, t) for t in (args.alpha, args.beta, args.delta))
    witness = _day_witness(a, args.day_terms)
    if witness is None:
        print("no Day terms found", file=out)
        return FAILED
    rep = equivalence_suite(a, witness, alpha, beta, delta)
    for name, val in rep.statements.items():
        print(f"{name}: {str(val).lower()}", file=out)
    print("consistent" if rep.consistent else "INCONSISTENT", file=out)
    return OK if rep.consistent else FAILED


def cmd_zfilter(args, out) -> int:
    f, g = z_parse(args.left), z_parse(args.right)
    op = {"meet": z_meet, "join": z_join, "commutator": z_commutator}[args.op]
    r = op(f, g)
    print(r.canonical(), file=out)
    print(r.pretty(), file=out)
    return OK


def cmd_group_top(args, out) -> int:
    g = FiniteGroup(load_algebra(args.algebra))
    nb = NeighborhoodBase(g, parse_base(args.base))
    rep = equivalence_theorem_check(nb)
    ax = rep.axioms
    print(f"G3: {str(ax.G3).lower()}", file=out)
    print(f"G4: {str(ax.G4).lower()}", file=out)
    print(f"G5: {str(ax.G5).lower()}", file=out)
    print(f"G5': {str(ax.G5prime).lower()}", file=out)
    for name, val in rep.items.items():
        print(f"({name}): {str(val).lower()}", file=out)
    print("consistent" if rep.consistent else "INCONSISTENT", file=out)
    return OK if rep.consistent else FAILED


def cmd_pushforward(args, out) -> int:
    a = load_algebra(args.algebra)
    if (args.quotient is None) == (args.target is None):
        raise InputError("give exactly one of --quotient or --target/--map")
    if args.quotient is not None:
        b, f = quotient(a, _congruence(a, args.quotient))
    else:
        if args.map is None:
            raise InputError("--target needs --map")
        b = load_algebra(args.target)
        f = Homomorphism(a, b, [int(t) for t in args.map.split()])
    base = [_congruence(a, t).relation() for t in args.base.split(";")]
    v = pushforward(f, RelationFilter(base))
    for r in v.base:
        print(format_partition(Partition.from_relation(r)), file=out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="uacomm", description="Commutators and uniformities on finite algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("con", help="list all congruences")
    p.add_argument("algebra")
    p.set_defaults(func=cmd_con)

    p = sub.add_parser("cg", help="congruence generated by pairs")
    p.add_argument("algebra")
    p.add_argument("--pairs", required=True, help='pairs like "(0,2) (1,3)"')
    p.set_defaults(func=cmd_cg)

    p = sub.add_parser("commutator", help="[alpha, beta]")
    p.add_argument("algebra")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--method", choices=["tc", "weak", "xm", "delta", "all"], default="tc")
    p.add_argument("--day-terms", help="file with one Day term per line")
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("centralizes", help="C(alpha, beta; delta)")
    p.add_argument("algebra")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--weak", action="store_true", help="use the weak term condition")
    p.set_defaults(func=cmd_centralizes)

    p = sub.add_parser("maltsev", help="search the clone for a Mal'tsev term")
    p.add_argument("algebra")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--day", action="store_true", help="also print the derived Day chain")
    p.set_defaults(func=cmd_maltsev)

    p = sub.add_parser("equivsuite", help="six equivalent forms of [alpha, beta] <= delta")
    p.add_argument("algebra")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--day-terms")
    p.set_defaults(func=cmd_equivsuite)

    p = sub.add_parser("zfilter", help="ideal filters on Z")
    p.add_argument("op", choices=["meet", "join", "commutator"])
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_zfilter)

    p = sub.add_parser("group-top", help="left/right uniformities of a neighbourhood base")
    p.add_argument("algebra")
    p.add_argument("--base", required=True, help='subsets like "{0}|{0 3}"')
    p.set_defaults(func=cmd_group_top)

    p = sub.add_parser("pushforward", help="least compatible uniformity pushed along a homomorphism")
    p.add_argument("algebra")
    p.add_argument("--base", required=True, help="congruences of the source separated by ';'")
    p.add_argument("--quotient", help="push along the natural map onto A/quotient")
    p.add_argument("--target", help="target algebra file")
    p.add_argument("--map", help="images of 0..n-1, space separated")
    p.set_defaults(func=cmd_pushforward)
    return ap


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        return args.func(args, out)
    except (CapExceeded, CloneBudgetExceeded) as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return LIMIT
    except AlgebraParseError as exc:
        print(f"{args.algebra}: parse error at {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (OSError, InputError, PartitionParseError, RelationParseError, ZParseError, SubsetParseError,
            GroupError, WitnessError, CommutatorError, AlgebraError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
