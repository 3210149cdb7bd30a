"""Command line front end.

Exit codes: 0 success (and all checks passing), 1 check failure with a
witness printed, 2 input error. Output is deterministic for a fixed
input file and seed, so every subcommand is golden-file testable.
"""

from __future__ import annotations

import argparse
import itertools
import random
import sys

from .behrend import behrend_sphere, build_lower_bound_instance, max_ap3_free
from .errors import (
    CheckError,
    EdgeNotInHost,
    EmptyW,
    InputError,
    NoFreeColumns,
    ParseError,
    SearchBudgetExceeded,
)
from .hrep import build_coefficients, build_host, export_host, parse_host_export
from .linsys import (
    LinearSystem,
    SetFamily,
    format_system,
    normalize,
    parse_system,
    reduce_degenerate,
)
from .solutions import (
    count_solutions,
    epsdelta_scan,
    plan_removal,
    translate_edge_deletion,
)
from .verify import check_representation


def _load(path: str) -> tuple[LinearSystem, SetFamily]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_system(fh.read())


def _build(system: LinearSystem, sets: SetFamily):
    ns = normalize(system)
    coeffs = build_coefficients(ns)
    return build_host(ns, coeffs, sets)


def _count_total(system: LinearSystem, sets: SetFamily, naive: bool, guard: int) -> int:
    """Solution count for any full-rank system, degenerate rows included."""
    try:
        ns = normalize(system)
    except (EmptyW, NoFreeColumns):
        pass
    else:
        return count_solutions(ns, sets, mode="naive" if naive else "structured", guard=guard)
    red = reduce_degenerate(system, sets)
    if red.kind == "empty":
        return 0
    work = 1
    for s in red.sets.sets:
        work *= max(1, len(s))
    if work > guard:
        raise SearchBudgetExceeded(f"residual count needs {work} tuples, guard is {guard}")
    if red.kind == "unconstrained":
        count = 1
        for s in red.sets.sets:
            count *= len(s)
        return count
    return sum(1 for tup in itertools.product(*red.sets.sets) if red.system.is_solution(tup))


def cmd_normalize(args) -> int:
    system, sets = _load(args.input)
    ns = normalize(system)
    lines = [
        "# columns " + ",".join(str(j + 1) for j in ns.perm),
        f"# r {ns.uniformity} k {ns.vertex_count}",
    ]
    for i in range(ns.ell):
        support = ",".join(str(j + 1) for j in ns.support[i])
        lines.append(
            f"# row {i + 1}: pivot {ns.pivots[i] + 1} support {support} diag {ns.diag_cols[i] + 1}"
        )
    print("\n".join(lines))
    print(format_system(ns.base, ns.permute_family(sets)), end="")
    return 0


def cmd_count(args) -> int:
    system, sets = _load(args.input)
    print(f"T={_count_total(system, sets, args.naive, args.guard)}")
    return 0


def cmd_represent(args) -> int:
    system, sets = _load(args.input)
    host = _build(system, sets)
    print(
        f"r={host.r} k={host.k} colors={host.free + host.ell} "
        f"edges={len(host.records)} labels={sets.total_size()}"
    )
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            fh.write(export_host(host))
    return 0


def cmd_verify(args) -> int:
    system, sets = _load(args.input)
    host = _build(system, sets)
    report = check_representation(
        host,
        mode="naive" if args.naive else "per-part",
        naive_guard=args.guard,
        ee_guard=args.guard,
        workers=args.workers,
    )
    print(report.render(), end="")
    return 0 if report.passed else 1


def cmd_removal(args) -> int:
    system, sets = _load(args.input)
    result = plan_removal(system, sets, mode=args.mode, guard=args.guard)
    for i, vals in enumerate(result.removed):
        print(f"remove set {i + 1}: " + ",".join(str(v) for v in vals))
    print(f"budget={result.budget} total={result.total} mode={result.mode}")
    return 0


def _edge_refs(host, parsed):
    """Turn export-format lines into (color, vertex key) references."""
    width = host.r - 1
    refs = []
    for color, label, verts in parsed:
        if not 1 <= color <= host.free + host.ell:
            raise EdgeNotInHost(f"color {color} out of range")
        key = []
        for name, val in verts:
            part = int(name[1:]) - 1
            if name[0] == "U":
                part += width
            if not (0 <= part < host.k and 0 <= val < host.n):
                raise ParseError(f"vertex {name}:{val} out of range")
            key.append(part * host.n + val)
        key.sort()
        ref = (color - 1, tuple(key))
        stored = host.by_key.get(ref[1])
        if stored != (color - 1, label):
            raise EdgeNotInHost(f"no color-{color} edge labeled {label} on {ref[1]}")
        refs.append(ref)
    return refs


def cmd_translate(args) -> int:
    system, sets = _load(args.input)
    host = _build(system, sets)
    with open(args.edges, "r", encoding="utf-8") as fh:
        parsed = parse_host_export(fh.read())
    refs = _edge_refs(host, parsed)
    out = translate_edge_deletion(host, refs, sets)
    print(format_system(system, out), end="")
    return 0


def cmd_epsdelta(args) -> int:
    system, sets = _load(args.input)
    ns = normalize(system)
    q = system.field.q
    p = system.p
    cap = max(1, args.guard // p)

    def generate(trial: int) -> SetFamily:
        rng = random.Random(f"{args.seed}:{trial}")
        fam = []
        for _ in range(p):
            size = rng.randint(0, min(q, cap))
            pool = list(range(q))
            rng.shuffle(pool)
            fam.append(tuple(sorted(pool[:size])))
        return SetFamily(system.field, tuple(fam))

    for n, eps, delta in epsdelta_scan(ns, generate, args.trials, removal_guard=args.guard):
        print(f"{n},{eps},{delta}")
    return 0


def cmd_behrend(args) -> int:
    try:
        if args.elements is not None:
            xs = tuple(int(t) for t in args.elements.split(","))
        elif args.sphere is not None:
            xs = behrend_sphere(args.m, args.sphere[0], args.sphere[1])
        else:
            xs = max_ap3_free(args.m)[1]
        inst = build_lower_bound_instance(args.n, args.m, xs)
    except ValueError as exc:
        print(f"ValueError: {exc}", file=sys.stderr)
        return 2
    print(
        f"{inst.n} {inst.m} {len(inst.X)} {len(inst.S)} "
        f"{inst.ap3_total} {inst.ap3_nontrivial} {inst.bound}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linrem",
        description="Hypergraph encodings and removal searches for linear systems over prime fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(name: str, help_: str):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("input", help="system file")
        return sp

    sp = with_input("normalize", "print the pivot form and its structure")
    sp.set_defaults(fn=cmd_normalize)

    sp = with_input("count", "print the admissible solution count")
    sp.add_argument("--naive", action="store_true", help="full product enumeration")
    sp.add_argument("--guard", type=int, default=10**6, help="enumeration budget")
    sp.set_defaults(fn=cmd_count)

    sp = with_input("represent", "build the host hypergraph and print a summary")
    sp.add_argument("--dump", metavar="PATH", help="write the edge list in export format")
    sp.set_defaults(fn=cmd_represent)

    sp = with_input("verify", "run every representation check")
    sp.add_argument("--naive", action="store_true", help="use the subset-scan copy oracle")
    sp.add_argument("--guard", type=int, default=10**6, help="check budgets")
    sp.add_argument("--workers", type=int, default=1, help="parallel enumeration processes")
    sp.set_defaults(fn=cmd_verify)

    sp = with_input("removal", "exact minimal freeing removal")
    sp.add_argument("--mode", choices=("per-set-max", "total"), default="per-set-max")
    sp.add_argument("--guard", type=int, default=24, help="total family size budget")
    sp.set_defaults(fn=cmd_removal)

    sp = with_input("translate", "apply an edge deletion as element removals")
    sp.add_argument("edges", help="deleted edges in host export format")
    sp.set_defaults(fn=cmd_translate)

    sp = with_input("epsdelta", "random-family ratio scan, CSV n,eps,delta")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--guard", type=int, default=24, help="removal search budget")
    sp.set_defaults(fn=cmd_epsdelta)

    sp = sub.add_parser("behrend", help="lower-bound instance from a progression-free set")
    sp.add_argument("n", type=int)
    sp.add_argument("m", type=int)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--elements", help="comma-separated progression-free subset of 1..m")
    group.add_argument("--sphere", nargs=2, type=int, metavar=("BASE", "DIM"))
    sp.set_defaults(fn=cmd_behrend)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (CheckError, AssertionError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
