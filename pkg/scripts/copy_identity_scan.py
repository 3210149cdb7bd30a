#!/usr/bin/env python3
"""Random-instance scan of the copy-count identity.

Draws full-rank systems over small prime fields with random admissible
sets, builds the colored host for each, and confirms that the number of
colored template copies equals (solution count) * n^(r-1) while the edge
store stays simple. A nonzero mismatch count means a construction bug;
the exit code reflects it so the scan can run in CI.

Usage:
    python scripts/copy_identity_scan.py --seed 7 --count 100
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from collections import Counter

from linrem.errors import InputError
from linrem.field import PrimeField
from linrem.hrep import build_coefficients, build_host
from linrem.linsys import LinearSystem, SetFamily, normalize
from linrem.solutions import count_solutions
from linrem.verify import check_simple, count_copies


def draw_instance(rng: random.Random, copy_cap: int):
    q = rng.choice((5, 7, 11))
    p = rng.randint(3, 5)
    ell = rng.randint(1, min(2, p - 2))
    fld = PrimeField(q)
    rows = [[rng.randrange(q) for _ in range(p)] for _ in range(ell)]
    rhs = [rng.randrange(q) for _ in range(ell)]
    try:
        ns = normalize(LinearSystem.make(fld, rows, rhs))
    except InputError:
        return None
    fam = []
    for _ in range(p):
        style = rng.random()
        if style < 0.08:
            fam.append([])
        elif style < 0.25:
            fam.append(list(range(q)))
        else:
            fam.append(sorted(rng.sample(range(q), rng.randint(1, q))))
    sets = SetFamily.make(fld, fam)
    shell = q ** (ns.uniformity - 1)
    solutions = count_solutions(ns, sets)
    if solutions * shell > copy_cap or sets.total_size() * shell > 5 * copy_cap:
        return None
    return ns, sets, solutions, shell


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=100, help="instances to scan")
    parser.add_argument(
        "--copy-cap", type=int, default=50_000, help="skip instances above this copy count"
    )
    args = parser.parse_args(argv)

    rng = random.Random(args.seed)
    shapes: Counter = Counter()
    mismatches = 0
    collisions = 0
    total_copies = 0
    start = time.perf_counter()
    done = 0
    while done < args.count:
        drawn = draw_instance(rng, args.copy_cap)
        if drawn is None:
            continue
        ns, sets, solutions, shell = drawn
        done += 1
        shapes[(ns.field.q, ns.p, ns.ell)] += 1
        host = build_host(ns, build_coefficients(ns), sets)
        copies = count_copies(host)
        total_copies += copies
        if copies != solutions * shell:
            mismatches += 1
            print(
                f"MISMATCH q={ns.field.q} rows={ns.base.rows} sets={sets.sets}: "
                f"{copies} copies vs {solutions} * {shell}"
            )
        if not check_simple(host).passed:
            collisions += 1
    elapsed = time.perf_counter() - start

    print(f"instances : {done} in {elapsed:.1f}s")
    for (q, p, ell), cnt in sorted(shapes.items()):
        print(f"  q={q:2d} p={p} ell={ell}: {cnt}")
    print(f"copies    : {total_copies}")
    print(f"mismatches: {mismatches}")
    print(f"collisions: {collisions}")
    return 1 if mismatches or collisions else 0


if __name__ == "__main__":
    sys.exit(main())
