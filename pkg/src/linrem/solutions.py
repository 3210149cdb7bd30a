"""Solution counting and exact removal searches for constrained systems.

A solution assigns each unknown a value from its admissible set. Counting
walks the free columns only and solves the diagonal block per row; the
naive mode enumerates full tuples as an independent oracle. Removal
searches are exact branch-and-bound over which elements to delete.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .errors import EdgeNotInHost, EmptyW, NoFreeColumns, SearchBudgetExceeded
from .linsys import (
    LinearSystem,
    NormalizedSystem,
    PinStep,
    SetFamily,
    normalize,
    reduce_degenerate,
)

__all__ = [
    "SetFamily",
    "count_solutions",
    "iter_solutions",
    "is_free",
    "RemovalResult",
    "removal_distance",
    "plan_removal",
    "two_var_removal",
    "min_copy_hitting_set",
    "translate_edge_deletion",
    "epsdelta_scan",
]


def _row_terms(ns: NormalizedSystem) -> list[list[tuple[int, int]]]:
    """Per row, the nonzero free-column (index, coefficient) pairs."""
    free = ns.free_count
    return [
        [(j, row[j]) for j in range(free) if row[j]]
        for row in ns.base.rows
    ]


def iter_solutions(ns: NormalizedSystem, sets: SetFamily) -> Iterator[tuple[int, ...]]:
    """Yield every solution as a full tuple in normalized column order."""
    fld = ns.field
    free = ns.free_count
    sets_n = ns.permute_family(sets).sets
    diag_sets = [frozenset(sets_n[ns.diag_cols[i]]) for i in range(ns.ell)]
    terms = _row_terms(ns)
    diag_coef = [ns.base.rows[i][ns.diag_cols[i]] for i in range(ns.ell)]
    rhs = ns.base.rhs
    for xs in itertools.product(*sets_n[:free]):
        out = list(xs)
        ok = True
        for i in range(ns.ell):
            acc = rhs[i]
            for j, c in terms[i]:
                acc -= c * xs[j]
            val = fld.div(acc % fld.q, diag_coef[i])
            if val not in diag_sets[i]:
                ok = False
                break
            out.append(val)
        if ok:
            yield tuple(out)


def count_solutions(
    ns: NormalizedSystem,
    sets: SetFamily,
    mode: str = "structured",
    guard: int = 10**6,
) -> int:
    """Number of admissible solutions.

    structured: enumerate only free columns that actually occur in some
    row; columns with an all-zero coefficient multiply the count by their
    set size without being enumerated. naive: full product enumeration
    over every set, checking the system directly (guarded).
    """
    fld = ns.field
    sets_n = ns.permute_family(sets).sets
    if mode == "naive":
        work = 1
        for s in sets_n:
            work *= max(1, len(s))
        if work > guard:
            raise SearchBudgetExceeded(f"naive count needs {work} tuples, guard is {guard}")
        return sum(1 for tup in itertools.product(*sets_n) if ns.base.is_solution(tup))
    if mode != "structured":
        raise ValueError(f"unknown mode {mode!r}")
    free = ns.free_count
    live = sorted({j for terms in _row_terms(ns) for j, _ in terms})
    multiplier = 1
    for j in range(free):
        if j not in live:
            multiplier *= len(sets_n[j])
    if multiplier == 0:
        return 0
    terms = _row_terms(ns)
    diag_sets = [frozenset(sets_n[ns.diag_cols[i]]) for i in range(ns.ell)]
    diag_coef = [ns.base.rows[i][ns.diag_cols[i]] for i in range(ns.ell)]
    rhs = ns.base.rhs
    pos = {j: t for t, j in enumerate(live)}
    row_parts = [[(pos[j], c) for j, c in terms[i]] for i in range(ns.ell)]
    count = 0
    for xs in itertools.product(*(sets_n[j] for j in live)):
        for i in range(ns.ell):
            acc = rhs[i]
            for t, c in row_parts[i]:
                acc -= c * xs[t]
            if fld.div(acc % fld.q, diag_coef[i]) not in diag_sets[i]:
                break
        else:
            count += 1
    return count * multiplier


def is_free(ns: NormalizedSystem, sets: SetFamily) -> bool:
    """True when no admissible solution exists."""
    return count_solutions(ns, sets) == 0


# ---------------------------------------------------------------------------
# Exact removal searches.


@dataclass(frozen=True)
class RemovalResult:
    """Elements to delete per original set, with both cost readings."""

    removed: tuple[tuple[int, ...], ...]
    mode: str

    @property
    def budget(self) -> int:
        return max((len(r) for r in self.removed), default=0)

    @property
    def total(self) -> int:
        return sum(len(r) for r in self.removed)

    def apply(self, sets: SetFamily) -> SetFamily:
        return sets.with_removed(self.removed)


def _solution_elements(ns: NormalizedSystem, sets: SetFamily) -> list[tuple[tuple[int, int], ...]]:
    """Each solution as its set of (original column, value) elements."""
    out = []
    for sol in iter_solutions(ns, sets):
        out.append(tuple(sorted((ns.perm[j], v) for j, v in enumerate(sol))))
    out.sort()
    return out


def _pack(result: dict[int, set[int]], p: int, mode: str) -> RemovalResult:
    removed = tuple(tuple(sorted(result.get(i, ()))) for i in range(p))
    return RemovalResult(removed, mode)


def removal_distance(
    ns: NormalizedSystem,
    sets: SetFamily,
    mode: str = "per-set-max",
    guard: int = 24,
    node_budget: int = 2_000_000,
) -> RemovalResult:
    """Exact cheapest removal that leaves the family free.

    per-set-max minimizes the largest per-set deletion count; total
    minimizes the overall number of deleted elements. Both are certified
    minimal by exhaustive branch and bound over the solution list.
    """
    if sets.total_size() > guard:
        raise SearchBudgetExceeded(f"family size {sets.total_size()} exceeds guard {guard}")
    if mode not in ("per-set-max", "total"):
        raise ValueError(f"unknown mode {mode!r}")
    sols = _solution_elements(ns, sets)
    return _search_removal(sols, sets, mode, node_budget)


def _search_removal(
    sols: list[tuple[tuple[int, int], ...]],
    sets: SetFamily,
    mode: str,
    node_budget: int,
) -> RemovalResult:
    """Branch-and-bound over solutions given as (column, value) element sets."""
    if not sols:
        return _pack({}, sets.p, mode)

    elements = sorted({e for sol in sols for e in sol})
    hit = {e: 0 for e in elements}
    for idx, sol in enumerate(sols):
        for e in sol:
            hit[e] |= 1 << idx
    all_mask = (1 << len(sols)) - 1
    nodes = 0

    def first_unhit(covered: int) -> int:
        rem = all_mask & ~covered
        return (rem & -rem).bit_length() - 1

    if mode == "per-set-max":
        for bound in range(1, max(len(s) for s in sets.sets) + 1):
            chosen: list[tuple[int, int]] = []
            counts: dict[int, int] = {}

            def feasible(covered: int) -> bool:
                nonlocal nodes
                nodes += 1
                if nodes > node_budget:
                    raise SearchBudgetExceeded("removal search node budget exhausted")
                if covered == all_mask:
                    return True
                for e in sols[first_unhit(covered)]:
                    if counts.get(e[0], 0) < bound:
                        counts[e[0]] = counts.get(e[0], 0) + 1
                        chosen.append(e)
                        if feasible(covered | hit[e]):
                            return True
                        chosen.pop()
                        counts[e[0]] -= 1
                return False

            if feasible(0):
                grouped: dict[int, set[int]] = {}
                for col, val in chosen:
                    grouped.setdefault(col, set()).add(val)
                return _pack(grouped, sets.p, mode)
        raise AssertionError("deleting everything always frees the family")

    # total mode: plain set-cover branch and bound.
    best: list[tuple[int, int]] | None = None
    chosen = []

    def lower_bound(covered: int) -> int:
        taken = 0
        used = 0
        for idx, sol in enumerate(sols):
            if covered >> idx & 1:
                continue
            mask = 0
            for e in sol:
                mask |= hit[e]
            if not mask & used:
                taken += 1
            used |= mask
        return taken

    def search(covered: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded("removal search node budget exhausted")
        if covered == all_mask:
            if best is None or len(chosen) < len(best):
                best = list(chosen)
            return
        if best is not None and len(chosen) + lower_bound(covered) >= len(best):
            return
        for e in sols[first_unhit(covered)]:
            chosen.append(e)
            search(covered | hit[e])
            chosen.pop()

    search(0)
    assert best is not None
    grouped = {}
    for col, val in best:
        grouped.setdefault(col, set()).add(val)
    return _pack(grouped, sets.p, mode)


def _residual_solutions(red) -> list[tuple[int, ...]]:
    """Solutions of a reduction residual by direct product enumeration."""
    return [
        tup
        for tup in itertools.product(*red.sets.sets)
        if red.system.is_solution(tup)
    ]


def plan_removal(
    sys: LinearSystem,
    sets: SetFamily,
    mode: str = "per-set-max",
    guard: int = 24,
    node_budget: int = 2_000_000,
) -> RemovalResult:
    """Freeing removal for any full-rank system, in original column order.

    Normalizable systems go straight to the exact search. Systems with
    short rows are reduced first: a pinned unknown makes one deletion
    optimal, a two-variable residual uses its dedicated argument, and the
    zero-row outcome always stems from a pin. For folded systems the
    search covers the surviving columns only; spreading deletions over a
    folded-away column is not considered.
    """
    if sets.total_size() > guard:
        raise SearchBudgetExceeded(f"family size {sets.total_size()} exceeds guard {guard}")
    if mode not in ("per-set-max", "total"):
        raise ValueError(f"unknown mode {mode!r}")
    try:
        ns = normalize(sys)
    except (EmptyW, NoFreeColumns):
        pass
    else:
        return removal_distance(ns, sets, mode, guard=guard, node_budget=node_budget)
    red = reduce_degenerate(sys, sets)
    if red.kind == "empty":
        return _pack({}, sets.p, mode)
    if red.kind == "unconstrained":
        # Zero rows remain only when the final step was a pin.
        sols = [()] if all(red.sets.sets) else []
    else:
        sols = _residual_solutions(red)
    if not sols:
        return _pack({}, sets.p, mode)
    pins = [s for s in red.trace.steps if isinstance(s, PinStep)]
    if pins:
        # Every solution passes through the pinned value, so one deletion
        # reaches the minimum possible nonzero cost.
        return _pack({pins[0].column: {pins[0].value}}, sets.p, mode)
    if red.kind == "two_var":
        inner = two_var_removal(red.system, red.sets)
        grouped = {
            red.kept_columns[j]: set(vals)
            for j, vals in enumerate(inner.removed)
            if vals
        }
        return _pack(grouped, sets.p, mode)
    elems = sorted(
        tuple(sorted((red.kept_columns[j], v) for j, v in enumerate(sol))) for sol in sols
    )
    return _search_removal(elems, sets, mode, node_budget)


def two_var_removal(sys: LinearSystem | NormalizedSystem, sets: SetFamily) -> RemovalResult:
    """Cheapest freeing removal for a single equation with two live unknowns.

    Either empty the smallest set whose unknown has a zero coefficient, or
    delete the first coordinate of every solution pair from the lower
    participating set. Returns the cheaper option under the per-set-max
    reading; ties prefer the pair deletion. Accepts the raw system or a
    normalized wrapper; sets and result are in original column order.
    """
    if isinstance(sys, NormalizedSystem):
        inner = two_var_removal(sys.base, sys.permute_family(sets))
        removed: list[tuple[int, ...]] = [()] * sets.p
        for j, vals in enumerate(inner.removed):
            removed[sys.perm[j]] = vals
        return RemovalResult(tuple(removed), inner.mode)
    if sys.ell != 1:
        raise ValueError("two_var_removal wants a single equation")
    fld = sys.field
    row = sys.rows[0]
    live = [j for j, c in enumerate(row) if c]
    if len(live) != 2:
        raise ValueError("two_var_removal wants exactly two nonzero coefficients")
    u, v = live
    idle = [j for j in range(sys.p) if j not in (u, v)]
    if any(not sets.sets[j] for j in idle):
        return _pack({}, sets.p, "per-set-max")
    v_vals = frozenset(sets.sets[v])
    hit_u = sorted(
        su
        for su in sets.sets[u]
        if fld.div(fld.sub(sys.rhs[0], fld.mul(row[u], su)), row[v]) in v_vals
    )
    if not hit_u:
        return _pack({}, sets.p, "per-set-max")
    pair_cost = len(hit_u)
    if idle:
        smallest = min(idle, key=lambda j: (len(sets.sets[j]), j))
        if len(sets.sets[smallest]) < pair_cost:
            return _pack({smallest: set(sets.sets[smallest])}, sets.p, "per-set-max")
    return _pack({u: set(hit_u)}, sets.p, "per-set-max")


# ---------------------------------------------------------------------------
# Hypergraph-side removal plumbing.


def min_copy_hitting_set(
    host, copies: Sequence, guard: int = 10**4, node_budget: int = 100_000
) -> tuple:
    """Exact minimum edge set meeting every copy's edge list.

    Copies only need an `edges` attribute (tuple of edge references).
    Returns the chosen edges as a sorted tuple. The branch-and-bound
    raises SearchBudgetExceeded past node_budget nodes, so hard inputs
    fail loudly instead of hanging.
    """
    if len(copies) > guard:
        raise SearchBudgetExceeded(f"{len(copies)} copies exceed hitting-set guard {guard}")
    if not copies:
        return ()
    copy_edges = [tuple(c.edges) for c in copies]
    edge_hits: dict = {}
    for idx, edges in enumerate(copy_edges):
        for e in edges:
            edge_hits[e] = edge_hits.get(e, 0) | 1 << idx
    all_mask = (1 << len(copy_edges)) - 1

    # Greedy cover for the initial upper bound.
    best: list = []
    covered = 0
    while covered != all_mask:
        e = max(sorted(edge_hits), key=lambda e: bin(edge_hits[e] & ~covered).count("1"))
        best.append(e)
        covered |= edge_hits[e]

    def lower_bound(covered: int) -> int:
        taken = 0
        used = 0
        for idx, edges in enumerate(copy_edges):
            if covered >> idx & 1:
                continue
            mask = 0
            for e in edges:
                mask |= edge_hits[e]
            if not mask & used:
                taken += 1
            used |= mask
        return taken

    chosen: list = []
    nodes = 0

    def search(covered: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded(
                f"hitting-set search passed {node_budget} nodes"
            )
        if covered == all_mask:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + lower_bound(covered) >= len(best):
            return
        rem = all_mask & ~covered
        idx = (rem & -rem).bit_length() - 1
        seen: set[int] = set()
        for e in copy_edges[idx]:
            gain = edge_hits[e] & ~covered
            # Edges with identical remaining coverage lead to identical
            # subtrees; one representative preserves the minimum size.
            if gain in seen:
                continue
            seen.add(gain)
            chosen.append(e)
            search(covered | gain)
            chosen.pop()

    search(0)
    return tuple(sorted(best))


def translate_edge_deletion(host, edges: Iterable, sets: SetFamily) -> SetFamily:
    """Turn an edge deletion into element removals from the original sets.

    A value s leaves set i exactly when the deletion contains at least
    n^(r-1)/p edges of color i labeled s; the comparison is done in exact
    integers as p*count >= n^(r-1).
    """
    p = host.ns.p
    threshold = host.n ** (host.r - 1)
    tally: dict[tuple[int, int], int] = {}
    for ref in edges:
        color, vkey = ref
        stored = host.by_key.get(vkey)
        if stored is None or stored[0] != color:
            raise EdgeNotInHost(f"edge {ref!r} is not in the host")
        tally[(color, stored[1])] = tally.get((color, stored[1]), 0) + 1
    removals: list[set[int]] = [set() for _ in range(p)]
    for (color, label), cnt in sorted(tally.items()):
        if p * cnt >= threshold:
            removals[host.ns.perm[color]].add(label)
    return sets.with_removed(removals)


def epsdelta_scan(
    ns: NormalizedSystem,
    family_generator: Callable[[int], SetFamily],
    trials: int,
    removal_guard: int = 24,
) -> list[tuple[int, float, float]]:
    """Ratio records (n, solutions/n^(p-ell), removal budget/n) per trial.

    Deterministic when the generator is; a solution-free trial records
    zero for both ratios.
    """
    n = ns.field.q
    denom = n ** ns.free_count
    records = []
    for t in range(trials):
        sets = family_generator(t)
        count = count_solutions(ns, sets)
        if count == 0:
            records.append((n, 0.0, 0.0))
            continue
        removal = removal_distance(ns, sets, "per-set-max", guard=removal_guard)
        records.append((n, count / denom, removal.budget / n))
    return records
