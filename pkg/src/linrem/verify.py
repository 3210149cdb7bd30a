"""Independent verification of a built host.

Copy enumeration comes in two routes that share no logic with the
construction: a per-part walk driven by the edge indexes, and a naive
scan over vertex subsets using a backtracking placement test. Agreement
between the routes, the edge bookkeeping checks, and the copy-count
identity together certify the representation.
"""

from __future__ import annotations

import itertools
import math
import multiprocessing
import time
from dataclasses import dataclass, field

from .errors import MissingEdge, SearchBudgetExceeded
from .hrep import Host, Template, VKey, copies_for_solution
from .solutions import count_solutions, iter_solutions

_WORK: Host | None = None


def _iter_per_part(host: Host, x0: int | None = None):
    """Copies found by walking one vertex per part, optionally fixing x_1."""
    n = host.n
    width = host.r - 1
    first = range(n) if x0 is None else (x0,)
    for xs in itertools.product(first, *[range(n)] * (width - 1)):
        cands = []
        for j in range(host.free):
            vals = host.x_index[j].get(xs)
            if not vals:
                break
            cands.append(vals)
        else:
            for us in itertools.product(*cands):
                for i in range(host.ell):
                    stored = host.by_key.get(host.diag_key(i, xs, us))
                    if stored is None or stored[0] != host.free + i:
                        break
                else:
                    yield tuple(t * n + x for t, x in enumerate(xs)) + tuple(
                        (width + j) * n + u for j, u in enumerate(us)
                    )


def _init_worker(host: Host) -> None:
    global _WORK
    _WORK = host


def _count_x0(x0: int) -> int:
    assert _WORK is not None
    return sum(1 for _ in _iter_per_part(_WORK, x0))


def _enum_x0(x0: int) -> list[VKey]:
    assert _WORK is not None
    return list(_iter_per_part(_WORK, x0))


def _pool(host: Host, workers: int):
    ctx = multiprocessing.get_context("fork")
    return ctx.Pool(min(workers, host.n), initializer=_init_worker, initargs=(host,))


def count_copies(host: Host, workers: int = 1) -> int:
    """Number of template copies, without materializing them."""
    if workers <= 1:
        return sum(1 for _ in _iter_per_part(host))
    with _pool(host, workers) as pool:
        return sum(pool.map(_count_x0, range(host.n)))


def _has_matching(cands: list[set]) -> bool:
    """Can every slot pick a distinct value from its candidate set."""
    match: dict = {}

    def assign(i: int, seen: set) -> bool:
        for v in cands[i]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match or assign(match[v], seen):
                match[v] = i
                return True
        return False

    return all(assign(i, set()) for i in range(len(cands)))


def subset_spans_copy(host: Host, subset, template: Template | None = None) -> bool:
    """Does this vertex subset carry a colored copy of the template.

    Makes no assumption about how the subset meets the parts: it collects
    the contained edges per color and searches for an injective placement
    of the template onto one edge of each color.
    """
    verts = tuple(sorted(subset))
    assert len(set(verts)) == host.k
    tmpl = template if template is not None else host.template
    contained: list[list[VKey]] = [[] for _ in range(host.free + host.ell)]
    for combo in itertools.combinations(verts, host.r):
        stored = host.by_key.get(combo)
        if stored is not None:
            contained[stored[0]].append(combo)
    if any(not c for c in contained):
        return False
    edge_sets = [set(e.vertices) for e in tmpl.edges]
    for choice in itertools.product(*contained):
        images = [set(c) for c in choice]
        cands = []
        for w in tmpl.vertices:
            allowed: set | None = None
            banned: set = set()
            for es, im in zip(edge_sets, images):
                if w in es:
                    allowed = set(im) if allowed is None else allowed & im
                else:
                    banned |= im
            assert allowed is not None
            cand = allowed - banned
            if not cand:
                break
            cands.append(cand)
        else:
            if _has_matching(cands):
                return True
    return False


def enumerate_copies(
    host: Host,
    mode: str = "per-part",
    guard: int = 10**6,
    subset_cap: int = 500_000,
    workers: int = 1,
    template: Template | None = None,
) -> list[VKey]:
    """All copies as sorted vertex tuples, in sorted order.

    per-part walks one vertex per part. naive scans vertex subsets with
    subset_spans_copy; above subset_cap subsets it first certifies from
    the stored edges that only one-per-part subsets can span, and scans
    those. Both naive routes are complete. An independently built
    template can be passed to decouple the check from the host's own.
    """
    if mode == "per-part":
        if workers <= 1:
            return sorted(_iter_per_part(host))
        with _pool(host, workers) as pool:
            chunks = pool.map(_enum_x0, range(host.n))
        return sorted(itertools.chain.from_iterable(chunks))
    if mode != "naive":
        raise ValueError(f"unknown mode {mode!r}")
    n, k = host.n, host.k
    if n**k > guard:
        raise SearchBudgetExceeded(f"naive scan needs {n ** k} tuples, guard is {guard}")
    colors = host.free + host.ell
    seen_color = [False] * colors
    for color, _, _ in host.records:
        seen_color[color] = True
    if not all(seen_color):
        return []
    if math.comb(n * k, k) <= subset_cap:
        return sorted(
            combo
            for combo in itertools.combinations(range(n * k), k)
            if subset_spans_copy(host, combo, template)
        )
    # Every edge of color c touches all parts in common[c]; if each part is
    # unavoidable for some color, a subset missing a part contains no edge
    # of that color and cannot span. That confines the scan to one vertex
    # per part.
    common = [set(range(k)) for _ in range(colors)]
    for color, _, key in host.records:
        common[color] &= {v // n for v in key}
    for part in range(k):
        if not any(part in com for com in common):
            raise SearchBudgetExceeded(
                f"{math.comb(n * k, k)} subsets exceed cap {subset_cap} and part "
                f"{part} is avoidable, so the scan cannot be confined"
            )
    return sorted(
        combo
        for combo in itertools.product(*(range(part * n, (part + 1) * n) for part in range(k)))
        if subset_spans_copy(host, combo, template)
    )


# ---------------------------------------------------------------------------
# Representation checks.


@dataclass
class CheckEntry:
    name: str
    passed: bool
    witness: str = ""

    def render(self) -> str:
        tail = f" {self.witness}" if self.witness else ""
        return f"CHECK {self.name} {'PASS' if self.passed else 'FAIL'}{tail}"


@dataclass
class VerificationReport:
    entries: list[CheckEntry] = field(default_factory=list)
    edges: int = 0
    solutions: int = 0
    copies: int = 0
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def render(self) -> str:
        lines = [e.render() for e in self.entries]
        lines.append(f"COUNTS edges={self.edges} T={self.solutions} copies={self.copies}")
        return "\n".join(lines) + "\n"


def check_simple(host: Host) -> CheckEntry:
    """No vertex set may carry two edges, whatever their colors."""
    seen: dict[VKey, tuple[int, int]] = {}
    for color, label, key in host.records:
        if key in seen:
            return CheckEntry(
                "simple",
                False,
                f"vertices {key} carry {seen[key]} and {(color, label)}",
            )
        seen[key] = (color, label)
    return CheckEntry("simple", True)


def check_edge_counts(host: Host) -> CheckEntry:
    """Each admissible label owns exactly n^(r-1) edges of its color."""
    expected = host.n ** (host.r - 1)
    want = {
        (color, label)
        for color in range(host.free + host.ell)
        for label in host.sets_n.sets[color]
    }
    for pair in sorted(want):
        got = host.counts.get(pair, 0)
        if got != expected:
            return CheckEntry(
                "edge-counts",
                False,
                f"color {pair[0] + 1} label {pair[1]} has {got} edges, wants {expected}",
            )
    stray = sorted(set(host.counts) - want)
    if stray:
        return CheckEntry(
            "edge-counts",
            False,
            f"color {stray[0][0] + 1} label {stray[0][1]} is not admissible",
        )
    total = expected * host.sets_n.total_size()
    if len(host.records) != total:
        return CheckEntry(
            "edge-counts", False, f"{len(host.records)} edges stored, wants {total}"
        )
    return CheckEntry("edge-counts", True)


def check_edge_equation(host: Host, guard: int = 10**6) -> CheckEntry:
    """Edge presence must match set membership on every candidate tuple.

    For each row, every choice of off-block x values and support-part and
    pivot-part vertices either solves the row's equation with an
    admissible label and carries exactly that edge, or does neither.
    Work is ell * n^r tuples, guarded.
    """
    ns = host.ns
    n = host.n
    width = host.r - 1
    if ns.ell * n**host.r > guard:
        raise SearchBudgetExceeded(
            f"edge equation check needs {ns.ell * n ** host.r} tuples, guard is {guard}"
        )
    mix = host.coeffs.mix
    for i in range(ns.ell):
        row = ns.base.rows[i]
        d = ns.diag_cols[i]
        m_i = ns.pivots[i]
        outs = host.coeffs.outside[i]
        support = ns.support[i]
        admissible = frozenset(host.sets_n.sets[d])
        inv_d = ns.field.inv(row[d])
        for xs in itertools.product(range(n), repeat=len(outs)):
            xkey = tuple(t * n + x for t, x in zip(outs, xs))
            for ys in itertools.product(range(n), repeat=len(support)):
                ykey = tuple((width + j) * n + y for j, y in zip(support, ys))
                # Zero-extending x to the block positions recovers the
                # generating labels; the block contributions cancel.
                svals = [
                    (y - sum(mix[j][t] * x for t, x in zip(outs, xs))) % n
                    for j, y in zip(support, ys)
                ]
                for ym in range(n):
                    s_m = (ym - sum(mix[m_i][t] * x for t, x in zip(outs, xs))) % n
                    acc = ns.base.rhs[i] - s_m
                    for j, s in zip(support, svals):
                        acc -= row[j] * s
                    label = acc * inv_d % n
                    member = label in admissible
                    key = xkey + ykey + ((width + m_i) * n + ym,)
                    stored = host.by_key.get(key)
                    present = stored is not None and stored[0] == host.free + i
                    if member != present or (present and stored[1] != label):
                        return CheckEntry(
                            "edge-equation",
                            False,
                            f"row {i + 1} vertices {key}: membership says "
                            f"{'edge' if member else 'no edge'} with label {label}, "
                            f"store says {stored}",
                        )
    return CheckEntry("edge-equation", True)


def check_per_solution(host: Host) -> CheckEntry:
    """Each solution spans its full copy family, pairwise edge-disjoint."""
    expected = host.n ** (host.r - 1)
    for sol in iter_solutions(host.ns, host.sets):
        try:
            copies = copies_for_solution(host, sol)
        except MissingEdge as exc:
            return CheckEntry("per-solution", False, f"solution {sol}: {exc}")
        if len(copies) != expected:
            return CheckEntry(
                "per-solution",
                False,
                f"solution {sol} spans {len(copies)} copies, wants {expected}",
            )
        owner: dict = {}
        for copy in copies:
            for ref in copy.edges:
                if ref in owner and owner[ref] != copy.xs:
                    return CheckEntry(
                        "per-solution",
                        False,
                        f"solution {sol}: edge {ref} shared by x={owner[ref]} and x={copy.xs}",
                    )
                owner[ref] = copy.xs
    return CheckEntry("per-solution", True)


def check_copy_structure(host: Host, copies: list[VKey]) -> CheckEntry:
    """Every enumerated copy must come from an admissible solution."""
    ns = host.ns
    n = host.n
    width = host.r - 1
    mix = host.coeffs.mix
    admissible = host.sets_n.frozensets()
    for vkey in copies:
        if tuple(v // n for v in vkey) != tuple(range(host.k)):
            return CheckEntry(
                "copy-structure", False, f"copy {vkey} does not meet every part once"
            )
        xs = tuple(v % n for v in vkey[:width])
        us = tuple(v % n for v in vkey[width:])
        sol = [
            (us[j] - sum(c * x for c, x in zip(mix[j], xs))) % n for j in range(host.free)
        ]
        for i in range(ns.ell):
            row = ns.base.rows[i]
            acc = ns.base.rhs[i] - sol[ns.pivots[i]]
            for j in ns.support[i]:
                acc -= row[j] * sol[j]
            sol.append(acc * ns.field.inv(row[ns.diag_cols[i]]) % n)
        for col, val in enumerate(sol):
            if val not in admissible[col]:
                return CheckEntry(
                    "copy-structure",
                    False,
                    f"copy {vkey} needs value {val} in set {col + 1}, not admissible",
                )
        assert ns.base.is_solution(tuple(sol))
    return CheckEntry("copy-structure", True)


def check_representation(
    host: Host,
    mode: str = "per-part",
    naive_guard: int = 10**6,
    ee_guard: int = 10**6,
    workers: int = 1,
) -> VerificationReport:
    """Run the full check battery and collect a printable report.

    The edge-equation check is skipped (omitted from the report) when its
    tuple count exceeds ee_guard.
    """
    start = time.perf_counter()
    report = VerificationReport()
    report.entries.append(check_simple(host))
    report.entries.append(check_edge_counts(host))
    copies = enumerate_copies(host, mode=mode, guard=naive_guard, workers=workers)
    solutions = count_solutions(host.ns, host.sets)
    expected = solutions * host.n ** (host.r - 1)
    entry = CheckEntry("copy-count", len(copies) == expected)
    if not entry.passed:
        entry.witness = f"{len(copies)} copies, wants {expected}"
    report.entries.append(entry)
    report.entries.append(check_per_solution(host))
    report.entries.append(check_copy_structure(host, copies))
    if host.ns.ell * host.n**host.r <= ee_guard:
        report.entries.append(check_edge_equation(host, guard=ee_guard))
    report.edges = len(host.records)
    report.solutions = solutions
    report.copies = len(copies)
    report.elapsed = time.perf_counter() - start
    return report
