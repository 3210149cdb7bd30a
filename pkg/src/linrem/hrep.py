"""Colored hypergraph encoding of a constrained linear system.

The host has one vertex part per template x-position (r-1 parts named
V1..V{r-1}) and one per free column (parts U1..U{p-ell}), each a copy of
the field. Color j < p-ell edges join every x-tuple to one U_j vertex per
admissible label; color p-ell+i edges encode row i's equation. Every
admissible solution then spans n^(r-1) pairwise edge-disjoint colored
copies of a fixed template, and nothing else does.

Vertex ids are part*n + value, so tuples built in part order are already
sorted and double as canonical edge keys.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EmptyW, MissingEdge, ParseError, SimplicityViolation
from .linsys import NormalizedSystem, SetFamily, mat_det

VKey = tuple[int, ...]
EdgeRef = tuple[int, VKey]


@dataclass(frozen=True)
class CoefficientTables:
    """Linear data driving edge placement.

    mix[j] turns an x-tuple into the U_j vertex: vertex = label + mix[j].x.
    closing[i] holds, per x-position outside row i's block, the coefficient
    used when locating the color-(free+i) edge's pivot-part vertex.
    sep[i] is nonsingular and maps x to the non-label vertices of that
    edge, which is what keeps the copies of one solution edge-disjoint.
    """

    mix: tuple[tuple[int, ...], ...]
    sep: tuple[tuple[tuple[int, ...], ...], ...]
    outside: tuple[tuple[int, ...], ...]
    closing: tuple[tuple[int, ...], ...]


def build_coefficients(ns: NormalizedSystem) -> CoefficientTables:
    fld = ns.field
    free = ns.free_count
    width = ns.uniformity - 1
    if any(not w for w in ns.support):
        raise EmptyW("every row needs nonempty support to build coefficients")
    mix = [[0] * width for _ in range(free)]
    for i in range(ns.ell):
        m_i = ns.pivots[i]
        row = ns.base.rows[i]
        for g, t in enumerate(ns.blocks[i]):
            j_g = ns.support[i][g]
            mix[j_g][t] = 1
            mix[m_i][t] = fld.neg(row[j_g])
    # The support columns must cancel the pivot contribution exactly.
    for i in range(ns.ell):
        row = ns.base.rows[i]
        for g, t in enumerate(ns.blocks[i]):
            s = sum(mix[j][t] * row[j] for j in ns.support[i]) % fld.q
            assert s == row[ns.support[i][g]] == fld.neg(mix[ns.pivots[i]][t])
    sep = []
    outside = []
    closing = []
    for i in range(ns.ell):
        block = set(ns.blocks[i])
        mat = []
        for t in range(width):
            if t in block:
                g = ns.blocks[i].index(t)
                mat.append(tuple(mix[ns.support[i][g]]))
            else:
                mat.append(tuple(1 if c == t else 0 for c in range(width)))
        assert mat_det(fld, mat) != 0
        sep.append(tuple(mat))
        outs = tuple(t for t in range(width) if t not in block)
        outside.append(outs)
        row = ns.base.rows[i]
        closing.append(
            tuple(
                (mix[ns.pivots[i]][t] + sum(mix[j][t] * row[j] for j in ns.support[i])) % fld.q
                for t in outs
            )
        )
    return CoefficientTables(
        mix=tuple(tuple(r) for r in mix),
        sep=tuple(sep),
        outside=tuple(outside),
        closing=tuple(closing),
    )


@dataclass(frozen=True)
class TemplateEdge:
    color: int
    vertices: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class Template:
    """The colored pattern whose copies count solutions."""

    uniformity: int
    vertex_count: int
    free: int
    ell: int
    vertices: tuple[tuple[str, int], ...]
    edges: tuple[TemplateEdge, ...]


def build_template(ns: NormalizedSystem) -> Template:
    r = ns.uniformity
    free = ns.free_count
    xs = [("x", t) for t in range(r - 1)]
    us = [("u", j) for j in range(free)]
    edges = []
    for j in range(free):
        edges.append(TemplateEdge(j, tuple(sorted(xs + [us[j]]))))
    for i in range(ns.ell):
        block = set(ns.blocks[i])
        verts = [v for v in xs if v[1] not in block]
        verts += [us[j] for j in ns.support[i]]
        verts.append(us[ns.pivots[i]])
        edges.append(TemplateEdge(free + i, tuple(sorted(verts))))
    for e in edges:
        assert len(e.vertices) == r
    return Template(
        uniformity=r,
        vertex_count=ns.vertex_count,
        free=free,
        ell=ns.ell,
        vertices=tuple(xs + us),
        edges=tuple(edges),
    )


@dataclass(frozen=True)
class ColoredCopy:
    """One template copy: x-parameter, U-part vertices, labels, edges."""

    xs: tuple[int, ...]
    us: tuple[int, ...]
    labels: tuple[int, ...]
    edges: tuple[EdgeRef, ...]

    def vertices(self, n: int, width: int) -> VKey:
        return tuple(t * n + v for t, v in enumerate(self.xs)) + tuple(
            (width + j) * n + v for j, v in enumerate(self.us)
        )


class Host:
    """Materialized edge store with lookup indexes.

    records is the authoritative edge list (color, label, vertex key);
    by_key maps a vertex key to its unique (color, label); x_index[j]
    maps an x-tuple to the U_j vertex values reachable under color j,
    in label order.
    """

    def __init__(self, ns: NormalizedSystem, coeffs: CoefficientTables, template: Template, sets: SetFamily):
        self.ns = ns
        self.coeffs = coeffs
        self.template = template
        self.sets = sets
        self.sets_n = ns.permute_family(sets)
        self.n = ns.field.q
        self.r = ns.uniformity
        self.k = ns.vertex_count
        self.free = ns.free_count
        self.ell = ns.ell
        self.records: list[tuple[int, int, VKey]] = []
        self.by_key: dict[VKey, tuple[int, int]] = {}
        self.x_index: list[dict[tuple[int, ...], list[int]]] = [dict() for _ in range(self.free)]
        self.counts: dict[tuple[int, int], int] = {}

    def part_name(self, part: int) -> str:
        width = self.r - 1
        return f"V{part + 1}" if part < width else f"U{part - width + 1}"

    def diag_key(self, i: int, xs, us) -> VKey:
        """Vertex key of the color-(free+i) edge the copy parameters select."""
        n = self.n
        width = self.r - 1
        key = tuple(t * n + xs[t] for t in self.coeffs.outside[i])
        key += tuple((width + j) * n + us[j] for j in self.ns.support[i])
        return key + ((width + self.ns.pivots[i]) * n + us[self.ns.pivots[i]],)

    def edge_count(self) -> int:
        return len(self.records)


def iter_host_edges(ns: NormalizedSystem, coeffs: CoefficientTables, sets_n: SetFamily):
    """Generate every edge as (color, label, vertex key), deterministically.

    Streaming form of the host; build_host materializes it. Colors ascend,
    labels ascend within a color, vertex tuples ascend within a label.
    """
    n = ns.field.q
    width = ns.uniformity - 1
    free = ns.free_count
    rows = ns.base.rows
    rhs = ns.base.rhs
    for j in range(free):
        a = coeffs.mix[j]
        upart = width + j
        for label in sets_n.sets[j]:
            for xs in itertools.product(range(n), repeat=width):
                y = (label + sum(c * x for c, x in zip(a, xs))) % n
                key = tuple(t * n + x for t, x in enumerate(xs)) + (upart * n + y,)
                yield j, label, key
    for i in range(ns.ell):
        color = free + i
        d = ns.diag_cols[i]
        m_i = ns.pivots[i]
        support = ns.support[i]
        outs = coeffs.outside[i]
        closing = coeffs.closing[i]
        for label in sets_n.sets[d]:
            base = (rhs[i] - rows[i][d] * label) % n
            for xs in itertools.product(range(n), repeat=len(outs)):
                xacc = base + sum(c * x for c, x in zip(closing, xs))
                xkey = tuple(t * n + x for t, x in zip(outs, xs))
                for ys in itertools.product(range(n), repeat=len(support)):
                    y = (xacc - sum(rows[i][j] * yv for j, yv in zip(support, ys))) % n
                    key = xkey + tuple((width + j) * n + yv for j, yv in zip(support, ys))
                    key += ((width + m_i) * n + y,)
                    yield color, label, key


def build_host(
    ns: NormalizedSystem,
    coeffs: CoefficientTables,
    sets: SetFamily,
    template: Template | None = None,
) -> Host:
    """Materialize the edge store for a family given in original order."""
    if template is None:
        template = build_template(ns)
    host = Host(ns, coeffs, template, sets)
    width = host.r - 1
    for color, label, key in iter_host_edges(ns, coeffs, host.sets_n):
        clash = host.by_key.get(key)
        if clash is not None:
            raise SimplicityViolation(f"edge {key} carries both {clash} and {(color, label)}")
        host.by_key[key] = (color, label)
        host.records.append((color, label, key))
        host.counts[(color, label)] = host.counts.get((color, label), 0) + 1
        if color < host.free:
            xs = tuple(v % host.n for v in key[:width])
            host.x_index[color].setdefault(xs, []).append(key[-1] % host.n)
    return host


def copies_for_solution(host: Host, solution: tuple[int, ...]) -> list[ColoredCopy]:
    """The n^(r-1) copies a full normalized-order solution spans.

    Raises MissingEdge if any expected edge is absent or carries the wrong
    color or label, so a successful return certifies the copy family.
    """
    ns = host.ns
    n = host.n
    width = host.r - 1
    free = host.free
    mix = host.coeffs.mix
    out = []
    for xs in itertools.product(range(n), repeat=width):
        us = tuple(
            (solution[j] + sum(c * x for c, x in zip(mix[j], xs))) % n for j in range(free)
        )
        edges = []
        xpart = tuple(t * n + x for t, x in enumerate(xs))
        for j in range(free):
            key = xpart + ((width + j) * n + us[j],)
            if host.by_key.get(key) != (j, solution[j]):
                raise MissingEdge(f"color {j + 1} edge missing for x={xs}")
            edges.append((j, key))
        for i in range(host.ell):
            key = host.diag_key(i, xs, us)
            expect = (free + i, solution[ns.diag_cols[i]])
            if host.by_key.get(key) != expect:
                raise MissingEdge(f"color {free + i + 1} edge missing for x={xs}")
            edges.append((free + i, key))
        out.append(ColoredCopy(xs=xs, us=us, labels=tuple(solution), edges=tuple(edges)))
    return out


# ---------------------------------------------------------------------------
# Host export format: one line per edge, lexicographically sorted.


def export_host(host: Host) -> str:
    lines = []
    for color, label, key in host.records:
        parts = " ".join(f"{host.part_name(v // host.n)}:{v % host.n}" for v in key)
        lines.append(f"{color + 1} {label} {parts}")
    return "\n".join(sorted(lines)) + "\n"


def parse_host_export(text: str) -> list[tuple[int, int, tuple[tuple[str, int], ...]]]:
    """Parse export lines back into (color, label, ((part, value), ...))."""
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        toks = raw.split(" ")
        if len(toks) < 3:
            raise ParseError(f"line {no}: expected 'color label part:vertex ...'")
        try:
            color, label = int(toks[0]), int(toks[1])
            verts = []
            for t in toks[2:]:
                name, val = t.split(":")
                if name[0] not in "VU" or not name[1:].isdigit():
                    raise ValueError
                verts.append((name, int(val)))
        except ValueError:
            raise ParseError(f"line {no}: malformed edge line") from None
        out.append((color, label, tuple(verts)))
    return out


def render_host_export(parsed: list[tuple[int, int, tuple[tuple[str, int], ...]]]) -> str:
    lines = [
        f"{color} {label} " + " ".join(f"{name}:{val}" for name, val in verts)
        for color, label, verts in parsed
    ]
    return "\n".join(sorted(lines)) + "\n"
