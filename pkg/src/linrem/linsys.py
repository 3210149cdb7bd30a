"""Linear systems over prime fields: data model, file format, normalization.

A system is ell equations in p unknowns (1 <= ell < p) with full row rank,
together with one admissible-value set per unknown. Normalization permutes
an independent column set to the back, turns that block into a diagonal,
and scales every row so its rightmost free-column entry (the pivot) is 1.
All indices in code are 0-based; user-facing text is 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .errors import EmptyW, NoFreeColumns, ParseError, RankDeficient
from .field import PrimeField, next_prime_above

Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# Exact Gaussian elimination helpers (list-of-lists, canonical residues).


def mat_rank(fld: PrimeField, rows: Sequence[Sequence[int]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = fld.inv(m[rank][col])
        m[rank] = [fld.mul(inv, v) for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [fld.sub(a, fld.mul(c, b)) for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def mat_det(fld: PrimeField, rows: Sequence[Sequence[int]]) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    det = 1
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = fld.neg(det)
        det = fld.mul(det, m[col][col])
        inv = fld.inv(m[col][col])
        for i in range(col + 1, n):
            if m[i][col]:
                c = fld.mul(inv, m[i][col])
                m[i] = [fld.sub(a, fld.mul(c, b)) for a, b in zip(m[i], m[col])]
    return det


def mat_inv(fld: PrimeField, rows: Sequence[Sequence[int]]) -> Matrix:
    n = len(rows)
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if aug[i][col]), None)
        if pivot is None:
            raise ValueError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = fld.inv(aug[col][col])
        aug[col] = [fld.mul(inv, v) for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                c = aug[i][col]
                aug[i] = [fld.sub(a, fld.mul(c, b)) for a, b in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]


def mat_vec(fld: PrimeField, rows: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) % fld.q for row in rows]


def mat_mul(fld: PrimeField, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % fld.q for col in cols] for row in a]


# ---------------------------------------------------------------------------
# Data model.


@dataclass(frozen=True)
class SetFamily:
    """One admissible-value set per unknown, as sorted residue tuples."""

    field: PrimeField
    sets: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, fld: PrimeField, sets: Iterable[Iterable[int]]) -> "SetFamily":
        canon = []
        for s in sets:
            reduced = sorted({fld.element(v) for v in s})
            canon.append(tuple(reduced))
        return cls(fld, tuple(canon))

    @classmethod
    def full(cls, fld: PrimeField, p: int) -> "SetFamily":
        everything = tuple(range(fld.q))
        return cls(fld, tuple(everything for _ in range(p)))

    @property
    def p(self) -> int:
        return len(self.sets)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sets)

    def total_size(self) -> int:
        return sum(len(s) for s in self.sets)

    def frozensets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(s) for s in self.sets)

    def with_removed(self, removals: Sequence[Iterable[int]]) -> "SetFamily":
        """New family with removals[i] taken out of set i."""
        out = []
        for s, gone in zip(self.sets, removals):
            dead = set(gone)
            out.append(tuple(v for v in s if v not in dead))
        return SetFamily(self.field, tuple(out))

    def replace(self, idx: int, values: Iterable[int]) -> "SetFamily":
        new = list(self.sets)
        new[idx] = tuple(sorted(set(values)))
        return SetFamily(self.field, tuple(new))


@dataclass(frozen=True)
class LinearSystem:
    """ell independent equations in p unknowns over a prime field."""

    field: PrimeField
    rows: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]

    @classmethod
    def make(cls, fld: PrimeField, rows: Iterable[Iterable[int]], rhs: Iterable[int]) -> "LinearSystem":
        canon_rows = tuple(tuple(fld.element(v) for v in row) for row in rows)
        canon_rhs = tuple(fld.element(v) for v in rhs)
        return cls(fld, canon_rows, canon_rhs)

    def __post_init__(self):
        ell = len(self.rows)
        if ell == 0 or len(self.rhs) != ell:
            raise ValueError("row/rhs shape mismatch")
        p = len(self.rows[0])
        if any(len(r) != p for r in self.rows):
            raise ValueError("ragged matrix")
        if not 1 <= ell < p:
            raise ValueError(f"need 1 <= ell < p, got ell={ell} p={p}")
        if mat_rank(self.field, self.rows) != ell:
            raise RankDeficient(f"rank below {ell}")

    @property
    def ell(self) -> int:
        return len(self.rows)

    @property
    def p(self) -> int:
        return len(self.rows[0])

    def is_solution(self, x: Sequence[int]) -> bool:
        return mat_vec(self.field, self.rows, x) == list(self.rhs)


@dataclass(frozen=True)
class NormalizedSystem:
    """A system in pivot form plus the structure read off its rows.

    base        the transformed system (block columns diagonal, pivots 1)
    perm        perm[j] = original column of normalized column j
    pivots      per row, the rightmost nonzero free-column index
    support     per row, the nonzero free columns left of the pivot
    diag_cols   per row, its block-column index (free_count + row)
    blocks      per row, the slice of template x-positions assigned to it
    """

    base: LinearSystem
    perm: tuple[int, ...]
    pivots: tuple[int, ...]
    support: tuple[tuple[int, ...], ...]
    diag_cols: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]

    @property
    def field(self) -> PrimeField:
        return self.base.field

    @property
    def ell(self) -> int:
        return self.base.ell

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def free_count(self) -> int:
        return self.base.p - self.base.ell

    @property
    def uniformity(self) -> int:
        """Edge size r of the copy template: one more than total support."""
        return 1 + sum(len(w) for w in self.support)

    @property
    def vertex_count(self) -> int:
        return self.uniformity - 1 + self.free_count

    def permute_family(self, sets: SetFamily) -> SetFamily:
        """Reorder a family from original into normalized column order."""
        return SetFamily(sets.field, tuple(sets.sets[j] for j in self.perm))

    def unpermute_index(self, j: int) -> int:
        return self.perm[j]


def _select_block_columns(fld: PrimeField, rows: Sequence[Sequence[int]]) -> list[int]:
    """Greedy right-to-left scan for ell independent columns.

    Returns the chosen original column indices in ascending order. The scan
    keeps a reduced basis of column vectors and takes every column that
    enlarges it, so an already-normalized system selects its own block.
    """
    ell = len(rows)
    p = len(rows[0])
    basis: list[list[int]] = []
    chosen: list[int] = []
    for j in range(p - 1, -1, -1):
        vec = [rows[i][j] for i in range(ell)]
        red = list(vec)
        for bas in basis:
            lead = next(i for i in range(ell) if bas[i])
            if red[lead]:
                c = fld.div(red[lead], bas[lead])
                red = [fld.sub(a, fld.mul(c, b)) for a, b in zip(red, bas)]
        if any(red):
            basis.append(red)
            chosen.append(j)
            if len(chosen) == ell:
                break
    if len(chosen) < ell:
        raise RankDeficient("could not find an independent column block")
    return sorted(chosen)


def _to_block_identity(sys: LinearSystem) -> tuple[Matrix, list[int], list[int]]:
    """Permute an independent column set to the back and reduce it to I.

    Returns (rows, rhs, perm) with perm[j] = original column of column j.
    """
    fld = sys.field
    block = _select_block_columns(fld, sys.rows)
    in_block = set(block)
    perm = [j for j in range(sys.p) if j not in in_block] + block
    permuted = [[row[j] for j in perm] for row in sys.rows]
    free = sys.p - sys.ell
    blockmat = [row[free:] for row in permuted]
    binv = mat_inv(fld, blockmat)
    new_rows = mat_mul(fld, binv, permuted)
    new_rhs = mat_vec(fld, binv, sys.rhs)
    return new_rows, new_rhs, perm


def normalize(sys: LinearSystem, *, require_support: bool = True) -> NormalizedSystem:
    """Bring a full-rank system into pivot form.

    With require_support (the default) every row must keep at least one
    nonzero free entry besides its pivot; rows that fail raise EmptyW and
    should be routed through reduce_degenerate. Idempotent: normalizing an
    already-normalized system returns it unchanged.
    """
    fld = sys.field
    rows, rhs, perm = _to_block_identity(sys)
    free = sys.p - sys.ell
    pivots = []
    support = []
    for i, row in enumerate(rows):
        nz = [j for j in range(free) if row[j]]
        if not nz:
            raise NoFreeColumns(f"row {i + 1} has no nonzero free-column entry")
        m_i = nz[-1]
        w_i = tuple(nz[:-1])
        if require_support and not w_i:
            raise EmptyW(f"row {i + 1} has a bare pivot; reduce the system first")
        inv = fld.inv(row[m_i])
        rows[i] = [fld.mul(inv, v) for v in row]
        rhs[i] = fld.mul(inv, rhs[i])
        pivots.append(m_i)
        support.append(w_i)
    blocks = []
    start = 0
    for w in support:
        blocks.append(tuple(range(start, start + len(w))))
        start += len(w)
    base = LinearSystem(fld, tuple(tuple(r) for r in rows), tuple(rhs))
    return NormalizedSystem(
        base=base,
        perm=tuple(perm),
        pivots=tuple(pivots),
        support=tuple(support),
        diag_cols=tuple(free + i for i in range(sys.ell)),
        blocks=tuple(blocks),
    )


# ---------------------------------------------------------------------------
# Degenerate-row reduction.


@dataclass(frozen=True)
class PinStep:
    """A one-nonzero row pinned column `column` to the constant `value`."""

    column: int
    value: int


@dataclass(frozen=True)
class FoldStep:
    """A two-nonzero row folded column `removed` into column `kept`.

    The row read alpha*x_kept + x_removed = rhs, so lifting a reduced
    solution sets x_removed = rhs - alpha*x_kept. The kept set was
    intersected with the image of the removed set.
    """

    kept: int
    removed: int
    alpha: int
    rhs: int


@dataclass(frozen=True)
class ReductionTrace:
    field: PrimeField
    original_p: int
    steps: tuple = ()
    empty_witness: PinStep | None = None

    def lift(self, kept_columns: Sequence[int], solution: Sequence[int]) -> tuple[int, ...]:
        """Extend a reduced solution (over kept_columns) to all columns."""
        fld = self.field
        values = dict(zip(kept_columns, solution))
        for step in reversed(self.steps):
            if isinstance(step, PinStep):
                values[step.column] = step.value
            else:
                values[step.removed] = fld.sub(step.rhs, fld.mul(step.alpha, values[step.kept]))
        return tuple(values[j] for j in range(self.original_p))


@dataclass(frozen=True)
class ReductionResult:
    """Outcome of reduce_degenerate.

    kind is one of:
      reduced        every remaining row has >= 3 nonzero entries
      two_var        a single equation with exactly two nonzero entries
      unconstrained  no equations remain; every tuple in the sets solves
      empty          a pinned value was outside its set; no solutions
    """

    kind: str
    system: LinearSystem | None
    sets: SetFamily | None
    kept_columns: tuple[int, ...]
    trace: ReductionTrace

    def lift(self, solution: Sequence[int]) -> tuple[int, ...]:
        return self.trace.lift(self.kept_columns, solution)


def reduce_degenerate(sys: LinearSystem, sets: SetFamily) -> ReductionResult:
    """Iteratively strip rows with fewer than three nonzero entries.

    Works on the block-diagonal form, where a short row is always a bare
    pivot plus (possibly) its block entry, so each step deletes one row and
    one block column; solution counts are preserved exactly and the trace
    can lift reduced solutions back. Pinned rows go first, then folds,
    lowest index within each kind. A final single equation with two nonzero
    entries is left in place and flagged two_var.
    """
    fld = sys.field
    rows, rhs, perm = _to_block_identity(sys)
    free = sys.p - sys.ell
    origin = list(perm)
    cur_sets = [sets.sets[j] for j in perm]
    steps: list = []

    def finish(kind: str, empty_witness: PinStep | None = None) -> ReductionResult:
        trace = ReductionTrace(fld, sys.p, tuple(steps), empty_witness)
        if kind == "empty":
            return ReductionResult(kind, None, None, (), trace)
        order = sorted(range(len(origin)), key=lambda j: origin[j])
        kept = tuple(origin[j] for j in order)
        out_sets = SetFamily(fld, tuple(cur_sets[j] for j in order))
        if kind == "unconstrained":
            return ReductionResult(kind, None, out_sets, kept, trace)
        out_rows = tuple(tuple(row[j] for j in order) for row in rows)
        system = LinearSystem(fld, out_rows, tuple(rhs))
        return ReductionResult(kind, system, out_sets, kept, trace)

    while rows:
        ell = len(rows)
        target = None
        for width in (1, 2):
            for i, row in enumerate(rows):
                if sum(1 for v in row if v) == width:
                    target = i
                    break
            if target is not None:
                break
        if target is None:
            return finish("reduced")
        i = target
        row = rows[i]
        nz = [j for j, v in enumerate(row) if v]
        blk = free + i
        if len(nz) == 1:
            # Bare block entry: the variable is pinned to the rhs constant.
            assert nz == [blk] and row[blk] == 1
            value = rhs[i]
            step = PinStep(origin[blk], value)
            if value not in cur_sets[blk]:
                return finish("empty", empty_witness=step)
            steps.append(step)
        else:
            if ell == 1:
                return finish("two_var")
            assert blk in nz and row[blk] == 1
            a = nz[0] if nz[1] == blk else nz[1]
            alpha = row[a]
            # x_blk = rhs - alpha*x_a; keep x_a, fold the block variable away.
            image = {fld.div(fld.sub(rhs[i], s), alpha) for s in cur_sets[blk]}
            cur_sets[a] = tuple(v for v in cur_sets[a] if v in image)
            steps.append(FoldStep(kept=origin[a], removed=origin[blk], alpha=alpha, rhs=rhs[i]))
        del rows[i]
        del rhs[i]
        for r in rows:
            del r[blk]
        del origin[blk]
        del cur_sets[blk]
    return finish("unconstrained")


# ---------------------------------------------------------------------------
# System file format.


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_system(text: str) -> tuple[LinearSystem, SetFamily]:
    """Parse the line-oriented system format.

        field <q>
        system <ell> <p>
        <ell rows of p signed integers>
        rhs <ell signed integers>
        <p lines: `set all` or `set v1,v2,...` or bare `set` for empty>

    '#' starts a comment; blank lines are skipped. Entries are reduced
    mod q; a set listing the same residue twice is rejected.
    """
    items = [(no, _strip(raw)) for no, raw in enumerate(text.splitlines(), start=1)]
    items = [(no, line) for no, line in items if line]
    pos = 0

    def take(what: str) -> tuple[int, list[str]]:
        nonlocal pos
        if pos >= len(items):
            raise ParseError(f"line {items[-1][0] if items else 0}: unexpected end of file, wanted {what}")
        no, line = items[pos]
        pos += 1
        return no, line.split()

    no, toks = take("field header")
    if len(toks) != 2 or toks[0] != "field":
        raise ParseError(f"line {no}: expected 'field <q>'")
    try:
        q = int(toks[1])
    except ValueError:
        raise ParseError(f"line {no}: modulus must be an integer") from None
    fld = PrimeField(q)

    no, toks = take("system header")
    if len(toks) != 3 or toks[0] != "system":
        raise ParseError(f"line {no}: expected 'system <ell> <p>'")
    try:
        ell, p = int(toks[1]), int(toks[2])
    except ValueError:
        raise ParseError(f"line {no}: system dimensions must be integers") from None
    if not 1 <= ell < p:
        raise ParseError(f"line {no}: need 1 <= ell < p, got ell={ell} p={p}")

    rows = []
    for _ in range(ell):
        no, toks = take("matrix row")
        if len(toks) != p:
            raise ParseError(f"line {no}: expected {p} entries, got {len(toks)}")
        try:
            rows.append([int(t) for t in toks])
        except ValueError:
            raise ParseError(f"line {no}: matrix entries must be integers") from None

    no, toks = take("rhs")
    if not toks or toks[0] != "rhs" or len(toks) != ell + 1:
        raise ParseError(f"line {no}: expected 'rhs' followed by {ell} integers")
    try:
        rhs = [int(t) for t in toks[1:]]
    except ValueError:
        raise ParseError(f"line {no}: rhs entries must be integers") from None

    families = []
    for _ in range(p):
        no, toks = take("set line")
        if not toks or toks[0] != "set" or len(toks) > 2:
            raise ParseError(f"line {no}: expected 'set all', 'set v1,v2,...' or bare 'set'")
        if len(toks) == 1:
            families.append(())
            continue
        if toks[1] == "all":
            families.append(tuple(range(q)))
            continue
        try:
            vals = [int(t) for t in toks[1].split(",")]
        except ValueError:
            raise ParseError(f"line {no}: set values must be integers") from None
        reduced = [fld.element(v) for v in vals]
        if len(set(reduced)) != len(reduced):
            raise ParseError(f"line {no}: duplicate value after reduction mod {q}")
        families.append(tuple(sorted(reduced)))

    if pos != len(items):
        raise ParseError(f"line {items[pos][0]}: trailing content")
    return LinearSystem.make(fld, rows, rhs), SetFamily(fld, tuple(families))


def format_system(sys: LinearSystem, sets: SetFamily) -> str:
    """Inverse of parse_system, byte-stable for canonical inputs."""
    q = sys.field.q
    lines = [f"field {q}", f"system {sys.ell} {sys.p}"]
    lines += [" ".join(str(v) for v in row) for row in sys.rows]
    lines.append("rhs " + " ".join(str(v) for v in sys.rhs))
    for s in sets.sets:
        if len(s) == q:
            lines.append("set all")
        elif not s:
            lines.append("set")
        else:
            lines.append("set " + ",".join(str(v) for v in s))
    return "\n".join(lines) + "\n"


def from_integer_system(
    int_rows: Sequence[Sequence[int]], int_rhs: Sequence[int], n: int
) -> tuple[PrimeField, LinearSystem]:
    """Embed an integer system into a prime field that is collision-free.

    For admissible values drawn from 1..n, any integer solution and any
    field solution coincide once q exceeds the largest possible row value,
    which c*p*p*n bounds (c = largest absolute entry).
    """
    p = len(int_rows[0])
    c = max(max(abs(v) for row in int_rows for v in row), max((abs(v) for v in int_rhs), default=0), 1)
    q = next_prime_above(c * p * p * n)
    fld = PrimeField(q)
    return fld, LinearSystem.make(fld, int_rows, int_rhs)
