"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the library's own counting and search
paths: solution counting is a raw product loop with % arithmetic, removal
minimality is certified by scanning every element subset, and progression
counting is a cubic triple loop. Expected values frozen in the test files
come from these.
"""

from __future__ import annotations

import itertools

import pytest

from linrem.field import PrimeField
from linrem.linsys import LinearSystem, SetFamily


def mk_system(q: int, rows, rhs) -> LinearSystem:
    return LinearSystem.make(PrimeField(q), rows, rhs)


def mk_sets(q: int, sets) -> SetFamily:
    return SetFamily.make(PrimeField(q), sets)


def full_sets(q: int, p: int) -> SetFamily:
    return SetFamily.full(PrimeField(q), p)


def brute_solutions(system: LinearSystem, sets: SetFamily) -> list[tuple[int, ...]]:
    """Every admissible solution by raw product enumeration."""
    q = system.field.q
    out = []
    for tup in itertools.product(*sets.sets):
        if all(
            sum(c * x for c, x in zip(row, tup)) % q == b
            for row, b in zip(system.rows, system.rhs)
        ):
            out.append(tup)
    return out


def brute_count(system: LinearSystem, sets: SetFamily) -> int:
    return len(brute_solutions(system, sets))


def removal_oracle(system: LinearSystem, sets: SetFamily, mode: str) -> int:
    """Optimal freeing cost by scanning every subset of deletable elements."""
    elements = [(i, v) for i, s in enumerate(sets.sets) for v in s]
    assert len(elements) <= 14, "oracle meant for tiny instances"
    best = None
    for mask in range(1 << len(elements)):
        removed = [set() for _ in range(sets.p)]
        for t, (i, v) in enumerate(elements):
            if mask >> t & 1:
                removed[i].add(v)
        if brute_count(system, sets.with_removed(removed)) != 0:
            continue
        if mode == "per-set-max":
            cost = max((len(r) for r in removed), default=0)
        else:
            cost = sum(len(r) for r in removed)
        if best is None or cost < best:
            best = cost
    assert best is not None
    return best


def ap3_brute(values) -> tuple[int, int]:
    """Ordered integer triples with x1 + x3 = 2*x2; cubic scan."""
    vals = sorted(set(values))
    total = 0
    nontrivial = 0
    for x1 in vals:
        for x2 in vals:
            for x3 in vals:
                if x1 + x3 == 2 * x2:
                    total += 1
                    if x1 != x3:
                        nontrivial += 1
    return total, nontrivial


ACCEPTANCE: dict[int, tuple[bool, str]] = {}

# Criterion numbers the collected tests promised to record; anything
# promised but missing at the end shows up as a FAIL line instead of
# silently disappearing when a test errors out early.
ACCEPTANCE_EXPECTED: set[int] = set()


def record_criterion(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    numbers = sorted(set(ACCEPTANCE) | ACCEPTANCE_EXPECTED)
    if not numbers:
        return
    terminalreporter.section("acceptance criteria")
    for number in numbers:
        passed, detail = ACCEPTANCE.get(number, (False, "not recorded in this run"))
        word = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"CRITERION {number:2d} {word}  {detail}")


@pytest.fixture(scope="session")
def triangle5():
    """x1 + x2 = x3 over F_5 with S_i = {1, 2}: the worked tiny instance."""
    system = mk_system(5, [[1, 1, -1]], [0])
    sets = mk_sets(5, [[1, 2], [1, 2], [1, 2]])
    return system, sets


@pytest.fixture(scope="session")
def ap4_full():
    """The 4-term progression system over F_5 with full sets."""
    system = mk_system(5, [[1, -2, 1, 0], [0, 1, -2, 1]], [0, 0])
    sets = full_sets(5, 4)
    return system, sets
