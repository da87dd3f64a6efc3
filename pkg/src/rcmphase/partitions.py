"""Set partitions of the grid [n] x [r]: non-flat / connected predicates and enumeration.

Cells are 1-indexed pairs ``(row, column)``.  Enumeration walks cells in
row-major order and assigns restricted-growth labels; a label already used
in the current row is never reused (non-flat pruning), and connectivity of
the rows is checked once the assignment is complete.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import factorial, prod
from typing import Iterator, Sequence

from .errors import BudgetExceeded, MalformedInput

Cell = tuple[int, int]

DEFAULT_BUDGET = 12


@dataclass(frozen=True)
class SetPartition:
    n: int
    r: int
    blocks: tuple[tuple[Cell, ...], ...]

    def __post_init__(self) -> None:
        cells = [c for b in self.blocks for c in b]
        grid = {(i, j) for i in range(1, self.n + 1) for j in range(1, self.r + 1)}
        if len(cells) != len(set(cells)) or set(cells) != grid:
            raise MalformedInput("blocks must be disjoint and cover the whole grid")
        if any(not b for b in self.blocks):
            raise MalformedInput("empty block")
        if any(tuple(sorted(b)) != b for b in self.blocks):
            raise MalformedInput("cells inside a block must be sorted")
        firsts = [b[0] for b in self.blocks]
        if firsts != sorted(firsts):
            raise MalformedInput("blocks must be ordered by their smallest cell")

    @classmethod
    def from_blocks(cls, n: int, r: int, blocks: Sequence[Sequence[Cell]]) -> "SetPartition":
        ordered = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0])
        return cls(n, r, tuple(ordered))

    @classmethod
    def from_labels(cls, n: int, r: int, labels: Sequence[int]) -> "SetPartition":
        """Build from a restricted-growth string over cells in row-major order."""
        groups: dict[int, list[Cell]] = {}
        for k, lab in enumerate(labels):
            groups.setdefault(lab, []).append((k // r + 1, k % r + 1))
        return cls(n, r, tuple(tuple(groups[lab]) for lab in sorted(groups, key=lambda t: groups[t][0])))

    @classmethod
    def singletons(cls, n: int, r: int) -> "SetPartition":
        return cls(n, r, tuple(((i, j),) for i in range(1, n + 1) for j in range(1, r + 1)))

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self) -> dict[Cell, int]:
        """Map each cell to the 0-based index of its block."""
        return {c: k for k, b in enumerate(self.blocks) for c in b}

    def without_row(self, i: int) -> "SetPartition":
        """Drop row ``i`` and renumber the remaining rows 1..n-1."""
        blocks = []
        for b in self.blocks:
            kept = [(s if s < i else s - 1, j) for s, j in b if s != i]
            if kept:
                blocks.append(kept)
        return SetPartition.from_blocks(self.n - 1, self.r, blocks)

    def to_text(self) -> str:
        """Blocks separated by ';', each written as its cells ``(i,j)`` in order."""
        return ";".join("".join(f"({i},{j})" for i, j in b) for b in self.blocks)


def is_nonflat(p: SetPartition) -> bool:
    return all(len({i for i, _ in b}) == len(b) for b in p.blocks)


def is_connected(p: SetPartition) -> bool:
    """True iff multi-row blocks link all rows into one component."""
    parent = list(range(p.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in p.blocks:
        rows = [i for i, _ in b]
        for s in rows[1:]:
            parent[find(s)] = find(rows[0])
    return len({find(i) for i in range(1, p.n + 1)}) == 1


def _check_budget(n: int, r: int, budget: int | None) -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    if n * r > budget:
        raise BudgetExceeded(f"grid {n}x{r} has {n * r} cells, budget is {budget}")


def _rows_connected(n: int, r: int, labels: list[int], first_row: list[int]) -> bool:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in range(r, n * r):
        row = k // r
        fr = first_row[labels[k]]
        if fr != row:
            parent[find(row)] = find(fr)
    root = find(0)
    return all(find(i) == root for i in range(n))


def _nonflat_labels(n: int, r: int) -> Iterator[tuple[list[int], list[int]]]:
    """Restricted-growth strings of all non-flat partitions, lexicographic order.

    Yields ``(labels, first_row)`` where ``first_row[b]`` is the row in which
    block ``b`` was opened.  Both lists are reused between iterations.
    """
    total = n * r
    labels = [0] * total
    first_row: list[int] = []
    row_used: list[set[int]] = [set() for _ in range(n)]

    def rec(k: int, nblocks: int) -> Iterator[tuple[list[int], list[int]]]:
        if k == total:
            yield labels, first_row
            return
        row = k // r
        used = row_used[row]
        for lab in range(nblocks + 1):
            if lab in used:
                continue
            labels[k] = lab
            used.add(lab)
            if lab == nblocks:
                first_row.append(row)
                yield from rec(k + 1, nblocks + 1)
                first_row.pop()
            else:
                yield from rec(k + 1, nblocks)
            used.discard(lab)

    yield from rec(0, 0)


def enumerate_nonflat(n: int, r: int, budget: int | None = None) -> Iterator[SetPartition]:
    _check_budget(n, r, budget)
    for labels, _ in _nonflat_labels(n, r):
        yield SetPartition.from_labels(n, r, labels)


def enumerate_cnf(n: int, r: int, budget: int | None = None) -> Iterator[SetPartition]:
    """Yield every connected non-flat partition of [n] x [r] exactly once."""
    _check_budget(n, r, budget)
    for labels, first_row in _nonflat_labels(n, r):
        if _rows_connected(n, r, labels, first_row):
            yield SetPartition.from_labels(n, r, labels)


def count_cnf_python(n: int, r: int, budget: int | None = None) -> int:
    return sum(1 for _ in enumerate_cnf(n, r, budget))


def enumerate_all(cells: int) -> Iterator[list[int]]:
    """Every restricted-growth string of length ``cells`` (all set partitions)."""
    labels = [0] * cells

    def rec(k: int, nblocks: int) -> Iterator[list[int]]:
        if k == cells:
            yield labels
            return
        for lab in range(nblocks + 1):
            labels[k] = lab
            yield from rec(k + 1, max(nblocks, lab + 1))

    yield from rec(0, 0)


def count_maximal(n: int, r: int) -> int:
    """Number of connected non-flat partitions with the largest block count 1+(r-1)n."""
    if n < 1 or r < 1:
        raise MalformedInput("n and r must be positive")
    return r ** (n - 1) * prod(1 + (r - 1) * i for i in range(1, n))


def cnf_upper_bound(n: int, r: int) -> int:
    return factorial(n) ** r * factorial(r) ** (n - 1)


def partitions_csv(parts: Sequence[SetPartition] | Iterator[SetPartition]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for p in parts:
        writer.writerow([p.to_text()])
    return buf.getvalue()
