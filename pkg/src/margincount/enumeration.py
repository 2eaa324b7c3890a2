"""Exact counting of binary and N-valued matrices with given margins.

The count is a memoized recursion over (rows consumed, counts vector)
states.  Placing row ``j`` with sum ``k`` moves the column multiplicities
``r`` to ``reduce(r, s)`` for every admissible composition ``s`` of ``k``;
each transition is weighted by the number of actual rows it stands for.
"""

from __future__ import annotations

import enum
import sys
import time
from dataclasses import dataclass, field
from math import comb
from typing import Iterator, Sequence

from .core import (
    Composition,
    ContractError,
    CountsVector,
    MarginSpec,
    counts_vector,
    reduce,
    trim,
    weight,
)


class Mode(enum.Enum):
    BINARY = "binary"
    NATURAL = "natural"


def binomial_table(n0: int) -> list[list[int]]:
    """Pascal's triangle: ``table[i][j] == C(i, j)`` for ``0 <= j <= i <= n0``."""
    rows = [[1]]
    for i in range(1, n0 + 1):
        prev = rows[-1]
        rows.append([1] + [prev[j - 1] + prev[j] for j in range(1, i)] + [1])
    return rows


def bounded_compositions(r: Sequence[int], k: int) -> Iterator[Composition]:
    """Yield every ``s`` with ``sum(s) == k`` and ``0 <= s_i <= r_i``.

    Parts have length ``len(r)``; output is in lexicographic order.
    """
    if k < 0:
        raise ContractError("k must be non-negative")
    b = len(r)
    # capacity[i] = sum(r[i:])
    capacity = [0] * (b + 1)
    for i in range(b - 1, -1, -1):
        capacity[i] = capacity[i + 1] + r[i]
    if k > capacity[0]:
        return
    parts = [0] * b

    def rec(i: int, need: int) -> Iterator[Composition]:
        if i == b:
            yield tuple(parts)
            return
        lo = max(0, need - capacity[i + 1])
        hi = min(r[i], need)
        for x in range(lo, hi + 1):
            parts[i] = x
            yield from rec(i + 1, need - x)
        parts[i] = 0

    yield from rec(0, k)


def shifted_compositions(r: Sequence[int], k: int) -> Iterator[Composition]:
    """Yield every ``s`` with ``sum(s) == k`` and ``s_i <= r_i + s_{i+1}``.

    Parts have length ``len(r)`` (``s_{b+1} = 0``).  Parts are assigned from
    the last index down to the first, so the output is lexicographic in the
    reversed tuple ``(s_b, ..., s_1)``.
    """
    if k < 0:
        raise ContractError("k must be non-negative")
    b = len(r)
    if b == 0:
        if k == 0:
            yield ()
        return
    # prefix_weight[i] = weight(r[:i]); bounds the mass parts 1..i can still take
    prefix_weight = [0] * (b + 1)
    for i in range(b):
        prefix_weight[i + 1] = prefix_weight[i] + (i + 1) * r[i]
    parts = [0] * b

    def rec(i: int, upper_next: int, need: int) -> Iterator[Composition]:
        # i is the 0-based index being assigned; parts[i+1:] are fixed
        if i < 0:
            if need == 0:
                yield tuple(parts)
            return
        hi = min(r[i] + upper_next, need)
        # need - x <= i * x + prefix_weight[i]
        lo = max(0, -(-(need - prefix_weight[i]) // (i + 1)))
        for x in range(lo, hi + 1):
            parts[i] = x
            yield from rec(i - 1, x, need - x)
        parts[i] = 0

    yield from rec(b - 1, 0, k)


def compositions(r: Sequence[int], k: int, mode: Mode) -> Iterator[Composition]:
    if mode is Mode.BINARY:
        return bounded_compositions(r, k)
    return shifted_compositions(r, k)


def coefficient(r: Sequence[int], s: Sequence[int], mode: Mode,
                binomials: list[list[int]] | None = None) -> int:
    """Number of concrete rows represented by the transition ``r -> reduce(r, s)``."""
    if len(s) > len(r) and any(s[len(r):]):
        raise ContractError(f"composition {tuple(s)} is longer than {tuple(r)}")
    out = 1
    for i in range(len(r)):
        si = s[i] if i < len(s) else 0
        top = r[i]
        if mode is Mode.NATURAL and i + 1 < len(s):
            top += s[i + 1]
        if si < 0 or si > top:
            raise ContractError(f"composition {tuple(s)} not admissible for {tuple(r)} ({mode.value})")
        if binomials is not None and top < len(binomials):
            out *= binomials[top][si]
        else:
            out *= comb(top, si)
    return out


@dataclass
class Stats:
    nodes: int = 0
    terms: int = 0
    pruned: int = 0
    elapsed_ms: float = 0.0


@dataclass
class MemoTable:
    """Cached counts keyed by ``(rows consumed, counts vector)``.

    ``sorted_rows`` is ``p`` sorted descending; ``permutation[k]`` is the
    input index of sorted row ``k``.
    """

    mode: Mode
    sorted_rows: tuple[int, ...]
    permutation: tuple[int, ...]
    root: CountsVector
    binomials: list[list[int]]
    values: dict[tuple[int, CountsVector], int] = field(default_factory=dict)
    stats: Stats = field(default_factory=Stats)

    @property
    def m(self) -> int:
        return len(self.sorted_rows)

    @property
    def total(self) -> int:
        return self.values.get((0, self.root), 0)

    def __getitem__(self, key: tuple[int, CountsVector]) -> int:
        return self.values[key]

    def __contains__(self, key) -> bool:
        return key in self.values

    def __len__(self) -> int:
        return len(self.values)

    def remaining(self, j: int) -> int:
        """Row mass still to be placed after ``j`` rows."""
        return sum(self.sorted_rows[j:])

    def children(self, j: int, r: CountsVector) -> Iterator[tuple[Composition, int, CountsVector]]:
        """Yield ``(s, coefficient, child state)`` in the deterministic child order."""
        for s in compositions(r, self.sorted_rows[j], self.mode):
            yield s, coefficient(r, s, self.mode, self.binomials), reduce(r, s)


def sort_rows(p: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Stable descending sort; returns (sorted rows, input index of each)."""
    order = sorted(range(len(p)), key=lambda i: -p[i])
    return tuple(p[i] for i in order), tuple(order)


def count(spec: MarginSpec, mode: Mode | str, prune: bool = True) -> tuple[int, MemoTable]:
    """Count matrices with margins ``spec`` and return the populated memo table.

    ``prune`` toggles the Gale-Ryser short-circuit (binary mode only); it
    never changes the result.
    """
    mode = Mode(mode)
    rows, perm = sort_rows(spec.row_sums)
    root = counts_vector(spec.col_sums)
    table = MemoTable(mode, rows, perm, root, binomial_table(sum(root)))
    started = time.perf_counter()
    # unbalanced margins leave the table empty; total reads as 0
    if spec.balanced:
        _solver(table, prune)(0, root)
    table.stats.elapsed_ms = (time.perf_counter() - started) * 1000.0
    table.stats.nodes = len(table.values)
    return table.total, table


def count_state(j: int, r: CountsVector, table: MemoTable, prune: bool = True) -> int:
    """Count for the residual problem: rows ``sorted_rows[j:]``, column multiplicities ``r``.

    Missing states are computed and added to ``table``.
    """
    r = trim(r)
    if not 0 <= j <= table.m:
        raise ContractError(f"row index {j} outside 0..{table.m}")
    if weight(r) != table.remaining(j):
        raise ContractError(f"state {r} has weight {weight(r)}, remaining row mass is {table.remaining(j)}")
    hit = table.values.get((j, r))
    if hit is not None:
        return hit
    if sum(r) >= len(table.binomials):
        table.binomials = binomial_table(sum(r))
    value = _solver(table, prune)(j, r)
    table.stats.nodes = len(table.values)
    return value


def _solver(table: MemoTable, prune: bool):
    rows = table.sorted_rows
    m = len(rows)
    values = table.values
    binom = table.binomials
    stats = table.stats
    natural = table.mode is Mode.NATURAL
    prune = prune and not natural
    mass = [0] * (m + 1)
    for j in range(m - 1, -1, -1):
        mass[j] = mass[j + 1] + rows[j]
    depth = 3 * (m + 1) + 200
    if sys.getrecursionlimit() < depth:
        sys.setrecursionlimit(depth)

    def feasible(j: int, r: CountsVector) -> bool:
        # Gale-Ryser on rows[j:] against the conjugate of r; totals already agree
        conj_total = 0
        acc = 0
        limit = min(len(r), m - j)
        suffix = sum(r)
        for i in range(limit):
            acc += rows[j + i]
            conj_total += suffix
            if acc > conj_total:
                return False
            suffix -= r[i]
        return True

    def leaf(j: int, child: list[int]) -> int:
        ch = tuple(child)
        if not ch[-1]:
            ch = trim(ch)
        sub = values.get((j, ch))
        return solve(j, ch) if sub is None else sub

    def expand_binary(j: int, r: CountsVector) -> int:
        # odometer over s in lexicographic order with s[i] <= r[i]; the
        # last part is forced by the remaining mass, so leaves are emitted
        # one index early
        k = rows[j]
        b = len(r)
        nxt_j = j + 1
        if b <= 1:
            if b == 0:
                return solve(nxt_j, ()) if k == 0 else 0
            if k > r[0]:
                return 0
            stats.terms += 1
            return binom[r[0]][k] * leaf(nxt_j, [r[0] - k])
        cap = [0] * (b + 1)
        for i in range(b - 1, -1, -1):
            cap[i] = cap[i + 1] + r[i]
        if k > cap[0]:
            return 0
        last = b - 1
        r_last = r[last]
        row_last = binom[r_last]
        cur = [0] * b
        hi = [0] * b
        need = [0] * b
        coef = [0] * b
        child = [0] * b
        need[0], coef[0] = k, 1
        hi[0] = r[0] if r[0] < k else k
        lo = k - cap[1]
        cur[0] = (lo if lo > 0 else 0) - 1
        total = terms = 0
        i = 0
        while i >= 0:
            x = cur[i] + 1
            if x > hi[i]:
                i -= 1
                continue
            cur[i] = x
            if i:
                child[i - 1] = r[i - 1] - cur[i - 1] + x
            rest = need[i] - x
            c = coef[i] * binom[r[i]][x]
            if i == last - 1:
                # rest <= cap[last] == r_last by the lower bound on x
                child[i] = r[i] - x + rest
                child[last] = r_last - rest
                terms += 1
                sub = leaf(nxt_j, child)
                if sub:
                    total += c * row_last[rest] * sub
                continue
            i += 1
            need[i], coef[i] = rest, c
            hi[i] = r[i] if r[i] < rest else rest
            lo = rest - cap[i + 1]
            cur[i] = (lo if lo > 0 else 0) - 1
        stats.terms += terms
        return total

    def expand_natural(j: int, r: CountsVector) -> int:
        # odometer assigning s from the last index down with
        # s[i] <= r[i] + s[i+1]; s[0] is forced, so leaves are emitted at i == 1
        k = rows[j]
        b = len(r)
        nxt_j = j + 1
        if b <= 1:
            if b == 0:
                return solve(nxt_j, ()) if k == 0 else 0
            if k > r[0]:
                return 0
            stats.terms += 1
            return binom[r[0]][k] * leaf(nxt_j, [r[0] - k])
        pw = [0] * (b + 1)
        for i in range(b):
            pw[i + 1] = pw[i] + (i + 1) * r[i]
        r0 = r[0]
        cur = [0] * (b + 1)  # cur[b] is the zero part beyond the last index
        hi = [0] * b
        need = [0] * (b + 1)
        coef = [0] * (b + 1)
        child = [0] * b
        top_nz = [-1] * (b + 1)  # top_nz[i]: highest nonzero index in child[i:]
        i = b - 1
        need[b], coef[b] = k, 1
        hi[i] = r[i] if r[i] < k else k
        lo = -(-(k - pw[i]) // b)
        cur[i] = (lo if lo > 0 else 0) - 1
        total = terms = 0
        while i < b:
            x = cur[i] + 1
            if x > hi[i]:
                i += 1
                continue
            cur[i] = x
            top = r[i] + cur[i + 1]
            t = top - x
            child[i] = t
            nz = top_nz[i + 1]
            if nz < 0 and t:
                nz = i
            top_nz[i] = nz
            c = coef[i + 1] * binom[top][x]
            rest = need[i + 1] - x
            if i == 1:
                # rest <= r0 + x by the lower bound on x
                top0 = r0 + x
                t = top0 - rest
                child[0] = t
                if nz < 0 and t:
                    nz = 0
                ch = tuple(child) if nz == b - 1 else tuple(child[:nz + 1])
                terms += 1
                sub = values.get((nxt_j, ch))
                if sub is None:
                    sub = solve(nxt_j, ch)
                if sub:
                    total += c * binom[top0][rest] * sub
                continue
            need[i], coef[i] = rest, c
            i -= 1
            cap = r[i] + x
            hi[i] = cap if cap < rest else rest
            lo = -(-(rest - pw[i]) // (i + 1))
            cur[i] = (lo if lo > 0 else 0) - 1
        stats.terms += terms
        return total

    expand = expand_natural if natural else expand_binary

    def solve(j: int, r: CountsVector) -> int:
        key = (j, r)
        hit = values.get(key)
        if hit is not None:
            return hit
        assert weight(r) == mass[j], (j, r)
        if j == m:
            total = 1
        elif prune and not feasible(j, r):
            stats.pruned += 1
            total = 0
        else:
            total = expand(j, r)
        values[key] = total
        return total

    return solve
