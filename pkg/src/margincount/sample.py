"""Exact uniform sampling driven by a completed memo table.

A draw walks the recursion from the root: at each row it picks a child
state with probability proportional to (number of rows it stands for) x
(its count), then picks one of those concrete rows uniformly.  The counts
are exact, so the result is exactly uniform given uniform random bits.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass, field
from typing import Sequence

from .core import Composition, ContractError, CountsVector, MarginSpec, counts_vector, reduce
from .enumeration import MemoTable, Mode, count


class InfeasibleError(ValueError):
    """No matrix has the requested margins."""


class RandomSource:
    """Seedable bit source that counts the bits it hands out."""

    def __init__(self, seed: int | None = 0):
        self._gen = random.Random(seed)
        self.bits_used = 0

    def getrandbits(self, k: int) -> int:
        self.bits_used += k
        return self._gen.getrandbits(k) if k else 0


def uniform_bigint(rng: RandomSource, k: int) -> int:
    """Uniform integer on ``1..k`` by rejection from ``ceil(log2 k)`` random bits."""
    if k < 1:
        raise ContractError(f"uniform_bigint needs k >= 1, got {k}")
    if k == 1:
        return 1
    nbits = (k - 1).bit_length()
    while True:
        x = rng.getrandbits(nbits)
        if x < k:
            return x + 1


@dataclass
class SamplerContext:
    spec: MarginSpec
    mode: Mode
    table: MemoTable
    total: int
    row_permutation: tuple[int, ...]
    _branches: dict = field(default_factory=dict, repr=False)

    def branches(self, j: int, r: CountsVector) -> tuple[list[int], list[Composition], list[CountsVector]]:
        """Cumulative child weights at state ``(j, r)``, in child order.

        Results are cached per state; the memo table itself is only read.
        """
        key = (j, r)
        hit = self._branches.get(key)
        if hit is not None:
            return hit
        cumulative, parts, states = [], [], []
        acc = 0
        for s, coef, child in self.table.children(j, r):
            w = coef * self.table[j + 1, child]
            if not w:
                continue
            acc += w
            cumulative.append(acc)
            parts.append(s)
            states.append(child)
        if acc != self.table[j, r]:
            raise AssertionError(f"child weights at {(j, r)} sum to {acc}, expected {self.table[j, r]}")
        self._branches[key] = (cumulative, parts, states)
        return cumulative, parts, states


def prepare(spec: MarginSpec, mode: Mode | str, table: MemoTable | None = None) -> SamplerContext:
    mode = Mode(mode)
    if table is None:
        _, table = count(spec, mode)
    elif table.mode is not mode:
        raise ContractError("memo table was built for a different mode")
    if table.total == 0:
        raise InfeasibleError(f"infeasible margins: no {mode.value} matrix has row sums "
                              f"{spec.row_sums} and column sums {spec.col_sums}")
    return SamplerContext(spec, mode, table, table.total, table.permutation)


def select_child(j: int, r: CountsVector, rng: RandomSource, ctx: SamplerContext) -> Composition:
    """Pick the composition for row ``j`` with probability weight/count(j, r)."""
    cumulative, parts, _ = ctx.branches(j, r)
    x = uniform_bigint(rng, cumulative[-1])
    return parts[bisect.bisect_left(cumulative, x)]


def buckets(v: Sequence[int]) -> dict[int, list[int]]:
    """Column indices grouped by current column sum (positive sums only)."""
    out: dict[int, list[int]] = {}
    for j, x in enumerate(v):
        if x > 0:
            out.setdefault(x, []).append(j)
    return out


def _choose(pool: list[int], k: int, rng: RandomSource) -> list[int]:
    # sequential sampling without replacement; pool is consumed in place
    picked = []
    for _ in range(k):
        i = uniform_bigint(rng, len(pool)) - 1
        pool[i], pool[-1] = pool[-1], pool[i]
        picked.append(pool.pop())
    return picked


def reconstruct_row_binary(v: Sequence[int], s: Composition, rng: RandomSource) -> list[int]:
    """A uniformly random 0/1 row putting ``s_i`` ones into columns of sum ``i``."""
    by_sum = buckets(v)
    u = [0] * len(v)
    for i, k in enumerate(s, start=1):
        if not k:
            continue
        pool = list(by_sum.get(i, ()))
        if k > len(pool):
            raise ContractError(f"s={s} exceeds the columns available for v={tuple(v)}")
        for j in _choose(pool, k, rng):
            u[j] = 1
    return u


def reconstruct_row_natural(v: Sequence[int], s: Composition, rng: RandomSource) -> list[int]:
    """A uniformly random N-valued row whose transition is ``s``.

    With ``t = reduce(counts_vector(v), s)``, for ``i`` from the largest
    column sum down to 1, ``t_i`` columns are chosen among those of sum
    ``i`` and the not-yet-chosen larger ones, and left with sum exactly
    ``i``.  Columns never chosen are emptied.
    """
    r = counts_vector(v)
    t = reduce(r, s)
    d = len(r)
    by_sum = buckets(v)
    u = [0] * len(v)
    carried: list[int] = []
    for i in range(d, 0, -1):
        pool = carried + by_sum.get(i, [])
        ti = t[i - 1] if i <= len(t) else 0
        for j in _choose(pool, ti, rng):
            u[j] = v[j] - i
        carried = pool
    for j in carried:
        u[j] = v[j]
    return u


def draw(ctx: SamplerContext, rng: RandomSource) -> list[list[int]]:
    """One matrix, uniform over all matrices with ``ctx.spec``'s margins."""
    table = ctx.table
    v = list(ctx.spec.col_sums)
    r = table.root
    rows: list[list[int] | None] = [None] * table.m
    reconstruct = reconstruct_row_binary if ctx.mode is Mode.BINARY else reconstruct_row_natural
    for j in range(table.m):
        s = select_child(j, r, rng, ctx)
        u = reconstruct(v, s, rng)
        v = [a - b for a, b in zip(v, u)]
        r = reduce(r, s)
        if counts_vector(v) != r:
            raise AssertionError(f"column state {v} disagrees with memo state {r}")
        rows[ctx.row_permutation[j]] = u
    return rows  # type: ignore[return-value]


def sample(spec: MarginSpec, mode: Mode | str, num: int = 1, seed: int | None = 0) -> list[list[list[int]]]:
    ctx = prepare(spec, mode)
    rng = RandomSource(seed)
    return [draw(ctx, rng) for _ in range(num)]
