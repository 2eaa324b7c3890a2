"""Margin types and the small combinatorial calculus used by the recursion.

A *counts vector* is stored as a plain tuple ``r`` where ``r[i - 1]`` is the
number of columns whose current sum is ``i``.  Canonical form has no
trailing zeros, so equal states hash equally.  Compositions use the same
1-based-in-0-based layout: ``s[i - 1]`` is the part at index ``i``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

CountsVector = tuple[int, ...]
Composition = tuple[int, ...]


class ContractError(ValueError):
    """A caller broke an operation's precondition."""


@dataclass(frozen=True)
class MarginSpec:
    """Row sums ``p`` and column sums ``q`` of a family of matrices."""

    row_sums: tuple[int, ...]
    col_sums: tuple[int, ...]

    def __init__(self, row_sums: Iterable[int], col_sums: Iterable[int]):
        rows = tuple(int(x) for x in row_sums)
        cols = tuple(int(x) for x in col_sums)
        if any(x < 0 for x in rows) or any(x < 0 for x in cols):
            raise ValueError("margins must be non-negative integers")
        object.__setattr__(self, "row_sums", rows)
        object.__setattr__(self, "col_sums", cols)

    @property
    def m(self) -> int:
        return len(self.row_sums)

    @property
    def n(self) -> int:
        return len(self.col_sums)

    @property
    def a(self) -> int:
        """Largest row sum."""
        return max(self.row_sums, default=0)

    @property
    def b(self) -> int:
        """Largest column sum."""
        return max(self.col_sums, default=0)

    @property
    def c(self) -> int:
        """Total row mass."""
        return sum(self.row_sums)

    @property
    def balanced(self) -> bool:
        return sum(self.row_sums) == sum(self.col_sums)

    def transpose(self) -> MarginSpec:
        return MarginSpec(self.col_sums, self.row_sums)


def trim(r: Sequence[int]) -> CountsVector:
    """Drop trailing zeros."""
    end = len(r)
    while end and r[end - 1] == 0:
        end -= 1
    return tuple(r[:end])


def counts_vector(q: Iterable[int]) -> CountsVector:
    """Multiplicities of the positive values in ``q``; zeros are ignored."""
    tally = Counter(x for x in q if x > 0)
    if not tally:
        return ()
    return tuple(tally.get(i, 0) for i in range(1, max(tally) + 1))


def conjugate(r: Iterable[int]) -> tuple[int, ...]:
    """``result[i - 1] = #{j : r_j >= i}`` for ``i = 1..max(r)``."""
    return suffix_sums(counts_vector(r))


def suffix_sums(counts: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(counts)
    acc = 0
    for i in range(len(counts) - 1, -1, -1):
        acc += counts[i]
        out[i] = acc
    return tuple(out)


def weight(r: Sequence[int]) -> int:
    return sum(i * x for i, x in enumerate(r, start=1))


def reduce(r: Sequence[int], s: Sequence[int]) -> CountsVector:
    """Return ``r - s + Ls`` in canonical form.

    ``s`` may be shorter or longer than ``r``; missing entries are zero.
    """
    length = max(len(r), len(s))
    out = []
    for i in range(length):
        ri = r[i] if i < len(r) else 0
        si = s[i] if i < len(s) else 0
        nxt = s[i + 1] if i + 1 < len(s) else 0
        v = ri - si + nxt
        if v < 0:
            raise ContractError(f"reduce({tuple(r)}, {tuple(s)}) has a negative entry")
        out.append(v)
    return trim(out)


def gale_ryser_feasible(p: Sequence[int], q_counts: Sequence[int]) -> bool:
    """True iff some binary matrix has row sums ``p`` and column multiplicities ``q_counts``."""
    rows = sorted(p, reverse=True)
    if sum(rows) != weight(q_counts):
        return False
    conj = suffix_sums(q_counts)
    lhs = rhs = 0
    for i, pi in enumerate(rows):
        lhs += pi
        if i < len(conj):
            rhs += conj[i]
        if lhs > rhs:
            return False
    return True
