"""Brute-force ground truth for small instances.

Cells are filled one at a time in row-major order with no use of counts
vectors or compositions, so agreement with the recursion is independent
evidence.
"""

from __future__ import annotations

from typing import Iterator

from .core import MarginSpec
from .enumeration import Mode

MAX_CELLS = 20
MAX_MARGIN = 4
MAX_LISTED = 10**5


class OracleRefused(ValueError):
    """Instance is outside the brute-force size guard."""


def _guard(spec: MarginSpec) -> None:
    if spec.m * spec.n > MAX_CELLS:
        raise OracleRefused(f"{spec.m}x{spec.n} exceeds {MAX_CELLS} cells")
    if max(spec.a, spec.b) > MAX_MARGIN:
        raise OracleRefused(f"margin above {MAX_MARGIN}")


def _fill(spec: MarginSpec, binary: bool) -> Iterator[list[list[int]]]:
    m, n = spec.m, spec.n
    if not spec.balanced:
        return
    row_left = list(spec.row_sums)
    col_left = list(spec.col_sums)
    grid = [[0] * n for _ in range(m)]
    cap = 1 if binary else None

    def rec(cell: int) -> Iterator[list[list[int]]]:
        if cell == m * n:
            if not any(row_left) and not any(col_left):
                yield [row[:] for row in grid]
            return
        i, j = divmod(cell, n)
        hi = min(row_left[i], col_left[j])
        if cap is not None:
            hi = min(hi, cap)
        lo = 0
        if j == n - 1:
            lo = row_left[i]  # last cell of a row is forced
        if i == m - 1:
            lo = max(lo, col_left[j])  # last cell of a column is forced
        for x in range(lo, hi + 1):
            grid[i][j] = x
            row_left[i] -= x
            col_left[j] -= x
            yield from rec(cell + 1)
            row_left[i] += x
            col_left[j] += x
        grid[i][j] = 0

    if m == 0 or n == 0:
        if not any(spec.row_sums) and not any(spec.col_sums):
            yield [[0] * n for _ in range(m)]
        return
    yield from rec(0)


def brute_count(spec: MarginSpec, mode: Mode | str) -> int:
    _guard(spec)
    return sum(1 for _ in _fill(spec, Mode(mode) is Mode.BINARY))


def brute_enumerate(spec: MarginSpec, mode: Mode | str) -> list[tuple[tuple[int, ...], ...]]:
    """Every matrix with the given margins, as tuples of row tuples."""
    _guard(spec)
    out = []
    for grid in _fill(spec, Mode(mode) is Mode.BINARY):
        if len(out) >= MAX_LISTED:
            raise OracleRefused(f"more than {MAX_LISTED} matrices")
        out.append(tuple(tuple(row) for row in grid))
    return out
