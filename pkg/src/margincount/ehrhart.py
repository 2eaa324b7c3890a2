"""Ehrhart polynomials of the Birkhoff polytope.

``H_n(r)`` counts n x n N-valued matrices with every line sum ``r``.  It is
a polynomial of degree ``(n-1)^2`` that vanishes at ``-1..-(n-1)`` and
satisfies ``H_n(-n-r) = (-1)^((n-1)^2) H_n(r)``, so the values at
``r = 0..C(n-1, 2)`` pin it down completely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .core import MarginSpec
from .enumeration import Mode, count

SUPPORTED_N = range(2, 9)


def dimensions(n: int) -> tuple[int, int]:
    """``(k, d)``: number of directly counted values beyond r=0, and the degree."""
    return comb(n - 1, 2), (n - 1) ** 2


def h_value(n: int, r: int) -> int:
    if n < 1 or r < 0:
        raise ValueError(f"need n >= 1 and r >= 0, got n={n}, r={r}")
    return count(MarginSpec([r] * n, [r] * n), Mode.NATURAL)[0]


def stanley_vector(n: int, values: Sequence[int] | None = None) -> list[int]:
    """Values of ``H_n`` at the nodes ``-n-k+1, ..., k``.

    ``values`` may supply ``H_n(0..k)``; otherwise they are counted.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    k, d = dimensions(n)
    if values is None:
        values = [h_value(n, r) for r in range(k + 1)]
    if len(values) != k + 1:
        raise ValueError(f"expected {k + 1} values, got {len(values)}")
    sign = -1 if d % 2 else 1
    # H(-n-t) for t = k-1 .. 0, then zeros at -(n-1)..-1, then H(0..k)
    reflected = [sign * values[t] for t in range(k - 1, -1, -1)]
    out = reflected + [0] * (n - 1) + list(values)
    assert len(out) == d + 1
    return out


def nodes(n: int) -> list[int]:
    k, d = dimensions(n)
    return [i - n - k for i in range(1, d + 2)]


def bareiss_solve(a: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction]:
    """Solve ``a x = rhs`` exactly over the integers.

    Forward elimination is fraction-free (every intermediate stays an
    integer); only back substitution divides, into ``Fraction``.
    """
    size = len(a)
    m = [list(map(int, row)) + [int(b)] for row, b in zip(a, rhs)]
    prev = 1
    for k in range(size):
        pivot = max(range(k, size), key=lambda i: abs(m[i][k]))
        if m[pivot][k] == 0:
            raise ArithmeticError("singular matrix")
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
        pk = m[k][k]
        row_k = m[k]
        for i in range(k + 1, size):
            row_i = m[i]
            lead = row_i[k]
            for j in range(k + 1, size + 1):
                row_i[j] = (pk * row_i[j] - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    x = [Fraction(0)] * size
    for i in range(size - 1, -1, -1):
        acc = Fraction(m[i][size])
        for j in range(i + 1, size):
            acc -= m[i][j] * x[j]
        x[i] = acc / m[i][i]
    return x


@dataclass(frozen=True)
class RationalPoly:
    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        for i in range(len(self.coefficients) - 1, -1, -1):
            if self.coefficients[i]:
                return i
        return -1

    def __call__(self, r) -> Fraction:
        return evaluate(self, r)


def evaluate(poly: RationalPoly, r) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly.coefficients):
        acc = acc * r + c
    return acc


def solve_coefficients(n: int, v: Sequence[int]) -> RationalPoly:
    xs = nodes(n)
    if len(v) != len(xs):
        raise ValueError(f"vector has length {len(v)}, expected {len(xs)}")
    a = [[x ** j for j in range(len(xs))] for x in xs]
    return RationalPoly(tuple(bareiss_solve(a, v)))


def ehrhart_polynomial(n: int, values: Sequence[int] | None = None) -> RationalPoly:
    return solve_coefficients(n, stanley_vector(n, values))
