import itertools
from fractions import Fraction
from collections import Counter

import pytest
from scipy.stats import chi2

from margincount import MarginSpec, Mode, count
from margincount.core import ContractError, counts_vector, reduce
from margincount.enumeration import shifted_compositions
from margincount.oracle import brute_enumerate
from margincount.sample import (
    InfeasibleError,
    RandomSource,
    draw,
    prepare,
    reconstruct_row_binary,
    reconstruct_row_natural,
    select_child,
    uniform_bigint,
)

from conftest import TOY, TOY_BINARY, has_margins


def chi_square(counter, population, draws):
    expected = draws / len(population)
    return sum((counter.get(x, 0) - expected) ** 2 / expected for x in population)


def test_prepare_totals():
    assert prepare(TOY, "binary").total == 8
    assert prepare(TOY, "natural").total == 24
    with pytest.raises(InfeasibleError):
        prepare(MarginSpec([2], [2]), "binary")


def test_prepare_reuses_table():
    _, table = count(TOY, "natural")
    ctx = prepare(TOY, "natural", table)
    assert ctx.table is table
    with pytest.raises(ContractError):
        prepare(TOY, "binary", table)


def test_uniform_bigint_small():
    rng = RandomSource(3)
    assert all(uniform_bigint(rng, 1) == 1 for _ in range(100))
    with pytest.raises(ContractError):
        uniform_bigint(rng, 0)


def test_uniform_bigint_frequencies():
    rng = RandomSource(11)
    freq = Counter(uniform_bigint(rng, 8) for _ in range(80_000))
    assert set(freq) == set(range(1, 9))
    assert all(abs(c - 10_000) <= 500 for c in freq.values())


@pytest.mark.parametrize("k", [2, 3, 5, 8, 9, 1000, 2**70 + 1])
def test_uniform_bigint_bit_budget(k):
    nbits = (k - 1).bit_length()
    accept = Fraction(k, 2**nbits)
    # attempts are geometric(accept); expected bits nbits / accept < 2 nbits
    expected = nbits / accept
    assert expected <= 2 * nbits
    sd = nbits * float((1 - accept) ** 0.5 / accept)
    rng = RandomSource(5)
    draws = 5000
    for _ in range(draws):
        x = uniform_bigint(rng, k)
        assert 1 <= x <= k
    assert abs(rng.bits_used / draws - float(expected)) <= 5 * sd / draws**0.5


def test_uniform_bigint_deterministic():
    a, b = RandomSource(42), RandomSource(42)
    big = 10**40 + 7
    assert [uniform_bigint(a, big) for _ in range(50)] == [uniform_bigint(b, big) for _ in range(50)]


def test_select_child_single_option():
    ctx = prepare(MarginSpec([1, 1], [2]), "binary")
    assert select_child(0, (0, 1), RandomSource(0), ctx) == (0, 1)


def test_root_branch_weights_partition_count():
    for mode, total in [("binary", 8), ("natural", 24)]:
        ctx = prepare(TOY, mode)
        cumulative, parts, _ = ctx.branches(0, ctx.table.root)
        assert cumulative[-1] == total
        assert len(parts) == len(set(parts))


def test_reconstruct_binary_examples():
    assert reconstruct_row_binary((3, 2, 1), (1, 1, 1), RandomSource(0)) == [1, 1, 1]
    rng = RandomSource(1)
    freq = Counter(tuple(reconstruct_row_binary((1, 1), (1,), rng)) for _ in range(4000))
    assert set(freq) == {(1, 0), (0, 1)}
    assert abs(freq[1, 0] - 2000) < 5 * 32


def test_reconstruct_natural_examples():
    assert reconstruct_row_natural((3,), (1, 1, 1), RandomSource(0)) == [3]
    assert reconstruct_row_natural((2, 1, 3), (0, 0, 0), RandomSource(0)) == [0, 0, 0]


def _rows_for(v, s, binary):
    """All rows u <= v whose transition from counts_vector(v) is s."""
    target = reduce(counts_vector(v), s)
    cap = [1 if binary else x for x in v]
    out = []
    for u in itertools.product(*(range(min(c, x) + 1) for c, x in zip(cap, v))):
        if sum(u) == sum(s) and counts_vector([a - b for a, b in zip(v, u)]) == target:
            out.append(u)
    return out


@pytest.mark.parametrize("v", [(3, 2, 1), (2, 2, 1, 0), (3, 3, 1), (1, 1, 1, 1), (2, 3, 2, 3)])
def test_natural_choice_count_matches_exhaustive(v):
    from margincount.enumeration import coefficient

    r = counts_vector(v)
    rng = RandomSource(9)
    for k in range(sum(v) + 1):
        for s in shifted_compositions(r, k):
            rows = _rows_for(v, s, binary=False)
            assert len(rows) == coefficient(r, s, Mode.NATURAL)
            seen = {tuple(reconstruct_row_natural(v, s, rng)) for _ in range(20 * len(rows))}
            assert seen == set(rows)


def test_natural_row_uniform():
    v, s = (3, 2, 2, 1), (1, 1, 1)
    rows = _rows_for(v, s, binary=False)
    assert len(rows) > 3
    rng = RandomSource(2)
    draws = 2000 * len(rows)
    freq = Counter(tuple(reconstruct_row_natural(v, s, rng)) for _ in range(draws))
    assert chi_square(freq, rows, draws) < chi2.ppf(0.999, len(rows) - 1)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_toy_binary_uniform(seed):
    ctx = prepare(TOY, "binary")
    rng = RandomSource(seed)
    freq = Counter()
    for _ in range(80_000):
        m = draw(ctx, rng)
        assert has_margins(m, TOY)
        freq[tuple(map(tuple, m))] += 1
    assert set(freq) == TOY_BINARY
    assert all(abs(c - 10_000) <= 500 for c in freq.values())
    assert chi_square(freq, TOY_BINARY, 80_000) < 24.32


def test_toy_natural_uniform():
    population = set(brute_enumerate(TOY, "natural"))
    ctx = prepare(TOY, "natural")
    rng = RandomSource(17)
    freq = Counter()
    for _ in range(120_000):
        m = draw(ctx, rng)
        assert has_margins(m, TOY)
        freq[tuple(map(tuple, m))] += 1
    assert set(freq) == population
    assert all(abs(c - 5_000) <= 350 for c in freq.values())


SMALL = [
    MarginSpec([2, 1, 1], [1, 2, 1]),
    MarginSpec([3, 2, 1], [2, 2, 2]),
    MarginSpec([1, 1, 2, 2], [3, 3]),
    MarginSpec([2, 2, 2], [1, 2, 2, 1]),
    MarginSpec([3, 1, 2, 0], [2, 1, 3]),
]


@pytest.mark.parametrize("mode", ["binary", "natural"])
@pytest.mark.parametrize("spec", SMALL)
def test_small_instances_chi_square(spec, mode):
    population = set(brute_enumerate(spec, mode))
    ctx = prepare(spec, mode)
    assert ctx.total == len(population)
    rng = RandomSource(hash((spec.row_sums, spec.col_sums, mode)) & 0xFFFF)
    draws = 400 * len(population)
    freq = Counter()
    for _ in range(draws):
        m = draw(ctx, rng)
        assert has_margins(m, spec)
        if mode == "binary":
            assert all(x in (0, 1) for row in m for x in row)
        freq[tuple(map(tuple, m))] += 1
    assert set(freq) <= population
    if len(population) > 1:
        assert chi_square(freq, population, draws) < chi2.ppf(0.999, len(population) - 1)


def test_state_consistency_on_large_instance():
    from test_enumeration import FINCH

    ctx = prepare(FINCH, "binary")
    rng = RandomSource(0)
    for _ in range(20):
        assert has_margins(draw(ctx, rng), FINCH)


def test_natural_large_entries():
    spec = MarginSpec([7, 0, 5, 3], [6, 6, 3])
    ctx = prepare(spec, "natural")
    rng = RandomSource(4)
    for _ in range(200):
        assert has_margins(draw(ctx, rng), spec)


def test_determinism():
    for mode in ("binary", "natural"):
        a = [draw(prepare(TOY, mode), RandomSource(99)) for _ in range(1)]
        ctx = prepare(TOY, mode)
        r1, r2 = RandomSource(5), RandomSource(5)
        assert [draw(ctx, r1) for _ in range(50)] == [draw(ctx, r2) for _ in range(50)]
        assert a == [draw(prepare(TOY, mode), RandomSource(99))]


def test_table_not_mutated_by_sampling():
    ctx = prepare(TOY, "natural")
    before = dict(ctx.table.values)
    rng = RandomSource(0)
    for _ in range(100):
        draw(ctx, rng)
    assert ctx.table.values == before
