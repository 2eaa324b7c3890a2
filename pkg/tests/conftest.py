import pytest

from margincount import MarginSpec

TOY = MarginSpec([2, 2, 1, 1], [3, 2, 1])

# the 8 binary matrices listed for the toy margins
TOY_BINARY = {
    ((1, 1, 0), (1, 1, 0), (1, 0, 0), (0, 0, 1)),
    ((1, 1, 0), (1, 1, 0), (0, 0, 1), (1, 0, 0)),
    ((1, 1, 0), (1, 0, 1), (1, 0, 0), (0, 1, 0)),
    ((1, 1, 0), (1, 0, 1), (0, 1, 0), (1, 0, 0)),
    ((1, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 0)),
    ((1, 0, 1), (1, 1, 0), (1, 0, 0), (0, 1, 0)),
    ((1, 0, 1), (1, 1, 0), (0, 1, 0), (1, 0, 0)),
    ((0, 1, 1), (1, 1, 0), (1, 0, 0), (1, 0, 0)),
}


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the multi-hour golden tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def margins_of(matrix):
    rows = tuple(sum(row) for row in matrix)
    cols = tuple(sum(col) for col in zip(*matrix)) if matrix else ()
    return rows, cols


def has_margins(matrix, spec):
    rows, cols = margins_of(matrix)
    if not matrix:
        return spec.m == 0
    return rows == spec.row_sums and cols == spec.col_sums
