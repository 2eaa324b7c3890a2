"""Exact counting and uniform sampling of matrices with prescribed margins."""

from .core import ContractError, MarginSpec, conjugate, counts_vector, gale_ryser_feasible, reduce, weight
from .enumeration import MemoTable, Mode, count

__all__ = [
    "ContractError",
    "MarginSpec",
    "MemoTable",
    "Mode",
    "conjugate",
    "count",
    "counts_vector",
    "gale_ryser_feasible",
    "reduce",
    "weight",
]
