"""Median graphs, hyperplanes and group actions on cube complexes."""

from ._cubekit import (
    Action,
    BudgetExhausted,
    CapacityError,
    Complex,
    Error,
    ParseError,
    PreconditionError,
    fixtures,
    median_violation,
    report,
    set_thread_count,
    thread_count,
)

__all__ = [
    "Action",
    "BudgetExhausted",
    "CapacityError",
    "Complex",
    "Error",
    "ParseError",
    "PreconditionError",
    "fixtures",
    "median_violation",
    "report",
    "set_thread_count",
    "thread_count",
]
__version__ = "0.1.0"
