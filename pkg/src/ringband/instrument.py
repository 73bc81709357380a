"""Operation counters for complexity measurements.

Counting is off unless a :func:`counting` block is active, so the hot
paths pay one context-variable lookup per *batch* of work, not per scalar.
"""

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass


@dataclass
class OpCounts:
    block_muls: int = 0  # DenseMatrix products
    entry_ops: int = 0  # stencil terms touched by the inverse recurrences
    float_ops: int = 0  # scalar operations executed by a Float64 field


_active: ContextVar = ContextVar("ringband_counts", default=None)


@contextmanager
def counting():
    """Collect operation counts for the enclosed block.

    >>> with counting() as counts:
    ...     pass
    >>> counts.block_muls
    0
    """
    counts = OpCounts()
    token = _active.set(counts)
    try:
        yield counts
    finally:
        _active.reset(token)


def tally(name, amount=1):
    counts = _active.get()
    if counts is not None:
        setattr(counts, name, getattr(counts, name) + amount)
