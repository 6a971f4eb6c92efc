"""Cooperative time budgets.

Long computations call :func:`check` between batches of polynomial work.  A
budget is installed with :func:`deadline`; outside of one, ``check`` is a
no-op.  Nothing is ever interrupted mid-operation, so partially built
results are simply discarded by the caller.
"""

from __future__ import annotations

import contextlib
import contextvars
import time

_deadline: contextvars.ContextVar[float | None] = contextvars.ContextVar("goodslice_deadline", default=None)


class BudgetExceeded(RuntimeError):
    pass


def check() -> None:
    limit = _deadline.get()
    if limit is not None and time.monotonic() > limit:
        raise BudgetExceeded("time budget exhausted")


@contextlib.contextmanager
def deadline(seconds: float | None):
    """Install a budget of ``seconds`` (``None`` or <= 0 means unlimited)."""
    if seconds is None or seconds <= 0:
        yield
        return
    limit = time.monotonic() + seconds
    outer = _deadline.get()
    if outer is not None:
        limit = min(limit, outer)
    token = _deadline.set(limit)
    try:
        yield
    finally:
        _deadline.reset(token)
