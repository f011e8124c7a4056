"""Resource limits, cancellation, and work accounting.

A Budget is handed down into every Groebner computation.  It carries the
shared wall-clock deadline and basis-size cap, a cancellation probe
installed by the parallel scheduler, and two kinds of counters: per-task
counters (deterministic, aggregated into reports) and shared instrumentation
counters (engine runs actually started, used by the cancellation tests).
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import CancelledError, LimitExceededError


@dataclass(frozen=True)
class Limits:
    """User-facing resource caps; None disables a cap."""
    time_s: Optional[float] = None
    max_basis: Optional[int] = None


class _SharedState:
    __slots__ = ("deadline", "max_basis", "lock", "gb_runs_started",
                 "observer")

    def __init__(self, limits: Optional[Limits], observer=None):
        now = time.monotonic()
        self.deadline = (now + limits.time_s
                         if limits and limits.time_s is not None else None)
        self.max_basis = limits.max_basis if limits else None
        self.lock = threading.Lock()
        self.gb_runs_started = 0
        self.observer = observer


class Budget:
    """Per-task view onto the shared limit state.

    checkpoint() raises CancelledError when the scheduler's probe fires and
    LimitExceededError past the deadline; engines call it at loop heads.
    """

    __slots__ = ("shared", "cancel_fn", "task_path", "gb_queries", "frames")

    def __init__(self, limits: Optional[Limits] = None, observer=None,
                 shared: Optional[_SharedState] = None,
                 cancel_fn: Optional[Callable[[], bool]] = None,
                 task_path: tuple = ()):
        self.shared = shared if shared is not None else _SharedState(
            limits, observer)
        self.cancel_fn = cancel_fn
        self.task_path = task_path
        self.gb_queries = 0
        self.frames = 0

    def child(self, task_path: tuple,
              cancel_fn: Optional[Callable[[], bool]] = None) -> "Budget":
        return Budget(shared=self.shared,
                      cancel_fn=cancel_fn if cancel_fn else self.cancel_fn,
                      task_path=task_path)

    def checkpoint(self):
        if self.cancel_fn is not None and self.cancel_fn():
            raise CancelledError()
        dl = self.shared.deadline
        if dl is not None and time.monotonic() > dl:
            raise LimitExceededError("time")

    def basis_guard(self, size: int):
        cap = self.shared.max_basis
        if cap is not None and size > cap:
            raise LimitExceededError("basis", f"{size} elements")

    def record_query(self):
        self.gb_queries += 1

    def record_run_start(self):
        # Polling under the shared lock, and publishing commits under the
        # same lock, gives a strict order between a committed verdict and
        # any later engine start: none may follow the commit.
        sh = self.shared
        with sh.lock:
            if self.cancel_fn is not None and self.cancel_fn():
                raise CancelledError()
            sh.gb_runs_started += 1
            if sh.observer is not None:
                sh.observer.on_gb_start(self.task_path)

    @property
    def runs_started(self) -> int:
        return self.shared.gb_runs_started


def ensure_budget(budget: Optional[Budget]) -> Budget:
    return budget if budget is not None else Budget()
