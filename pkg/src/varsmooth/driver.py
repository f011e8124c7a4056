"""Top-level smoothness verdicts and the deterministic chart scheduler.

The recursive test is broken into small tasks (chart pipelines, single
frame checks, descend steps) addressed by tuple paths.  A pool executes
them on one or more workers, always preferring the lexicographically
smallest pending path.  Failures commit only once every task with a
smaller path has finished, so the reported witness is the minimal failing
path in the whole tree and the verdict, witness, and committed statistics
are identical for every worker count and schedule.  After a verdict
commits, a shared flag cancels all remaining work; budgets poll it before
starting any further Groebner engine run.
"""

from __future__ import annotations

import heapq
import random
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .charts import (Chart, affine_jacobian_criterion, delta_frame_tasks,
                     descend, embedded_frame_tasks)
from .errors import (CancelledError, ContractError, LimitExceededError,
                     VarsmoothError)
from .groebner import Ideal, equal_on_chart, krull_dimension, radical_membership
from .limits import Budget, Limits
from .poly import Polynomial, dehomogenize

MODES = ("hironaka", "hybrid", "jacobian")


@dataclass(frozen=True)
class Config:
    """Run parameters.

    mode selects the descent test, the hybrid variant, or the classical
    Jacobian criterion.  descent_depth applies to hybrid mode and counts
    descents before switching to the relative Jacobian criterion;
    to_codim, when set, overrides it with max(0, codim - to_codim).
    strict_cover switches the frame-cover exit to plain ideal membership,
    combinations toggles the random-linear-combination shortcut during
    descent, and lift_frames restricts frame enumeration through a lift
    of the chart localizer.
    """

    mode: str = "hironaka"
    descent_depth: int = 0
    to_codim: Optional[int] = None
    jobs: int = 1
    seed: int = 0
    limits: Limits = field(default_factory=Limits)
    strict_cover: bool = False
    combinations: bool = True
    lift_frames: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ContractError(f"unknown mode {self.mode!r}")
        if self.descent_depth < 0:
            raise ContractError("descent_depth must be >= 0")
        if self.to_codim is not None and self.to_codim < 0:
            raise ContractError("to_codim must be >= 0")
        if self.jobs < 1:
            raise ContractError("jobs must be >= 1")


class Observer:
    """No-op hooks; subclass to instrument a run.

    Callbacks fire under internal locks and must be quick and reentrant-
    free.  on_gb_start fires when a Groebner engine run actually starts
    (cache misses only); on_commit fires exactly once when a verdict
    commits; on_task_start / on_task_done bracket every task execution;
    on_cover reports each chart's frame enumeration (the FrameEnumeration
    carries the frames, their determinants, and the cover-complete flag)
    so covers can be re-verified after the run.
    """

    def on_gb_start(self, task_path):
        pass

    def on_task_start(self, path, kind):
        pass

    def on_task_done(self, path, kind, passed):
        pass

    def on_commit(self, path):
        pass

    def on_cover(self, path, chart, enumeration):
        pass


@dataclass(frozen=True)
class Witness:
    """Locates a failed check: the task path, the chart depth, the kind of
    check (delta, jacobian, criterion), the frame columns if any, and
    fingerprints of the chart data."""

    path: tuple
    depth: int
    kind: str
    frame_cols: Optional[tuple]
    ambient: str
    variety: str
    localizer: str

    def as_dict(self):
        return {
            "path": list(self.path),
            "depth": self.depth,
            "kind": self.kind,
            "frame_cols": (list(self.frame_cols)
                           if self.frame_cols is not None else None),
            "ambient": self.ambient,
            "variety": self.variety,
            "localizer": self.localizer,
        }


@dataclass
class Verdict:
    status: str                     # smooth | singular | indeterminate
    mode: str
    witness: Optional[Witness]
    stats: dict
    timing: dict
    reason: Optional[str] = None

    def as_report(self, include_timing: bool = False) -> dict:
        rep = {
            "status": self.status,
            "mode": self.mode,
            "witness": self.witness.as_dict() if self.witness else None,
            "stats": dict(self.stats),
            "reason": self.reason,
        }
        if include_timing:
            rep["timing"] = dict(self.timing)
        return rep


class _RunContext:
    __slots__ = ("config", "observer", "root_budget")

    def __init__(self, config: Config, observer: Observer):
        self.config = config
        self.observer = observer
        self.root_budget = Budget(limits=config.limits, observer=observer)

    def rng_for(self, path) -> random.Random:
        return random.Random(f"{self.config.seed}|{path}")


class _Outcome:
    __slots__ = ("fail", "spawn", "joined")

    def __init__(self, fail=None, spawn=(), joined=None):
        self.fail = fail
        self.spawn = list(spawn)
        self.joined = joined


class _Task:
    kind = "task"
    is_chart = False
    __slots__ = ("path", "depth", "ready_at")

    def __init__(self, path, depth):
        self.path = tuple(path)
        self.depth = depth
        self.ready_at = 0.0

    def run(self, ctx: _RunContext, budget: Budget) -> _Outcome:
        raise NotImplementedError


class _ChartTask(_Task):
    """Structural checks for one chart, then either a settled answer or
    frame subtasks joined by a descend / embedded-criterion step."""

    kind = "chart"
    is_chart = True
    __slots__ = ("chart", "switch_depth")

    def __init__(self, path, chart: Chart, switch_depth=None):
        super().__init__(path, chart.depth)
        self.chart = chart
        self.switch_depth = switch_depth

    def _witness(self, check_kind, cols):
        c = self.chart
        return Witness(self.path, c.depth, check_kind, cols,
                       c.ambient.fingerprint(), c.variety.fingerprint(),
                       str(c.localizer))

    def run(self, ctx, budget):
        chart = self.chart
        cfg = ctx.config
        ring = chart.ring

        for f in chart.variety.generators:
            if f.is_constant():
                return _Outcome()  # unit ideal, nothing to check

        if cfg.mode == "jacobian":
            ok = affine_jacobian_criterion(chart.variety, budget=budget)
            if ok:
                return _Outcome()
            return _Outcome(fail=self._witness("criterion", None))

        d_x = krull_dimension(chart.variety, budget=budget)
        if d_x < 0:
            return _Outcome()  # empty variety

        if chart.ambient.generators and equal_on_chart(
                chart.ambient, chart.variety, chart.localizer, budget=budget):
            return _Outcome()  # X equals the smooth ambient here

        r = len(chart.ambient.generators)
        n = ring.nvars
        if n - r < d_x:
            raise ContractError(
                "ambient dimension fell below the variety's; the input is "
                "likely not equidimensional or not radical")
        if n - r == d_x:
            # the ambient is smooth of the variety's dimension, so the
            # variety is a union of its connected components here
            return _Outcome()

        switch = self.switch_depth
        if cfg.mode == "hybrid" and switch is None:
            if cfg.to_codim is not None:
                switch = max(0, (n - r - d_x) - cfg.to_codim) + chart.depth
            else:
                switch = cfg.descent_depth

        enum, checks = delta_frame_tasks(chart, strict=cfg.strict_cover,
                                         track=cfg.lift_frames, budget=budget)
        ctx.observer.on_cover(self.path, chart, enum)
        frame_tasks = [
            _FrameTask(self.path + (i,), chart, "delta", frame.cols,
                       ideal, test)
            for i, (frame, ideal, test) in enumerate(checks)
        ]
        t = len(frame_tasks)
        if cfg.mode == "hybrid" and chart.depth >= switch:
            cont = _EmbeddedTask(self.path + (t,), chart)
        else:
            cont = _DescendTask(self.path + (t,), chart, switch)
        return _Outcome(spawn=frame_tasks, joined=cont)


class _FrameTask(_Task):
    """One radical membership check: the frame passes when the test
    polynomial vanishes on the locus of its check ideal."""

    kind = "frame"
    __slots__ = ("chart", "check_kind", "cols", "ideal", "test")

    def __init__(self, path, chart, check_kind, cols, ideal, test):
        super().__init__(path, chart.depth)
        self.chart = chart
        self.check_kind = check_kind
        self.cols = cols
        self.ideal = ideal
        self.test = test

    def run(self, ctx, budget):
        budget.frames += 1
        if radical_membership(self.test, self.ideal, budget=budget):
            return _Outcome()
        c = self.chart
        return _Outcome(fail=Witness(
            self.path, c.depth, self.check_kind, self.cols,
            c.ambient.fingerprint(), c.variety.fingerprint(),
            str(c.localizer)))


class _DescendTask(_Task):
    """Runs after all delta frames of its chart passed; produces the child
    charts one ambient dimension down."""

    kind = "descend"
    __slots__ = ("chart", "switch_depth")

    def __init__(self, path, chart, switch_depth):
        super().__init__(path, chart.depth)
        self.chart = chart
        self.switch_depth = switch_depth

    def run(self, ctx, budget):
        children = descend(self.chart, ctx.rng_for(self.path),
                           combinations=ctx.config.combinations,
                           budget=budget)
        spawn = [
            _ChartTask(self.path + (j,), child, self.switch_depth)
            for j, child in enumerate(children)
        ]
        return _Outcome(spawn=spawn)


class _EmbeddedTask(_Task):
    """Runs after all delta frames of its chart passed in hybrid mode at
    the switch depth; spawns relative Jacobian frame checks."""

    kind = "embedded"
    __slots__ = ("chart",)

    def __init__(self, path, chart):
        super().__init__(path, chart.depth)
        self.chart = chart

    def run(self, ctx, budget):
        enum, checks = embedded_frame_tasks(
            self.chart, strict=ctx.config.strict_cover,
            track=ctx.config.lift_frames, budget=budget)
        if checks is None:
            return _Outcome()
        ctx.observer.on_cover(self.path, self.chart, enum)
        spawn = [
            _FrameTask(self.path + (i,), self.chart, "jacobian", frame.cols,
                       ideal, test)
            for i, (frame, ideal, test) in enumerate(checks)
        ]
        return _Outcome(spawn=spawn)


class _TaskRecord:
    __slots__ = ("path", "kind", "is_chart", "depth", "gb_queries",
                 "frames", "dur", "finish")

    def __init__(self, path, kind, is_chart, depth, gb_queries, frames,
                 dur, finish):
        self.path = path
        self.kind = kind
        self.is_chart = is_chart
        self.depth = depth
        self.gb_queries = gb_queries
        self.frames = frames
        self.dur = dur
        self.finish = finish


class _Pool:
    """Priority work pool with the minimal-failure commit protocol."""

    def __init__(self, ctx: _RunContext, schedule_rng=None):
        self.ctx = ctx
        self.lock = threading.Condition()
        self.heap = []
        self.seq = 0
        self.running = set()
        self.joins = {}          # parent path -> [remaining, continuation]
        self.records = []
        self.event_path = None   # minimal known failure or error path
        self.event = None        # ("fail", witness) | ("error", reason)
        self.committed = False
        self.schedule_rng = schedule_rng

    # locked helpers -----------------------------------------------------

    def _push(self, task):
        if self.event_path is not None and task.path > self.event_path:
            return  # cannot beat the pending event, prune
        heapq.heappush(self.heap, (task.path, self.seq, task))
        self.seq += 1

    def _pop(self):
        while self.heap:
            path, _, task = heapq.heappop(self.heap)
            if self.event_path is not None and path > self.event_path:
                continue
            return task
        return None

    def _note_event(self, path, event):
        if self.event_path is None or path < self.event_path:
            self.event_path = path
            self.event = event
            # drop queued work the event makes irrelevant
            keep = [e for e in self.heap if e[0] <= path]
            heapq.heapify(keep)
            self.heap = keep

    def _try_commit(self):
        if self.committed or self.event_path is None:
            return
        p = self.event_path
        if any(rp < p for rp in self.running):
            return
        if self.heap and self.heap[0][0] < p:
            return
        shared = self.ctx.root_budget.shared
        with shared.lock:
            self.committed = True
        self.ctx.observer.on_commit(p)
        self.lock.notify_all()

    def _process(self, task, outcome, dur, gb_queries, frames):
        finish = task.ready_at + dur
        self.records.append(_TaskRecord(
            task.path, task.kind, task.is_chart, task.depth,
            gb_queries, frames, dur, finish))
        if outcome is None:  # cancelled task, nothing to integrate
            return
        if isinstance(outcome, _Outcome):
            if outcome.fail is not None:
                self._note_event(task.path, ("fail", outcome.fail))
            else:
                for sub in outcome.spawn:
                    sub.ready_at = finish
                    self._push(sub)
                if outcome.joined is not None:
                    cont = outcome.joined
                    cont.ready_at = finish
                    if outcome.spawn:
                        self.joins[task.path] = [len(outcome.spawn), cont]
                    else:
                        self._push(cont)
                self._resolve_join(task, finish)
        else:
            kind, info = outcome
            self._note_event(task.path, (kind, info))

    def _resolve_join(self, task, finish):
        # frame tasks feed the join of their chart's continuation
        if not isinstance(task, _FrameTask):
            return
        entry = self.joins.get(task.path[:-1])
        if entry is None:
            return
        entry[0] -= 1
        cont = entry[1]
        if cont.ready_at < finish:
            cont.ready_at = finish
        if entry[0] == 0:
            del self.joins[task.path[:-1]]
            self._push(cont)

    # main loop ----------------------------------------------------------

    def _worker(self):
        ctx = self.ctx
        while True:
            with self.lock:
                while True:
                    if self.committed:
                        return
                    task = self._pop()
                    if task is not None:
                        break
                    if not self.running:
                        self._try_commit()
                        self.lock.notify_all()
                        return
                    self.lock.wait(0.05)
                if (self.schedule_rng is not None and self.heap
                        and self.schedule_rng.random() < 0.5):
                    other = self._pop()
                    if other is not None:
                        self._push(task)
                        task = other
                self.running.add(task.path)
            outcome, dur, gbq, fr = self._execute(task)
            with self.lock:
                self.running.discard(task.path)
                self._process(task, outcome, dur, gbq, fr)
                self._try_commit()
                self.lock.notify_all()

    def _execute(self, task):
        ctx = self.ctx
        budget = ctx.root_budget.child(task.path, cancel_fn=self._cancelled)
        ctx.observer.on_task_start(task.path, task.kind)
        t0 = time.monotonic()
        passed = False
        try:
            outcome = task.run(ctx, budget)
            passed = outcome.fail is None
        except CancelledError:
            outcome = None
        except LimitExceededError as e:
            outcome = ("error", f"limit: {e}")
        except MemoryError:
            outcome = ("error", "memory exhausted")
        except VarsmoothError as e:
            outcome = ("error", f"{type(e).__name__}: {e}")
        except Exception as e:  # worker panic surfaces as indeterminate
            outcome = ("error", f"internal {type(e).__name__}: {e}")
        dur = time.monotonic() - t0
        ctx.observer.on_task_done(task.path, task.kind, passed)
        return outcome, dur, budget.gb_queries, budget.frames

    def _cancelled(self):
        return self.committed

    def run(self, roots, jobs: int):
        for root in roots:
            root.ready_at = 0.0
            self._push(root)
        if jobs == 1:
            self._worker()
        else:
            workers = [threading.Thread(target=self._worker, daemon=True)
                       for _ in range(jobs)]
            for w in workers:
                w.start()
            for w in workers:
                w.join()
        with self.lock:
            self._try_commit()
        return self._verdict()

    def _verdict(self):
        cfg = self.ctx.config
        if self.event is not None:
            cutoff = self.event_path
            committed = [r for r in self.records if r.path <= cutoff]
        else:
            committed = list(self.records)
        stats = {
            "charts": sum(1 for r in committed if r.is_chart),
            "frames": sum(r.frames for r in committed),
            "gb_queries": sum(r.gb_queries for r in committed),
            "max_depth": max((r.depth for r in committed if r.is_chart),
                             default=0),
        }
        sim = max((r.finish for r in committed), default=0.0)
        timing = {"sim_parallel_s": sim,
                  "sequential_s": sum(r.dur for r in committed)}
        if self.event is None:
            return Verdict("smooth", cfg.mode, None, stats, timing)
        kind, info = self.event
        if kind == "fail":
            return Verdict("singular", cfg.mode, info, stats, timing)
        return Verdict("indeterminate", cfg.mode, None, stats, timing,
                       reason=info)


def _run(ctx: _RunContext, roots, schedule_seed=None) -> Verdict:
    rng = random.Random(schedule_seed) if schedule_seed is not None else None
    pool = _Pool(ctx, schedule_rng=rng)
    t0 = time.monotonic()
    verdict = pool.run(roots, ctx.config.jobs)
    verdict.timing["wall_s"] = time.monotonic() - t0
    return verdict


def run_parallel(charts, config: Optional[Config] = None,
                 observer: Optional[Observer] = None,
                 _schedule_seed=None) -> Verdict:
    """Run the task tree rooted at the given charts on config.jobs
    workers.  The verdict, witness, and committed statistics are the same
    for every worker count and schedule; a failing check cancels all
    pending and in-flight work."""
    config = config if config is not None else Config()
    observer = observer if observer is not None else Observer()
    ctx = _RunContext(config, observer)
    roots = [_ChartTask((i,) if len(charts) > 1 else (), chart)
             for i, chart in enumerate(charts)]
    return _run(ctx, roots, _schedule_seed)


def smoothness_test(ideal: Ideal, config: Optional[Config] = None,
                    observer: Optional[Observer] = None,
                    _schedule_seed=None) -> Verdict:
    """Decide smoothness of the affine variety cut out by the ideal.

    The ideal must be radical and equidimensional; this is a documented
    precondition, not something the test verifies.  Returns a Verdict with
    status smooth, singular (with a witness), or indeterminate (limits or
    input-contract violations, with a reason)."""
    config = config if config is not None else Config()
    observer = observer if observer is not None else Observer()
    ctx = _RunContext(config, observer)
    root = _ChartTask((), Chart.root(ideal))
    return _run(ctx, [root], _schedule_seed)


def projective_smoothness(ideal: Ideal, config: Optional[Config] = None,
                          observer: Optional[Observer] = None,
                          _schedule_seed=None) -> Verdict:
    """Decide smoothness of the projective variety of a homogeneous ideal
    by testing the standard affine charts x_i = 1 in ascending variable
    order; each chart runs under the same parallel contract."""
    config = config if config is not None else Config()
    observer = observer if observer is not None else Observer()
    ring = ideal.ring
    if ring.nvars < 2:
        raise ContractError("projective input needs at least two variables")
    ctx = _RunContext(config, observer)
    roots = []
    for i in range(ring.nvars):
        gens = [dehomogenize(f, i) for f in ideal.generators]
        chart_ideal = Ideal(ring.drop(i), gens)
        roots.append(_ChartTask((i,), Chart.root(chart_ideal)))
    return _run(ctx, roots, _schedule_seed)
