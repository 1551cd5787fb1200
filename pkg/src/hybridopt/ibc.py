"""Interval branch-and-contract worker."""

from __future__ import annotations

import heapq
import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

from . import interval as ia
from .contractor import (RelationalConstraint, constraint_system, hc4, hc4revise,
                         objective_cut, rigorously_feasible)
from .coop.messages import (DE_TO_IBC, IBC_TO_DE, Certificate, Channel, Kind, Status,
                            send_solution)
from .coop.strategy import maxdist_priority, queue_hull
from .expr import Problem, eval_point, taylor_from
from .interval import INF, Box, Interval, box_width


BISECT_STRATEGIES = ("round_robin", "largest_first", "smear")
QUEUE_STRATEGIES = ("maxdist", "best", "largest", "depth")


@dataclass
class IBCConfig:
    eps: float = 1e-8
    eta: float = 0.0
    bisect: str = "smear"
    queue: str = "maxdist"
    use_taylor: bool = True
    max_iters: int | None = None
    max_time: float | None = None
    reduction_period: int = 10
    record_discards: bool = False

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")
        if self.bisect not in BISECT_STRATEGIES:
            raise ValueError(f"unknown bisection strategy {self.bisect!r}")
        if self.queue not in QUEUE_STRATEGIES:
            raise ValueError(f"unknown queue strategy {self.queue!r}")


@dataclass
class WorkItem:
    box: Box
    lower_bound: float
    priority: float = 0.0
    depth: int = 0


class WorkQueue:
    """Priority queue of boxes; ordering depends on the strategy.

    Ties go to the wider box, then to the earlier insertion.
    """

    def __init__(self, strategy: str = "maxdist"):
        self.strategy = strategy
        self.incumbent: tuple[float, ...] | None = None
        self._heap: list = []
        self._count = itertools.count()
        self.max_size = 0

    def _key(self, item: WorkItem, seq: int) -> tuple:
        w = box_width(item.box)
        s = self.strategy
        if s == "maxdist":
            item.priority = maxdist_priority(item.box, self.incumbent)
            return (-item.priority, -w, seq)
        if s == "best":
            item.priority = item.lower_bound
            return (item.lower_bound, -w, seq)
        if s == "largest":
            item.priority = w
            return (-w, seq)
        item.priority = item.depth
        return (-item.depth, -w, seq)

    def push(self, item: WorkItem) -> None:
        seq = next(self._count)
        heapq.heappush(self._heap, (self._key(item, seq), seq, item))
        if len(self._heap) > self.max_size:
            self.max_size = len(self._heap)

    def pop(self) -> WorkItem:
        return heapq.heappop(self._heap)[2]

    def rekey(self, incumbent: Sequence[float] | None) -> None:
        self.incumbent = None if incumbent is None else tuple(incumbent)
        if self.strategy != "maxdist":
            return
        self._heap = [(self._key(it, seq), seq, it) for _, seq, it in self._heap]
        heapq.heapify(self._heap)

    def items(self) -> list[WorkItem]:
        return [e[2] for e in self._heap]

    def ordered(self) -> list[WorkItem]:
        return [e[2] for e in sorted(self._heap)]

    def min_lower_bound(self) -> float:
        return min((e[2].lower_bound for e in self._heap), default=INF)

    def __len__(self):
        return len(self._heap)


@dataclass
class SearchStats:
    boxes_processed: int = 0
    max_queue_size: int = 0
    ub_updates: int = 0
    ub_updates_from_de: int = 0
    ub_updates_from_ibc: int = 0
    reductions_sent: int = 0
    residual_boxes: int = 0


@dataclass
class SearchState:
    queue: WorkQueue
    best_ub: float = INF
    best_point: tuple[float, ...] | None = None
    global_lb: float = -INF
    stats: SearchStats = field(default_factory=SearchStats)
    ub_history: list[float] = field(default_factory=list)


# -- building blocks --------------------------------------------------------

def objective_threshold(ub: float, eps: float) -> float:
    """``ub - eps`` rounded up: boxes whose lower bound reaches it are dropped."""
    if math.isinf(ub):
        return ub
    return ia.sub_up(ub, eps)


def contract_and_bound(box: Box, problem: Problem, ub: float, eta: float = 0.0,
                       use_taylor: bool = True, eps: float = 0.0,
                       constraints: Sequence[RelationalConstraint] | None = None
                       ) -> tuple[Box, float]:
    """Contract ``box`` and bound the objective on it.

    The objective is cut at ``ub - eps``; the lower bound is the best of the
    natural and centered forms.  An empty box means no feasible point of
    ``box`` improves on that cut.
    """
    if constraints is None:
        constraints = constraint_system(problem)
    cut = objective_threshold(ub, eps)
    obj = objective_cut(problem, cut)
    tape = problem.objective.tape
    n = len(box)
    lb = -INF
    for _ in range(1000):
        w0 = box_width(box)
        start = box
        box, root = hc4revise(obj, box)
        if box.is_empty:
            return box, INF
        lb = max(lb, root.lo)
        if use_taylor:
            c = box.midpoint()
            grad = tape.gradient(tape.forward(box), n)
            t = taylor_from(eval_point(problem.objective, c), grad, box, c)
            if not t.is_empty:
                lb = max(lb, t.lo)
        if lb >= cut:
            return ia.empty_box(n), lb
        box = hc4(constraints, box, eta)
        if box.is_empty:
            return box, INF
        if box_width(box) > eta * w0 or box == start:
            break
    return box, lb


def midpoint_test(box: Box, problem: Problem, state: SearchState,
                  constraints: Sequence[RelationalConstraint] | None = None
                  ) -> tuple[tuple[float, ...], float] | None:
    """Probe the box center; update the incumbent when it is feasible and better."""
    if constraints is None:
        constraints = constraint_system(problem)
    c = tuple(box.midpoint())
    if not rigorously_feasible(constraints, c):
        return None
    v = eval_point(problem.objective, c)
    if v.is_empty or not v.hi < state.best_ub:
        return None
    state.best_ub = v.hi
    state.best_point = c
    state.ub_history.append(v.hi)
    return c, v.hi


def _splittable(iv: Interval) -> bool:
    if iv.lo >= iv.hi:
        return False
    m = ia.midpoint(iv)
    return iv.lo < m < iv.hi


class Bisector:
    """Chooses the split variable; keeps the round-robin cursor."""

    def __init__(self, strategy: str = "smear", problem: Problem | None = None):
        if strategy not in BISECT_STRATEGIES:
            raise ValueError(f"unknown bisection strategy {strategy!r}")
        if strategy == "smear" and problem is None:
            raise ValueError("smear needs the problem objective")
        self.strategy = strategy
        self.problem = problem
        self.next_dim = 0

    def choose(self, box: Box) -> int:
        dims = [i for i, c in enumerate(box) if _splittable(c)]
        if not dims:
            raise ValueError("no component of the box can be bisected")
        if self.strategy == "round_robin":
            n = len(box)
            for k in range(n):
                i = (self.next_dim + k) % n
                if i in dims:
                    self.next_dim = (i + 1) % n
                    return i
        if self.strategy == "smear":
            i = self._smear(box, dims)
            if i is not None:
                return i
        return max(dims, key=lambda i: (ia.width(box[i]), -i))

    def _smear(self, box: Box, dims: list[int]) -> int | None:
        grad = self.problem.objective.tape.gradient(
            self.problem.objective.tape.forward(box), len(box))
        best, best_q = None, 0.0
        for i in dims:
            c = box[i]
            q = ia.mul(grad[i], ia.sub(c, Interval(ia.midpoint(c)))).mag
            if q != q:
                continue
            if q > best_q:
                best, best_q = i, q
        return best

    def split(self, box: Box) -> tuple[Box, Box]:
        i = self.choose(box)
        c = box[i]
        m = ia.midpoint(c)
        return box.replace(i, Interval(c.lo, m)), box.replace(i, Interval(m, c.hi))


def bisect(box: Box, strategy: str = "largest_first", problem: Problem | None = None,
           rr_state: Bisector | None = None) -> tuple[Box, Box]:
    bis = rr_state if rr_state is not None else Bisector(strategy, problem)
    return bis.split(box)


# -- the worker -------------------------------------------------------------

class IBCWorker:
    """Owns the search state; processes one box per :meth:`step`."""

    def __init__(self, problem: Problem, cfg: IBCConfig | None = None,
                 channel: Channel | None = None):
        self.problem = problem
        self.cfg = cfg or IBCConfig()
        self.channel = channel
        self.constraints = constraint_system(problem)
        self.state = SearchState(WorkQueue(self.cfg.queue))
        self.state.queue.push(WorkItem(problem.domain, -INF))
        self.bisector = Bisector(self.cfg.bisect, problem)
        self.residual: list[WorkItem] = []
        self.discards: list[tuple[Box, Box, float]] = []
        self.last_reduction: Box = problem.domain
        self.next_reduction = self.cfg.reduction_period
        self._started = time.perf_counter()

    @property
    def done(self) -> bool:
        return len(self.state.queue) == 0

    @property
    def cut(self) -> float:
        return objective_threshold(self.state.best_ub, self.cfg.eps)

    def _accept_de(self, point, ub: float) -> None:
        st = self.state
        if not ub < st.best_ub:
            return
        st.best_ub = ub
        st.best_point = tuple(point)
        st.ub_history.append(ub)
        st.stats.ub_updates += 1
        st.stats.ub_updates_from_de += 1
        st.queue.rekey(st.best_point)

    def poll(self) -> None:
        if self.channel is None:
            return
        for msg in self.channel.receive_all(DE_TO_IBC):
            if msg.kind is Kind.UB_FROM_DE:
                self._accept_de(msg.point, msg.value)

    def step(self) -> bool:
        """Process one box; returns False once the queue is exhausted."""
        st = self.state
        self.poll()
        if not st.queue:
            return False
        item = st.queue.pop()
        st.stats.boxes_processed += 1
        cut = self.cut
        if item.lower_bound >= cut:
            if self.cfg.record_discards:
                self.discards.append((item.box, ia.empty_box(len(item.box)), cut))
            return bool(st.queue)
        box, lb = contract_and_bound(item.box, self.problem, st.best_ub, self.cfg.eta,
                                     self.cfg.use_taylor, self.cfg.eps, self.constraints)
        if self.cfg.record_discards:
            self.discards.append((item.box, box, cut))
        if box.is_empty:
            return bool(st.queue)
        lb = max(lb, item.lower_bound)
        found = midpoint_test(box, self.problem, st, self.constraints)
        if found is not None:
            c, ub = found
            st.stats.ub_updates += 1
            st.stats.ub_updates_from_ibc += 1
            st.queue.rekey(c)
            send_solution(self.channel, c, ub)
            if lb >= self.cut:
                return bool(st.queue)
        try:
            b1, b2 = self.bisector.split(box)
        except ValueError:
            self.residual.append(WorkItem(box, lb))
            st.stats.residual_boxes += 1
            return bool(st.queue)
        st.queue.push(WorkItem(b1, lb, depth=item.depth + 1))
        st.queue.push(WorkItem(b2, lb, depth=item.depth + 1))
        st.stats.max_queue_size = st.queue.max_size
        return True

    def global_lower_bound(self) -> float:
        lbs = [self.cut, self.state.queue.min_lower_bound()]
        lbs += [r.lower_bound for r in self.residual]
        return min(lbs)

    def reduction_box(self) -> Box | None:
        """Hull of the queued boxes and the incumbent, nested in the previous one."""
        boxes = [it.box for it in self.state.queue.items()]
        if not boxes:
            return None
        if self.state.best_point is not None:
            boxes.append(Box.from_point(self.state.best_point))
        h = ia.box_intersect(queue_hull(boxes), self.last_reduction)
        if h.is_empty:
            return None
        return h

    def send_reduction(self) -> Box | None:
        h = self.reduction_box()
        if h is None or self.channel is None:
            return h
        self.last_reduction = h
        self.state.stats.reductions_sent += 1
        self.channel.send(IBC_TO_DE, Kind.DOMAIN_REDUCTION, box=h)
        return h

    def _check_reduction(self) -> None:
        if self.channel is None:
            return
        while self.channel.de_generation >= self.next_reduction:
            self.send_reduction()
            self.next_reduction += self.cfg.reduction_period

    def run(self, timed_reductions: bool = False) -> Certificate:
        """Run to completion or until a cap is hit."""
        cfg = self.cfg
        iters = 0
        while True:
            if timed_reductions:
                self._check_reduction()
            if not self.step():
                self.poll()
                break
            iters += 1
            if cfg.max_iters is not None and iters >= cfg.max_iters:
                return self.certificate(capped=True)
            if cfg.max_time is not None and time.perf_counter() - self._started > cfg.max_time:
                return self.certificate(capped=True)
        return self.certificate()

    def certificate(self, capped: bool = False) -> Certificate:
        st = self.state
        glb = self.global_lower_bound()
        st.global_lb = glb
        if capped or st.queue:
            status = Status.UNCERTIFIED
        elif math.isinf(st.best_ub) and not self.residual:
            status = Status.INFEASIBLE
            glb = INF
        elif st.best_ub - glb <= self.cfg.eps:
            status = Status.CERTIFIED
        else:
            status = Status.UNCERTIFIED
        stats = {
            "boxes_processed": st.stats.boxes_processed,
            "max_queue_size": st.queue.max_size,
            "ub_updates": st.stats.ub_updates,
            "ub_updates_from_de": st.stats.ub_updates_from_de,
            "ub_updates_from_ibc": st.stats.ub_updates_from_ibc,
            "reductions_sent": st.stats.reductions_sent,
            "residual_boxes": st.stats.residual_boxes,
        }
        return Certificate(status, st.best_ub, st.best_point, glb, self.cfg.eps, stats)


def run_ibc(problem: Problem, cfg: IBCConfig | None = None,
            channel: Channel | None = None) -> Certificate:
    return IBCWorker(problem, cfg, channel).run()
