"""Differential evolution worker with rigorous feasibility and upper bounds."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .contractor import RelationalConstraint, constraint_system, hc4, point_values
from .coop.messages import IBC_TO_DE, Channel, Kind, send_ub
from .expr import Problem, eval_point, eval_real
from .interval import INF, Box, Interval

# sampling window for unbounded domain components
SAMPLE_HALF_WIDTH = 1e6


@dataclass
class DEConfig:
    np: int = 20
    w: float = 0.7
    cr: float = 0.9
    seed: int | None = None
    reduction_period: int = 10
    max_generations: int | None = None
    elite_on_restart: bool = True

    def __post_init__(self):
        if self.np < 4:
            raise ValueError("population size must be at least 4")
        if not self.w > 0:
            raise ValueError("amplitude W must be positive")
        if not 0.0 <= self.cr <= 1.0:
            raise ValueError("crossover rate must lie in [0, 1]")
        if self.reduction_period < 1:
            raise ValueError("reduction period must be at least 1")


@dataclass
class Individual:
    """A candidate point with its evaluation vector.

    ``constraint_values`` holds one violation per relational constraint
    (upper bound of its interval value at the point beyond the allowed
    bound), plus a final slot that is infinite when the objective cannot
    be evaluated.
    """

    position: tuple[float, ...]
    objective: float
    constraint_values: tuple[float, ...]
    feasible: bool
    rigorous_ub: float | None = None


# -- operators --------------------------------------------------------------

def draw_offset(np_: int, rng: random.Random) -> int:
    return rng.randint(1, np_ - 1)


def pick_base_and_partners(np_: int, i: int, offset: int,
                           rng: random.Random) -> tuple[int, int, int]:
    """Indices ``(u, v, w)`` for individual ``i``; ``u`` is ``i + offset``."""
    if np_ < 4:
        raise ValueError("population size must be at least 4")
    u = (i + offset) % np_
    rest = [k for k in range(np_) if k != i and k != u]
    v, w = rng.sample(rest, 2)
    return u, v, w


def crossover(x: Sequence[float], u: Sequence[float], v: Sequence[float],
              w: Sequence[float], amplitude: float, cr: float, rng: random.Random,
              R: int | None = None, r: Sequence[float] | None = None) -> list[float]:
    """Binomial crossover of ``x`` with the mutant ``u + W (v - w)``.

    ``R`` is the 0-based coordinate that is always mutated; ``r`` the
    per-coordinate uniform draws.  Both are drawn from ``rng`` when omitted.
    """
    n = len(x)
    if R is None:
        R = rng.randrange(n)
    y = list(x)
    for i in range(n):
        ri = rng.random() if r is None else r[i]
        if i == R or ri < cr:
            y[i] = u[i] + amplitude * (v[i] - w[i])
    return y


def bounce_back(y: Sequence[float], u: Sequence[float], D: Box, rng: random.Random,
                omega: float | None = None) -> list[float]:
    """Move out-of-bounds coordinates between the base coordinate and the bound."""
    out = list(y)
    for i, c in enumerate(D):
        if out[i] > c.hi:
            bound = c.hi
        elif out[i] < c.lo:
            bound = c.lo
        else:
            continue
        om = rng.random() if omega is None else omega
        val = u[i] + om * (bound - u[i])
        # rounding can leave the result a hair outside
        out[i] = min(max(val, c.lo), c.hi)
    return out


def better(a: Individual, b: Individual) -> bool:
    """Whether ``b`` may replace ``a`` under the feasibility rules."""
    if a.feasible and b.feasible:
        return b.objective <= a.objective
    if b.feasible:
        return True
    if a.feasible:
        return False
    return all(vb <= va for va, vb in zip(a.constraint_values, b.constraint_values))


def rigorous_feasible(x: Sequence[float], P: Problem,
                      constraints: Sequence[RelationalConstraint] | None = None) -> bool:
    if constraints is None:
        constraints = constraint_system(P)
    try:
        vals = point_values(constraints, x)
    except (ValueError, OverflowError):
        return False
    return all(not v.is_empty and v.subset(c.bound) for c, v in zip(constraints, vals))


def rigorous_ub(x: Sequence[float], P: Problem) -> float:
    v = eval_point(P.objective, x)
    return INF if v.is_empty else v.hi


def evaluate(x: Sequence[float], P: Problem,
             constraints: Sequence[RelationalConstraint]) -> Individual:
    x = tuple(x)
    f = eval_real(P.objective, x)
    bad_obj = f != f
    viols = [c.violation(v) for c, v in zip(constraints, point_values(constraints, x))]
    viols.append(INF if bad_obj else 0.0)
    feasible = not bad_obj and all(v == 0.0 for v in viols)
    return Individual(x, INF if bad_obj else f, tuple(viols), feasible)


def _rank(ind: Individual) -> tuple:
    if ind.feasible:
        return (0, ind.objective)
    return (1, sum(ind.constraint_values))


def _sample_window(c: Interval) -> tuple[float, float]:
    lo, hi = c.lo, c.hi
    if math.isinf(lo) and math.isinf(hi):
        return -SAMPLE_HALF_WIDTH, SAMPLE_HALF_WIDTH
    if math.isinf(lo):
        return hi - 2 * SAMPLE_HALF_WIDTH, hi
    if math.isinf(hi):
        return lo, lo + 2 * SAMPLE_HALF_WIDTH
    return lo, hi


# -- the worker -------------------------------------------------------------

class DEWorker:
    """Owns the population; one synchronous generation per :meth:`step`."""

    def __init__(self, problem: Problem, cfg: DEConfig | None = None,
                 channel: Channel | None = None):
        self.problem = problem
        self.cfg = cfg or DEConfig()
        self.channel = channel
        self.rng = random.Random(self.cfg.seed)
        self.constraints = constraint_system(problem)
        dom = hc4(self.constraints, problem.domain)
        self.domain = problem.domain if dom.is_empty else dom
        self.generation = 0
        self.best_float = INF
        self.best_ub = INF
        self.best: Individual | None = None
        self.sent: list[tuple[tuple[float, ...], float]] = []
        self.restarts = 0
        self.terminated = False
        self.last_bases: list[int] = []
        self.population = [self._random_individual() for _ in range(self.cfg.np)]
        self._report_best()

    def _random_individual(self) -> Individual:
        x = []
        for c in self.domain:
            lo, hi = _sample_window(c)
            x.append(min(max(self.rng.uniform(lo, hi), c.lo), c.hi))
        return evaluate(x, self.problem, self.constraints)

    def best_index(self) -> int:
        return min(range(len(self.population)), key=lambda i: _rank(self.population[i]))

    def worst_index(self) -> int:
        return max(range(len(self.population)), key=lambda i: _rank(self.population[i]))

    def inject(self, point: Sequence[float], ub: float) -> None:
        """Replace the worst individual (never the best) with an IBC solution."""
        if ub < self.best_ub:
            self.best_ub = ub
        ind = evaluate(point, self.problem, self.constraints)
        worst, best = self.worst_index(), self.best_index()
        if worst == best:
            return
        self.population[worst] = ind
        if ind.feasible and ind.objective < self.best_float:
            self.best_float = ind.objective
            self.best = ind

    def restart(self, domain: Box) -> None:
        """Regenerate the population inside ``domain``, keeping the elite if it fits."""
        if domain.is_empty:
            raise ValueError("restart domain is empty")
        self.domain = domain
        self.restarts += 1
        keep = None
        if self.cfg.elite_on_restart and self.best is not None and domain.contains(self.best.position):
            keep = self.best
        self.population = [self._random_individual() for _ in range(self.cfg.np)]
        if keep is not None:
            self.population[0] = keep
        elif self.best is not None:
            # the elite is gone; improvements are now measured on the new population
            self.best = None
            self.best_float = INF

    def poll(self) -> None:
        if self.channel is None:
            return
        for msg in self.channel.receive_all(IBC_TO_DE):
            if msg.kind is Kind.SOLUTION_FROM_IBC:
                self.inject(msg.point, msg.value)
            elif msg.kind is Kind.DOMAIN_REDUCTION:
                self.restart(msg.box)
            elif msg.kind is Kind.TERMINATE:
                self.terminated = True
        if self.channel.closed:
            self.terminated = True

    def _report_best(self) -> None:
        ind = self.population[self.best_index()]
        if not ind.feasible or not ind.objective < self.best_float:
            return
        self.best_float = ind.objective
        self.best = ind
        ind.rigorous_ub = rigorous_ub(ind.position, self.problem)
        if ind.rigorous_ub < self.best_ub:
            self.best_ub = ind.rigorous_ub
            self.sent.append((ind.position, ind.rigorous_ub))
            send_ub(self.channel, ind.position, ind.rigorous_ub)

    def step(self) -> bool:
        """Run one generation; False once terminated or capped."""
        self.poll()
        if self.terminated:
            return False
        cfg, rng, pop = self.cfg, self.rng, self.population
        n = cfg.np
        offset = draw_offset(n, rng)
        bases = []
        nxt = list(pop)
        for i in range(n):
            u, v, w = pick_base_and_partners(n, i, offset, rng)
            bases.append(u)
            y = crossover(pop[i].position, pop[u].position, pop[v].position,
                          pop[w].position, cfg.w, cfg.cr, rng)
            y = bounce_back(y, pop[u].position, self.domain, rng)
            child = evaluate(y, self.problem, self.constraints)
            if better(pop[i], child):
                nxt[i] = child
        self.population = nxt
        self.last_bases = bases
        self.generation += 1
        if self.channel is not None:
            self.channel.de_generation = self.generation
        self._report_best()
        if cfg.max_generations is not None and self.generation >= cfg.max_generations:
            return False
        return True

    def run(self) -> Individual:
        if self.channel is None and self.cfg.max_generations is None:
            raise ValueError("a standalone DE run needs max_generations")
        while self.step():
            pass
        return self.best if self.best is not None else self.population[self.best_index()]


def run_de(problem: Problem, cfg: DEConfig | None = None,
           channel: Channel | None = None) -> Individual:
    return DEWorker(problem, cfg, channel).run()
