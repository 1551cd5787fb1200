"""Runs the IBC and DE workers together over a shared channel."""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass

from .. import de, ibc
from ..expr import Problem
from .messages import DE_TO_IBC, IBC_TO_DE, Certificate, Channel, Kind, Status

MODES = ("hybrid", "ibc-only", "de-only")


@dataclass
class SolverConfig:
    eps: float = 1e-8
    eps_eq: float = 1e-8
    np: int = 20
    w: float = 0.7
    cr: float = 0.9
    eta: float = 0.0
    bisect: str = "smear"
    # None picks maxdist when DE supplies incumbents, best-first otherwise
    queue: str | None = None
    seed: int | None = 0
    mode: str = "hybrid"
    reduction_period: int = 10
    max_time: float | None = None
    max_iters: int | None = None
    generations: int | None = None
    deterministic: bool = False
    # IBC boxes processed per DE generation in deterministic mode
    ibc_steps_per_generation: int = 25
    elite_on_restart: bool = True
    use_taylor: bool = True
    record_discards: bool = False
    # seconds the threaded DE worker sleeps between generations so that it
    # does not starve the IBC worker of the interpreter lock
    de_pause: float = 1e-3

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not self.eps_eq >= 0:
            raise ValueError("eps_eq must be non-negative")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.ibc_steps_per_generation < 1:
            raise ValueError("ibc_steps_per_generation must be at least 1")

    @property
    def queue_strategy(self) -> str:
        if self.queue is not None:
            return self.queue
        return "maxdist" if self.mode == "hybrid" else "best"

    def ibc_config(self) -> ibc.IBCConfig:
        return ibc.IBCConfig(eps=self.eps, eta=self.eta, bisect=self.bisect,
                             queue=self.queue_strategy,
                             use_taylor=self.use_taylor, max_iters=self.max_iters,
                             max_time=self.max_time, reduction_period=self.reduction_period,
                             record_discards=self.record_discards)

    def de_config(self) -> de.DEConfig:
        return de.DEConfig(np=self.np, w=self.w, cr=self.cr, seed=self.seed,
                           reduction_period=self.reduction_period,
                           max_generations=self.generations,
                           elite_on_restart=self.elite_on_restart)


@dataclass
class RunResult:
    certificate: Certificate
    channel: Channel
    ibc: "ibc.IBCWorker | None" = None
    de: "de.DEWorker | None" = None
    wall_time: float = 0.0


def _terminate(channel: Channel, cert: Certificate) -> None:
    channel.send(IBC_TO_DE, Kind.TERMINATE, status=cert.status.value,
                 value=cert.upper_bound, lower_bound=cert.lower_bound)
    channel.close()


def _de_only(problem: Problem, cfg: SolverConfig, channel: Channel) -> RunResult:
    dcfg = cfg.de_config()
    if dcfg.max_generations is None:
        dcfg.max_generations = 1000
    worker = de.DEWorker(problem, dcfg, channel)
    start = time.perf_counter()
    while worker.step():
        if cfg.max_time is not None and time.perf_counter() - start > cfg.max_time:
            break
    best = worker.best
    point = best.position if best is not None else None
    ub = worker.best_ub
    cert = Certificate(Status.UNCERTIFIED, ub, point, -math.inf, cfg.eps,
                       {"generations": worker.generation, "de_updates_sent": len(worker.sent),
                        "boxes_processed": 0, "max_queue_size": 0, "ub_updates": len(worker.sent),
                        "ub_updates_from_de": len(worker.sent), "ub_updates_from_ibc": 0})
    # the channel has no reader here, so the DE->IBC messages stay queued
    channel.receive_all(DE_TO_IBC)
    return RunResult(cert, channel, None, worker)


def _deterministic(problem, cfg, channel, iw, dw) -> Certificate:
    start = time.perf_counter()
    steps = 0
    de_alive = True
    while True:
        if de_alive:
            de_alive = dw.step()
            if de_alive and dw.generation % cfg.reduction_period == 0:
                iw.send_reduction()
        for _ in range(cfg.ibc_steps_per_generation):
            if not iw.step():
                iw.poll()
                return iw.certificate()
            steps += 1
            if cfg.max_iters is not None and steps >= cfg.max_iters:
                return iw.certificate(capped=True)
        if cfg.max_time is not None and time.perf_counter() - start > cfg.max_time:
            return iw.certificate(capped=True)


def _threaded(problem, cfg, channel, iw, dw) -> tuple[Certificate, threading.Thread]:
    errors: list[BaseException] = []

    def de_loop():
        try:
            while dw.step():
                if cfg.de_pause > 0:
                    time.sleep(cfg.de_pause)
        except BaseException as exc:  # surfaced by the orchestrator
            errors.append(exc)

    t = threading.Thread(target=de_loop, name="de-worker", daemon=True)
    t.start()
    try:
        cert = iw.run(timed_reductions=True)
    except BaseException:
        channel.close()
        t.join(timeout=5.0)
        raise
    if errors:
        cert.status = Status.UNCERTIFIED
        cert.stats["de_error"] = repr(errors[0])
    return cert, t


def orchestrate(problem: Problem, cfg: SolverConfig | None = None,
                channel: Channel | None = None) -> RunResult:
    """Solve ``problem``; the certificate always comes from the IBC worker."""
    cfg = cfg or SolverConfig()
    if problem.eps_eq != cfg.eps_eq:
        problem = Problem(problem.names, problem.domain, problem.objective,
                          problem.inequalities, problem.equalities, cfg.eps_eq)
    channel = channel or Channel()
    start = time.perf_counter()
    if cfg.mode == "de-only":
        res = _de_only(problem, cfg, channel)
        res.wall_time = time.perf_counter() - start
        return res
    iw = ibc.IBCWorker(problem, cfg.ibc_config(), channel)
    if cfg.mode == "ibc-only":
        cert = iw.run()
        _terminate(channel, cert)
        return RunResult(cert, channel, iw, None, time.perf_counter() - start)
    dw = de.DEWorker(problem, cfg.de_config(), channel)
    if cfg.deterministic:
        cert = _deterministic(problem, cfg, channel, iw, dw)
        _terminate(channel, cert)
        dw.poll()
    else:
        # a DE that stops on its generation cap leaves IBC running alone
        cert, t = _threaded(problem, cfg, channel, iw, dw)
        _terminate(channel, cert)
        t.join(timeout=5.0)
    cert.stats["generations"] = dw.generation
    cert.stats["de_restarts"] = dw.restarts
    return RunResult(cert, channel, iw, dw, time.perf_counter() - start)
