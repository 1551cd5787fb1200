"""Messages exchanged by the two workers and the channel that carries them."""

from __future__ import annotations

import enum
import math
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from ..interval import Box, Interval

DE_TO_IBC = "DE->IBC"
IBC_TO_DE = "IBC->DE"


class Kind(str, enum.Enum):
    UB_FROM_DE = "UB_FROM_DE"
    SOLUTION_FROM_IBC = "SOLUTION_FROM_IBC"
    DOMAIN_REDUCTION = "DOMAIN_REDUCTION"
    TERMINATE = "TERMINATE"


class Status(str, enum.Enum):
    CERTIFIED = "CERTIFIED"
    INFEASIBLE = "INFEASIBLE"
    UNCERTIFIED = "UNCERTIFIED"


@dataclass
class Certificate:
    """Outcome of a solve: ``lower_bound <= f* <= upper_bound`` when certified."""

    status: Status
    upper_bound: float
    point: tuple[float, ...] | None
    lower_bound: float
    eps: float
    stats: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        if math.isinf(self.upper_bound):
            return math.inf
        return self.upper_bound - self.lower_bound

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED


@dataclass(frozen=True)
class Message:
    seq: int
    direction: str
    kind: Kind
    point: tuple[float, ...] | None = None
    value: float | None = None
    box: Box | None = None
    status: str | None = None
    lower_bound: float | None = None

    def format(self) -> str:
        parts = [str(self.seq), self.direction, self.kind.value]
        if self.kind is Kind.DOMAIN_REDUCTION:
            parts += [f"{c.lo!r}:{c.hi!r}" for c in self.box]
        elif self.kind is Kind.TERMINATE:
            parts += [self.status, repr(self.value), repr(self.lower_bound)]
        else:
            parts.append(repr(self.value))
            parts += [repr(v) for v in self.point]
        return " ".join(parts)


def parse_message(line: str) -> Message:
    """Inverse of :meth:`Message.format`."""
    tok = line.split()
    seq, direction, kind = int(tok[0]), tok[1], Kind(tok[2])
    rest = tok[3:]
    if kind is Kind.DOMAIN_REDUCTION:
        comps = []
        for t in rest:
            lo, hi = t.split(":")
            comps.append(Interval(float(lo), float(hi)))
        return Message(seq, direction, kind, box=Box(comps))
    if kind is Kind.TERMINATE:
        return Message(seq, direction, kind, value=float(rest[1]), status=rest[0],
                       lower_bound=float(rest[2]))
    return Message(seq, direction, kind, value=float(rest[0]),
                   point=tuple(float(v) for v in rest[1:]))


class Channel:
    """Two unbounded FIFO queues, one per direction, safe across threads.

    Every message gets a per-direction sequence number and is appended to
    :attr:`log` in send order.
    """

    def __init__(self):
        self._queues = {DE_TO_IBC: deque(), IBC_TO_DE: deque()}
        self._seq = {DE_TO_IBC: 0, IBC_TO_DE: 0}
        self._lock = threading.Lock()
        self.log: list[Message] = []
        # generations completed by the DE worker; read by the IBC worker to
        # time domain reductions
        self.de_generation = 0
        self.closed = False

    def send(self, direction: str, kind: Kind, **payload) -> Message:
        with self._lock:
            self._seq[direction] += 1
            msg = Message(self._seq[direction], direction, kind, **payload)
            self._queues[direction].append(msg)
            self.log.append(msg)
        return msg

    def receive_all(self, direction: str) -> list[Message]:
        q = self._queues[direction]
        with self._lock:
            out = list(q)
            q.clear()
        return out

    def pending(self, direction: str) -> int:
        return len(self._queues[direction])

    def close(self):
        self.closed = True

    def format_log(self) -> str:
        return "".join(m.format() + "\n" for m in self.log)

    def write_log(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.format_log())


def send_ub(channel: Channel | None, point: Sequence[float], ub: float):
    if channel is not None:
        channel.send(DE_TO_IBC, Kind.UB_FROM_DE, point=tuple(point), value=ub)


def send_solution(channel: Channel | None, point: Sequence[float], ub: float):
    if channel is not None:
        channel.send(IBC_TO_DE, Kind.SOLUTION_FROM_IBC, point=tuple(point), value=ub)
