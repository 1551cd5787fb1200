"""MaxDist exploration and DE domain reduction."""

from __future__ import annotations

from typing import Iterable, Sequence

from ..interval import Box, box_hull, box_width, point_box_distance


def maxdist_priority(box: Box, incumbent: Sequence[float] | None) -> float:
    """Distance from the incumbent to ``box``; larger is extracted first.

    Before an incumbent exists the box width is used instead.
    """
    if incumbent is None:
        return box_width(box)
    return point_box_distance(incumbent, box)


def reprioritize(queue, incumbent: Sequence[float] | None):
    """Rekey every queued box under a new incumbent and restore heap order."""
    queue.rekey(incumbent)
    return queue


def queue_hull(boxes: Iterable[Box]) -> Box | None:
    """Component-wise hull of the boxes; None when there are none left."""
    out = None
    for b in boxes:
        out = b if out is None else box_hull(out, b)
    return out


def reduce_and_restart(de_state, new_domain: Box):
    """Shrink the DE search domain and regenerate its population inside it."""
    if new_domain.is_empty:
        raise ValueError("reduction domain is empty")
    de_state.restart(new_domain)
    return de_state
