"""HC4Revise and the HC4 propagation loop."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import interval as ia
from .expr import BINARY, CONST, VAR, Expr, Problem
from .interval import EMPTY, INF, NONNEG, Box, Interval, empty_box, intersect

# relative width reduction that puts a variable's constraints back on the agenda
PROPAGATION_RATIO = 1e-3
MAX_PASSES = 1000


@dataclass(frozen=True)
class RelationalConstraint:
    """``expr(x) ∈ bound``; ``g <= 0`` has bound ``(-inf, 0]``."""

    expr: Expr
    bound: Interval
    relation: str = "<="
    variables: frozenset = field(init=False, compare=False)

    def __post_init__(self):
        if self.bound.is_empty:
            raise ValueError("constraint bound must be non-empty")
        object.__setattr__(self, "variables", frozenset(self.expr.tape.var_indices))

    @classmethod
    def leq(cls, expr: Expr, rhs: float = 0.0) -> "RelationalConstraint":
        return cls(expr, Interval(-INF, rhs), "<=")

    @classmethod
    def eq(cls, expr: Expr, tol: float = 0.0) -> "RelationalConstraint":
        return cls(expr, Interval(-tol, tol), "=")

    def violation(self, value: Interval) -> float:
        """How far an enclosure of the expression sits outside the bound."""
        if value.is_empty:
            return INF
        return max(value.hi - self.bound.hi, self.bound.lo - value.lo, 0.0)


def constraint_system(problem: Problem) -> list[RelationalConstraint]:
    """Inequalities then relaxed equalities ``-eps_eq <= h <= eps_eq``."""
    out = [RelationalConstraint.leq(g) for g in problem.inequalities]
    out += [RelationalConstraint.eq(h, problem.eps_eq) for h in problem.equalities]
    return out


def objective_cut(problem: Problem, cut: float) -> RelationalConstraint:
    return RelationalConstraint(problem.objective, Interval(-INF, cut), "<=")


def point_values(constraints: Sequence[RelationalConstraint], x: Sequence[float]) -> list[Interval]:
    b = Box.from_point(x)
    return [c.expr.tape.forward(b)[-1] for c in constraints]


def rigorously_feasible(constraints: Sequence[RelationalConstraint], x: Sequence[float]) -> bool:
    """True iff every constraint's interval value at ``{x}`` lies inside its bound."""
    b = Box.from_point(x)
    for c in constraints:
        v = c.expr.tape.forward(b)[-1]
        if v.is_empty or not v.subset(c.bound):
            return False
    return True


# -- HC4Revise --------------------------------------------------------------

def _hull_pieces(pieces: tuple[Interval, Interval], current: Interval) -> Interval:
    return ia.hull(intersect(pieces[0], current), intersect(pieces[1], current))


def _project_unary(op: str, n, z: Interval, x: Interval) -> Interval:
    """Narrow child range ``x`` given that ``op(x)`` lies in ``z``."""
    if op == "neg":
        return intersect(x, ia.neg(z))
    if op == "sqr" or (op == "pow" and n == 2):
        s = ia.sqrt(z)
        return ia.hull(intersect(x, s), intersect(x, ia.neg(s)))
    if op == "pow":
        if n == 0:
            return x
        if n == 1:
            return intersect(x, z)
        if n < 0:
            z = ia.div(Interval(1.0, 1.0), z)
            n = -n
        if n % 2 == 0:
            s = ia.root_n(z, n)
            return ia.hull(intersect(x, s), intersect(x, ia.neg(s)))
        pos = ia.root_n(z, n)
        negp = ia.neg(ia.root_n(ia.neg(z), n))
        return intersect(x, ia.hull(pos, negp))
    if op == "sqrt":
        return intersect(x, ia.sqr(intersect(z, NONNEG)))
    if op == "exp":
        return intersect(x, ia.log(z))
    if op == "log":
        return intersect(x, ia.exp(z))
    if op in ("sin", "cos"):
        j = ia.monotone_branch(x, op)
        if j is None:
            return x
        zc = intersect(z, Interval(-1.0, 1.0))
        if zc.is_empty:
            return EMPTY
        if op == "cos":
            if j % 2 == 0:
                cand = ia.add(ia.half_pi_multiple(2 * j), ia.acos(zc))
            else:
                cand = ia.sub(ia.half_pi_multiple(2 * j + 2), ia.acos(zc))
        else:
            if j % 2 == 0:
                cand = ia.add(ia.half_pi_multiple(2 * j), ia.asin(zc))
            else:
                cand = ia.sub(ia.half_pi_multiple(2 * j), ia.asin(zc))
        return intersect(x, cand)
    raise ValueError(f"no projection for {op}")


def hc4revise(c: RelationalConstraint, box: Box) -> tuple[Box, Interval]:
    """Forward evaluation then backward projection of one constraint.

    Returns the contracted box (empty when no point of ``box`` satisfies
    ``c``) and the root range from the forward phase.
    """
    if box.is_empty:
        return box, EMPTY
    t = c.expr.tape
    r = t.forward(box)
    root = r[-1]
    top = intersect(root, c.bound)
    if top.is_empty:
        return empty_box(len(box)), root
    r[-1] = top
    doms = list(box.components)
    kinds, ops, a, b, payload = t.kinds, t.ops, t.a, t.b, t.payload
    for k in range(t.size - 1, -1, -1):
        kind = kinds[k]
        z = r[k]
        if kind == VAR:
            i = payload[k]
            d = intersect(doms[i], z)
            if d is EMPTY:
                return empty_box(len(box)), root
            doms[i] = d
        elif kind == CONST:
            continue
        elif kind == BINARY:
            op, i, j = ops[k], a[k], b[k]
            x, y = r[i], r[j]
            if op == "add":
                x = intersect(x, ia.sub(z, y))
                y = intersect(y, ia.sub(z, x))
            elif op == "sub":
                x = intersect(x, ia.add(z, y))
                y = intersect(y, ia.sub(x, z))
            elif op == "mul":
                # a zero factor satisfies z ∋ 0 whatever the other factor is
                if not (z.lo <= 0.0 <= z.hi and y.lo <= 0.0 <= y.hi):
                    x = _hull_pieces(ia.extended_div(z, y), x)
                if not (z.lo <= 0.0 <= z.hi and x.lo <= 0.0 <= x.hi):
                    y = _hull_pieces(ia.extended_div(z, x), y)
            else:
                x = intersect(x, ia.mul(z, y))
                if not (x.lo <= 0.0 <= x.hi and z.lo <= 0.0 <= z.hi):
                    y = _hull_pieces(ia.extended_div(x, z), y)
            if x is EMPTY or y is EMPTY:
                return empty_box(len(box)), root
            r[i], r[j] = x, y
        else:
            i = a[k]
            x = _project_unary(ops[k], payload[k], z, r[i])
            if x is EMPTY:
                return empty_box(len(box)), root
            r[i] = x
    return Box.of(tuple(doms)), root


# -- HC4 --------------------------------------------------------------------

def _significant(old: Interval, new: Interval) -> bool:
    if new is old or (new.lo == old.lo and new.hi == old.hi):
        return False
    wo = ia.width(old)
    if math.isinf(wo):
        return True
    return ia.width(new) <= (1.0 - PROPAGATION_RATIO) * wo


def hc4(constraints: Sequence[RelationalConstraint], box: Box, eta: float = 0.0) -> Box:
    """AC3-style propagation of :func:`hc4revise` over ``constraints``.

    Each pass revises the constraints on the agenda in order.  The loop
    stops when a pass leaves the agenda empty or when the box width after
    the pass exceeds ``eta`` times its width before the pass.
    """
    if box.is_empty or not constraints:
        return box
    agenda = list(range(len(constraints)))
    for _ in range(MAX_PASSES):
        w0 = ia.box_width(box)
        changed: set[int] = set()
        for ci in agenda:
            c = constraints[ci]
            new, _ = hc4revise(c, box)
            if new.is_empty:
                return new
            for v in c.variables:
                if _significant(box[v], new[v]):
                    changed.add(v)
            box = new
        if ia.box_width(box) > eta * w0 or not changed:
            break
        agenda = [ci for ci, c in enumerate(constraints) if c.variables & changed]
    return box
