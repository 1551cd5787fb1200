"""Floating-point interval arithmetic with outward rounding.

Bounds are computed in round-to-nearest and then moved one float outward
only when the operation was inexact.  Exactness of ``+ - * / sqrt`` is
decided with error-free transformations (TwoSum, Dekker's TwoProduct), so
operations such as ``[0, 4] - [-2, 0.5]`` stay exact.  Library functions
(exp, log, sin, cos, ...) are not correctly rounded and always get two
floats of outward padding.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

INF = math.inf
_SPLITTER = 134217729.0  # 2**27 + 1
_SPLIT_LIMIT = 2.0**995
_TINY = 2.0**-960
# offset used to probe half-unbounded intervals
UNBOUNDED_MID_OFFSET = 1e6


def _down(x: float) -> float:
    return math.nextafter(x, -INF)


def _up(x: float) -> float:
    return math.nextafter(x, INF)


def _pad_down(x: float, n: int = 2) -> float:
    for _ in range(n):
        x = math.nextafter(x, -INF)
    return x


def _pad_up(x: float, n: int = 2) -> float:
    for _ in range(n):
        x = math.nextafter(x, INF)
    return x


# -- error-free transformations -------------------------------------------

def _two_sum_err(a: float, b: float, s: float) -> float:
    bb = s - a
    return (a - (s - bb)) + (b - bb)


def _split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod_err(a: float, b: float, p: float) -> float:
    ah, al = _split(a)
    bh, bl = _split(b)
    return al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def _safe_for_split(*xs: float) -> bool:
    for x in xs:
        ax = abs(x)
        if ax > _SPLIT_LIMIT or (ax != 0.0 and ax < _TINY):
            return False
    return True


def _overflowed(r: float, *args: float) -> bool:
    return math.isinf(r) and all(math.isfinite(a) for a in args)


def add_down(a: float, b: float) -> float:
    s = a + b
    if not math.isfinite(s):
        if _overflowed(s, a, b):
            return s if s < 0 else _down(s)
        return s
    return s if _two_sum_err(a, b, s) >= 0 else _down(s)


def add_up(a: float, b: float) -> float:
    s = a + b
    if not math.isfinite(s):
        if _overflowed(s, a, b):
            return s if s > 0 else _up(s)
        return s
    return s if _two_sum_err(a, b, s) <= 0 else _up(s)


def sub_down(a: float, b: float) -> float:
    return add_down(a, -b)


def sub_up(a: float, b: float) -> float:
    return add_up(a, -b)


def _mul(a: float, b: float) -> float:
    # interval convention: 0 * inf = 0
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def _mul_err_sign(a: float, b: float, p: float) -> int:
    """Sign of (a*b - p), or 2 when it cannot be decided."""
    if not _safe_for_split(a, b, p):
        return 2
    e = _two_prod_err(a, b, p)
    return (e > 0) - (e < 0)


def mul_down(a: float, b: float) -> float:
    p = _mul(a, b)
    if p == 0.0 or not math.isfinite(p):
        if _overflowed(p, a, b):
            return p if p < 0 else _down(p)
        if p == 0.0 and a != 0.0 and b != 0.0:
            return 0.0 if (a > 0) == (b > 0) else -5e-324
        return p
    s = _mul_err_sign(a, b, p)
    return p if s in (0, 1) else _down(p)


def mul_up(a: float, b: float) -> float:
    p = _mul(a, b)
    if p == 0.0 or not math.isfinite(p):
        if _overflowed(p, a, b):
            return p if p > 0 else _up(p)
        if p == 0.0 and a != 0.0 and b != 0.0:
            return 5e-324 if (a > 0) == (b > 0) else 0.0
        return p
    s = _mul_err_sign(a, b, p)
    return p if s in (0, -1) else _up(p)


def _div_err_sign(a: float, b: float, q: float) -> int:
    """Sign of (a/b - q), or 2 when it cannot be decided."""
    if not _safe_for_split(a, b, q):
        return 2
    p = q * b
    if not _safe_for_split(p):
        return 2
    e = _two_prod_err(q, b, p)
    r = (a - p) - e
    sr = (r > 0) - (r < 0)
    return sr if b > 0 else -sr


def div_down(a: float, b: float) -> float:
    if math.isinf(b):
        # limit value at an infinite denominator bound
        return -INF if math.isinf(a) else 0.0
    q = a / b
    if not math.isfinite(q):
        if _overflowed(q, a, b):
            return q if q < 0 else _down(q)
        return q
    if q == 0.0:
        if a == 0.0:
            return 0.0
        return 0.0 if (a > 0) == (b > 0) else -5e-324
    s = _div_err_sign(a, b, q)
    return q if s in (0, 1) else _down(q)


def div_up(a: float, b: float) -> float:
    if math.isinf(b):
        return INF if math.isinf(a) else 0.0
    q = a / b
    if not math.isfinite(q):
        if _overflowed(q, a, b):
            return q if q > 0 else _up(q)
        return q
    if q == 0.0:
        if a == 0.0:
            return 0.0
        return 5e-324 if (a > 0) == (b > 0) else 0.0
    s = _div_err_sign(a, b, q)
    return q if s in (0, -1) else _up(q)


def sqrt_down(x: float) -> float:
    if x <= 0.0:
        return 0.0
    s = math.sqrt(x)
    if math.isinf(s):
        return s
    if not _safe_for_split(x, s):
        return _down(s)
    p = s * s
    r = (x - p) - _two_prod_err(s, s, p)
    return s if r >= 0 else _down(s)


def sqrt_up(x: float) -> float:
    if x <= 0.0:
        return 0.0
    s = math.sqrt(x)
    if math.isinf(s):
        return s
    if not _safe_for_split(x, s):
        return _up(s)
    p = s * s
    r = (x - p) - _two_prod_err(s, s, p)
    return s if r <= 0 else _up(s)


def _pow_nonneg_down(x: float, n: int) -> float:
    r = 1.0
    for _ in range(n):
        r = mul_down(r, x)
    return r


def _pow_nonneg_up(x: float, n: int) -> float:
    r = 1.0
    for _ in range(n):
        r = mul_up(r, x)
    return r


# -- the interval type ------------------------------------------------------

class Interval:
    """Closed interval ``[lo, hi]``; use :data:`EMPTY` for the empty set.

    Treat instances as immutable; they are shared freely between boxes
    and workers.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        if hi is None:
            hi = lo
        lo = float(lo)
        hi = float(hi)
        if lo != lo or hi != hi:
            raise ValueError("interval bound is NaN")
        if lo > hi:
            raise ValueError(f"invalid interval [{lo!r}, {hi!r}]")
        self.lo = lo
        self.hi = hi

    @classmethod
    def _raw(cls, lo: float, hi: float) -> "Interval":
        obj = _new(cls)
        obj.lo = lo
        obj.hi = hi
        return obj

    @property
    def is_empty(self) -> bool:
        return self is EMPTY

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def subset(self, other: "Interval") -> bool:
        if self is EMPTY:
            return True
        if other is EMPTY:
            return False
        return other.lo <= self.lo and self.hi <= other.hi

    @property
    def mag(self) -> float:
        if self is EMPTY:
            return 0.0
        return max(abs(self.lo), abs(self.hi))

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        if self is EMPTY or other is EMPTY:
            return self is other
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        if self is EMPTY:
            return "Interval.EMPTY"
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __str__(self):
        if self is EMPTY:
            return "[empty]"
        return f"[{self.lo!r}, {self.hi!r}]"

    def __reduce__(self):
        if self is EMPTY:
            return (_empty, ())
        return (Interval, (self.lo, self.hi))

    # operator sugar for tests and interactive use
    def __add__(self, o):
        return add(self, _coerce(o))

    def __radd__(self, o):
        return add(_coerce(o), self)

    def __sub__(self, o):
        return sub(self, _coerce(o))

    def __rsub__(self, o):
        return sub(_coerce(o), self)

    def __mul__(self, o):
        return mul(self, _coerce(o))

    def __rmul__(self, o):
        return mul(_coerce(o), self)

    def __truediv__(self, o):
        return div(self, _coerce(o))

    def __rtruediv__(self, o):
        return div(_coerce(o), self)

    def __neg__(self):
        return neg(self)

    def __and__(self, o):
        return intersect(self, o)

    def __or__(self, o):
        return hull(self, o)


_new = object.__new__

EMPTY = Interval._raw(INF, -INF)
Interval.EMPTY = EMPTY  # type: ignore[attr-defined]
ENTIRE = Interval._raw(-INF, INF)
ZERO = Interval._raw(0.0, 0.0)
NONNEG = Interval._raw(0.0, INF)
NONPOS = Interval._raw(-INF, 0.0)

# pi lies strictly between these two doubles
PI_LO = 3.141592653589793
PI_HI = 3.1415926535897936
PI = Interval._raw(PI_LO, PI_HI)


def _empty() -> Interval:
    return EMPTY


def _coerce(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval(x, x)


def _make(lo: float, hi: float) -> Interval:
    obj = _new(Interval)
    obj.lo = lo
    obj.hi = hi
    return obj


# -- set operations ---------------------------------------------------------

def hull(x: Interval, y: Interval) -> Interval:
    if x is EMPTY:
        return y
    if y is EMPTY:
        return x
    return _make(min(x.lo, y.lo), max(x.hi, y.hi))


def intersect(x: Interval, y: Interval) -> Interval:
    if x is EMPTY or y is EMPTY:
        return EMPTY
    lo = max(x.lo, y.lo)
    hi = min(x.hi, y.hi)
    if lo > hi:
        return EMPTY
    if lo == x.lo and hi == x.hi:
        return x
    return _make(lo, hi)


def width(x: Interval) -> float:
    if x is EMPTY:
        return 0.0
    return sub_up(x.hi, x.lo)


def midpoint(x: Interval) -> float:
    """A representable point of ``x`` near its center; finite even if unbounded."""
    lo, hi = x.lo, x.hi
    if lo == -INF and hi == INF:
        return 0.0
    if lo == -INF:
        return min(hi, hi - UNBOUNDED_MID_OFFSET)
    if hi == INF:
        return max(lo, lo + UNBOUNDED_MID_OFFSET)
    m = 0.5 * lo + 0.5 * hi
    return min(max(m, lo), hi)


# -- arithmetic ------------------------------------------------------------

def add(x: Interval, y: Interval) -> Interval:
    if x is EMPTY or y is EMPTY:
        return EMPTY
    return _make(add_down(x.lo, y.lo), add_up(x.hi, y.hi))


def sub(x: Interval, y: Interval) -> Interval:
    if x is EMPTY or y is EMPTY:
        return EMPTY
    return _make(sub_down(x.lo, y.hi), sub_up(x.hi, y.lo))


def neg(x: Interval) -> Interval:
    if x is EMPTY:
        return EMPTY
    return _make(-x.hi, -x.lo)


def mul(x: Interval, y: Interval) -> Interval:
    if x is EMPTY or y is EMPTY:
        return EMPTY
    a, b, c, d = x.lo, x.hi, y.lo, y.hi
    if a >= 0:
        if c >= 0:
            return _make(mul_down(a, c), mul_up(b, d))
        if d <= 0:
            return _make(mul_down(b, c), mul_up(a, d))
        return _make(mul_down(b, c), mul_up(b, d))
    if b <= 0:
        if c >= 0:
            return _make(mul_down(a, d), mul_up(b, c))
        if d <= 0:
            return _make(mul_down(b, d), mul_up(a, c))
        return _make(mul_down(a, d), mul_up(a, c))
    # 0 strictly inside x
    if c >= 0:
        return _make(mul_down(a, d), mul_up(b, d))
    if d <= 0:
        return _make(mul_down(b, c), mul_up(a, c))
    return _make(min(mul_down(a, d), mul_down(b, c)),
                 max(mul_up(a, c), mul_up(b, d)))


def extended_div(x: Interval, y: Interval) -> tuple[Interval, Interval]:
    """Quotient of ``x`` by ``y`` as at most two disjoint intervals.

    The second slot is EMPTY when the quotient set is connected.
    """
    if x is EMPTY or y is EMPTY:
        return EMPTY, EMPTY
    a, b, c, d = x.lo, x.hi, y.lo, y.hi
    if c == 0.0 and d == 0.0:
        return EMPTY, EMPTY
    if c > 0 or d < 0:
        return _div_nonzero(a, b, c, d), EMPTY
    if a <= 0 <= b:
        return ENTIRE, EMPTY
    if c == 0.0:
        # y = [0, d]
        if a > 0:
            return _make(div_down(a, d), INF), EMPTY
        return _make(-INF, div_up(b, d)), EMPTY
    if d == 0.0:
        # y = [c, 0]
        if a > 0:
            return _make(-INF, div_up(a, c)), EMPTY
        return _make(div_down(b, c), INF), EMPTY
    # 0 strictly inside y
    if a > 0:
        return _make(-INF, div_up(a, c)), _make(div_down(a, d), INF)
    return _make(-INF, div_up(b, d)), _make(div_down(b, c), INF)


def _div_nonzero(a: float, b: float, c: float, d: float) -> Interval:
    if c > 0:
        if a >= 0:
            return _make(div_down(a, d), div_up(b, c))
        if b <= 0:
            return _make(div_down(a, c), div_up(b, d))
        return _make(div_down(a, c), div_up(b, c))
    # d < 0
    if a >= 0:
        return _make(div_down(b, d), div_up(a, c))
    if b <= 0:
        return _make(div_down(b, c), div_up(a, d))
    return _make(div_down(b, d), div_up(a, d))


def div(x: Interval, y: Interval) -> Interval:
    p, q = extended_div(x, y)
    return hull(p, q)


def sqr(x: Interval) -> Interval:
    if x is EMPTY:
        return EMPTY
    a, b = x.lo, x.hi
    if a >= 0:
        return _make(mul_down(a, a), mul_up(b, b))
    if b <= 0:
        return _make(mul_down(b, b), mul_up(a, a))
    m = max(-a, b)
    return _make(0.0, mul_up(m, m))


def pow_n(x: Interval, n: int) -> Interval:
    """Integer power ``x**n``; negative ``n`` goes through division."""
    if x is EMPTY:
        return EMPTY
    n = int(n)
    if n == 0:
        return _make(1.0, 1.0)
    if n < 0:
        return div(_make(1.0, 1.0), pow_n(x, -n))
    if n == 1:
        return x
    if n == 2:
        return sqr(x)
    a, b = x.lo, x.hi
    if n % 2:
        lo = _pow_nonneg_down(a, n) if a >= 0 else -_pow_nonneg_up(-a, n)
        hi = _pow_nonneg_up(b, n) if b >= 0 else -_pow_nonneg_down(-b, n)
        return _make(lo, hi)
    if a >= 0:
        return _make(_pow_nonneg_down(a, n), _pow_nonneg_up(b, n))
    if b <= 0:
        return _make(_pow_nonneg_down(-b, n), _pow_nonneg_up(-a, n))
    return _make(0.0, _pow_nonneg_up(max(-a, b), n))


def sqrt(x: Interval) -> Interval:
    x = intersect(x, NONNEG)
    if x is EMPTY:
        return EMPTY
    return _make(sqrt_down(x.lo), sqrt_up(x.hi))


def _exp_down(v: float) -> float:
    if v == 0.0:
        return 1.0
    if v == -INF:
        return 0.0
    try:
        r = math.exp(v)
    except OverflowError:
        return math.nextafter(INF, 0.0)
    return max(0.0, _pad_down(r))


def _exp_up(v: float) -> float:
    if v == 0.0:
        return 1.0
    try:
        r = math.exp(v)
    except OverflowError:
        return INF
    if math.isinf(r):
        return r
    return _pad_up(r)


def exp(x: Interval) -> Interval:
    if x is EMPTY:
        return EMPTY
    return _make(_exp_down(x.lo), _exp_up(x.hi))


def _log_down(v: float) -> float:
    if v == 0.0:
        return -INF
    if v == 1.0:
        return 0.0
    if math.isinf(v):
        return INF
    return _pad_down(math.log(v))


def _log_up(v: float) -> float:
    if v == 0.0:
        return -INF
    if v == 1.0:
        return 0.0
    if math.isinf(v):
        return INF
    return _pad_up(math.log(v))


def log(x: Interval) -> Interval:
    x = intersect(x, NONNEG)
    if x is EMPTY or x.hi == 0.0:
        return EMPTY
    return _make(_log_down(x.lo), _log_up(x.hi))


def half_pi_multiple(k: int) -> Interval:
    """Enclosure of ``k * pi / 2``."""
    return mul(_make(k / 2.0, k / 2.0), PI)


def _may_contain_half_pi(x: Interval, residue: int) -> bool:
    """Whether ``x`` may contain some ``k*pi/2`` with ``k % 4 == residue``."""
    k0 = math.floor(x.lo / (PI_HI / 2.0)) - 2 if x.lo >= 0 else math.floor(x.lo / (PI_LO / 2.0)) - 2
    k1 = math.ceil(x.hi / (PI_LO / 2.0)) + 2 if x.hi >= 0 else math.ceil(x.hi / (PI_HI / 2.0)) + 2
    for k in range(k0, k1 + 1):
        if k % 4 != residue:
            continue
        e = half_pi_multiple(k)
        if e.lo <= x.hi and e.hi >= x.lo:
            return True
    return False


def _trig(x: Interval, fn, max_res: int, min_res: int) -> Interval:
    if x is EMPTY:
        return EMPTY
    if not (math.isfinite(x.lo) and math.isfinite(x.hi)) or x.hi - x.lo >= 2 * PI_LO:
        return _make(-1.0, 1.0)
    if abs(x.lo) > 1e15 or abs(x.hi) > 1e15:
        return _make(-1.0, 1.0)
    if x.lo == x.hi == 0.0:
        return _make(fn(0.0), fn(0.0))
    fa, fb = fn(x.lo), fn(x.hi)
    hi = 1.0 if _may_contain_half_pi(x, max_res) else min(1.0, _pad_up(max(fa, fb)))
    lo = -1.0 if _may_contain_half_pi(x, min_res) else max(-1.0, _pad_down(min(fa, fb)))
    return _make(lo, hi)


def sin(x: Interval) -> Interval:
    return _trig(x, math.sin, 1, 3)


def cos(x: Interval) -> Interval:
    return _trig(x, math.cos, 0, 2)


def monotone_branch(x: Interval, kind: str) -> int | None:
    """Index ``j`` of the monotone branch of sin/cos containing ``x``.

    For cos the branch is ``[j*pi, (j+1)*pi]``; for sin it is
    ``[(j - 1/2)*pi, (j + 1/2)*pi]``.  Returns None when ``x`` might touch an
    extremum or the branch cannot be identified rigorously.
    """
    if x is EMPTY or not (math.isfinite(x.lo) and math.isfinite(x.hi)):
        return None
    if abs(x.lo) > 1e15 or abs(x.hi) > 1e15:
        return None
    m = midpoint(x)
    if kind == "cos":
        j = math.floor(m / PI_LO)
        left, right = half_pi_multiple(2 * j), half_pi_multiple(2 * j + 2)
    else:
        j = math.floor(m / PI_LO + 0.5)
        left, right = half_pi_multiple(2 * j - 1), half_pi_multiple(2 * j + 1)
    if left.hi < x.lo and right.lo > x.hi:
        return j
    return None


def asin(x: Interval) -> Interval:
    x = intersect(x, _make(-1.0, 1.0))
    if x is EMPTY:
        return EMPTY
    half_pi_hi = PI_HI / 2.0
    lo = max(-half_pi_hi, _pad_down(math.asin(x.lo)))
    hi = min(half_pi_hi, _pad_up(math.asin(x.hi)))
    return _make(lo, hi)


def acos(x: Interval) -> Interval:
    x = intersect(x, _make(-1.0, 1.0))
    if x is EMPTY:
        return EMPTY
    lo = max(0.0, _pad_down(math.acos(x.hi)))
    hi = min(PI_HI, _pad_up(math.acos(x.lo)))
    return _make(lo, hi)


def root_n(x: Interval, n: int) -> Interval:
    """Enclosure of the nonnegative ``n``-th root of ``x ∩ [0, inf]``."""
    x = intersect(x, NONNEG)
    if x is EMPTY:
        return EMPTY
    if n == 2:
        return sqrt(x)

    def down(v: float) -> float:
        if v == 0.0 or math.isinf(v):
            return v
        r = _pad_down(v ** (1.0 / n))
        while r > 0 and _pow_nonneg_up(r, n) > v:
            r = _down(r)
        return max(r, 0.0)

    def up(v: float) -> float:
        if v == 0.0 or math.isinf(v):
            return v
        r = _pad_up(v ** (1.0 / n))
        while _pow_nonneg_down(r, n) < v:
            r = _up(r)
        return r

    return _make(down(x.lo), up(x.hi))


ARITH = {"add": add, "sub": sub, "mul": mul, "div": div}
UNARY = {"neg": neg, "sqr": sqr, "sqrt": sqrt, "exp": exp, "log": log,
         "sin": sin, "cos": cos}


def arith(op: str, x: Interval, y: Interval) -> Interval:
    return ARITH[op](x, y)


def unary(op: str, x: Interval, n: int | None = None) -> Interval:
    if op == "pow":
        return pow_n(x, n)
    return UNARY[op](x)


# -- boxes ------------------------------------------------------------------

class Box:
    """Cartesian product of intervals, one per variable.  Immutable."""

    __slots__ = ("_c",)

    def __init__(self, components: Iterable):
        comps = []
        for c in components:
            if isinstance(c, Interval):
                comps.append(c)
            else:
                lo, hi = c
                comps.append(Interval(lo, hi))
        self._c = tuple(comps)

    @classmethod
    def of(cls, components: tuple) -> "Box":
        """Wrap a tuple of Interval without validation."""
        obj = _new(cls)
        obj._c = components
        return obj

    @classmethod
    def from_point(cls, x: Sequence[float]) -> "Box":
        return cls(Interval(v, v) for v in x)

    @property
    def components(self) -> tuple[Interval, ...]:
        return self._c

    @property
    def is_empty(self) -> bool:
        return any(c is EMPTY for c in self._c)

    def __len__(self):
        return len(self._c)

    def __iter__(self):
        return iter(self._c)

    def __getitem__(self, i):
        return self._c[i]

    def __eq__(self, other):
        if not isinstance(other, Box):
            return NotImplemented
        if self.is_empty and other.is_empty:
            return len(self) == len(other)
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return "Box(" + " x ".join(str(c) for c in self._c) + ")"

    def __reduce__(self):
        return (Box.of, (self._c,))

    def replace(self, i: int, iv: Interval) -> "Box":
        c = list(self._c)
        c[i] = iv
        return Box.of(tuple(c))

    def width(self) -> float:
        return box_width(self)

    def midpoint(self) -> list[float]:
        return [midpoint(c) for c in self._c]

    def contains(self, x: Sequence[float]) -> bool:
        return not self.is_empty and all(c.lo <= v <= c.hi for c, v in zip(self._c, x))

    def subset(self, other: "Box") -> bool:
        return all(a.subset(b) for a, b in zip(self._c, other._c))

    def lower(self) -> list[float]:
        return [c.lo for c in self._c]

    def upper(self) -> list[float]:
        return [c.hi for c in self._c]


def empty_box(n: int) -> Box:
    return Box.of((EMPTY,) * n)


def box_width(b: Box) -> float:
    if b.is_empty:
        return 0.0
    return max((width(c) for c in b), default=0.0)


def box_hull(a: Box, b: Box) -> Box:
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    return Box.of(tuple(hull(x, y) for x, y in zip(a, b)))


def box_intersect(a: Box, b: Box) -> Box:
    return Box.of(tuple(intersect(x, y) for x, y in zip(a, b)))


def point_box_distance(x: Sequence[float], b: Box) -> float:
    """Sum over coordinates of the distance from ``x_i`` to ``B_i``."""
    if b.is_empty:
        return INF
    d = 0.0
    for v, c in zip(x, b):
        if v < c.lo:
            d += c.lo - v
        elif v > c.hi:
            d += v - c.hi
    return d
