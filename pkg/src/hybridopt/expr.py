"""Expression trees, their real and interval evaluation, and the problem model."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import interval as ia
from .interval import EMPTY, ZERO, Box, Interval

BINARY_OPS = ("add", "sub", "mul", "div")
UNARY_OPS = ("neg", "sqr", "sqrt", "exp", "log", "sin", "cos")
FUNCTIONS = ("sqr", "sqrt", "exp", "log", "sin", "cos", "neg")


class Expr:
    """Base class for expression nodes; supports operator construction."""

    def __add__(self, o):
        return Binary("add", self, as_expr(o))

    def __radd__(self, o):
        return Binary("add", as_expr(o), self)

    def __sub__(self, o):
        return Binary("sub", self, as_expr(o))

    def __rsub__(self, o):
        return Binary("sub", as_expr(o), self)

    def __mul__(self, o):
        return Binary("mul", self, as_expr(o))

    def __rmul__(self, o):
        return Binary("mul", as_expr(o), self)

    def __truediv__(self, o):
        return Binary("div", self, as_expr(o))

    def __rtruediv__(self, o):
        return Binary("div", as_expr(o), self)

    def __neg__(self):
        return Unary("neg", self)

    def __pow__(self, n: int):
        if n != int(n):
            raise ValueError("only integer exponents are supported")
        return Unary("pow", self, int(n))

    @cached_property
    def tape(self) -> "Tape":
        return Tape(self)

    @cached_property
    def real_fn(self):
        return _compile_real(self)

    def variables(self) -> set[int]:
        return set(self.tape.var_indices)

    def __str__(self):
        return format_expr(self)


@dataclass(frozen=True, eq=True, repr=False)
class Const(Expr):
    value: float
    enclosure: Interval = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.enclosure is None:
            object.__setattr__(self, "enclosure", Interval(self.value, self.value))

    def __repr__(self):
        return f"Const({self.value!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Var(Expr):
    index: int
    name: str = ""

    def __repr__(self):
        return f"Var({self.index}, {self.name!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def __repr__(self):
        return f"Binary({self.op!r}, {self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Unary(Expr):
    op: str
    child: Expr
    n: int | None = None  # exponent for op == "pow"

    def __repr__(self):
        if self.op == "pow":
            return f"Unary('pow', {self.child!r}, {self.n})"
        return f"Unary({self.op!r}, {self.child!r})"


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(float(x))


def sqr(e) -> Expr:
    return Unary("sqr", as_expr(e))


def sqrt(e) -> Expr:
    return Unary("sqrt", as_expr(e))


def exp(e) -> Expr:
    return Unary("exp", as_expr(e))


def log(e) -> Expr:
    return Unary("log", as_expr(e))


def sin(e) -> Expr:
    return Unary("sin", as_expr(e))


def cos(e) -> Expr:
    return Unary("cos", as_expr(e))


# -- flattened form ---------------------------------------------------------

VAR, CONST, UNARY, BINARY = 0, 1, 2, 3


class Tape:
    """Post-order flattening of an expression tree.

    Node ``k`` has kind, op name, child indices ``a``/``b`` and a payload
    (variable index, constant enclosure, or exponent).  The root is the
    last node.
    """

    def __init__(self, root: Expr):
        self.kinds: list[int] = []
        self.ops: list[str] = []
        self.a: list[int] = []
        self.b: list[int] = []
        self.payload: list = []
        self._emit(root)
        self.size = len(self.kinds)
        self.var_indices = sorted({p for k, p in zip(self.kinds, self.payload) if k == VAR})

    def _add(self, kind, op, a, b, payload) -> int:
        self.kinds.append(kind)
        self.ops.append(op)
        self.a.append(a)
        self.b.append(b)
        self.payload.append(payload)
        return len(self.kinds) - 1

    def _emit(self, e: Expr) -> int:
        # iterative post-order keeps deep trees off the recursion limit
        stack: list = [(e, False)]
        out: list[int] = []
        while stack:
            node, done = stack.pop()
            if isinstance(node, Var):
                out.append(self._add(VAR, "var", -1, -1, node.index))
            elif isinstance(node, Const):
                out.append(self._add(CONST, "const", -1, -1, node.enclosure))
            elif isinstance(node, Unary):
                if done:
                    a = out.pop()
                    out.append(self._add(UNARY, node.op, a, -1, node.n))
                else:
                    stack.append((node, True))
                    stack.append((node.child, False))
            elif isinstance(node, Binary):
                if done:
                    b = out.pop()
                    a = out.pop()
                    out.append(self._add(BINARY, node.op, a, b, None))
                else:
                    stack.append((node, True))
                    stack.append((node.right, False))
                    stack.append((node.left, False))
            else:
                raise TypeError(f"not an expression node: {node!r}")
        return out[-1]

    def forward(self, box: Box) -> list[Interval]:
        """Natural-extension ranges of every node over ``box``."""
        kinds, ops, a, b, payload = self.kinds, self.ops, self.a, self.b, self.payload
        r: list[Interval] = [EMPTY] * self.size
        for k in range(self.size):
            kind = kinds[k]
            if kind == VAR:
                r[k] = box[payload[k]]
            elif kind == CONST:
                r[k] = payload[k]
            elif kind == BINARY:
                r[k] = _BIN[ops[k]](r[a[k]], r[b[k]])
            elif ops[k] == "pow":
                r[k] = ia.pow_n(r[a[k]], payload[k])
            else:
                r[k] = _UN[ops[k]](r[a[k]])
        return r

    def gradient(self, ranges: list[Interval], n: int) -> list[Interval]:
        """Reverse sweep over forward ``ranges``; returns one enclosure per variable."""
        grad = [ZERO] * n
        if ranges[-1] is EMPTY:
            return [EMPTY] * n
        kinds, ops, a, b, payload = self.kinds, self.ops, self.a, self.b, self.payload
        adj: list[Interval] = [ZERO] * self.size
        adj[-1] = _ONE
        add, sub, mul, div = ia.add, ia.sub, ia.mul, ia.div
        for k in range(self.size - 1, -1, -1):
            d = adj[k]
            if d is ZERO:
                continue
            kind = kinds[k]
            if kind == VAR:
                grad[payload[k]] = add(grad[payload[k]], d)
            elif kind == CONST:
                continue
            elif kind == BINARY:
                op, i, j = ops[k], a[k], b[k]
                if op == "add":
                    adj[i] = add(adj[i], d)
                    adj[j] = add(adj[j], d)
                elif op == "sub":
                    adj[i] = add(adj[i], d)
                    adj[j] = sub(adj[j], d)
                elif op == "mul":
                    adj[i] = add(adj[i], mul(d, ranges[j]))
                    adj[j] = add(adj[j], mul(d, ranges[i]))
                else:
                    adj[i] = add(adj[i], div(d, ranges[j]))
                    adj[j] = sub(adj[j], mul(d, div(ranges[k], ranges[j])))
            else:
                op, i = ops[k], a[k]
                x = ranges[i]
                if op == "neg":
                    dd = ia.neg(d)
                elif op == "sqr":
                    dd = mul(d, mul(_TWO, x))
                elif op == "pow":
                    m = payload[k]
                    dd = mul(d, mul(Interval(m, m), ia.pow_n(x, m - 1)))
                elif op == "sqrt":
                    dd = div(d, mul(_TWO, ranges[k]))
                elif op == "exp":
                    dd = mul(d, ranges[k])
                elif op == "log":
                    dd = div(d, x)
                elif op == "sin":
                    dd = mul(d, ia.cos(x))
                elif op == "cos":
                    dd = ia.neg(mul(d, ia.sin(x)))
                else:
                    raise ValueError(f"no derivative rule for {op}")
                adj[i] = add(adj[i], dd)
        return grad


_ONE = Interval(1.0, 1.0)
_TWO = Interval(2.0, 2.0)
_BIN = {"add": ia.add, "sub": ia.sub, "mul": ia.mul, "div": ia.div}
_UN = {"neg": ia.neg, "sqr": ia.sqr, "sqrt": ia.sqrt, "exp": ia.exp, "log": ia.log,
       "sin": ia.sin, "cos": ia.cos}


# -- evaluation -------------------------------------------------------------

def _real_sqrt(v):
    return math.sqrt(v)


def _real_log(v):
    return math.log(v)


_REAL_UN = {"neg": lambda v: -v, "sqr": lambda v: v * v, "sqrt": _real_sqrt,
            "exp": math.exp, "log": _real_log, "sin": math.sin, "cos": math.cos}


def _compile_real(e: Expr):
    if isinstance(e, Var):
        i = e.index
        return lambda x: x[i]
    if isinstance(e, Const):
        v = e.value
        return lambda x: v
    if isinstance(e, Unary):
        f = _compile_real(e.child)
        if e.op == "pow":
            n = e.n
            return lambda x: f(x) ** n
        g = _REAL_UN[e.op]
        return lambda x: g(f(x))
    f, g = _compile_real(e.left), _compile_real(e.right)
    if e.op == "add":
        return lambda x: f(x) + g(x)
    if e.op == "sub":
        return lambda x: f(x) - g(x)
    if e.op == "mul":
        return lambda x: f(x) * g(x)
    return lambda x: f(x) / g(x)


def eval_real(e: Expr, x: Sequence[float]) -> float:
    """Floating-point value of ``e`` at ``x``; NaN on a domain error."""
    try:
        v = e.real_fn(x)
    except (ValueError, ZeroDivisionError, OverflowError):
        return math.nan
    return float(v)


def eval_natural(e: Expr, box: Box) -> Interval:
    if box.is_empty:
        return EMPTY
    return e.tape.forward(box)[-1]


def eval_point(e: Expr, x: Sequence[float]) -> Interval:
    """Natural extension at the degenerate box ``{x}``."""
    return eval_natural(e, Box.from_point(x))


def grad_interval(e: Expr, box: Box) -> list[Interval]:
    if box.is_empty:
        return [EMPTY] * len(box)
    t = e.tape
    return t.gradient(t.forward(box), len(box))


def taylor_from(fc: Interval, grad: Sequence[Interval], box: Box, c: Sequence[float]) -> Interval:
    """First-order centered form ``F(c) + sum G_i (X_i - c_i)``."""
    r = fc
    for g, xi, ci in zip(grad, box, c):
        if xi.lo == xi.hi == ci:
            continue
        r = ia.add(r, ia.mul(g, ia.sub(xi, Interval(ci, ci))))
    return r


def eval_taylor(e: Expr, box: Box, c: Sequence[float] | None = None) -> Interval:
    if box.is_empty:
        return EMPTY
    if c is None:
        c = box.midpoint()
    if not box.contains(c):
        raise ValueError("expansion point must lie in the box")
    return taylor_from(eval_point(e, c), grad_interval(e, box), box, c)


# -- problems ---------------------------------------------------------------

@dataclass(frozen=True)
class Problem:
    """``min f(x)`` over ``domain`` subject to ``g(x) <= 0`` and ``h(x) = 0``.

    Equalities are kept as written; :attr:`constraints` gives the relaxed
    inequality form ``h - eps_eq <= 0`` and ``-h - eps_eq <= 0``.
    """

    names: tuple[str, ...]
    domain: Box
    objective: Expr
    inequalities: tuple[Expr, ...] = ()
    equalities: tuple[Expr, ...] = ()
    eps_eq: float = 1e-8

    def __post_init__(self):
        if len(self.names) != len(self.domain):
            raise ValueError("one name per domain component is required")
        if self.domain.is_empty:
            raise ValueError("problem domain is empty")
        n = len(self.domain)
        for e in (self.objective, *self.inequalities, *self.equalities):
            bad = [i for i in e.variables() if not 0 <= i < n]
            if bad:
                raise ValueError(f"variable index {bad[0]} outside dimension {n}")

    @property
    def n(self) -> int:
        return len(self.domain)

    @property
    def m(self) -> int:
        return len(self.inequalities)

    @property
    def p(self) -> int:
        return len(self.equalities)

    @cached_property
    def constraints(self) -> tuple[Expr, ...]:
        eps = Const(self.eps_eq)
        out = list(self.inequalities)
        for h in self.equalities:
            out.append(Binary("sub", h, eps))
            out.append(Binary("sub", Unary("neg", h), eps))
        return tuple(out)

    def with_domain(self, domain: Box) -> "Problem":
        return Problem(self.names, domain, self.objective, self.inequalities,
                       self.equalities, self.eps_eq)


# -- text format ------------------------------------------------------------

class ModelError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><=|>=|[-+*/^()\[\],;=])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None:
            raise ModelError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = mo.lastgroup
        if kind == "nl":
            line += 1
            start = mo.end()
        elif kind != "ws":
            toks.append(_Tok(kind, mo.group(), line, pos - start + 1))
        pos = mo.end()
    toks.append(_Tok("eof", "", line, pos - start + 1))
    return toks


def parse_constant(text: str) -> Const:
    """Literal to constant; inexact decimals get a one-ulp-per-side enclosure."""
    v = float(text)
    if math.isinf(v) or Fraction(text) == Fraction(v):
        return Const(v)
    return Const(v, Interval(math.nextafter(v, -math.inf), math.nextafter(v, math.inf)))


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.names: dict[str, int] = {}

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        return ModelError(msg, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "name"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        tok = self.tok
        if not self.accept(text):
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return tok

    def signed_number(self) -> float:
        neg = self.accept("-")
        if not neg:
            self.accept("+")
        tok = self.tok
        if tok.kind == "num":
            v = float(tok.text)
        elif tok.kind == "name" and tok.text in ("inf", "infinity"):
            v = math.inf
        else:
            raise self.error("expected a number")
        self.i += 1
        return -v if neg else v

    def model(self, eps_eq: float) -> Problem:
        names: list[str] = []
        bounds: list[tuple[float, float]] = []
        objective = None
        ineqs: list[Expr] = []
        eqs: list[Expr] = []
        while self.tok.kind != "eof":
            tok = self.tok
            if self.accept("var"):
                name_tok = self.tok
                if name_tok.kind != "name" or name_tok.text in _RESERVED:
                    raise self.error("expected a variable name")
                if name_tok.text in self.names:
                    raise self.error(f"variable {name_tok.text!r} declared twice")
                self.i += 1
                self.expect("in")
                self.expect("[")
                lo = self.signed_number()
                self.expect(",")
                hi = self.signed_number()
                close = self.expect("]")
                if lo > hi:
                    raise self.error(f"empty domain for {name_tok.text!r}", close)
                self.expect(";")
                self.names[name_tok.text] = len(names)
                names.append(name_tok.text)
                bounds.append((lo, hi))
            elif self.accept("minimize"):
                if objective is not None:
                    raise self.error("objective given twice", tok)
                objective = self.expr()
                self.expect(";")
            elif self.accept("subject"):
                self.expect("to")
                lhs = self.expr()
                rel = self.tok
                if not (self.accept("<=") or self.accept(">=") or self.accept("=")):
                    raise self.error("expected '<=', '>=' or '='")
                rhs = self.expr()
                self.expect(";")
                body = _relation_body(lhs, rhs, rel.text)
                (eqs if rel.text == "=" else ineqs).append(body)
            else:
                raise self.error(f"unexpected {tok.text!r}")
        if objective is None:
            raise self.error("missing 'minimize' statement")
        if not names:
            raise ModelError("no variables declared", 1, 1)
        return Problem(tuple(names), Box(bounds), objective, tuple(ineqs), tuple(eqs), eps_eq)

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = "add" if self.tok.text == "+" else "sub"
            self.i += 1
            e = Binary(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op = "mul" if self.tok.text == "*" else "div"
            self.i += 1
            e = Binary(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.tok.kind == "op" and self.tok.text == "-":
            nxt = self.toks[self.i + 1]
            after = self.toks[self.i + 2] if nxt.kind == "num" else None
            if nxt.kind == "num" and after.text != "^":
                self.i += 2
                c = parse_constant(nxt.text)
                return Const(-c.value, ia.neg(c.enclosure))
            self.i += 1
            return Unary("neg", self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            neg = self.accept("-")
            tok = self.tok
            if tok.kind != "num" or not re.fullmatch(r"\d+", tok.text):
                raise self.error("exponent must be an integer literal")
            self.i += 1
            n = int(tok.text)
            return Unary("pow", base, -n if neg else n)
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return parse_constant(tok.text)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "name":
            self.i += 1
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                if self.tok.text == ",":
                    raise self.error(f"{tok.text} takes exactly one argument")
                self.expect(")")
                return Unary(tok.text, arg)
            if self.tok.text == "(":
                raise self.error(f"unknown function {tok.text!r}", tok)
            if tok.text not in self.names:
                raise self.error(f"unknown identifier {tok.text!r}", tok)
            return Var(self.names[tok.text], tok.text)
        raise self.error(f"unexpected {tok.text or 'end of input'!r}")


_RESERVED = {"var", "in", "minimize", "subject", "to", "inf", "infinity", *FUNCTIONS}


def _is_zero(e: Expr) -> bool:
    return isinstance(e, Const) and e.value == 0.0


def _relation_body(lhs: Expr, rhs: Expr, rel: str) -> Expr:
    if rel == ">=":
        lhs, rhs = rhs, lhs
    if _is_zero(rhs):
        return lhs
    return Binary("sub", lhs, rhs)


def parse_problem(text: str, eps_eq: float = 1e-8) -> Problem:
    return _Parser(text).model(eps_eq)


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2}


def _prec(e: Expr) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary):
        if e.op == "neg":
            return 3
        if e.op == "pow":
            return 4
        return 5
    if isinstance(e, Const) and (e.value < 0 or math.copysign(1.0, e.value) < 0):
        return 3
    return 5


def format_expr(e: Expr, names: Sequence[str] | None = None) -> str:
    """Infix text for ``e``; ``names`` overrides the variable names."""
    if isinstance(e, Var):
        if names is not None:
            return names[e.index]
        return e.name or f"x{e.index}"
    if isinstance(e, Const):
        return repr(e.value)
    if isinstance(e, Unary):
        if e.op == "neg":
            if isinstance(e.child, Const):
                return f"-({format_expr(e.child, names)})"
            inner = format_expr(e.child, names)
            return f"-{inner}" if _prec(e.child) >= 3 else f"-({inner})"
        if e.op == "pow":
            inner = format_expr(e.child, names)
            if _prec(e.child) < 5:
                inner = f"({inner})"
            return f"{inner}^{e.n}"
        return f"{e.op}({format_expr(e.child, names)})"
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[e.op]
    p = _PREC[e.op]
    left, right = format_expr(e.left, names), format_expr(e.right, names)
    if _prec(e.left) < p:
        left = f"({left})"
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left} {sym} {right}"


def format_problem(problem: Problem) -> str:
    lines = []
    for name, d in zip(problem.names, problem.domain):
        lines.append(f"var {name} in [{d.lo!r}, {d.hi!r}];")
    lines.append(f"minimize {format_expr(problem.objective, problem.names)};")
    for g in problem.inequalities:
        lines.append(f"subject to {format_expr(g, problem.names)} <= 0;")
    for h in problem.equalities:
        lines.append(f"subject to {format_expr(h, problem.names)} = 0;")
    return "\n".join(lines) + "\n"
